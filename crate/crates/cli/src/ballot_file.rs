//! Plain-text ballot files.
//!
//! ```text
//! # comment
//! candidates: Alice Bob Carol
//! 12: Alice > Bob > Carol
//! 3: Carol
//! ```
//!
//! Candidate indices follow declaration order. Ranking lines may list any
//! nonempty prefix of a voter's preferences.

use std::collections::HashMap;

use thiserror::Error;
use truncalab::ballots::{BallotError, Profile, Ranking};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("file contains no declarations")]
    EmptyFile,
    #[error("expected `candidates: NAME ...` header")]
    MissingHeader,
    #[error("candidate header declares no names")]
    NoCandidates,
    #[error("candidate `{0}` declared twice")]
    DuplicateDeclaration(String),
    #[error("invalid candidate name `{0}`")]
    InvalidName(String),
    #[error("expected `COUNT: NAME > NAME ...`")]
    MissingColon,
    #[error("count `{0}` is not an integer")]
    BadCount(String),
    #[error("count must be positive, got {0}")]
    NonPositiveCount(i128),
    #[error("unknown candidate `{0}`")]
    UnknownName(String),
    #[error("candidate `{0}` appears twice in one ranking")]
    DuplicateName(String),
    #[error("ranking lists no candidates")]
    EmptyRanking,
    #[error("file contains no ballots")]
    NoBallots,
    #[error(transparent)]
    Ballot(#[from] BallotError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// A parsed ballot file: declared names plus the profile over them.
#[derive(Debug, Clone, PartialEq)]
pub struct BallotFile {
    pub names: Vec<String>,
    pub profile: Profile,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name.contains(['>', ':', '#', ',', '{', '}'])
        && !name.contains(char::is_whitespace)
}

pub fn parse_profile_file(text: &str) -> Result<BallotFile, ParseError> {
    let err = |line, kind| ParseError { line, kind };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| err(text.lines().count().max(1), ParseErrorKind::EmptyFile))?;
    let declared = header
        .strip_prefix("candidates:")
        .ok_or_else(|| err(header_line, ParseErrorKind::MissingHeader))?;

    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for name in declared.split_whitespace() {
        if !valid_name(name) {
            return Err(err(
                header_line,
                ParseErrorKind::InvalidName(name.to_string()),
            ));
        }
        if index.insert(name, names.len()).is_some() {
            return Err(err(
                header_line,
                ParseErrorKind::DuplicateDeclaration(name.to_string()),
            ));
        }
        names.push(name.to_string());
    }
    if names.is_empty() {
        return Err(err(header_line, ParseErrorKind::NoCandidates));
    }
    let m = names.len();

    let mut ballots = Vec::new();
    let mut last_line = header_line;
    for (line_no, line) in lines {
        last_line = line_no;
        let (count, ranking) = line
            .split_once(':')
            .ok_or_else(|| err(line_no, ParseErrorKind::MissingColon))?;
        let count = count.trim();
        let count: i128 = count
            .parse()
            .map_err(|_| err(line_no, ParseErrorKind::BadCount(count.to_string())))?;
        if count <= 0 {
            return Err(err(line_no, ParseErrorKind::NonPositiveCount(count)));
        }
        let count = u64::try_from(count)
            .map_err(|_| err(line_no, ParseErrorKind::BadCount(count.to_string())))?;

        let mut order = Vec::new();
        let mut seen = vec![false; m];
        for token in ranking.split('>') {
            let name = token.trim();
            if name.is_empty() {
                return Err(err(line_no, ParseErrorKind::EmptyRanking));
            }
            let &c = index
                .get(name)
                .ok_or_else(|| err(line_no, ParseErrorKind::UnknownName(name.to_string())))?;
            if std::mem::replace(&mut seen[c], true) {
                return Err(err(
                    line_no,
                    ParseErrorKind::DuplicateName(name.to_string()),
                ));
            }
            order.push(c);
        }
        let ranking = Ranking::new(order, m).map_err(|e| err(line_no, e.into()))?;
        ballots.push((ranking, count));
    }
    if ballots.is_empty() {
        return Err(err(last_line, ParseErrorKind::NoBallots));
    }
    let profile = Profile::new(m, ballots).map_err(|e| err(last_line, e.into()))?;
    Ok(BallotFile { names, profile })
}

/// Renders `profile` in the ballot-file format, one line per ballot class.
pub fn write_profile_file(names: &[String], profile: &Profile) -> String {
    assert_eq!(names.len(), profile.num_candidates());
    let mut out = format!("candidates: {}\n", names.join(" "));
    for (ranking, count) in profile.ballots() {
        let listed: Vec<&str> = ranking
            .candidates()
            .iter()
            .map(|c| names[c.index()].as_str())
            .collect();
        out.push_str(&format!("{count}: {}\n", listed.join(" > ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complete_ballots() {
        let f = parse_profile_file("candidates: A B C\n2: A > B > C\n1: C > B > A").unwrap();
        assert_eq!(f.names, ["A", "B", "C"]);
        assert_eq!(f.profile.num_candidates(), 3);
        assert_eq!(f.profile.voters(), 3);
        assert!(f.profile.is_complete());
    }

    #[test]
    fn parses_truncated_ballot() {
        let f = parse_profile_file("candidates: A B C\n3: A").unwrap();
        assert_eq!(f.profile.ballots().len(), 1);
        assert_eq!(f.profile.ballots()[0].0.len(), 1);
        assert_eq!(f.profile.voters(), 3);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# electorate\n\ncandidates: X Y  # two\n\n4: Y>X # trailing\n";
        let f = parse_profile_file(text).unwrap();
        assert_eq!(f.names, ["X", "Y"]);
        assert_eq!(f.profile.voters(), 4);
    }

    fn fails(text: &str) -> ParseError {
        parse_profile_file(text).unwrap_err()
    }

    #[test]
    fn duplicate_in_line() {
        let e = fails("candidates: A B\n1: A > A");
        assert_eq!(e.line, 2);
        assert_eq!(e.kind, ParseErrorKind::DuplicateName("A".into()));
        assert_eq!(
            e.to_string(),
            "line 2: candidate `A` appears twice in one ranking"
        );
    }

    #[test]
    fn error_kinds_carry_line_numbers() {
        let e = fails("candidates: A B\n\n1: A > Z");
        assert_eq!(
            (e.line, e.kind),
            (3, ParseErrorKind::UnknownName("Z".into()))
        );
        let e = fails("candidates: A B\n0: A");
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::NonPositiveCount(0)));
        let e = fails("candidates: A B\n-3: A");
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::NonPositiveCount(-3)));
        let e = fails("candidates: A B\nx: A");
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::BadCount("x".into())));
        let e = fails("# only\n1: A > B");
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::MissingHeader));
        let e = fails("");
        assert_eq!((e.line, e.kind), (1, ParseErrorKind::EmptyFile));
        let e = fails("# nothing\n\n");
        assert_eq!(e.kind, ParseErrorKind::EmptyFile);
        let e = fails("candidates: A A");
        assert_eq!(
            (e.line, e.kind),
            (1, ParseErrorKind::DuplicateDeclaration("A".into()))
        );
        let e = fails("candidates: A B\n2 A > B");
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::MissingColon));
        let e = fails("candidates: A B\n2: A >");
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::EmptyRanking));
        let e = fails("candidates:\n1: A");
        assert_eq!((e.line, e.kind), (1, ParseErrorKind::NoCandidates));
        let e = fails("candidates: A B\n");
        assert_eq!(e.kind, ParseErrorKind::NoBallots);
    }

    #[test]
    fn writer_round_trip() {
        let text =
            "candidates: Ann Bo Cy Di\n5: Bo > Ann\n2: Di > Cy > Bo > Ann\n1: Cy\n5: Bo > Ann\n";
        let f = parse_profile_file(text).unwrap();
        let written = write_profile_file(&f.names, &f.profile);
        assert_eq!(parse_profile_file(&written).unwrap(), f);
    }
}
