//! SVG line charts of match probability against ballot length.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;
use truncalab::experiment::CSV_HEADER;
use truncalab::Rule;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 720.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 450.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlotError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("results file has no data rows")]
    NoRows,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GroupBy {
    All,
    Voters,
    Phi,
    Candidates,
}

/// One parsed row of a results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub candidates: usize,
    pub voters: u64,
    pub phi: f64,
    pub rule: Rule,
    pub ballot_length: usize,
    pub trials: u64,
    pub matches: u64,
    pub probability: f64,
}

fn field<T: FromStr>(
    record: &csv::StringRecord,
    i: usize,
    name: &str,
    line: usize,
) -> Result<T, PlotError> {
    let raw = record.get(i).unwrap_or("");
    raw.parse().map_err(|_| PlotError::Malformed {
        line,
        reason: format!("invalid {name} `{raw}`"),
    })
}

pub fn read_results_csv(text: &str) -> Result<Vec<ResultRow>, PlotError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 1;
        let record = record.map_err(|e| PlotError::Malformed {
            line,
            reason: e.to_string(),
        })?;
        if line == 1 {
            let header: Vec<&str> = record.iter().collect();
            if header.join(",") != CSV_HEADER {
                return Err(PlotError::Malformed {
                    line,
                    reason: format!("expected header `{CSV_HEADER}`"),
                });
            }
            continue;
        }
        if record.len() != 8 {
            return Err(PlotError::Malformed {
                line,
                reason: format!("expected 8 fields, found {}", record.len()),
            });
        }
        let row = ResultRow {
            candidates: field(&record, 0, "candidate count", line)?,
            voters: field(&record, 1, "voter count", line)?,
            phi: field(&record, 2, "phi", line)?,
            rule: field(&record, 3, "rule", line)?,
            ballot_length: field(&record, 4, "ballot length", line)?,
            trials: field(&record, 5, "trial count", line)?,
            matches: field(&record, 6, "match count", line)?,
            probability: field(&record, 7, "probability", line)?,
        };
        if row.ballot_length == 0 || row.ballot_length > row.candidates {
            return Err(PlotError::Malformed {
                line,
                reason: "ballot length outside 1..=candidates".into(),
            });
        }
        if !(0.0..=1.0).contains(&row.probability) || row.matches > row.trials {
            return Err(PlotError::Malformed {
                line,
                reason: "probability outside [0, 1]".into(),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(PlotError::NoRows);
    }
    Ok(rows)
}

/// One figure: an averaged polyline per rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub file_name: String,
    pub title: String,
    pub cells: usize,
    pub series: BTreeMap<Rule, Vec<(usize, f64)>>,
}

/// Groups rows and averages probabilities per `(rule, L)`, each grid cell
/// weighted equally.
pub fn build_charts(rows: &[ResultRow], group_by: GroupBy) -> Vec<Chart> {
    // group key sorts numerically; the label is what ends up in file names
    let mut groups: BTreeMap<(u64, u64), (String, String, Vec<&ResultRow>)> = BTreeMap::new();
    for row in rows {
        let (key, stem, title) = match group_by {
            GroupBy::All => ((0, 0), "all".to_string(), "All simulations".to_string()),
            GroupBy::Voters => (
                (row.voters, 0),
                format!("voters_{}", row.voters),
                format!("{} voters", row.voters),
            ),
            GroupBy::Phi => (
                ((row.phi * 100.0).round() as u64, 0),
                format!("phi_{:.2}", row.phi),
                format!("phi = {:.2}", row.phi),
            ),
            GroupBy::Candidates => (
                (row.candidates as u64, 0),
                format!("candidates_{}", row.candidates),
                format!("{} candidates", row.candidates),
            ),
        };
        groups
            .entry(key)
            .or_insert_with(|| (stem, title, Vec::new()))
            .2
            .push(row);
    }

    groups
        .into_values()
        .map(|(stem, title, members)| {
            let mut sums: BTreeMap<(Rule, usize), (f64, usize)> = BTreeMap::new();
            let mut cells = std::collections::BTreeSet::new();
            for row in &members {
                let e = sums
                    .entry((row.rule, row.ballot_length))
                    .or_insert((0.0, 0));
                e.0 += row.probability;
                e.1 += 1;
                cells.insert((row.candidates, row.voters, (row.phi * 100.0).round() as u64));
            }
            let mut series: BTreeMap<Rule, Vec<(usize, f64)>> = BTreeMap::new();
            for ((rule, len), (sum, count)) in sums {
                series
                    .entry(rule)
                    .or_default()
                    .push((len, sum / count as f64));
            }
            Chart {
                file_name: format!("{stem}.svg"),
                title,
                cells: cells.len(),
                series,
            }
        })
        .collect()
}

pub fn rule_color(rule: Rule) -> &'static str {
    match rule {
        Rule::Coombs => "blue",
        Rule::Bucklin => "red",
        // yellow, darkened enough to read on white
        Rule::PluralityRunoff => "#e6b800",
        Rule::Schulze => "green",
    }
}

fn label(rule: Rule) -> &'static str {
    match rule {
        Rule::Bucklin => "Bucklin",
        Rule::Coombs => "Coombs",
        Rule::PluralityRunoff => "Plurality with runoff",
        Rule::Schulze => "Schulze",
    }
}

/// Renders a chart as a standalone SVG document. Output is a pure function
/// of the chart.
pub fn render_svg(chart: &Chart) -> String {
    let max_len = chart
        .series
        .values()
        .flat_map(|pts| pts.iter().map(|&(l, _)| l))
        .max()
        .unwrap_or(1);
    let x = |len: usize| {
        if max_len == 1 {
            (LEFT + RIGHT) / 2.0
        } else {
            LEFT + (len - 1) as f64 / (max_len - 1) as f64 * (RIGHT - LEFT)
        }
    };
    let y = |p: f64| BOTTOM - p * (BOTTOM - TOP);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="30" font-size="18" text-anchor="middle">True winning set chosen vs. ballot length: {}</text>"#,
        WIDTH / 2.0,
        escape(&chart.title)
    );

    // y grid and ticks
    for i in 0..=5 {
        let p = i as f64 / 5.0;
        let yy = y(p);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yy:.1}" x2="{RIGHT}" y2="{yy:.1}" stroke="#dddddd"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">{p:.1}</text>"#,
            LEFT - 8.0,
            yy + 4.0
        );
    }
    // x ticks
    for len in 1..=max_len {
        let xx = x(len);
        let _ = writeln!(
            s,
            r#"<line x1="{xx:.1}" y1="{BOTTOM}" x2="{xx:.1}" y2="{:.1}" stroke="black"/>"#,
            BOTTOM + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{xx:.1}" y="{:.1}" font-size="12" text-anchor="middle">{len}</text>"#,
            BOTTOM + 20.0
        );
    }
    let _ = writeln!(
        s,
        r#"<polyline points="{LEFT},{TOP} {LEFT},{BOTTOM} {RIGHT},{BOTTOM}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">Ballot length (L)</text>"#,
        (LEFT + RIGHT) / 2.0,
        BOTTOM + 38.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.1}" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.1})">Probability true winning set is chosen</text>"#,
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0
    );

    for (rule, points) in &chart.series {
        let coords: Vec<String> = points
            .iter()
            .map(|&(len, p)| format!("{:.1},{:.1}", x(len), y(p)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="rule-{}" points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            rule,
            coords.join(" "),
            rule_color(*rule)
        );
        for &(len, p) in points {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{}"/>"#,
                x(len),
                y(p),
                rule_color(*rule)
            );
        }
    }

    // legend, bottom right of the plot area
    let rows = chart.series.len() as f64;
    let box_top = BOTTOM - 12.0 - rows * 20.0;
    let _ = writeln!(
        s,
        r#"<rect x="{:.1}" y="{box_top:.1}" width="190" height="{:.1}" fill="white" stroke="black"/>"#,
        RIGHT - 200.0,
        rows * 20.0 + 4.0
    );
    for (i, rule) in chart.series.keys().enumerate() {
        let yy = box_top + 14.0 + i as f64 * 20.0;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{yy:.1}" x2="{:.1}" y2="{yy:.1}" stroke="{}" stroke-width="3"/>"#,
            RIGHT - 190.0,
            RIGHT - 165.0,
            rule_color(*rule)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#,
            RIGHT - 158.0,
            yy + 4.0,
            label(*rule)
        );
    }
    let _ = writeln!(
        s,
        r##"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle" fill="#555555">Each point is the unweighted mean over {} grid cells</text>"##,
        WIDTH / 2.0,
        HEIGHT - 8.0,
        chart.cells
    );
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "candidates,voters,phi,rule,ballot_length,trials,matches,probability
4,100,0.70,bucklin,1,10,8,0.8000
4,100,0.70,bucklin,2,10,10,1.0000
4,100,0.90,bucklin,1,10,6,0.6000
4,100,0.90,bucklin,2,10,10,1.0000
4,100,0.70,schulze,1,10,9,0.9000
";

    #[test]
    fn reads_rows() {
        let rows = read_results_csv(SAMPLE).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].rule, Rule::Bucklin);
        assert_eq!(rows[4].probability, 0.9);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            read_results_csv(&format!("{CSV_HEADER}\n")),
            Err(PlotError::NoRows)
        );
        let bad = format!("{CSV_HEADER}\n4,100,0.70,borda,1,10,8,0.8\n");
        assert!(matches!(
            read_results_csv(&bad),
            Err(PlotError::Malformed { line: 2, .. })
        ));
        let short = format!("{CSV_HEADER}\n4,100,0.70,bucklin,1\n");
        assert!(matches!(
            read_results_csv(&short),
            Err(PlotError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            read_results_csv("a,b\n"),
            Err(PlotError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn averages_cells_equally() {
        let rows = read_results_csv(SAMPLE).unwrap();
        let charts = build_charts(&rows, GroupBy::All);
        assert_eq!(charts.len(), 1);
        assert_eq!(charts[0].file_name, "all.svg");
        assert_eq!(charts[0].cells, 2);
        let bucklin = &charts[0].series[&Rule::Bucklin];
        assert_eq!(bucklin.len(), 2);
        assert!((bucklin[0].1 - 0.7).abs() < 1e-12);
        assert_eq!(bucklin[1], (2, 1.0));

        let by_phi = build_charts(&rows, GroupBy::Phi);
        let names: Vec<_> = by_phi.iter().map(|c| c.file_name.as_str()).collect();
        assert_eq!(names, ["phi_0.70.svg", "phi_0.90.svg"]);
    }

    #[test]
    fn svg_is_deterministic_and_colored() {
        let rows = read_results_csv(SAMPLE).unwrap();
        let chart = &build_charts(&rows, GroupBy::Voters)[0];
        let a = render_svg(chart);
        assert_eq!(a, render_svg(chart));
        assert!(a.starts_with("<svg"));
        assert!(a.contains(r#"stroke="red""#));
        assert!(a.contains(r#"stroke="green""#));
        assert!(a.contains("Ballot length (L)"));
    }
}
