use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use thiserror::Error;
use truncalab::experiment::{
    emit_csv, run_grid_with, CellSpec, ExperimentError, GridObserver, ProfileRecord,
};
use truncalab::{GridConfig, RuleOptions, Seed, Workers};

use crate::ballot_file::{parse_profile_file, ParseError};
use crate::plot::{build_charts, read_results_csv, render_svg, PlotError};
use crate::{EvaluateArgs, PlotArgs, SimulateArgs};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Plot { path: PathBuf, source: PlotError },
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
}

impl CommandError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Usage(_) | CommandError::Parse { .. } | CommandError::Plot { .. } => 2,
            CommandError::Experiment(
                ExperimentError::InvalidConfig(_) | ExperimentError::Mallows(_),
            ) => 2,
            CommandError::Io { .. } | CommandError::Experiment(_) => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CommandError + '_ {
    move |source| CommandError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn parse_workers(raw: &str) -> Result<Workers, CommandError> {
    match raw.trim() {
        "single" => Ok(Workers::Single),
        "auto" => Ok(Workers::Auto),
        n => n
            .parse::<NonZeroUsize>()
            .map(Workers::Threads)
            .map_err(|_| {
                CommandError::Usage(format!(
                    "invalid worker count `{raw}` (expected N, single or auto)"
                ))
            }),
    }
}

struct Progress {
    profiles: Option<(PathBuf, BufWriter<File>)>,
}

impl GridObserver for Progress {
    fn cell_finished(&mut self, cell: &CellSpec, index: usize, total: usize) {
        eprintln!("[{}/{}] {}", index + 1, total, cell);
    }

    fn profile(&mut self, record: &ProfileRecord<'_>) -> io::Result<()> {
        match &mut self.profiles {
            Some((_, w)) => writeln!(w, "{record}"),
            None => Ok(()),
        }
    }
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CommandError> {
    let workers = parse_workers(&args.workers)?;
    let config = GridConfig {
        candidate_counts: args.candidates.clone(),
        voter_counts: args.voters.clone(),
        phis: args.phi.clone(),
        trials: args.trials,
        master_seed: Seed(args.seed),
        rules: args.rules.clone(),
        store_profiles: args.store_profiles.is_some(),
        rule_options: RuleOptions {
            coombs_last_place: args.coombs_last_place,
        },
    };
    config.validate()?;

    let profiles = match &args.store_profiles {
        Some(path) => {
            let file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(io_err(path))?;
            Some((path.clone(), BufWriter::new(file)))
        }
        None => None,
    };
    let mut progress = Progress { profiles };
    let table = match run_grid_with(&config, workers, &mut progress) {
        Err(ExperimentError::Io(source)) => {
            let (path, _) = progress.profiles.expect("profile sink");
            return Err(CommandError::Io { path, source });
        }
        other => other?,
    };
    if let Some((path, mut w)) = progress.profiles {
        w.flush().map_err(io_err(&path))?;
    }

    let csv = emit_csv(&table);
    match &args.out {
        Some(path) => fs::write(path, csv).map_err(io_err(path))?,
        None => io::stdout()
            .write_all(csv.as_bytes())
            .map_err(io_err(Path::new("<stdout>")))?,
    }
    Ok(())
}

/// Lines of `rule: {Name,...}` for each requested rule.
pub fn evaluate_text(text: &str, args: &EvaluateArgs) -> Result<String, CommandError> {
    let file = parse_profile_file(text).map_err(|source| CommandError::Parse {
        path: args.profile.clone(),
        source,
    })?;
    let profile = match args.truncate {
        Some(len) => file
            .profile
            .truncate(len)
            .map_err(|e| CommandError::Usage(format!("--truncate: {e}")))?,
        None => file.profile,
    };
    let options = RuleOptions {
        coombs_last_place: args.coombs_last_place,
    };
    let mut out = String::new();
    for rule in &args.rules {
        let mut names: Vec<&str> = rule
            .apply(&profile, &options)
            .iter()
            .map(|c| file.names[c.index()].as_str())
            .collect();
        names.sort_unstable();
        out.push_str(&format!("{rule}: {{{}}}\n", names.join(",")));
    }
    Ok(out)
}

pub fn evaluate(args: &EvaluateArgs) -> Result<(), CommandError> {
    let text = fs::read_to_string(&args.profile).map_err(io_err(&args.profile))?;
    print!("{}", evaluate_text(&text, args)?);
    Ok(())
}

pub fn plot(args: &PlotArgs) -> Result<(), CommandError> {
    let text = fs::read_to_string(&args.input).map_err(io_err(&args.input))?;
    let rows = read_results_csv(&text).map_err(|source| CommandError::Plot {
        path: args.input.clone(),
        source,
    })?;
    fs::create_dir_all(&args.out).map_err(io_err(&args.out))?;
    for chart in build_charts(&rows, args.group_by) {
        let path = args.out.join(&chart.file_name);
        fs::write(&path, render_svg(&chart)).map_err(io_err(&path))?;
        println!("{}", path.display());
    }
    Ok(())
}
