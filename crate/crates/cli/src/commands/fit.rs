use std::collections::BTreeMap;
use std::fs::File;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use entrocomplex::analysis::{crossover_location, parabolic_peak, power_law_fit, DEFAULT_CROSSOVER_TARGET};
use serde::Serialize;
use serde_json::{json, Value};

use super::summary;
use crate::output::Run;
use crate::range::Window;
use crate::CliError;

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMode {
    /// Least squares on (ln x, ln y).
    PowerLaw,
    /// First x where y crosses --target.
    Crossover,
    /// Grid maximum of y with parabolic refinement.
    Peak,
}

/// Re-runs an analysis on columns of an existing CSV.
#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "power-law")]
    pub mode: FitMode,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    /// Fit y' = 1 − y instead of y.
    #[arg(long)]
    pub one_minus_y: bool,
    /// Analyze each distinct value of this column separately.
    #[arg(long)]
    pub group_by: Option<String>,
    /// x range for power-law fits.
    #[arg(long)]
    pub window: Option<Window>,
    #[arg(long, default_value_t = DEFAULT_CROSSOVER_TARGET)]
    pub target: f64,
    /// Refine peaks in ln x.
    #[arg(long)]
    pub log_x: bool,
    /// JSON result file; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

type Groups = BTreeMap<String, Vec<(f64, f64)>>;

fn read_columns(args: &FitArgs) -> Result<Groups, CliError> {
    let mut reader = csv::Reader::from_reader(File::open(&args.input)?);
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("column `{name}` not found in {}", args.input.display())))
    };
    let (xi, yi) = (column(&args.x)?, column(&args.y)?);
    let gi = args.group_by.as_deref().map(column).transpose()?;
    let mut groups = Groups::new();
    for record in reader.records() {
        let record = record?;
        let (xs, ys) = (&record[xi], &record[yi]);
        if xs.is_empty() || ys.is_empty() {
            continue;
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|_| CliError::Usage(format!("`{s}` is not a number")));
        let y = parse(ys)?;
        let key = gi.map(|g| record[g].to_string()).unwrap_or_default();
        groups.entry(key).or_default().push((parse(xs)?, if args.one_minus_y { 1.0 - y } else { y }));
    }
    if groups.is_empty() {
        return Err(CliError::Usage("no usable rows".into()));
    }
    Ok(groups)
}

fn analyze(args: &FitArgs, pts: &[(f64, f64)]) -> Value {
    match args.mode {
        FitMode::PowerLaw => summary(power_law_fit(pts, args.window.map(|w| (w.0, w.1)))),
        FitMode::Crossover => summary(crossover_location(pts, args.target)),
        FitMode::Peak => {
            let mut sorted = pts.to_vec();
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (xs, ys): (Vec<f64>, Vec<f64>) = sorted.into_iter().unzip();
            summary(parabolic_peak(&xs, &ys, args.log_x))
        }
    }
}

pub fn run(args: &FitArgs) -> Result<(), CliError> {
    let run = Run::start("fit", args, None);
    let groups = read_columns(args)?;
    let results = if args.group_by.is_some() {
        Value::Object(groups.iter().map(|(k, pts)| (k.clone(), analyze(args, pts))).collect())
    } else {
        analyze(args, &groups[""])
    };
    match &args.out {
        Some(out) => {
            std::fs::write(out, serde_json::to_string_pretty(&json!({ "results": results }))? + "\n")?;
            run.finish(out, results)?;
        }
        None => println!("{}", serde_json::to_string_pretty(&results)?),
    }
    Ok(())
}
