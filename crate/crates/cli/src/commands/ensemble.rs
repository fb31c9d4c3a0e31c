use std::path::PathBuf;

use clap::Args;
use entrocomplex::analysis::{
    collapse_residual, crossover_location, parabolic_peak, power_law_fit, DEFAULT_CROSSOVER_TARGET,
};
use entrocomplex::ensembles::fock::binomial;
use entrocomplex::ensembles::{ensemble_sweep, EnsembleConfig, EnsembleKind, EnsembleStatRecord};
use serde::Serialize;
use serde_json::{json, Value};

use super::summary;
use crate::output::{float, opt_float, CsvOut, Run};
use crate::range::Grid;
use crate::CliError;

#[derive(Debug, Args, Serialize)]
pub struct SweepOptions {
    #[arg(long, default_value_t = 100)]
    pub realizations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Central fraction of the spectrum used for gap ratios.
    #[arg(long, default_value_t = 0.5)]
    pub spectral_window: f64,
    /// Central fraction of eigenstates used for entropy averages.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub eigenstate_window: f64,
    /// Eigenvalues only: faster, but the entropy columns are left empty.
    #[arg(long)]
    pub no_eigenvectors: bool,
    /// Gap-ratio level that defines the crossover point.
    #[arg(long, default_value_t = DEFAULT_CROSSOVER_TARGET)]
    pub crossover_target: f64,
}

impl SweepOptions {
    fn config(&self, kind: EnsembleKind) -> EnsembleConfig {
        EnsembleConfig {
            spectral_window: self.spectral_window,
            eigenstate_window: self.eigenstate_window,
            eigenvectors: !self.no_eigenvectors,
            ..EnsembleConfig::new(kind, self.realizations, self.seed)
        }
    }
}

fn stat_fields(r: &EnsembleStatRecord) -> [String; 6] {
    [
        float(r.gap_ratio.mean),
        float(r.gap_ratio.stderr),
        opt_float(r.shannon.map(|m| m.mean)),
        opt_float(r.renyi2.map(|m| m.mean)),
        opt_float(r.complexity.map(|m| m.mean)),
        opt_float(r.complexity.map(|m| m.stderr)),
    ]
}

/// Crossover of the gap ratio and eigenstate complexity peak of one sweep.
fn sweep_summary(records: &[EnsembleStatRecord], target: f64, log_control: bool) -> Value {
    let r_curve: Vec<(f64, f64)> = records.iter().map(|r| (r.control, r.gap_ratio.mean)).collect();
    let xs: Vec<f64> = records.iter().map(|r| r.control).collect();
    let peak = records
        .iter()
        .map(|r| r.complexity.map(|c| c.mean))
        .collect::<Option<Vec<f64>>>()
        .map(|ys| summary(parabolic_peak(&xs, &ys, log_control)));
    json!({
        "crossover": summary(crossover_location(&r_curve, target)),
        "complexity_peak": peak,
    })
}

fn control_of(v: &Value, key: &str) -> Option<f64> {
    v.get(key)?.get(if key == "crossover" { "control" } else { "x" })?.as_f64()
}

/// Deformed GOE `H0 + α H1` for several matrix sizes.
#[derive(Debug, Args, Serialize)]
pub struct GoeArgs {
    /// Matrix sizes.
    #[arg(long, default_value = "256,512,1024")]
    pub sizes: Grid,
    /// Values of α, or of α√N with --scaled.
    #[arg(long)]
    pub alpha_grid: Grid,
    #[arg(long)]
    pub scaled: bool,
    #[command(flatten)]
    pub sweep: SweepOptions,
    #[arg(long)]
    pub out: PathBuf,
}

fn sizes(grid: &Grid) -> Result<Vec<usize>, CliError> {
    grid.values()
        .iter()
        .map(|&x| {
            if x >= 2.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(CliError::Usage(format!("matrix size must be an integer ≥ 2, got {x}")))
            }
        })
        .collect()
}

pub fn run_goe(args: &GoeArgs) -> Result<(), CliError> {
    let sizes = sizes(&args.sizes)?;
    let mut run = Run::start("rmt-goe", args, Some(args.sweep.seed));
    let mut csv = CsvOut::create(
        &args.out,
        &["N", "alpha", "alpha_sqrtN", "r_mean", "r_err", "S_mean", "R2_mean", "SC_mean", "SC_err", "realizations"],
    )?;
    let mut per_size = Vec::new();
    let mut scaled_curves = Vec::new();
    for &n in &sizes {
        let root = (n as f64).sqrt();
        let alphas: Vec<f64> =
            args.alpha_grid.values().iter().map(|&a| if args.scaled { a / root } else { a }).collect();
        let records = ensemble_sweep(&args.sweep.config(EnsembleKind::DeformedGoe { size: n }), &alphas)?;
        for r in &records {
            let [a, b, c, d, e, f] = stat_fields(r);
            csv.row([n.to_string(), float(r.control), float(r.control * root), a, b, c, d, e, f, r.realizations.to_string()])?;
        }
        scaled_curves.push(records.iter().map(|r| (r.control * root, r.gap_ratio.mean)).collect::<Vec<_>>());
        let mut s = sweep_summary(&records, args.sweep.crossover_target, true);
        s["N"] = json!(n);
        per_size.push(s);
    }
    run.output(csv.finish()?);
    let fit = |key: &str| {
        let pts: Vec<(f64, f64)> = sizes
            .iter()
            .zip(&per_size)
            .filter_map(|(&n, s)| control_of(s, key).map(|x| (n as f64, x)))
            .collect();
        summary(power_law_fit(&pts, None))
    };
    let results = json!({
        "sizes": per_size,
        "crossover_exponent": fit("crossover"),
        "complexity_peak_exponent": fit("complexity_peak"),
        "collapse_residual_sqrtN": if scaled_curves.len() >= 2 { summary(collapse_residual(&scaled_curves)) } else { Value::Null },
    });
    run.finish(&args.out, results)?;
    Ok(())
}

/// Deformed two-body random ensemble for fixed orbitals and several particle numbers.
#[derive(Debug, Args, Serialize)]
pub struct TbreArgs {
    #[arg(long, short = 'm', default_value_t = 14)]
    pub orbitals: u32,
    /// Particle numbers.
    #[arg(long, short = 'n', default_value = "3,4,5")]
    pub particles: Grid,
    #[arg(long)]
    pub alpha_grid: Grid,
    #[command(flatten)]
    pub sweep: SweepOptions,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_tbre(args: &TbreArgs) -> Result<(), CliError> {
    let ns: Vec<u32> = args
        .particles
        .values()
        .iter()
        .map(|&x| {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as u32)
            } else {
                Err(CliError::Usage(format!("particle number must be a nonnegative integer, got {x}")))
            }
        })
        .collect::<Result<_, _>>()?;
    let mut run = Run::start("rmt-tbre", args, Some(args.sweep.seed));
    let mut csv = CsvOut::create(
        &args.out,
        &["m", "n", "N", "alpha", "r_mean", "r_err", "S_mean", "R2_mean", "SC_mean", "SC_err", "realizations"],
    )?;
    let mut per_n = Vec::new();
    for &n in &ns {
        let kind = EnsembleKind::DeformedTbre { orbitals: args.orbitals, particles: n };
        let records = ensemble_sweep(&args.sweep.config(kind), args.alpha_grid.values())?;
        let dim = binomial(args.orbitals, n);
        for r in &records {
            let [a, b, c, d, e, f] = stat_fields(r);
            csv.row([
                args.orbitals.to_string(),
                n.to_string(),
                dim.to_string(),
                float(r.control),
                a,
                b,
                c,
                d,
                e,
                f,
                r.realizations.to_string(),
            ])?;
        }
        let mut s = sweep_summary(&records, args.sweep.crossover_target, true);
        let ratio = match (control_of(&s, "complexity_peak"), control_of(&s, "crossover")) {
            (Some(p), Some(c)) => json!(p / c),
            _ => Value::Null,
        };
        s["n"] = json!(n);
        s["N"] = json!(dim);
        s["peak_to_crossover_ratio"] = ratio;
        per_n.push(s);
    }
    run.output(csv.finish()?);
    run.finish(&args.out, json!({ "particles": per_n }))?;
    Ok(())
}

/// Disordered Heisenberg chain in the `S_z = 0` sector.
#[derive(Debug, Args, Serialize)]
pub struct MblArgs {
    /// Chain length (even, at most 16).
    #[arg(long = "L", default_value_t = 12)]
    pub sites: u32,
    /// Disorder strengths h.
    #[arg(long)]
    pub h_grid: Grid,
    #[command(flatten)]
    pub sweep: SweepOptions,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_mbl(args: &MblArgs) -> Result<(), CliError> {
    let mut run = Run::start("mbl", args, Some(args.sweep.seed));
    let records = ensemble_sweep(
        &args.sweep.config(EnsembleKind::Heisenberg { sites: args.sites }),
        args.h_grid.values(),
    )?;
    let mut csv = CsvOut::create(
        &args.out,
        &["L", "h", "r_mean", "r_err", "S_mean", "R2_mean", "SC_mean", "SC_err", "realizations"],
    )?;
    for r in &records {
        let [a, b, c, d, e, f] = stat_fields(r);
        csv.row([args.sites.to_string(), float(r.control), a, b, c, d, e, f, r.realizations.to_string()])?;
    }
    run.output(csv.finish()?);
    let mut s = sweep_summary(&records, args.sweep.crossover_target, false);
    s["L"] = json!(args.sites);
    run.finish(&args.out, s)?;
    Ok(())
}
