use std::path::PathBuf;

use clap::{Args, ValueEnum};
use entrocomplex::analysis::power_law_fit;
use entrocomplex::dynamics::{
    analytic_complexity_trace, default_time_grid, fit_gaussian_decay, tbre_survival_ensemble, time_collapse,
    Refinement, SurvivalModel, TbreDynamicsConfig, TbreSurvival, DEFAULT_INITIAL_STATES, DEFAULT_TIME_POINTS,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::summary;
use crate::output::{float, sibling, CsvOut, Run};
use crate::range::{Grid, Window};
use crate::CliError;

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Exponential,
    Gaussian,
    Tanh,
    Flambaum,
}

/// Analytic survival models with the remaining weight spread over N states.
#[derive(Debug, Args, Serialize)]
pub struct DynamicsArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Decay time T of the exponential, Gaussian and tanh models.
    #[arg(long = "T", default_value_t = 1.0)]
    pub decay_time: f64,
    /// Long-time decay rate Γ of the Flambaum model.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long = "gamma2-over-delta2", default_value_t = 2.0)]
    pub gamma2_over_delta2: f64,
    /// Number of states the decayed weight is shared among.
    #[arg(long, default_value_t = 1000)]
    pub n_states: usize,
    /// Log-spaced points over [1e-2, 1e2] time units, after t = 0.
    #[arg(long, default_value_t = DEFAULT_TIME_POINTS)]
    pub points: usize,
    #[arg(long)]
    pub out: PathBuf,
}

impl DynamicsArgs {
    fn model(&self) -> entrocomplex::Result<SurvivalModel> {
        let t = self.decay_time;
        let m = match self.model {
            ModelKind::Exponential => SurvivalModel::Exponential { t },
            ModelKind::Gaussian => SurvivalModel::Gaussian { t },
            ModelKind::Tanh => SurvivalModel::TanhInterp { t },
            ModelKind::Flambaum => return SurvivalModel::flambaum_with_ratio(self.gamma, self.gamma2_over_delta2),
        };
        m.validate()?;
        Ok(m)
    }
}

pub fn run_dynamics(args: &DynamicsArgs) -> Result<(), CliError> {
    let model = args.model()?;
    let mut run = Run::start("dynamics", args, None);
    let times = default_time_grid(model.time_scale(), args.points)?;
    let trace = analytic_complexity_trace(&model, args.n_states, &times)?;
    let mut csv = CsvOut::create(&args.out, &["t", "W0", "S", "R2", "SC"])?;
    for k in 0..times.len() {
        csv.row([
            float(trace.times[k]),
            float(trace.w0[k]),
            float(trace.shannon[k]),
            float(trace.renyi2[k]),
            float(trace.complexity[k]),
        ])?;
    }
    run.output(csv.finish()?);
    run.finish(&args.out, json!({ "model": model, "peak": summary(trace.peak()) }))?;
    Ok(())
}

/// Exact survival dynamics in the deformed two-body random ensemble.
#[derive(Debug, Args, Serialize)]
pub struct TbreDynamicsArgs {
    #[arg(long, short = 'm', default_value_t = 12)]
    pub orbitals: u32,
    #[arg(long, short = 'n', default_value_t = 3)]
    pub particles: u32,
    #[arg(long, default_value = "0.5,1,2,4")]
    pub alpha_grid: Grid,
    #[arg(long, default_value_t = 20)]
    pub realizations: usize,
    /// Initial basis states per realization.
    #[arg(long, default_value_t = DEFAULT_INITIAL_STATES)]
    pub initial_states: usize,
    /// Central fraction of the unperturbed spectrum the initial states come from.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub window: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Log-spaced points over [1e-2, 1e2]/α, after t = 0.
    #[arg(long, default_value_t = DEFAULT_TIME_POINTS)]
    pub points: usize,
    /// Range of t/t* over which curves are compared.
    #[arg(long, default_value = "0.3:3")]
    pub collapse_window: Window,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_tbre_dynamics(args: &TbreDynamicsArgs) -> Result<(), CliError> {
    let mut run = Run::start("tbre-dynamics", args, Some(args.seed));
    if args.alpha_grid.values().iter().any(|&a| !(a >= 0.0)) {
        return Err(CliError::Usage("α values must be nonnegative".into()));
    }
    let runs: Vec<TbreSurvival> = args
        .alpha_grid
        .values()
        .iter()
        .map(|&alpha| {
            let cfg = TbreDynamicsConfig {
                initial_states: args.initial_states,
                window: args.window,
                ..TbreDynamicsConfig::new(args.orbitals, args.particles, alpha, args.realizations, args.seed)
            };
            let scale = if alpha > 0.0 { 1.0 / alpha } else { 1.0 };
            let times = default_time_grid(scale, args.points)?;
            tbre_survival_ensemble(&cfg, &times)
        })
        .collect::<entrocomplex::Result<_>>()?;

    let mut csv = CsvOut::create(&args.out, &["alpha", "t", "t_over_tstar", "W0", "S", "R2", "SC"])?;
    for r in &runs {
        for k in 0..r.times.len() {
            let scaled = r.peak.map(|p| r.times[k] / p.t_star).unwrap_or(f64::NAN);
            csv.row([
                float(r.alpha),
                float(r.times[k]),
                float(scaled),
                float(r.w0[k]),
                float(r.shannon[k]),
                float(r.renyi2[k]),
                float(r.complexity[k]),
            ])?;
        }
    }
    run.output(csv.finish()?);

    let mut pk = CsvOut::create(&sibling(&args.out, ".peaks.csv"), &["alpha", "t_star", "SC_max", "refinement"])?;
    for r in &runs {
        if let Some(p) = r.peak {
            let how = match p.refinement {
                Refinement::Grid => "grid",
                Refinement::Parabolic => "parabolic",
            };
            pk.row([float(r.alpha), float(p.t_star), float(p.sc_max), how.to_string()])?;
        }
    }
    run.output(pk.finish()?);

    let peaks: Vec<(f64, f64)> = runs.iter().filter_map(|r| r.peak.map(|p| (r.alpha, p.t_star))).collect();
    let with_peak: Vec<TbreSurvival> = runs.iter().filter(|r| r.peak.is_some()).cloned().collect();
    let short_time: Vec<Value> = runs
        .par_iter()
        .map(|r| match r.peak {
            Some(p) => json!({ "alpha": r.alpha, "gaussian": summary(fit_gaussian_decay(&r.times, &r.w0, p.t_star / 2.0)) }),
            None => json!({ "alpha": r.alpha, "gaussian": Value::Null }),
        })
        .collect();
    let results = json!({
        "t_star_fit": summary(power_law_fit(&peaks, None)),
        "collapse_residual": if with_peak.len() >= 2 {
            summary(time_collapse(&with_peak, args.collapse_window.0, args.collapse_window.1))
        } else {
            Value::Null
        },
        "short_time": short_time,
    });
    run.finish(&args.out, results)?;
    Ok(())
}
