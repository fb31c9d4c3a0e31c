use std::path::PathBuf;

use clap::Args;
use entrocomplex::analysis::power_law_fit;
use entrocomplex::channels::{peak_scaling_series, sweep_curve, Channel, PeakRecord, MAX_SERIES_QUBITS};
use serde::Serialize;
use serde_json::json;

use super::summary;
use crate::output::{float, sibling, CsvOut, Run};
use crate::range::Window;
use crate::CliError;

fn parse_channel(s: &str) -> Result<Channel, String> {
    s.parse().map_err(|e: entrocomplex::Error| e.to_string())
}

/// Complexity of the noisy GHZ state versus noise strength, with peak scaling fits.
#[derive(Debug, Args, Serialize)]
pub struct ChannelArgs {
    /// depolarize or dephase
    #[arg(long, value_parser = parse_channel)]
    pub kind: Channel,
    #[arg(long, default_value_t = 1)]
    pub n_min: u32,
    #[arg(long, default_value_t = MAX_SERIES_QUBITS)]
    pub n_max: u32,
    /// Points on the p ∈ [0, 1] grid of each curve.
    #[arg(long, default_value_t = 2001)]
    pub grid: usize,
    /// Qubit range used for the exponent fits.
    #[arg(long, default_value = "8:63")]
    pub fit_window: Window,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &ChannelArgs) -> Result<(), CliError> {
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(CliError::Usage(format!("empty qubit range {}..={}", args.n_min, args.n_max)));
    }
    let mut run = Run::start("channel", args, None);
    let ns: Vec<u32> = (args.n_min..=args.n_max).collect();
    let peaks = peak_scaling_series(args.kind, &ns)?;

    let mut csv = CsvOut::create(&args.out, &["n", "p", "S", "R2", "SC_raw", "SC_norm"])?;
    for &n in &ns {
        for r in sweep_curve(args.kind, n, args.grid)? {
            csv.row([
                r.n.to_string(),
                float(r.p),
                float(r.shannon),
                float(r.renyi2),
                float(r.complexity_raw),
                float(r.complexity_normalized),
            ])?;
        }
    }
    run.output(csv.finish()?);

    let mut pk = CsvOut::create(&sibling(&args.out, ".peaks.csv"), &["n", "p_star", "SC_star_raw", "SC_star_norm"])?;
    for r in &peaks {
        pk.row([r.n.to_string(), float(r.p_star), float(r.sc_star_raw), float(r.sc_star_normalized)])?;
    }
    run.output(pk.finish()?);

    let window = (args.fit_window.0, args.fit_window.1);
    let results = json!({
        "fit_window": [window.0, window.1],
        "default_window": scaling_fits(args.kind, &peaks, Some(window)),
        "full_range": scaling_fits(args.kind, &peaks, None),
    });
    run.finish(&args.out, results)?;
    Ok(())
}

fn series(peaks: &[PeakRecord], f: impl Fn(&PeakRecord) -> f64) -> Vec<(f64, f64)> {
    peaks.iter().map(|r| (f64::from(r.n), f(r))).collect()
}

/// Depolarizing: `1 − p* ∼ n^(−γ)` and `S_C(p*) ∼ n^δ`. Dephasing: `p* ∼ n^κ`.
fn scaling_fits(kind: Channel, peaks: &[PeakRecord], window: Option<(f64, f64)>) -> serde_json::Value {
    match kind {
        Channel::Depolarize => {
            let gap = power_law_fit(&series(peaks, |r| 1.0 - r.p_star), window);
            let gamma = gap.as_ref().map(|f| -f.exponent).ok();
            json!({
                "one_minus_p_star": summary(gap),
                "gamma": gamma,
                "sc_star_raw": summary(power_law_fit(&series(peaks, |r| r.sc_star_raw), window)),
                "sc_star_normalized": summary(power_law_fit(&series(peaks, |r| r.sc_star_normalized), window)),
            })
        }
        Channel::Dephase => json!({
            "p_star": summary(power_law_fit(&series(peaks, |r| r.p_star), window)),
        }),
    }
}
