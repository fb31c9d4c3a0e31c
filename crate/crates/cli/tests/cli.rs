use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_entrocomplex"));
    c.env_remove("ENTROCOMPLEX_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn header(path: &Path) -> String {
    read(path).lines().next().unwrap().to_string()
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let i = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records().map(|rec| rec.unwrap()[i].parse().unwrap()).collect()
}

fn manifest(out: &Path) -> Value {
    let p = format!("{}.manifest.json", out.display());
    serde_json::from_str(&read(Path::new(&p))).unwrap()
}

#[test]
fn channel_writes_curves_peaks_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("wp.csv");
    ok(&["channel", "--kind", "depolarize", "--n-max", "12", "--grid", "51", "--fit-window", "4:12", "--out", out.to_str().unwrap()]);
    assert_eq!(header(&out), "n,p,S,R2,SC_raw,SC_norm");
    let peaks = dir.path().join("wp.csv.peaks.csv");
    assert_eq!(header(&peaks), "n,p_star,SC_star_raw,SC_star_norm");
    assert_eq!(column(&peaks, "n").len(), 12);
    let sc = column(&out, "SC_raw");
    assert_eq!(sc.len(), 12 * 51);
    for n in 0..12 {
        assert!(sc[n * 51].abs() < 1e-12 && sc[n * 51 + 50].abs() < 1e-12);
    }
    let m = manifest(&out);
    assert_eq!(m["subcommand"], "channel");
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
    assert!(m["results"]["default_window"]["gamma"].as_f64().unwrap() > 0.5);
    assert!(m["results"]["full_range"]["gamma"].is_number());
}

#[test]
fn fit_reproduces_manifest_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dp.csv");
    ok(&["channel", "--kind", "dephase", "--grid", "3", "--out", out.to_str().unwrap()]);
    let peaks = dir.path().join("dp.csv.peaks.csv");
    let res = run(&["fit", "--input", peaks.to_str().unwrap(), "--x", "n", "--y", "p_star", "--window", "8:63"]);
    assert!(res.status.success());
    let fit: Value = serde_json::from_slice(&res.stdout).unwrap();
    let from_manifest = &manifest(&out)["results"]["default_window"]["p_star"]["exponent"];
    // The CSV carries 17 significant digits, so the refit agrees to round-off.
    assert!((fit["exponent"].as_f64().unwrap() - from_manifest.as_f64().unwrap()).abs() < 1e-12);
    assert!((fit["exponent"].as_f64().unwrap() + 1.0).abs() < 0.02);
}

#[test]
fn flambaum_dynamics_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dyn.csv");
    ok(&["dynamics", "--model", "flambaum", "--gamma2-over-delta2", "2", "--n-states", "1000", "--out", out.to_str().unwrap()]);
    assert_eq!(header(&out), "t,W0,S,R2,SC");
    let t = column(&out, "t");
    let w = column(&out, "W0");
    assert_eq!(t.len(), 401);
    for (t, w) in t.iter().zip(&w) {
        assert!((w - (1.0 - (1.0 + t * t).sqrt()).exp()).abs() < 1e-12);
    }
    assert!(manifest(&out)["results"]["peak"]["t_star"].as_f64().unwrap() > 0.0);
}

#[test]
fn mbl_schema_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mbl.csv");
    ok(&["mbl", "--L", "6", "--h-grid", "1:3:1", "--realizations", "5", "--seed", "42", "--out", out.to_str().unwrap()]);
    assert_eq!(header(&out), "L,h,r_mean,r_err,S_mean,R2_mean,SC_mean,SC_err,realizations");
    assert_eq!(column(&out, "h"), vec![1.0, 2.0, 3.0]);
    assert!(column(&out, "r_mean").iter().all(|r| (0.0..=1.0).contains(r)));
    let m = manifest(&out);
    assert_eq!(m["base_seed"], 42);
    assert_eq!(m["parameters"]["sweep"]["realizations"], 5);
    assert_eq!(m["parameters"]["sweep"]["spectral_window"], 0.5);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &Path| {
        vec![
            "rmt-tbre".to_string(),
            "-m".into(),
            "7".into(),
            "-n".into(),
            "3".into(),
            "--alpha-grid".into(),
            "geom:0.01:3:5".into(),
            "--realizations".into(),
            "6".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    let one = bin().arg("--threads").arg("1").args(args(&a)).output().unwrap();
    let three = bin().env("ENTROCOMPLEX_THREADS", "3").args(args(&b)).output().unwrap();
    assert!(one.status.success() && three.status.success());
    assert_eq!(read(&a), read(&b));
    assert_eq!(manifest(&b)["threads"], 3);
}

#[test]
fn goe_and_tbre_dynamics_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let goe = dir.path().join("goe.csv");
    ok(&["rmt-goe", "--sizes", "32,64", "--alpha-grid", "geom:0.1:10:4", "--scaled", "--realizations", "3", "--out", goe.to_str().unwrap()]);
    assert_eq!(header(&goe), "N,alpha,alpha_sqrtN,r_mean,r_err,S_mean,R2_mean,SC_mean,SC_err,realizations");
    let scaled = column(&goe, "alpha_sqrtN");
    assert!((scaled[0] - 0.1).abs() < 1e-12 && (scaled[4] - 0.1).abs() < 1e-12);

    let td = dir.path().join("td.csv");
    ok(&["tbre-dynamics", "-m", "7", "-n", "2", "--alpha-grid", "1,2", "--realizations", "2", "--initial-states", "3", "--points", "60", "--out", td.to_str().unwrap()]);
    assert_eq!(header(&td), "alpha,t,t_over_tstar,W0,S,R2,SC");
    let peaks = dir.path().join("td.csv.peaks.csv");
    assert_eq!(header(&peaks), "alpha,t_star,SC_max,refinement");
    assert_eq!(column(&peaks, "alpha"), vec![1.0, 2.0]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = out.to_str().unwrap();
    assert_eq!(run(&["mbl", "--L", "7", "--h-grid", "1", "--out", o]).status.code(), Some(2));
    assert_eq!(run(&["mbl", "--L", "8", "--h-grid", "3:1:1", "--out", o]).status.code(), Some(2));
    assert_eq!(run(&["channel", "--kind", "amplitude", "--out", o]).status.code(), Some(2));
    assert_eq!(run(&["channel", "--kind", "dephase", "--bogus", "--out", o]).status.code(), Some(2));
    assert_eq!(run(&["dynamics", "--model", "gaussian", "--T", "-1", "--out", o]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    let missing = dir.path().join("missing.csv");
    assert_eq!(run(&["fit", "--input", missing.to_str().unwrap(), "--x", "a", "--y", "b"]).status.code(), Some(1));
    assert!(run(&["--help"]).status.success());
}
