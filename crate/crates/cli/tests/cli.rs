use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nhflip::config_file::to_toml;
use nhflip::experiment::ExperimentSpec;

fn nhflip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhflip"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn verdict_value(dir: &Path, key: &str) -> String {
    let text = fs::read_to_string(dir.join("verdict.txt")).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("{key} missing from verdict:\n{text}"))
        .to_string()
}

fn number(dir: &Path, key: &str) -> f64 {
    verdict_value(dir, key).parse().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn fig2_run_writes_every_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("fig2");
    let o = nhflip(&["run", "fig2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in [
        "trajectory_full.csv",
        "trajectory_reduced.csv",
        "fidelity.csv",
        "delta.csv",
        "eigenvalues.csv",
        "verdict.txt",
        "config.toml",
        "manifest.toml",
        "populations_full.svg",
        "populations_compare.svg",
        "fidelity.svg",
    ] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    assert!(number(&out, "echo_full_F_at_2T") >= 0.98);
    assert_eq!(verdict_value(&out, "secular_growth"), "true");
    assert!(number(&out, "reduced_full_gap") <= 0.02);

    let csv = fs::read_to_string(out.join("trajectory_full.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,P_1,P_2,P_3,P_c,P_tot,F"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    // 17 significant digits
    assert_eq!(first[1], "3.3333333333333343e-1");

    let delta = fs::read_to_string(out.join("delta.csv")).unwrap();
    assert_eq!(delta.lines().next(), Some("n,re_1,im_1,re_2,im_2,re_3,im_3"));
    let d11: f64 = delta.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((d11 - 7.03125e-4).abs() < 1e-18);

    let manifest = fs::read_to_string(out.join("manifest.toml")).unwrap();
    assert!(manifest.contains("lattice_size = 1703"));
    assert!(manifest.contains("dt = 0.01"));
    assert!(manifest.contains(&format!("version = \"{}\"", env!("CARGO_PKG_VERSION"))));
}

#[test]
fn amplitude_columns_on_request() {
    let tmp = tempfile::tempdir().unwrap();
    let o = nhflip(&["run", "fig2", "--tmax", "20", "--amplitudes", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(tmp.path().join("trajectory_full.csv")).unwrap();
    assert!(csv.starts_with("t,P_1,P_2,P_3,P_c,P_tot,F,re_c_1,im_c_1,re_c_2,im_c_2,re_c_3,im_c_3\n"));
    let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[7] - 3f64.sqrt().recip()).abs() < 1e-15);
    assert!((row[10] + 3f64.sqrt().recip()).abs() < 1e-15);
}

#[test]
fn fig3b_fidelity_exceeds_one() {
    let tmp = tempfile::tempdir().unwrap();
    let o = nhflip(&["run", "fig3b", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(number(tmp.path(), "echo_full_peak") > 1.0);
    let f = number(tmp.path(), "echo_full_F_at_2T");
    assert!(!(0.98..=1.02).contains(&f), "F(2T) = {f}");
}

#[test]
fn fig4_is_frozen_with_growing_continuum() {
    let tmp = tempfile::tempdir().unwrap();
    let o = nhflip(&["run", "fig4", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(number(tmp.path(), "frozen_deviation") <= 0.1);
    assert_eq!(verdict_value(tmp.path(), "secular_growth"), "true");
}

#[test]
fn config_file_matches_preset_byte_for_byte() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("fig2.toml");
    fs::write(&cfg, to_toml(&ExperimentSpec::fig2())).unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(nhflip(&["run", "fig2", "--out", a.to_str().unwrap()]).status.success());
    let o = nhflip(&["run", "--config", cfg.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["trajectory_full.csv", "trajectory_reduced.csv", "fidelity.csv", "delta.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    assert_eq!(
        fs::read_to_string(b.join("config.toml")).unwrap(),
        fs::read_to_string(&cfg).unwrap()
    );
}

#[test]
fn validation_failures_exit_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let base = to_toml(&ExperimentSpec::fig2());
    let cases = [
        (
            base.replace("omega = [0.0, 0.0, 0.0]", "omega = [3.0, 0.0, 0.0]"),
            "outside the band",
        ),
        (base.replace("dt = 0.01", "dt = 0.03"), "integer multiple"),
        (base.replace("t_max = 400.0", "t_max = [1]"), "line"),
    ];
    for (i, (text, expect)) in cases.iter().enumerate() {
        let cfg = tmp.path().join(format!("bad{i}.toml"));
        fs::write(&cfg, text).unwrap();
        let out = tmp.path().join(format!("out{i}"));
        let o = nhflip(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
        assert!(stderr(&o).contains(expect), "{}", stderr(&o));
    }
    let o = nhflip(&["run", "fig7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown preset"));
    let o = nhflip(&["run"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn io_failures_exit_with_4() {
    let tmp = tempfile::tempdir().unwrap();
    let o = nhflip(&["run", "--config", tmp.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = nhflip(&["run", "fig2", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

fn sweep_results(dir: &Path) -> Vec<f64> {
    let text = fs::read_to_string(dir.join("sweep.csv")).unwrap();
    text.lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn degenerate_echo_is_independent_of_flip_time() {
    let tmp = tempfile::tempdir().unwrap();
    let o = nhflip(&[
        "sweep", "fig2", "--param", "T", "--values", "50,100,200", "--workers", "2", "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let f = sweep_results(tmp.path());
    assert_eq!(f.len(), 3);
    assert!(f.iter().all(|v| *v >= 0.98), "{f:?}");
    for row in ["row_000", "row_001", "row_002"] {
        assert!(tmp.path().join(row).join("verdict.txt").is_file());
    }
}

#[test]
fn detuning_sweep_passes_through_the_bad_regime() {
    let tmp = tempfile::tempdir().unwrap();
    let o = nhflip(&[
        "sweep", "fig2", "--param", "detuning_scale", "--values", "0,0.05,0.5", "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let f = sweep_results(tmp.path());
    assert!(f[0] >= 0.98 && f[2] >= 0.98, "{f:?}");
    assert!((f[1] - 1.0).abs() > 0.02, "{f:?}");
}

#[test]
fn fig4_half_period_four_is_also_frozen() {
    let tmp = tempfile::tempdir().unwrap();
    let o = nhflip(&["sweep", "fig4", "--param", "T", "--values", "4", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(tmp.path().join("sweep.csv")).unwrap();
    assert!(text.contains("frozen_deviation"));
    assert!(sweep_results(tmp.path())[0] <= 0.1);
}

#[test]
fn empty_sweep_succeeds() {
    let tmp = tempfile::tempdir().unwrap();
    let o = nhflip(&["sweep", "fig2", "--param", "T", "--values", "", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(sweep_results(tmp.path()).is_empty());
    let o = nhflip(&["sweep", "fig2", "--param", "width", "--values", "1"]);
    assert_eq!(o.status.code(), Some(2));
}
