//! Output files of a run.

use std::fs;
use std::path::Path;

use nhflip::config_file::to_toml;
use nhflip::experiment::{ExperimentOptions, ExperimentResult};
use nhflip::observables::ObservableSeries;
use nhflip::{Complex64, Trajectory};

use crate::error::{CliError, CliResult};
use crate::svg::{line_plot, Series};

/// 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn write_csv(path: &Path, header: &[String], rows: impl Iterator<Item = Vec<String>>) -> CliResult<()> {
    let io = |e: csv::Error| CliError::io(path, e.into());
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `c` holds Schrodinger-picture amplitudes per sample when requested.
fn series_csv(path: &Path, s: &ObservableSeries, c: Option<&[Vec<Complex64>]>) -> CliResult<()> {
    let n = s.p_n.first().map_or(0, Vec::len);
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|k| format!("P_{k}")));
    if s.p_c.is_some() {
        header.push("P_c".into());
    }
    header.push("P_tot".into());
    header.push("F".into());
    if c.is_some() {
        for k in 1..=n {
            header.push(format!("re_c_{k}"));
            header.push(format!("im_c_{k}"));
        }
    }
    let rows = (0..s.t.len()).map(|k| {
        let mut row = vec![num(s.t[k])];
        row.extend(s.p_n[k].iter().map(|p| num(*p)));
        if let Some(pc) = &s.p_c {
            row.push(num(pc[k]));
        }
        row.push(num(s.p_tot[k]));
        row.push(num(s.fidelity[k]));
        if let Some(c) = c {
            for z in &c[k] {
                row.push(num(z.re));
                row.push(num(z.im));
            }
        }
        row
    });
    write_csv(path, &header, rows)
}

/// `key: value` lines summarising a run.
pub fn verdict_text(result: &ExperimentResult) -> String {
    let v = &result.verdict;
    let c = &result.conditions;
    let mut lines = vec![
        format!("experiment: {}", result.spec.name),
        format!("n_states: {}", result.spec.config.n_states),
        format!("lattice_size: {}", result.lattice_size),
        format!("degenerate: {}", c.degenerate),
        format!("rwa_ok: {}", c.rwa_ok),
        format!("frozen_ok: {}", c.frozen_ok),
        format!("max_abs_lambda: {:?}", c.max_abs_lambda),
        format!(
            "bound_states: {}",
            result.modes.iter().filter(|m| m.bound_state).count()
        ),
    ];
    for (tag, echo) in [("full", &v.echo_full), ("reduced", &v.echo_reduced)] {
        if let Some(e) = echo {
            lines.push(format!("echo_{tag}_F_at_2T: {:?}", e.f_at_2t));
            lines.push(format!("echo_{tag}_peak: {:?}", e.peak));
            lines.push(format!("echo_{tag}_t_of_peak: {:?}", e.t_of_peak));
        }
    }
    lines.extend([
        format!("secular_growth: {}", v.secular_growth),
        format!("continuum_gain: {:?}", v.continuum_gain),
        format!("frozen_deviation: {:?}", v.frozen_deviation),
        format!("reduced_full_gap: {:?}", v.reduced_full_gap),
        format!("max_hermitian_drift: {:?}", v.max_hermitian_drift),
        format!("max_edge_population: {:?}", v.max_edge_population),
    ]);
    for w in &result.warnings {
        lines.push(format!("warning: {w}"));
    }
    lines.join("\n") + "\n"
}

fn manifest(result: &ExperimentResult, opts: &ExperimentOptions) -> String {
    format!(
        "tool = \"nhflip\"\nversion = \"{}\"\nlattice_size = {}\nlattice_buffer = {}\n\n[experiment]\n{}",
        env!("CARGO_PKG_VERSION"),
        result.lattice_size,
        opts.lattice_buffer,
        to_toml(&result.spec)
            .replace("[[segments]]", "[[experiment.segments]]")
    )
}

/// Writes every artifact of `result` into `dir`, creating it if needed.
///
/// With `amplitudes` set the trajectory CSVs also carry `Re c_n`, `Im c_n`.
pub fn write_run(
    dir: &Path,
    result: &ExperimentResult,
    opts: &ExperimentOptions,
    amplitudes: bool,
) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let full = ObservableSeries::from_trajectory(&result.full)?;
    let reduced = ObservableSeries::from_trajectory(&result.reduced)?;
    let schrodinger = |t: &Trajectory| -> Vec<Vec<Complex64>> {
        (0..t.len()).map(|k| t.schrodinger_amplitudes(k)).collect()
    };
    let (c_full, c_reduced) = if amplitudes {
        (Some(schrodinger(&result.full)), Some(schrodinger(&result.reduced)))
    } else {
        (None, None)
    };
    series_csv(&dir.join("trajectory_full.csv"), &full, c_full.as_deref())?;
    series_csv(&dir.join("trajectory_reduced.csv"), &reduced, c_reduced.as_deref())?;
    write_csv(
        &dir.join("fidelity.csv"),
        &["t".into(), "F_full".into(), "F_reduced".into()],
        (0..full.t.len()).map(|k| vec![num(full.t[k]), num(full.fidelity[k]), num(reduced.fidelity[k])]),
    )?;
    let d = &result.delta.delta;
    let mut header = vec!["n".to_string()];
    for m in 1..=d.ncols() {
        header.push(format!("re_{m}"));
        header.push(format!("im_{m}"));
    }
    write_csv(
        &dir.join("delta.csv"),
        &header,
        (0..d.nrows()).map(|i| {
            let mut row = vec![(i + 1).to_string()];
            for j in 0..d.ncols() {
                row.push(num(d[(i, j)].re));
                row.push(num(d[(i, j)].im));
            }
            row
        }),
    )?;
    write_csv(
        &dir.join("eigenvalues.csv"),
        &["k".into(), "re".into(), "im".into(), "bound_state".into()],
        result.modes.iter().enumerate().map(|(k, m)| {
            vec![
                (k + 1).to_string(),
                num(m.lambda.re),
                num(m.lambda.im),
                m.bound_state.to_string(),
            ]
        }),
    )?;
    write_file(&dir.join("verdict.txt"), &verdict_text(result))?;
    write_file(&dir.join("config.toml"), &to_toml(&result.spec))?;
    write_file(&dir.join("manifest.toml"), &manifest(result, opts))?;

    let labels: Vec<String> = (1..=full.p_n.first().map_or(0, Vec::len))
        .map(|k| format!("P_{k}"))
        .collect();
    let columns = |s: &ObservableSeries| -> Vec<Vec<f64>> {
        (0..labels.len())
            .map(|n| s.p_n.iter().map(|row| row[n]).collect())
            .collect()
    };
    let full_cols = columns(&full);
    let reduced_cols = columns(&reduced);
    let mut series: Vec<Series> = labels
        .iter()
        .zip(&full_cols)
        .map(|(l, v)| Series { label: l.clone(), values: v })
        .collect();
    if let Some(pc) = &full.p_c {
        series.push(Series { label: "P_c".into(), values: pc });
    }
    series.push(Series { label: "P_tot".into(), values: &full.p_tot });
    write_file(
        &dir.join("populations_full.svg"),
        &line_plot(&format!("{}: full model", result.spec.name), "kappa t", &full.t, &series),
    )?;
    let series: Vec<Series> = labels
        .iter()
        .zip(&full_cols)
        .map(|(l, v)| Series { label: format!("{l} full"), values: v })
        .chain(
            labels
                .iter()
                .zip(&reduced_cols)
                .map(|(l, v)| Series { label: format!("{l} reduced"), values: v }),
        )
        .collect();
    write_file(
        &dir.join("populations_compare.svg"),
        &line_plot(&format!("{}: full vs reduced", result.spec.name), "kappa t", &full.t, &series),
    )?;
    write_file(
        &dir.join("fidelity.svg"),
        &line_plot(
            &format!("{}: fidelity", result.spec.name),
            "kappa t",
            &full.t,
            &[
                Series { label: "F full".into(), values: &full.fidelity },
                Series { label: "F reduced".into(), values: &reduced.fidelity },
            ],
        ),
    )?;
    Ok(())
}
