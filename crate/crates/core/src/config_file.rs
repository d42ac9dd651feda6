//! TOML experiment files.
//!
//! ```toml
//! name = "fig2"
//! omega = [0.0, 0.0, 0.0]
//! kappa_n = [0.0375, 0.025, 0.05]
//! alpha_n = [-1, 0, 1]
//! a0 = [[0.5773502691896258, 0.0], [0.0, -0.5773502691896258], [-0.5773502691896258, 0.0]]
//! t_max = 400.0
//!
//! [[segments]]
//! duration = 200.0
//! coupling = "H"
//!
//! [[segments]]
//! duration = 200.0
//! coupling = "NH"
//! ```
//!
//! Optional keys: `n_states` (checked against the vectors), `kappa`
//! (default 1), `dt` (0.01), `sample_stride` (10), `repeat` (false).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::ExperimentSpec;
use crate::model::{CouplingSchedule, InitialExcitation, Segment, SystemConfig};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSpec {
    #[serde(default = "default_name")]
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_states: Option<usize>,
    omega: Vec<f64>,
    kappa_n: Vec<f64>,
    alpha_n: Vec<i64>,
    #[serde(default = "default_kappa")]
    kappa: f64,
    a0: Vec<[f64; 2]>,
    t_max: f64,
    #[serde(default = "default_dt")]
    dt: f64,
    #[serde(default = "default_stride")]
    sample_stride: usize,
    #[serde(default)]
    repeat: bool,
    segments: Vec<Segment>,
}

fn default_name() -> String {
    "custom".into()
}
fn default_kappa() -> f64 {
    1.0
}
fn default_dt() -> f64 {
    0.01
}
fn default_stride() -> usize {
    10
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

/// Parses an experiment file. Errors carry the offending key and its line.
pub fn parse_experiment(text: &str) -> Result<ExperimentSpec> {
    let file: FileSpec = toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        let field = message
            .split('`')
            .nth(1)
            .map(str::to_string)
            .or_else(|| {
                e.span()
                    .map(|s| text[s].trim().split(['=', ' ']).next().unwrap_or("").to_string())
                    .filter(|s| !s.is_empty())
            })
            .unwrap_or_else(|| "document".into());
        let location = e
            .span()
            .map(|s| {
                let (l, c) = line_col(text, s.start);
                format!("line {l}, column {c}: ")
            })
            .unwrap_or_default();
        Error::Parse {
            field,
            message: format!("{location}{message}"),
        }
    })?;
    if let Some(n) = file.n_states {
        if n != file.omega.len() {
            return Err(Error::Parse {
                field: "n_states".into(),
                message: format!("n_states = {n} but omega has {} entries", file.omega.len()),
            });
        }
    }
    let config = SystemConfig::new(file.omega, file.kappa_n, file.alpha_n).with_kappa(file.kappa);
    let schedule = CouplingSchedule::new(file.segments, file.repeat).map_err(|e| Error::Parse {
        field: "segments".into(),
        message: e.to_string(),
    })?;
    let initial = InitialExcitation::new(
        file.a0
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect(),
    );
    Ok(ExperimentSpec {
        name: file.name,
        config,
        schedule,
        initial,
        t_max: file.t_max,
        dt: file.dt,
        sample_stride: file.sample_stride,
    })
}

/// Serialises `spec` in the format read by [`parse_experiment`].
pub fn to_toml(spec: &ExperimentSpec) -> String {
    let file = FileSpec {
        name: spec.name.clone(),
        n_states: Some(spec.config.n_states),
        omega: spec.config.omega.clone(),
        kappa_n: spec.config.kappa_n.clone(),
        alpha_n: spec.config.alpha_n.clone(),
        kappa: spec.config.kappa,
        a0: spec.initial.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        t_max: spec.t_max,
        dt: spec.dt,
        sample_stride: spec.sample_stride,
        repeat: spec.schedule.is_periodic(),
        segments: spec.schedule.segments().to_vec(),
    };
    toml::to_string(&file).expect("experiment specs always serialise")
}
