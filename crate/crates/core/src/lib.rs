//! Discrete quantum states side-coupled to a tight-binding continuum, and
//! time reversal of their decay by flipping the coupling from `f = 1` to
//! `f = i`.
//!
//! Two simulators share one configuration type:
//!
//! * [`lattice::integrate_full`] integrates the discrete states together with
//!   a truncated lattice.
//! * [`effective::integrate_reduced`] integrates the markovian reduced model
//!   driven by the coupling matrix `Delta`, which can be obtained in closed
//!   form ([`effective::delta_analytic_lattice`]) or by quadrature from a
//!   spectral correlation ([`effective::delta_pv_quadrature`],
//!   [`effective::delta_from_kernel`]).
//!
//! [`observables`] turns trajectories into populations, fidelities and
//! verdicts; [`experiment`] bundles the whole pipeline.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config_file;
pub mod effective;
pub mod eigen;
pub mod error;
pub mod experiment;
pub mod lattice;
pub mod model;
pub mod observables;
pub mod ode;
pub mod quadrature;
pub mod spectral;
pub mod trajectory;

pub use error::{Error, Result};
pub use model::{
    Coupling, CouplingSchedule, InitialExcitation, Segment, SystemConfig, ValidatedConfig,
};
pub use num_complex::Complex64;
pub use trajectory::{ModelKind, Trajectory, TrajectoryMeta};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/model.md")]
mod book_model {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/full-model.md")]
mod book_full_model {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/reduced-model.md")]
mod book_reduced_model {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/observables.md")]
mod book_observables {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
