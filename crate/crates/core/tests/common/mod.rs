#![allow(dead_code)]

use nalgebra::DMatrix;
use nhflip::effective::{integrate_reduced, CouplingMatrix, Provenance};
use nhflip::lattice::{integrate_full, lattice_size_for, FullState, StepOptions, DEFAULT_BUFFER};
use nhflip::observables::echo_report;
use nhflip::{Complex64, CouplingSchedule, InitialExcitation, SystemConfig, Trajectory};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Lattice config with `N` in 1..=3, `kappa_n` in [0.01, 0.1],
/// `omega_n` in (-1.5, 1.5) and distinct sites with `|alpha| <= 3`.
pub fn fuzzed_lattice_config<R: Rng>(rng: &mut R) -> SystemConfig {
    let n = rng.gen_range(1..=3);
    let mut sites: Vec<i64> = (-3..=3).collect();
    sites.shuffle(rng);
    SystemConfig::new(
        (0..n).map(|_| rng.gen_range(-1.499..1.499)).collect(),
        (0..n).map(|_| rng.gen_range(0.01..=0.1)).collect(),
        sites[..n].to_vec(),
    )
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, scale: f64) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| {
        c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
    })
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<Complex64>) -> f64 {
    a.clone().singular_values().max()
}

/// `|det(lambda I - A)|` through an LU factorisation.
pub fn char_poly_at(a: &DMatrix<Complex64>, lambda: Complex64) -> f64 {
    let n = a.nrows();
    let shifted = DMatrix::<Complex64>::identity(n, n) * lambda - a;
    shifted.lu().determinant().norm()
}

/// Largest distance after pairing each element of `a` with its nearest
/// unused element of `b`.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0_f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// `F(2T)` of the reduced model with degenerate frequencies, an arbitrary
/// `Delta` and a flip at `t_flip`.
pub fn degenerate_echo(delta: DMatrix<Complex64>, a0: &[Complex64], t_flip: f64) -> f64 {
    let n = a0.len();
    let delta = CouplingMatrix::new(delta, Provenance::Analytic);
    let schedule = CouplingSchedule::flip(t_flip, t_flip).unwrap();
    let traj = integrate_reduced(
        a0,
        &delta,
        &vec![0.0; n],
        &schedule,
        &StepOptions::new(2.0 * t_flip, 0.01, 100),
    )
    .unwrap();
    echo_report(&traj, t_flip).unwrap().f_at_2t
}

/// Full-model run from the discrete excitation `a0` with an empty lattice
/// of size `lattice_size` (default sizing when `None`).
pub fn run_full(
    config: &SystemConfig,
    schedule: &CouplingSchedule,
    a0: Vec<Complex64>,
    t_max: f64,
    lattice_size: Option<usize>,
) -> Trajectory {
    let cfg = config.validate().unwrap();
    let m = lattice_size.unwrap_or_else(|| lattice_size_for(t_max, &cfg, DEFAULT_BUFFER));
    let init = FullState::empty_continuum(&InitialExcitation::new(a0), m).unwrap();
    integrate_full(&cfg, schedule, &init, &StepOptions::new(t_max, 0.01, 10)).unwrap()
}

pub fn fig2_config() -> SystemConfig {
    SystemConfig::new(vec![0.0; 3], vec![0.0375, 0.025, 0.05], vec![-1, 0, 1])
}

pub fn fig2_initial() -> Vec<Complex64> {
    let s = 3f64.sqrt().recip();
    vec![c(s, 0.0), c(0.0, -s), c(-s, 0.0)]
}
