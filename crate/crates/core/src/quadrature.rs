//! Quadrature for vector-valued complex integrands.
//!
//! [`Adaptive`] is a globally adaptive 7/15-point Gauss-Kronrod scheme. The
//! `*_cosine` entry points substitute `x = c - h cos(theta)` first, which
//! turns inverse square-root endpoint singularities (band edges of a 1D
//! tight-binding density of states) into smooth integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod abscissae (1, 3, 5, 7).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Piece {
    a: f64,
    b: f64,
    value: Vec<Complex64>,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss-Kronrod integration.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            max_intervals: 20_000,
        }
    }
}

impl Adaptive {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    fn kronrod<F>(&self, f: &mut F, a: f64, b: f64, dim: usize, buf: &mut [Complex64]) -> Piece
    where
        F: FnMut(f64, &mut [Complex64]),
    {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut kron = vec![Complex64::new(0.0, 0.0); dim];
        let mut gauss = vec![Complex64::new(0.0, 0.0); dim];
        f(center, buf);
        for d in 0..dim {
            kron[d] = buf[d] * WGK[7];
            gauss[d] = buf[d] * WG[3];
        }
        for j in 0..7 {
            let dx = half * XGK[j];
            for x in [center - dx, center + dx] {
                f(x, buf);
                for d in 0..dim {
                    kron[d] += buf[d] * WGK[j];
                    if j % 2 == 1 {
                        gauss[d] += buf[d] * WG[j / 2];
                    }
                }
            }
        }
        let mut error = 0.0_f64;
        for d in 0..dim {
            kron[d] *= half;
            gauss[d] *= half;
            error = error.max((kron[d] - gauss[d]).norm());
        }
        Piece {
            a,
            b,
            value: kron,
            error,
        }
    }

    /// `int_a^b f(x) dx` where `f(x, out)` fills `dim` components.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64, dim: usize) -> Result<Vec<Complex64>>
    where
        F: FnMut(f64, &mut [Complex64]),
    {
        let mut buf = vec![Complex64::new(0.0, 0.0); dim];
        if a == b {
            return Ok(buf);
        }
        let first = self.kronrod(&mut f, a, b, dim, &mut buf);
        let mut total = first.value.clone();
        let mut total_err = first.error;
        let mut heap = BinaryHeap::new();
        heap.push(first);
        let mut count = 1;
        loop {
            if !total_err.is_finite() || total.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::QuadratureNonConvergence(format!(
                    "non-finite integrand on [{a}, {b}]"
                )));
            }
            let magnitude = total.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
            if total_err <= self.abs_tol.max(self.rel_tol * magnitude) {
                return Ok(total);
            }
            if count >= self.max_intervals {
                return Err(Error::QuadratureNonConvergence(format!(
                    "error estimate {total_err:.3e} after {count} subintervals on [{a}, {b}]"
                )));
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                return Err(Error::QuadratureNonConvergence(format!(
                    "interval [{}, {}] cannot be bisected further",
                    worst.a, worst.b
                )));
            }
            let left = self.kronrod(&mut f, worst.a, mid, dim, &mut buf);
            let right = self.kronrod(&mut f, mid, worst.b, dim, &mut buf);
            for d in 0..dim {
                total[d] += left.value[d] + right.value[d] - worst.value[d];
            }
            total_err += left.error + right.error - worst.error;
            // Guard against the running sum drifting below the true error.
            if total_err < 0.0 {
                total_err = heap.iter().map(|p| p.error).sum::<f64>() + left.error + right.error;
            }
            heap.push(left);
            heap.push(right);
            count += 1;
        }
    }

    /// As [`Adaptive::integrate`] after `x = (a+b)/2 - (b-a)/2 cos(theta)`.
    pub fn integrate_cosine<F>(&self, mut f: F, a: f64, b: f64, dim: usize) -> Result<Vec<Complex64>>
    where
        F: FnMut(f64, &mut [Complex64]),
    {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.integrate(
            |theta, out| {
                let (s, c) = theta.sin_cos();
                f(center - half * c, out);
                let jac = half * s;
                for z in out.iter_mut() {
                    *z *= jac;
                }
            },
            0.0,
            PI,
            dim,
        )
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
