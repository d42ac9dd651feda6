//! Eigenvalues of small dense complex matrices: Householder reduction to
//! upper Hessenberg form followed by single-shift QR iteration with
//! Wilkinson shifts and deflation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Iteration budget per eigenvalue.
const ITERS_PER_EIGENVALUE: usize = 60;

/// Reduce `a` (row-major `n x n`) to upper Hessenberg form in place by a
/// unitary similarity.
fn hessenberg(a: &mut [Complex64], n: usize) {
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let vnorm: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for i in k + 1..n {
            v[i] /= vnorm;
        }
        // A <- (I - 2 v v^H) A
        for j in k..n {
            let dot: Complex64 = (k + 1..n).map(|i| v[i].conj() * a[i * n + j]).sum();
            for i in k + 1..n {
                a[i * n + j] -= v[i] * dot * 2.0;
            }
        }
        // A <- A (I - 2 v v^H)
        for i in 0..n {
            let dot: Complex64 = (k + 1..n).map(|j| a[i * n + j] * v[j]).sum();
            for j in k + 1..n {
                a[i * n + j] -= dot * v[j].conj() * 2.0;
            }
        }
        for i in k + 2..n {
            a[i * n + k] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Complex Givens rotation `[[c, s], [-conj(s), c]]` mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let r = ax.hypot(y.norm());
    if r == 0.0 {
        (1.0, Complex64::new(0.0, 0.0))
    } else if ax == 0.0 {
        (0.0, Complex64::new(1.0, 0.0))
    } else {
        (ax / r, (x / ax) * y.conj() / r)
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let mu1 = mean + disc;
    let mu2 = mean - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// All eigenvalues of a square complex matrix, in deflation order.
pub fn eigenvalues(matrix: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "eigenvalues of a non-square matrix");
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h: Vec<Complex64> = (0..n * n).map(|idx| matrix[(idx / n, idx % n)]).collect();
    hessenberg(&mut h, n);
    let h_norm = h.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();

    let mut out = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let budget = ITERS_PER_EIGENVALUE * n;
    let mut rot = Vec::with_capacity(n);
    loop {
        if hi == 0 {
            out.push(h[0]);
            break;
        }
        // Find the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo * n + lo - 1].norm();
            let mut scale = h[(lo - 1) * n + lo - 1].norm() + h[lo * n + lo].norm();
            if scale == 0.0 {
                scale = h_norm;
            }
            if sub <= f64::EPSILON * scale || sub < f64::MIN_POSITIVE {
                h[lo * n + lo - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out.push(h[hi * n + hi]);
            hi -= 1;
            iter = 0;
            continue;
        }
        total += 1;
        iter += 1;
        if total > budget {
            return Err(Error::QRNonConvergence(total));
        }
        let mu = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[hi * n + hi] + h[hi * n + hi - 1].norm() * Complex64::new(0.75, 0.4375)
        } else {
            wilkinson_shift(
                h[(hi - 1) * n + hi - 1],
                h[(hi - 1) * n + hi],
                h[hi * n + hi - 1],
                h[hi * n + hi],
            )
        };
        for k in lo..=hi {
            h[k * n + k] -= mu;
        }
        rot.clear();
        for k in lo..hi {
            let (c, s) = givens(h[k * n + k], h[(k + 1) * n + k]);
            for j in k..=hi {
                let u = h[k * n + j];
                let v = h[(k + 1) * n + j];
                h[k * n + j] = u * c + s * v;
                h[(k + 1) * n + j] = -s.conj() * u + v * c;
            }
            rot.push((c, s));
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = lo + idx;
            for i in lo..=(k + 2).min(hi) {
                let p = h[i * n + k];
                let q = h[i * n + k + 1];
                h[i * n + k] = p * c + q * s.conj();
                h[i * n + k + 1] = -p * s + q * c;
            }
        }
        for k in lo..=hi {
            h[k * n + k] += mu;
        }
    }
    Ok(out)
}
