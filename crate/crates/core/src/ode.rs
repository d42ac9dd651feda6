//! Fixed-step classical Runge-Kutta stepping and schedule/step bookkeeping.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::CouplingSchedule;

/// Largest admissible `dt * kappa`.
pub const MAX_STEP_KAPPA: f64 = 0.05;

const ALIGN_TOL: f64 = 1e-6;

/// Scratch buffers for the classical fourth-order Runge-Kutta scheme.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    stage: Vec<Complex64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); dim];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            stage: z,
        }
    }

    /// Advance `y` from `t` to `t + dt`. `rhs(t, y, dy)` writes `dy/dt`.
    pub fn step<F>(&mut self, t: f64, dt: f64, y: &mut [Complex64], mut rhs: F)
    where
        F: FnMut(f64, &[Complex64], &mut [Complex64]),
    {
        let half = 0.5 * dt;
        rhs(t, y, &mut self.k1);
        for ((s, y), k) in self.stage.iter_mut().zip(y.iter()).zip(&self.k1) {
            *s = y + k * half;
        }
        rhs(t + half, &self.stage, &mut self.k2);
        for ((s, y), k) in self.stage.iter_mut().zip(y.iter()).zip(&self.k2) {
            *s = y + k * half;
        }
        rhs(t + half, &self.stage, &mut self.k3);
        for ((s, y), k) in self.stage.iter_mut().zip(y.iter()).zip(&self.k3) {
            *s = y + k * dt;
        }
        rhs(t + dt, &self.stage, &mut self.k4);
        let sixth = dt / 6.0;
        for (i, y) in y.iter_mut().enumerate() {
            *y += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * sixth;
        }
    }
}

/// Reject steps with `dt * kappa > MAX_STEP_KAPPA`.
pub fn check_step(dt: f64, kappa: f64) -> Result<()> {
    if !(dt > 0.0) || dt * kappa > MAX_STEP_KAPPA * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge {
            dt,
            max: MAX_STEP_KAPPA,
        });
    }
    Ok(())
}

fn whole_steps(duration: f64, dt: f64) -> Option<usize> {
    let steps = duration / dt;
    let rounded = steps.round();
    ((steps - rounded).abs() <= ALIGN_TOL * rounded.max(1.0)).then_some(rounded as usize)
}

/// Number of steps covering `[0, t_max]`, after checking that `t_max` and
/// every schedule boundary before it fall on the step grid.
pub fn aligned_steps(schedule: &CouplingSchedule, t_max: f64, dt: f64) -> Result<usize> {
    if !(t_max > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    if let Some(total) = schedule.total_duration() {
        if t_max > total * (1.0 + 1e-12) {
            return Err(Error::TimeBeyondSchedule { t: t_max, total });
        }
    }
    for boundary in schedule.boundaries(t_max) {
        if whole_steps(boundary, dt).is_none() {
            return Err(Error::ScheduleMisaligned { boundary, dt });
        }
    }
    whole_steps(t_max, dt).ok_or(Error::ScheduleMisaligned { boundary: t_max, dt })
}
