//! Oscillatory asymptotics as `y → -∞` and solutions seeded from them:
//!
//! ```text
//! P ≈ -2y/3 + 2√2 a cos Θ
//! Θ = y²/√3 - √3 a² ln(2√3 y²) + φ
//! φ = -3π/4 - (2π/3)(α - β) - arg Γ(-i√3 a²) - arg s₋
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::special::arg_gamma;

use super::{integrate_ivp, PainleveError, PainleveSolution, PivParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IkParams {
    pub a: f64,
    pub arg_s: f64,
    pub params: PivParams,
}

impl IkParams {
    pub fn new(a: f64, arg_s: f64, params: PivParams) -> Result<Self, PainleveError> {
        if !(a.is_finite() && a >= 0.0 && arg_s.is_finite()) {
            return Err(PainleveError::InvalidInput(format!(
                "need finite a >= 0 and arg s, got a={a}, arg_s={arg_s}"
            )));
        }
        Ok(Self { a, arg_s, params })
    }

    /// `a² = -ln(1 - |s₋|²) / (2√3 π)`.
    pub fn from_s_minus(s: Complex64, params: PivParams) -> Result<Self, PainleveError> {
        let m2 = s.norm_sqr();
        if !(m2 < 1.0) {
            return Err(PainleveError::InvalidInput(format!(
                "|s-| must be < 1, got {}",
                s.norm()
            )));
        }
        let a2 = -(1.0 - m2).ln() / (2.0 * 3f64.sqrt() * PI);
        Self::new(a2.max(0.0).sqrt(), if m2 == 0.0 { 0.0 } else { s.arg() }, params)
    }

    /// Constant phase `φ`.
    pub fn phi(&self) -> f64 {
        let s3 = 3f64.sqrt();
        let g = if self.a == 0.0 {
            0.0
        } else {
            arg_gamma(Complex64::new(0.0, -s3 * self.a * self.a))
        };
        -0.75 * PI - 2.0 * PI / 3.0 * (self.params.alpha - self.params.beta) - g - self.arg_s
    }
}

/// `Θ(y)` for `y < 0`.
pub fn its_kapaev_phase(y: f64, ik: &IkParams) -> f64 {
    let s3 = 3f64.sqrt();
    y * y / s3 - s3 * ik.a * ik.a * (2.0 * s3 * y * y).ln() + ik.phi()
}

/// Two-term asymptotic value of `P(y)`, `y < 0`.
pub fn its_kapaev_eval(y: f64, ik: &IkParams) -> f64 {
    let line = -2.0 * y / 3.0;
    if ik.a == 0.0 {
        return line;
    }
    line + 2.0 * 2f64.sqrt() * ik.a * its_kapaev_phase(y, ik).cos()
}

/// `d/dy` of [`its_kapaev_eval`].
pub fn its_kapaev_derivative(y: f64, ik: &IkParams) -> f64 {
    if ik.a == 0.0 {
        return -2.0 / 3.0;
    }
    let s3 = 3f64.sqrt();
    let dtheta = 2.0 * y / s3 - 2.0 * s3 * ik.a * ik.a / y;
    -2.0 / 3.0 - 2.0 * 2f64.sqrt() * ik.a * its_kapaev_phase(y, ik).sin() * dtheta
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeededSolution {
    pub solution: PainleveSolution,
    /// `max |P|` over the rightmost 20% of the interval.
    pub decay: f64,
    /// `|P|` at the left end of that window, for comparison.
    pub window_start: f64,
}

impl SeededSolution {
    /// True when `|P|` on the right window stays below its value at the
    /// window start and below the scale of the background line there.
    pub fn decays(&self) -> bool {
        let (lo, hi) = self.solution.range();
        let y_w = hi - 0.2 * (hi - lo);
        self.decay <= self.window_start && self.decay < (2.0 * y_w / 3.0).abs().max(1e-3)
    }
}

/// Seeds at `y_seed` from the asymptotic formula and integrates right.
pub fn clarkson_mcleod_from_seed(
    ik: &IkParams,
    y_seed: f64,
    y_end: f64,
    tol: f64,
) -> Result<SeededSolution, PainleveError> {
    if !(y_seed <= -20.0) {
        return Err(PainleveError::InvalidInput(format!(
            "seed point must satisfy y_seed <= -20, got {y_seed}"
        )));
    }
    if !(y_end > y_seed) {
        return Err(PainleveError::InvalidInput(format!(
            "y_end={y_end} must exceed y_seed={y_seed}"
        )));
    }
    let p0 = its_kapaev_eval(y_seed, ik);
    let dp0 = its_kapaev_derivative(y_seed, ik);
    let solution = integrate_ivp(y_seed, p0, dp0, y_end, tol, ik.params)?;
    let y_w = y_end - 0.2 * (y_end - y_seed);
    let decay = solution
        .y()
        .iter()
        .zip(solution.p())
        .filter(|(y, _)| **y >= y_w)
        .fold(0f64, |m, (_, p)| m.max(p.abs()));
    let window_start = solution.p_at(y_w)?.abs();
    Ok(SeededSolution {
        solution,
        decay,
        window_start,
    })
}
