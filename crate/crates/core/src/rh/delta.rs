//! `δ1(k) = exp((1/2πi) ∫_0^∞ ln(1 - |r1(s)|²) / (s - k) ds)` and relatives.
//!
//! The Cauchy integral is split at `S`. On `[0, S]` the first-order
//! Taylor polynomial of the weight at `s0 = clamp(Re k, 0, S)` is removed
//! and integrated in closed form,
//!
//! ```text
//! ∫_0^S ds/(s - k)        = Log(S - k) - Log(-k)
//! ∫_0^S (s - s0)/(s - k)  = S + (k - s0)(Log(S - k) - Log(-k))
//! ```
//!
//! so the quadrature only sees a remainder that stays bounded as `k`
//! approaches the cut. `[S, ∞)` is mapped to a finite interval.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::quad;

use super::{log0, omega, CMatrix3, ReflectionSamples, RhError};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_tol(tol: f64) -> Result<(), RhError> {
    if (1e-12..=1e-6).contains(&tol) {
        Ok(())
    } else {
        Err(RhError::BadTolerance(tol))
    }
}

fn on_cut(k: Complex64) -> bool {
    k.im == 0.0 && k.re >= 0.0
}

fn split_point(k: Complex64) -> f64 {
    (2.0 * k.norm() + 1.0).max(6.0)
}

fn qerr(e: quad::QuadError) -> RhError {
    RhError::Quadrature(e.to_string())
}

/// `∫_0^S g(s)/(s - k) ds` with the local linear part of `g` at `s0`
/// integrated exactly.
fn head<G, D>(k: Complex64, s_split: f64, g: G, dg: D, tol: f64) -> Result<Complex64, RhError>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let s0 = k.re.clamp(0.0, s_split);
    let (g0, d0) = (g(s0), dg(s0));
    let at_node = k == Complex64::new(s0, 0.0);
    let log_ratio = || (s_split - k).ln() - (-k).ln();
    let mut out = Complex64::new(0.0, 0.0);
    if g0 != 0.0 {
        out += g0 * log_ratio();
    }
    if d0 != 0.0 {
        let lin = if at_node {
            Complex64::new(s_split, 0.0)
        } else {
            s_split + (k - s0) * log_ratio()
        };
        out += d0 * lin;
    }
    let rem = quad::integrate(
        |s| {
            let r = g(s) - g0 - d0 * (s - s0);
            Complex64::new(r, 0.0) / (s - k)
        },
        0.0,
        s_split,
        tol,
        tol,
    )
    .map_err(qerr)?;
    Ok(out + rem)
}

fn tail(k: Complex64, s_split: f64, refl: &ReflectionSamples, tol: f64) -> Result<Complex64, RhError> {
    quad::integrate_to_infinity(
        |s| Complex64::new(refl.log_weight(s), 0.0) / (s - k),
        s_split,
        tol,
        tol,
    )
    .map_err(qerr)
}

/// `∫_0^∞ ln(1 - |r1(s)|²)/(s - k) ds`.
fn cauchy_integral(k: Complex64, refl: &ReflectionSamples, tol: f64) -> Result<Complex64, RhError> {
    let s = split_point(k);
    let h = head(k, s, |x| refl.log_weight(x), |x| refl.log_weight_ds(x), tol)?;
    Ok(h + tail(k, s, refl, tol)?)
}

/// `ν = -ln(1 - |r1(0)|²) / (2π)`.
pub fn nu(refl: &ReflectionSamples) -> f64 {
    -refl.log_weight(0.0) / (2.0 * PI)
}

/// Direct evaluation of `δ1(k)`, `k ∉ [0, ∞)`.
pub fn delta1(k: Complex64, refl: &ReflectionSamples, quad_tol: f64) -> Result<Complex64, RhError> {
    check_tol(quad_tol)?;
    if on_cut(k) {
        return Err(RhError::OnBranchCut(k));
    }
    Ok((cauchy_integral(k, refl, quad_tol)? / (2.0 * PI * I)).exp())
}

/// `χ1(k) = -iν log0(k) - (1/2πi) ∫_0^∞ ln(1 - |r1|²)/(s - k) ds`,
/// written as
///
/// ```text
/// χ1(k) = πν - (1/2πi) [ L(0) Log(S - k) + ∫_0^S (L(s) - L(0))/(s - k) ds + ∫_S^∞ L(s)/(s - k) ds ]
/// ```
///
/// which is regular at `k = 0`. Defined for `k ∉ (0, ∞)`.
pub fn chi1(k: Complex64, refl: &ReflectionSamples, quad_tol: f64) -> Result<Complex64, RhError> {
    check_tol(quad_tol)?;
    if k.im == 0.0 && k.re > 0.0 {
        return Err(RhError::OnBranchCut(k));
    }
    let l0 = refl.log_weight(0.0);
    let s = split_point(k);
    let h = head(
        k,
        s,
        |x| refl.log_weight(x) - l0,
        |x| refl.log_weight_ds(x),
        quad_tol,
    )?;
    let total = l0 * (s - k).ln() + h + tail(k, s, refl, quad_tol)?;
    Ok(PI * nu(refl) - total / (2.0 * PI * I))
}

/// `δ1(k) = e^{-iν log0(k)} e^{-χ1(k)}`.
pub fn delta1_split(k: Complex64, refl: &ReflectionSamples, quad_tol: f64) -> Result<Complex64, RhError> {
    if on_cut(k) {
        return Err(RhError::OnBranchCut(k));
    }
    let c = chi1(k, refl, quad_tol)?;
    Ok((-I * nu(refl) * log0(k) - c).exp())
}

/// `Δ(k) = diag(δ1/δ3, δ5/δ1, δ3/δ5)` with `δ3(k) = δ1(ω²k)`, `δ5(k) = δ1(ωk)`.
pub fn delta_matrix(k: Complex64, refl: &ReflectionSamples, quad_tol: f64) -> Result<CMatrix3, RhError> {
    let w = omega();
    let d1 = delta1(k, refl, quad_tol)?;
    let d3 = delta1(w.conj() * k, refl, quad_tol)?;
    let d5 = delta1(w * k, refl, quad_tol)?;
    let mut m = CMatrix3::zeros();
    m[(0, 0)] = d1 / d3;
    m[(1, 1)] = d5 / d1;
    m[(2, 2)] = d3 / d5;
    Ok(m)
}
