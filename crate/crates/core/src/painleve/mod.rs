//! Painlevé IV:
//!
//! ```text
//! P'' = (P'^2 - β^2) / (2P) + 3/2 P^3 + 4y P^2 + (2y^2 - 4α + β) P
//! ```
//!
//! For `α = -1/6`, `β = -2/3` the line `P = -2y/3` is an exact solution and
//! the equation is equivalent to the first-order reduction for
//! `φ = f + i g` handled in [`reduction`].

mod csv;
mod extract;
mod fit;
mod ivp;
pub mod reduction;
mod seed;

use thiserror::Error;

use crate::numeric::{fornberg_weights, lagrange4, stencil4};

pub use csv::{read_painleve_csv, write_painleve_csv, PainleveCsvError};
pub use extract::extract_from_simulation;
pub use fit::{project_onto_piv, ProjectedFit};
pub use ivp::{integrate_ivp, integrate_ivp_dense, POLE_THRESHOLD, ZERO_THRESHOLD};
pub use reduction::{appendix_reduction_check, integrate_reduced, ReducedSolution};
pub use seed::{
    clarkson_mcleod_from_seed, its_kapaev_derivative, its_kapaev_eval, its_kapaev_phase, IkParams,
    SeededSolution,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PainleveError {
    #[error("pole: P vanished at y={y}")]
    PVanished { y: f64 },
    #[error("pole encountered at y={y}")]
    Pole { y: f64 },
    #[error("tolerance failure at y={y}")]
    ToleranceFailure { y: f64 },
    #[error("window empty: fewer than two grid nodes with |y| <= {y_max}")]
    WindowEmpty { y_max: f64 },
    #[error("degenerate denominator 9*sqrt(3)*g + y at y={y}")]
    DegenerateDenominator { y: f64 },
    #[error("y={y} out of range [{lo}, {hi}]")]
    OutOfRange { y: f64, lo: f64, hi: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Parameters `(α, β)`; the default is `(-1/6, -2/3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivParams {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for PivParams {
    fn default() -> Self {
        Self {
            alpha: -1.0 / 6.0,
            beta: -2.0 / 3.0,
        }
    }
}

impl PivParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// Coefficient `2y^2 - 4α + β` of the linear term.
    pub fn linear_coefficient(&self, y: f64) -> f64 {
        2.0 * y * y - 4.0 * self.alpha + self.beta
    }
}

/// Samples of `P` and `P'` on a strictly increasing `y` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PainleveSolution {
    y: Vec<f64>,
    p: Vec<f64>,
    dp: Vec<f64>,
    params: PivParams,
}

impl PainleveSolution {
    pub fn new(y: Vec<f64>, p: Vec<f64>, dp: Vec<f64>, params: PivParams) -> Result<Self, PainleveError> {
        if y.len() < 2 || p.len() != y.len() || dp.len() != y.len() {
            return Err(PainleveError::InvalidInput(format!(
                "need equal-length arrays with at least 2 samples (y={}, P={}, dP={})",
                y.len(),
                p.len(),
                dp.len()
            )));
        }
        if !y.iter().chain(&p).chain(&dp).all(|v| v.is_finite()) {
            return Err(PainleveError::InvalidInput("non-finite sample".into()));
        }
        if y.windows(2).any(|w| w[1] <= w[0]) {
            return Err(PainleveError::InvalidInput("y must be strictly increasing".into()));
        }
        Ok(Self { y, p, dp, params })
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn dp(&self) -> &[f64] {
        &self.dp
    }

    pub fn params(&self) -> PivParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.y[0], self.y[self.y.len() - 1])
    }

    /// Interpolated `P(y)`.
    pub fn p_at(&self, y: f64) -> Result<f64, PainleveError> {
        let lo = self.stencil(y)?;
        Ok(lagrange4(&self.y, &self.p, lo, y))
    }

    /// Interpolated `P'(y)`.
    pub fn dp_at(&self, y: f64) -> Result<f64, PainleveError> {
        let lo = self.stencil(y)?;
        Ok(lagrange4(&self.y, &self.dp, lo, y))
    }

    /// Interpolated `(P, (P' + 2/3) / P)`. The ratio is formed at the nodes,
    /// where it is a smooth function even across simple zeros of `P`.
    pub fn p_and_ratio_at(&self, y: f64) -> Result<(f64, f64), PainleveError> {
        let lo = self.stencil(y)?;
        let mut ratio = [0.0; 4];
        for (i, r) in ratio.iter_mut().enumerate() {
            let j = lo + i;
            if self.p[j].abs() < 1e-12 {
                return Err(PainleveError::PVanished { y: self.y[j] });
            }
            *r = (self.dp[j] + 2.0 / 3.0) / self.p[j];
        }
        let p = lagrange4(&self.y, &self.p, lo, y);
        let r = lagrange4(&self.y[lo..lo + 4], &ratio, 0, y);
        Ok((p, r))
    }

    fn stencil(&self, y: f64) -> Result<usize, PainleveError> {
        let (lo, hi) = self.range();
        if self.y.len() < 4 {
            return Err(PainleveError::InvalidInput(
                "interpolation needs at least 4 samples".into(),
            ));
        }
        stencil4(&self.y, y).ok_or(PainleveError::OutOfRange { y, lo, hi })
    }

    /// Maximal runs of consecutive samples with `|P| >= min_abs`, keeping
    /// runs of at least `min_len` samples.
    pub fn runs_away_from_zeros(&self, min_abs: f64, min_len: usize) -> Vec<PainleveSolution> {
        let mut out = Vec::new();
        let mut start = None;
        for i in 0..=self.len() {
            let ok = i < self.len() && self.p[i].abs() >= min_abs;
            match (ok, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    if i - s >= min_len.max(2) {
                        out.push(PainleveSolution {
                            y: self.y[s..i].to_vec(),
                            p: self.p[s..i].to_vec(),
                            dp: self.dp[s..i].to_vec(),
                            params: self.params,
                        });
                    }
                    start = None;
                }
                _ => {}
            }
        }
        out
    }
}

/// `P''` from the equation; fails when `|P| < 1e-12`.
pub fn piv_rhs(y: f64, p: f64, dp: f64, params: PivParams) -> Result<f64, PainleveError> {
    if !(p.abs() >= 1e-12) {
        return Err(PainleveError::PVanished { y });
    }
    let b = params.beta;
    // (P'^2 - β^2)/(2P) keeps its accuracy where P' ≈ ±β and P is small.
    Ok((dp - b) * (dp + b) / (2.0 * p)
        + 1.5 * p * p * p
        + 4.0 * y * p * p
        + params.linear_coefficient(y) * p)
}

/// Five-point second derivative of the samples at interior node `i`.
fn fd_second(sol: &PainleveSolution, i: usize) -> f64 {
    let w = fornberg_weights(sol.y[i], &sol.y[i - 2..=i + 2], 2);
    (0..5).map(|j| w[2][j] * sol.p[i - 2 + j]).sum()
}

fn check_interior(sol: &PainleveSolution) -> Result<(), PainleveError> {
    if sol.len() < 5 {
        return Err(PainleveError::InvalidInput(
            "residuals need at least 5 samples".into(),
        ));
    }
    Ok(())
}

/// Max over interior nodes of `|P''_fd - rhs(y, P, P')|`.
pub fn piv_residual(sol: &PainleveSolution) -> Result<f64, PainleveError> {
    check_interior(sol)?;
    let mut worst = 0f64;
    for i in 2..sol.len() - 2 {
        let rhs = piv_rhs(sol.y[i], sol.p[i], sol.dp[i], sol.params)?;
        worst = worst.max((fd_second(sol, i) - rhs).abs());
    }
    Ok(worst)
}

/// Max over interior nodes of the left-hand side of the divided form
///
/// ```text
/// -P''/P + P'^2/(2P^2) + 4yP + 3P^2/2 - 2/(9P^2) + 2y^2 = 0
/// ```
///
/// with `P''` from five-point central differences. For general `(α, β)`
/// the same expression `(rhs - P'')/P` is used.
pub fn model_residual(sol: &PainleveSolution) -> Result<f64, PainleveError> {
    check_interior(sol)?;
    let mut worst = 0f64;
    for i in 2..sol.len() - 2 {
        let (y, p, dp) = (sol.y[i], sol.p[i], sol.dp[i]);
        if !(p.abs() >= 1e-12) {
            return Err(PainleveError::PVanished { y });
        }
        let b = sol.params.beta;
        let lhs = -fd_second(sol, i) / p
            + (dp - b) * (dp + b) / (2.0 * p * p)
            + 4.0 * y * p
            + 1.5 * p * p
            + sol.params.linear_coefficient(y);
        worst = worst.max(lhs.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(ys: Vec<f64>) -> PainleveSolution {
        let p = ys.iter().map(|y| -2.0 * y / 3.0).collect();
        let dp = vec![-2.0 / 3.0; ys.len()];
        PainleveSolution::new(ys, p, dp, PivParams::default()).unwrap()
    }

    #[test]
    fn line_is_exact() {
        for y in [1.0, -5.0, 0.25, 7.5] {
            let v = piv_rhs(y, -2.0 * y / 3.0, -2.0 / 3.0, PivParams::default()).unwrap();
            assert!(v.abs() < 1e-12, "{y}: {v}");
        }
    }

    #[test]
    fn rhs_by_hand() {
        // 3/2 + (0 + 2/3 - 2/3) - (4/9)/2 = 23/18
        let v = piv_rhs(0.0, 1.0, 0.0, PivParams::default()).unwrap();
        assert!((v - 23.0 / 18.0).abs() < 1e-15);
        assert_eq!(
            piv_rhs(0.5, 0.0, 1.0, PivParams::default()),
            Err(PainleveError::PVanished { y: 0.5 })
        );
    }

    #[test]
    fn model_residual_vanishes_on_line() {
        let ys: Vec<f64> = (0..=90).map(|i| -10.0 + 0.1 * i as f64).collect();
        assert!(model_residual(&line(ys)).unwrap() < 1e-10);
    }

    #[test]
    fn model_residual_detects_shift() {
        let ys: Vec<f64> = (0..=90).map(|i| -10.0 + 0.1 * i as f64).collect();
        let p: Vec<f64> = ys.iter().map(|y| -2.0 * y / 3.0 + 0.1).collect();
        let sol = PainleveSolution::new(ys.clone(), p, vec![-2.0 / 3.0; ys.len()], PivParams::default()).unwrap();
        assert!(model_residual(&sol).unwrap() > 1e-3);
    }

    #[test]
    fn constructor_validates() {
        let p = PivParams::default();
        assert!(PainleveSolution::new(vec![0.0], vec![1.0], vec![1.0], p).is_err());
        assert!(PainleveSolution::new(vec![0.0, 0.0], vec![1.0; 2], vec![1.0; 2], p).is_err());
        assert!(PainleveSolution::new(vec![0.0, 1.0], vec![f64::NAN, 1.0], vec![1.0; 2], p).is_err());
    }

    #[test]
    fn ratio_interpolation_across_a_simple_zero() {
        // Samples avoid y = 0 where the line vanishes; the ratio is 0 everywhere.
        let ys: Vec<f64> = (0..20).map(|i| -1.0 + 0.1 * i as f64 + 0.05).collect();
        let sol = line(ys);
        let (p, r) = sol.p_and_ratio_at(0.0).unwrap();
        assert!(p.abs() < 1e-15);
        assert!(r.abs() < 1e-15);
        assert!(matches!(sol.p_and_ratio_at(5.0), Err(PainleveError::OutOfRange { .. })));
    }

    #[test]
    fn runs_split_at_zeros() {
        let ys: Vec<f64> = (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect();
        let runs = line(ys).runs_away_from_zeros(0.05, 5);
        assert_eq!(runs.len(), 2);
        assert!(runs.iter().all(|r| r.p().iter().all(|p| p.abs() >= 0.05)));
    }
}
