//! First-order form of the default Painlevé IV equation. With
//!
//! ```text
//! g = -(P + 2y/3) / (6√3),   f = -√3 g' / (2(9√3 g + y)),   φ = f + i g
//! ```
//!
//! the equation becomes `φ' - 9 conj(φ)^2 + (2iy/√3) φ = 0`, i.e.
//!
//! ```text
//! g' = -18 f g - 2y f/√3
//! f' =  9 f^2 - 9 g^2 + 2y g/√3
//! ```
//!
//! which is polynomial, so it integrates straight through zeros of `P`.
//! Back-substitution gives `P = -6√3 g - 2y/3` and `P' = -18 f P - 2/3`.

use num_complex::Complex64;

use crate::numeric::fornberg_weights;
use crate::ode::{self, DenseStep, Flow, OdeError, Tolerances};

use super::ivp::INTERNAL_TOL_FACTOR;
use super::{PainleveError, PainleveSolution, PivParams, POLE_THRESHOLD};

const S3: f64 = 1.732_050_807_568_877_2;

fn rhs(y: f64, s: &[f64; 2]) -> [f64; 2] {
    let (f, g) = (s[0], s[1]);
    [
        9.0 * f * f - 9.0 * g * g + 2.0 * y * g / S3,
        -18.0 * f * g - 2.0 * y * f / S3,
    ]
}

/// `(f, g)` sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSolution {
    pub y: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl ReducedSolution {
    /// `P = -6√3 g - 2y/3`, `P' = -18 f P - 2/3`, with default parameters.
    pub fn to_painleve(&self) -> Result<PainleveSolution, PainleveError> {
        let p: Vec<f64> = self
            .y
            .iter()
            .zip(&self.g)
            .map(|(y, g)| -6.0 * S3 * g - 2.0 * y / 3.0)
            .collect();
        let dp = self
            .f
            .iter()
            .zip(&p)
            .map(|(f, p)| -18.0 * f * p - 2.0 / 3.0)
            .collect();
        PainleveSolution::new(self.y.clone(), p, dp, PivParams::default())
    }

    /// Inverse of [`ReducedSolution::to_painleve`] at one point; needs `P != 0`.
    pub fn fg_from_painleve(y: f64, p: f64, dp: f64) -> Result<(f64, f64), PainleveError> {
        if !(p.abs() >= 1e-12) {
            return Err(PainleveError::PVanished { y });
        }
        Ok((-(dp + 2.0 / 3.0) / (18.0 * p), -(p + 2.0 * y / 3.0) / (6.0 * S3)))
    }
}

fn sweep(
    y0: f64,
    s0: [f64; 2],
    y_end: f64,
    tol: f64,
) -> Result<Vec<DenseStep<2>>, PainleveError> {
    let mut steps = Vec::new();
    let mut pole = None;
    let out = ode::solve(
        |y, s: &[f64; 2]| Ok::<_, PainleveError>(rhs(y, s)),
        y0,
        s0,
        y_end,
        Tolerances::uniform((tol * INTERNAL_TOL_FACTOR).max(1e-14)),
        None,
        |step| {
            let e = step.end();
            if !(e[0].abs() <= POLE_THRESHOLD && e[1].abs() <= POLE_THRESHOLD) {
                pole = Some(step.x1());
                return Flow::Stop;
            }
            steps.push(*step);
            Flow::Continue
        },
    );
    if let Some(y) = pole {
        return Err(PainleveError::Pole { y });
    }
    out.map_err(|e| match e {
        OdeError::Rhs(e) => e,
        OdeError::StepUnderflow { x } | OdeError::TooManySteps { x } => {
            PainleveError::Pole { y: x }
        }
    })?;
    Ok(steps)
}

/// Integrates the `(f, g)` system from `(y0, f0, g0)` and samples it on
/// `grid`, which may extend on both sides of `y0`.
pub fn integrate_reduced(
    y0: f64,
    f0: f64,
    g0: f64,
    grid: &[f64],
    tol: f64,
) -> Result<ReducedSolution, PainleveError> {
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(PainleveError::InvalidInput(format!(
            "tol must lie in [1e-12, 1e-4], got {tol}"
        )));
    }
    if ![y0, f0, g0].iter().all(|v| v.is_finite()) {
        return Err(PainleveError::InvalidInput("non-finite initial data".into()));
    }
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) || !grid[0].is_finite() {
        return Err(PainleveError::InvalidInput(
            "grid must be strictly increasing with at least 2 points".into(),
        ));
    }
    let n = grid.len();
    let mut f = vec![f0; n];
    let mut g = vec![g0; n];
    let split = grid.partition_point(|&v| v < y0);
    let mut fill = |steps: &[DenseStep<2>], idx: &mut dyn Iterator<Item = usize>| {
        let mut k = 0;
        for i in idx {
            let x = grid[i];
            if x == y0 || steps.is_empty() {
                continue;
            }
            while k + 1 < steps.len() && (x - steps[k].x0) * (x - steps[k].x1()) > 0.0 {
                k += 1;
            }
            let v = steps[k].eval(x);
            f[i] = v[0];
            g[i] = v[1];
        }
    };
    if split > 0 {
        let steps = sweep(y0, [f0, g0], grid[0], tol)?;
        fill(&steps, &mut (0..split).rev());
    }
    if split < n {
        let steps = sweep(y0, [f0, g0], grid[n - 1], tol)?;
        fill(&steps, &mut (split..n));
    }
    Ok(ReducedSolution {
        y: grid.to_vec(),
        f,
        g,
    })
}

/// Residuals of the reduction evaluated on the samples of `sol`: `g'` and
/// `f'` come from five-point finite differences and `f` from the defining
/// quotient. Returns the max modulus of the complex `φ` equation and the
/// max of the two real equations, over interior nodes.
pub fn appendix_reduction_check(sol: &PainleveSolution) -> Result<(f64, f64), PainleveError> {
    let n = sol.len();
    if n < 5 {
        return Err(PainleveError::InvalidInput(
            "reduction check needs at least 5 samples".into(),
        ));
    }
    let ys = sol.y();
    let g: Vec<f64> = ys
        .iter()
        .zip(sol.p())
        .map(|(y, p)| -(p + 2.0 * y / 3.0) / (6.0 * S3))
        .collect();
    let dg = d1(ys, &g);
    let mut f = Vec::with_capacity(n);
    for i in 0..n {
        let den = 9.0 * S3 * g[i] + ys[i];
        if den.abs() < 1e-10 {
            return Err(PainleveError::DegenerateDenominator { y: ys[i] });
        }
        f.push(-S3 * dg[i] / (2.0 * den));
    }
    let df = d1(ys, &f);

    let (mut res_phi, mut res_fg) = (0f64, 0f64);
    for i in 2..n - 2 {
        let y = ys[i];
        let phi = Complex64::new(f[i], g[i]);
        let dphi = Complex64::new(df[i], dg[i]);
        let r = dphi - 9.0 * phi.conj() * phi.conj() + Complex64::new(0.0, 2.0 * y / S3) * phi;
        res_phi = res_phi.max(r.norm());
        let r1 = 18.0 * f[i] * g[i] + 2.0 * y * f[i] / S3 + dg[i];
        let r2 = df[i] - 9.0 * f[i] * f[i] + 9.0 * g[i] * g[i] - 2.0 * y * g[i] / S3;
        res_fg = res_fg.max(r1.abs()).max(r2.abs());
    }
    Ok((res_phi, res_fg))
}

fn d1(xs: &[f64], v: &[f64]) -> Vec<f64> {
    let n = xs.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(2).min(n - 5);
            let w = fornberg_weights(xs[i], &xs[lo..lo + 5], 1);
            (0..5).map(|j| w[1][j] * v[lo + j]).sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn zero_branch_is_the_line() {
        let ys = grid(-3.0, 3.0, 61);
        let red = integrate_reduced(0.0, 0.0, 0.0, &ys, 1e-10).unwrap();
        assert!(red.f.iter().chain(&red.g).all(|v| *v == 0.0));
        let sol = red.to_painleve().unwrap();
        for (y, p) in sol.y().iter().zip(sol.p()) {
            assert!((p + 2.0 * y / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn line_has_zero_residuals() {
        let ys = grid(0.5, 4.0, 50);
        let p = ys.iter().map(|y| -2.0 * y / 3.0).collect();
        let sol = PainleveSolution::new(ys.clone(), p, vec![-2.0 / 3.0; 50], PivParams::default())
            .unwrap();
        let (a, b) = appendix_reduction_check(&sol).unwrap();
        assert!(a < 1e-12 && b < 1e-12, "{a} {b}");
    }

    #[test]
    fn round_trip_through_painleve_variables() {
        let (f, g) = ReducedSolution::fg_from_painleve(0.7, 1.3, -0.2).unwrap();
        let p = -6.0 * S3 * g - 2.0 * 0.7 / 3.0;
        assert!((p - 1.3).abs() < 1e-14);
        assert!((-18.0 * f * p - 2.0 / 3.0 + 0.2).abs() < 1e-14);
    }

    #[test]
    fn degenerate_denominator_is_reported() {
        // 9√3 g + y = -3P/2, so the sample P(0) = 0 trips the check.
        let ys = grid(-1.0, 1.0, 11);
        let p: Vec<f64> = ys.iter().map(|y| 0.5 * y).collect();
        let sol = PainleveSolution::new(ys.clone(), p, vec![0.0; 11], PivParams::default()).unwrap();
        assert!(matches!(
            appendix_reduction_check(&sol),
            Err(PainleveError::DegenerateDenominator { .. })
        ));
    }
}
