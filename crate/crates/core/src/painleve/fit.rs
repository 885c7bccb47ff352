//! Least-squares projection of MB data onto the one-parameter family
//! through `y = 0`. In the Painlevé region the leading-order fields are
//!
//! ```text
//! q = -(9 / (2√t)) g(y),   p = -(9√3 / (2√t)) f(y)
//! ```
//!
//! with `(f, g)` solving the reduced system, so fitting `(f(0), g(0))` to
//! both fields gives a transcendent that satisfies the equation to
//! integrator accuracy, unlike the raw pointwise inversion.

use crate::spectral::{FieldState, System};

use super::extract::MIN_EXTRACTION_TIME;
use super::reduction::{integrate_reduced, ReducedSolution};
use super::{PainleveError, PainleveSolution};

const S3: f64 = 1.732_050_807_568_877_2;
const FIT_TOL: f64 = 1e-10;
const MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedFit {
    pub y0: f64,
    pub f0: f64,
    pub g0: f64,
    /// Root-mean-square misfit in field units over the window.
    pub rms: f64,
    pub iterations: usize,
    /// The fitted transcendent on a uniform grid covering the window.
    pub solution: PainleveSolution,
}

struct Window {
    y: Vec<f64>,
    p: Vec<f64>,
    q: Vec<f64>,
    scale: f64,
}

impl Window {
    fn residuals(&self, f0: f64, g0: f64) -> Option<Vec<f64>> {
        let red = integrate_reduced(0.0, f0, g0, &self.y, FIT_TOL).ok()?;
        let mut r = Vec::with_capacity(2 * self.y.len());
        for i in 0..self.y.len() {
            r.push(-S3 * self.scale * red.f[i] - self.p[i]);
            r.push(-self.scale * red.g[i] - self.q[i]);
        }
        Some(r)
    }
}

fn cost(r: &Option<Vec<f64>>) -> f64 {
    r.as_ref()
        .map(|r| r.iter().map(|v| v * v).sum())
        .unwrap_or(f64::INFINITY)
}

/// Fits `(f(0), g(0))` to the fields on `|y| <= y_max` by Levenberg–Marquardt
/// and returns the fitted solution on a grid of spacing `1/400` that
/// covers the window without hitting `y = 0` exactly.
pub fn project_onto_piv(mb_state: &FieldState, y_max: f64) -> Result<ProjectedFit, PainleveError> {
    mb_state
        .require(System::Mb)
        .map_err(|e| PainleveError::InvalidInput(e.to_string()))?;
    let t = mb_state.t();
    if !(t >= MIN_EXTRACTION_TIME) {
        return Err(PainleveError::InvalidInput(format!(
            "projection needs t >= {MIN_EXTRACTION_TIME}, got t={t}"
        )));
    }
    if !(y_max > 0.0 && y_max.is_finite()) {
        return Err(PainleveError::InvalidInput(format!(
            "y_max must be positive and finite, got {y_max}"
        )));
    }
    let grid = mb_state.grid();
    let st = t.sqrt();
    let mut rows: Vec<(f64, f64, f64)> = (0..grid.len())
        .filter_map(|j| {
            let y = -S3 * grid.x(j) / (2.0 * st);
            (y.abs() <= y_max).then(|| (y, mb_state.field_a()[j], mb_state.field_b()[j]))
        })
        .collect();
    if rows.len() < 5 {
        return Err(PainleveError::WindowEmpty { y_max });
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let win = Window {
        y: rows.iter().map(|r| r.0).collect(),
        p: rows.iter().map(|r| r.1).collect(),
        q: rows.iter().map(|r| r.2).collect(),
        scale: 9.0 / (2.0 * st),
    };

    // Start from the data at the node closest to y = 0.
    let i0 = (0..win.y.len())
        .min_by(|&a, &b| win.y[a].abs().total_cmp(&win.y[b].abs()))
        .unwrap_or(0);
    let mut x = [
        -win.p[i0] / (S3 * win.scale),
        -win.q[i0] / win.scale,
    ];
    let mut r = win.residuals(x[0], x[1]);
    if r.is_none() {
        x = [0.0, 0.0];
        r = win.residuals(0.0, 0.0);
    }
    let mut c = cost(&r);
    if !c.is_finite() {
        return Err(PainleveError::InvalidInput(
            "no admissible starting point for the projection".into(),
        ));
    }
    let mut lambda = 1e-3;
    let mut iterations = 0;
    while iterations < MAX_ITER {
        iterations += 1;
        let base = r.as_ref().expect("current residual is finite");
        let mut jac = [Vec::new(), Vec::new()];
        for k in 0..2 {
            let h = 1e-7 * x[k].abs().max(1e-2);
            let mut xp = x;
            xp[k] += h;
            let rp = win
                .residuals(xp[0], xp[1])
                .ok_or(PainleveError::Pole { y: 0.0 })?;
            jac[k] = rp.iter().zip(base).map(|(a, b)| (a - b) / h).collect();
        }
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
        let a00 = dot(&jac[0], &jac[0]);
        let a01 = dot(&jac[0], &jac[1]);
        let a11 = dot(&jac[1], &jac[1]);
        let g0 = dot(&jac[0], base);
        let g1 = dot(&jac[1], base);

        let mut improved = false;
        for _ in 0..30 {
            let m00 = a00 * (1.0 + lambda);
            let m11 = a11 * (1.0 + lambda);
            let det = m00 * m11 - a01 * a01;
            if !(det.abs() > 0.0) {
                lambda *= 10.0;
                continue;
            }
            let d0 = -(m11 * g0 - a01 * g1) / det;
            let d1 = -(m00 * g1 - a01 * g0) / det;
            let trial = [x[0] + d0, x[1] + d1];
            let rt = win.residuals(trial[0], trial[1]);
            let ct = cost(&rt);
            if ct < c {
                let small = (d0.abs() + d1.abs()) <= 1e-13 * (1.0 + x[0].abs() + x[1].abs());
                let flat = c - ct <= 1e-14 * c;
                x = trial;
                r = rt;
                c = ct;
                lambda = (lambda / 3.0).max(1e-12);
                improved = !(small || flat);
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }

    // Output grid: spacing 1/400, offset by half a step so y = 0 is not a node.
    let h = 1.0 / 400.0;
    let m = ((y_max / h).ceil() as i64) + 2;
    let out_grid: Vec<f64> = (-m..m).map(|i| (i as f64 + 0.5) * h).collect();
    let red: ReducedSolution = integrate_reduced(0.0, x[0], x[1], &out_grid, FIT_TOL)?;
    Ok(ProjectedFit {
        y0: 0.0,
        f0: x[0],
        g0: x[1],
        rms: (c / (2 * win.y.len()) as f64).sqrt(),
        iterations,
        solution: red.to_painleve()?,
    })
}
