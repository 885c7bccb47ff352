//! Adaptive integration of Painlevé IV.
//!
//! Away from zeros of `P` the state is `(P, P')`. Near a zero the form
//! `(P'^2 - β^2)/(2P)` is a ratio of small numbers, so the integrator
//! switches to `(P, W)` with `P' = σβ + P W` (`σ = ±1` picked from the
//! current slope), for which
//!
//! ```text
//! W' = -W^2/2 + 3/2 P^2 + 4yP + (2y^2 - 4α + β)
//! ```
//!
//! is polynomial. A regular zero of a solution has `P' = ±β`, so `W` stays
//! bounded across it; `|W|` or `|P|` exceeding [`POLE_THRESHOLD`] is
//! reported as a pole.

use crate::ode::{self, DenseStep, Flow, OdeError, Tolerances};

use super::{piv_rhs, PainleveError, PainleveSolution, PivParams};

/// `|P|` (or `|W|` in the regular chart) above this is a pole.
pub const POLE_THRESHOLD: f64 = 1e8;
/// `|P|` below this at an accepted step in the direct chart is a pole of the
/// `-β²/(2P)` term.
pub const ZERO_THRESHOLD: f64 = 1e-10;

const ENTER_REGULAR: f64 = 0.1;
const LEAVE_REGULAR: f64 = 0.2;
/// The step controller bounds local error; running it tighter than the
/// requested tolerance keeps the accumulated error near `tol`.
pub(crate) const INTERNAL_TOL_FACTOR: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Chart {
    Direct,
    /// `P' = sb + P W`, with `sb = ±β`.
    Regular { sb: f64 },
}

impl Chart {
    fn pick(p: f64, dp: f64, beta: f64) -> Self {
        if p.abs() < ENTER_REGULAR {
            let sb = if (dp - beta).abs() <= (dp + beta).abs() {
                beta
            } else {
                -beta
            };
            Chart::Regular { sb }
        } else {
            Chart::Direct
        }
    }

    fn encode(self, p: f64, dp: f64) -> [f64; 2] {
        match self {
            Chart::Direct => [p, dp],
            Chart::Regular { sb } => [p, (dp - sb) / p],
        }
    }

    fn decode(self, s: [f64; 2]) -> (f64, f64) {
        match self {
            Chart::Direct => (s[0], s[1]),
            Chart::Regular { sb } => (s[0], sb + s[0] * s[1]),
        }
    }
}

struct Piece {
    chart: Chart,
    step: DenseStep<2>,
}

struct Trajectory {
    nodes: Vec<(f64, f64, f64)>,
    pieces: Vec<Piece>,
}

fn validate(p0: f64, dp0: f64, y0: f64, y_end: f64, tol: f64) -> Result<(), PainleveError> {
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(PainleveError::InvalidInput(format!(
            "tol must lie in [1e-12, 1e-4], got {tol}"
        )));
    }
    if ![p0, dp0, y0, y_end].iter().all(|v| v.is_finite()) {
        return Err(PainleveError::InvalidInput("non-finite initial data".into()));
    }
    if p0 == 0.0 {
        return Err(PainleveError::PVanished { y: y0 });
    }
    Ok(())
}

fn run(
    y0: f64,
    p0: f64,
    dp0: f64,
    y_end: f64,
    tol: f64,
    params: PivParams,
    keep_pieces: bool,
) -> Result<Trajectory, PainleveError> {
    let mut traj = Trajectory {
        nodes: vec![(y0, p0, dp0)],
        pieces: Vec::new(),
    };
    let dir = if y_end >= y0 { 1.0 } else { -1.0 };
    let (mut y, mut p, mut dp) = (y0, p0, dp0);
    let mut h = None;
    let tols = Tolerances::uniform((tol * INTERNAL_TOL_FACTOR).max(1e-14));

    while (y_end - y) * dir > 0.0 {
        let chart = Chart::pick(p, dp, params.beta);
        let mut failure: Option<PainleveError> = None;
        let rhs = |x: f64, s: &[f64; 2]| -> Result<[f64; 2], PainleveError> {
            match chart {
                Chart::Direct => Ok([s[1], piv_rhs(x, s[0], s[1], params)?]),
                Chart::Regular { sb } => {
                    let (p, w) = (s[0], s[1]);
                    Ok([
                        sb + p * w,
                        -0.5 * w * w + 1.5 * p * p + 4.0 * x * p + params.linear_coefficient(x),
                    ])
                }
            }
        };
        let outcome = ode::solve(rhs, y, chart.encode(p, dp), y_end, tols, h, |step| {
            let s = step.end();
            let x = step.x1();
            let (pe, dpe) = chart.decode(s);
            let bad = !(pe.is_finite() && dpe.is_finite())
                || pe.abs() > POLE_THRESHOLD
                || matches!(chart, Chart::Regular { .. }) && s[1].abs() > POLE_THRESHOLD;
            if bad {
                failure = Some(PainleveError::Pole { y: x });
                return Flow::Stop;
            }
            if chart == Chart::Direct && pe.abs() < ZERO_THRESHOLD {
                failure = Some(PainleveError::PVanished { y: x });
                return Flow::Stop;
            }
            traj.nodes.push((x, pe, dpe));
            if keep_pieces {
                traj.pieces.push(Piece { chart, step: *step });
            }
            let switch = match chart {
                Chart::Direct => pe.abs() < ENTER_REGULAR,
                Chart::Regular { .. } => pe.abs() > LEAVE_REGULAR,
            };
            if switch {
                Flow::Stop
            } else {
                Flow::Continue
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let out = outcome.map_err(|e| match e {
            OdeError::Rhs(e) => e,
            OdeError::StepUnderflow { x } | OdeError::TooManySteps { x } => {
                let last = traj.nodes.last().map(|n| n.1.abs()).unwrap_or(0.0);
                if last > 1e4 {
                    PainleveError::Pole { y: x }
                } else {
                    PainleveError::ToleranceFailure { y: x }
                }
            }
        })?;
        let (pe, dpe) = chart.decode(out.y);
        y = out.x;
        p = pe;
        dp = dpe;
        h = Some(out.h);
        if !out.stopped {
            break;
        }
    }
    Ok(traj)
}

/// Integrates from `(y0, P0, P0')` to `y_end`; the samples are the accepted
/// steps, returned in increasing `y`.
pub fn integrate_ivp(
    y0: f64,
    p0: f64,
    dp0: f64,
    y_end: f64,
    tol: f64,
    params: PivParams,
) -> Result<PainleveSolution, PainleveError> {
    validate(p0, dp0, y0, y_end, tol)?;
    let mut nodes = run(y0, p0, dp0, y_end, tol, params, false)?.nodes;
    if y_end < y0 {
        nodes.reverse();
    }
    nodes.dedup_by(|a, b| a.0 == b.0);
    if nodes.len() < 2 {
        return Err(PainleveError::InvalidInput("empty integration interval".into()));
    }
    let y = nodes.iter().map(|n| n.0).collect();
    let p = nodes.iter().map(|n| n.1).collect();
    let dp = nodes.iter().map(|n| n.2).collect();
    PainleveSolution::new(y, p, dp, params)
}

/// Dense output on a strictly increasing `grid`, which may lie on both
/// sides of `y0`.
pub fn integrate_ivp_dense(
    y0: f64,
    p0: f64,
    dp0: f64,
    grid: &[f64],
    tol: f64,
    params: PivParams,
) -> Result<PainleveSolution, PainleveError> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(PainleveError::InvalidInput(
            "grid must be strictly increasing with at least 2 points".into(),
        ));
    }
    validate(p0, dp0, y0, grid[0], tol)?;
    let mut p = vec![0.0; grid.len()];
    let mut dp = vec![0.0; grid.len()];
    let split = grid.partition_point(|&g| g < y0);

    // Left part, walked from y0 downwards.
    if split > 0 {
        let traj = run(y0, p0, dp0, grid[0], tol, params, true)?;
        fill(&traj, grid, (0..split).rev(), &mut p, &mut dp, y0, p0, dp0);
    }
    if split < grid.len() {
        let end = grid[grid.len() - 1];
        let traj = run(y0, p0, dp0, end, tol, params, true)?;
        fill(&traj, grid, split..grid.len(), &mut p, &mut dp, y0, p0, dp0);
    }
    PainleveSolution::new(grid.to_vec(), p, dp, params)
}

#[allow(clippy::too_many_arguments)]
fn fill(
    traj: &Trajectory,
    grid: &[f64],
    order: impl Iterator<Item = usize>,
    p: &mut [f64],
    dp: &mut [f64],
    y0: f64,
    p0: f64,
    dp0: f64,
) {
    let mut k = 0;
    for i in order {
        let g = grid[i];
        if g == y0 || traj.pieces.is_empty() {
            p[i] = p0;
            dp[i] = dp0;
            continue;
        }
        // Pieces are in traversal order; advance until g falls inside.
        while k + 1 < traj.pieces.len() {
            let s = &traj.pieces[k].step;
            let inside = (g - s.x0) * (g - s.x1()) <= 0.0;
            if inside {
                break;
            }
            k += 1;
        }
        let piece = &traj.pieces[k];
        let (pe, dpe) = piece.chart.decode(piece.step.eval(g));
        p[i] = pe;
        dp[i] = dpe;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracks_the_line_through_its_zero() {
        let sol = integrate_ivp(-10.0, 20.0 / 3.0, -2.0 / 3.0, 10.0, 1e-10, PivParams::default())
            .unwrap();
        let (lo, hi) = sol.range();
        assert_eq!((lo, hi), (-10.0, 10.0));
        for ((y, p), dp) in sol.y().iter().zip(sol.p()).zip(sol.dp()) {
            assert!((p + 2.0 * y / 3.0).abs() < 1e-9, "y={y}: P={p}");
            assert!((dp + 2.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn dense_grid_on_both_sides() {
        let grid: Vec<f64> = (0..41).map(|i| -3.0 + 0.15 * i as f64).collect();
        let sol = integrate_ivp_dense(-0.6, 0.4, -2.0 / 3.0, &grid, 1e-11, PivParams::default())
            .unwrap();
        for ((y, p), dp) in sol.y().iter().zip(sol.p()).zip(sol.dp()) {
            assert!((p + 2.0 * y / 3.0).abs() < 1e-9, "y={y}");
            assert!((dp + 2.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_tolerance_and_zero_start() {
        let d = PivParams::default();
        assert!(matches!(
            integrate_ivp(0.0, 1.0, 0.0, 1.0, 1e-2, d),
            Err(PainleveError::InvalidInput(_))
        ));
        assert_eq!(
            integrate_ivp(0.0, 0.0, 0.0, 1.0, 1e-8, d),
            Err(PainleveError::PVanished { y: 0.0 })
        );
    }

    #[test]
    fn singular_approach_is_reported() {
        // Large data blows up in finite y.
        let r = integrate_ivp(0.0, 3.0, 5.0, 5.0, 1e-9, PivParams::default());
        assert!(matches!(r, Err(PainleveError::Pole { .. })), "{r:?}");
    }
}
