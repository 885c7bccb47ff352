use std::fmt::Write as _;

use boussinesq_core::painleve::{
    appendix_reduction_check, integrate_ivp_dense, its_kapaev_derivative, its_kapaev_eval,
    model_residual, write_painleve_csv, IkParams, PainleveError, PainleveSolution, PivParams,
};

use super::{num, painleve_error, write_file, Context};
use crate::error::HarnessError;

/// Output grid spacing, also used for the model residual.
pub const STEP: f64 = 0.005;
/// Spacing for the reduction check, which differences twice.
pub const REDUCTION_STEP: f64 = 0.0025;
/// Residuals are reported on `y >= max(y_seed, min(RESIDUAL_FROM, y_end - 10))`.
pub const RESIDUAL_FROM: f64 = -10.0;
/// Samples with `|P|` below this are left out of the residuals.
const MIN_ABS_P: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct PainleveArgs {
    pub a: f64,
    pub arg_s: f64,
    pub y_seed: f64,
    pub y_end: f64,
    pub tol: f64,
    /// Second seed point for the robustness check.
    pub compare_seed: Option<f64>,
}

impl Default for PainleveArgs {
    fn default() -> Self {
        Self {
            a: 0.0,
            arg_s: 0.0,
            y_seed: -40.0,
            y_end: 0.0,
            tol: 1e-10,
            compare_seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PainleveReport {
    pub model_residual: f64,
    pub reduction_phi: f64,
    pub reduction_fg: f64,
    pub runs: usize,
    pub seed_discrepancy: Option<f64>,
}

fn uniform(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round().max(1.0) as usize;
    (0..=n).map(|i| if i == n { hi } else { lo + step * i as f64 }).collect()
}

fn seeded(ik: &IkParams, y_seed: f64, grid: &[f64], tol: f64) -> Result<PainleveSolution, PainleveError> {
    integrate_ivp_dense(
        y_seed,
        its_kapaev_eval(y_seed, ik),
        its_kapaev_derivative(y_seed, ik),
        grid,
        tol,
        ik.params,
    )
}

fn validate(args: &PainleveArgs) -> Result<(), HarnessError> {
    let bad = |m: String| Err(HarnessError::Config(m));
    if !(args.y_seed <= -20.0) {
        return bad(format!("--y-seed must be <= -20, got {}", args.y_seed));
    }
    if !(args.y_end > args.y_seed && args.y_end.is_finite()) {
        return bad(format!("--y-end must exceed --y-seed, got {}", args.y_end));
    }
    if !(args.tol > 0.0 && args.tol < 1e-2) {
        return bad(format!("--tol must lie in (0, 1e-2), got {}", args.tol));
    }
    if let Some(s) = args.compare_seed {
        if !(s <= -20.0) {
            return bad(format!("--compare-seed must be <= -20, got {s}"));
        }
    }
    Ok(())
}

fn residual_start(args: &PainleveArgs) -> f64 {
    args.y_seed.max(RESIDUAL_FROM.min(args.y_end - 10.0))
}

/// Solution on the output grid plus its diagnostics.
pub fn solve(args: &PainleveArgs) -> Result<(PainleveSolution, PainleveReport), HarnessError> {
    validate(args)?;
    let ik = IkParams::new(args.a, args.arg_s, PivParams::default()).map_err(painleve_error)?;
    let grid = uniform(args.y_seed, args.y_end, STEP);
    let sol = seeded(&ik, args.y_seed, &grid, args.tol).map_err(painleve_error)?;

    let from = residual_start(args);
    let i0 = sol.y().partition_point(|&y| y < from);
    let window = PainleveSolution::new(
        sol.y()[i0..].to_vec(),
        sol.p()[i0..].to_vec(),
        sol.dp()[i0..].to_vec(),
        sol.params(),
    )
    .map_err(painleve_error)?;
    let runs = window.runs_away_from_zeros(MIN_ABS_P, 5);
    let mut res = 0f64;
    for run in &runs {
        res = res.max(model_residual(run).map_err(painleve_error)?);
    }
    let fine = seeded(&ik, args.y_seed, &uniform(from, args.y_end, REDUCTION_STEP), args.tol)
        .map_err(painleve_error)?;
    let (mut phi, mut fg) = (0f64, 0f64);
    for run in fine.runs_away_from_zeros(MIN_ABS_P, 5) {
        let (a, b) = appendix_reduction_check(&run).map_err(painleve_error)?;
        phi = phi.max(a);
        fg = fg.max(b);
    }

    let seed_discrepancy = match args.compare_seed {
        None => None,
        Some(other) => {
            let lo = from.max(other);
            let j0 = grid.partition_point(|&y| y < lo);
            let alt = seeded(&ik, other, &grid[j0..], args.tol).map_err(painleve_error)?;
            let d = alt
                .p()
                .iter()
                .zip(&sol.p()[j0..])
                .fold(0f64, |m, (a, b)| m.max((a - b).abs()));
            Some(d)
        }
    };
    Ok((
        sol,
        PainleveReport {
            model_residual: res,
            reduction_phi: phi,
            reduction_fg: fg,
            runs: runs.len(),
            seed_discrepancy,
        },
    ))
}

pub fn report_text(args: &PainleveArgs, r: &PainleveReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "a = {}", num(args.a));
    let _ = writeln!(out, "arg_s = {}", num(args.arg_s));
    let _ = writeln!(out, "y_seed = {}", num(args.y_seed));
    let _ = writeln!(out, "y_end = {}", num(args.y_end));
    let _ = writeln!(out, "tol = {}", num(args.tol));
    let _ = writeln!(out, "residual_window_start = {}", num(residual_start(args)));
    let _ = writeln!(out, "runs = {}", r.runs);
    let _ = writeln!(out, "model_residual = {}", num(r.model_residual));
    let _ = writeln!(out, "reduction_phi = {}", num(r.reduction_phi));
    let _ = writeln!(out, "reduction_fg = {}", num(r.reduction_fg));
    if let (Some(s), Some(d)) = (args.compare_seed, r.seed_discrepancy) {
        let _ = writeln!(out, "compare_seed = {}", num(s));
        let _ = writeln!(out, "seed_discrepancy = {}", num(d));
    }
    out
}

pub fn cmd_painleve(ctx: &Context, args: &PainleveArgs) -> Result<(), HarnessError> {
    let (sol, report) = solve(args)?;
    let dir = ctx.out_dir(None);
    write_file(&dir, "painleve.csv", &write_painleve_csv(&sol))?;
    let text = report_text(args, &report);
    write_file(&dir, "painleve_diagnostics.txt", &text)?;
    ctx.print(text);
    Ok(())
}
