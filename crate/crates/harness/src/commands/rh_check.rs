use std::fmt::Write as _;

use boussinesq_core::rh::{
    build_jump, delta1, model_jumps, ray_direction, symmetry_check, v4_factors, CMatrix3,
    ModelJumpData, ReflectionSamples, RhError,
};
use num_complex::Complex64;

use super::{num, write_file, Context};
use crate::error::HarnessError;

const X: f64 = 0.7;
const T: f64 = 1.3;
const QUAD_TOL: f64 = 1e-11;
/// Distance from the cut for the Plemelj ratio.
const EPS: f64 = 1e-7;

pub const TOL_DET: f64 = 1e-12;
pub const TOL_SPLIT: f64 = 1e-14;
pub const TOL_PLEMELJ: f64 = 1e-6;
pub const TOL_SYMMETRY: f64 = 1e-12;
pub const TOL_CLOSURE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct RhCheckArgs {
    pub preset: String,
    pub amplitude: f64,
    pub samples: usize,
}

impl Default for RhCheckArgs {
    fn default() -> Self {
        Self {
            preset: "gaussian".into(),
            amplitude: 0.5,
            samples: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub defect: f64,
    pub tol: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.defect <= self.tol
    }
}

fn max_abs(m: &CMatrix3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn rh(e: RhError) -> HarnessError {
    HarnessError::SuiteFailure(e.to_string())
}

/// `samples` points in `(0, hi]`.
fn radii(samples: usize, hi: f64) -> impl Iterator<Item = f64> {
    (1..=samples).map(move |j| hi * j as f64 / samples as f64)
}

/// Spectral points in `|λ| <= 0.5`; the jumps grow like `exp(6.75 |λ|²)`,
/// so absolute defects further out measure roundoff.
fn lambdas(samples: usize) -> impl Iterator<Item = Complex64> {
    (0..samples).map(move |j| {
        let s = j as f64 / samples as f64;
        Complex64::from_polar(0.1 + 0.4 * s, 0.7 + 5.0 * s)
    })
}

fn model_data(refl: &ReflectionSamples) -> Result<ModelJumpData, HarnessError> {
    ModelJumpData::constrained(refl.r1(0.0)).map_err(rh)
}

fn unimodularity(refl: &ReflectionSamples, samples: usize) -> Result<f64, HarnessError> {
    let mut worst = 0f64;
    for ray in 1..=6 {
        for r in std::iter::once(0.0).chain(radii(samples, 3.0)) {
            let v = build_jump(ray, X, T, r * ray_direction(ray), refl).map_err(rh)?;
            worst = worst.max((v.determinant() - 1.0).norm());
        }
    }
    let data = model_data(refl)?;
    for lambda in lambdas(samples) {
        for m in model_jumps(&data, 0.4, lambda).map_err(rh)? {
            worst = worst.max((m.determinant() - 1.0).norm());
        }
    }
    Ok(worst)
}

fn plemelj(refl: &ReflectionSamples, samples: usize) -> Result<f64, HarnessError> {
    let mut worst = 0f64;
    for s in radii(samples, 2.5) {
        let up = delta1(Complex64::new(s, EPS), refl, QUAD_TOL).map_err(rh)?;
        let dn = delta1(Complex64::new(s, -EPS), refl, QUAD_TOL).map_err(rh)?;
        worst = worst.max((up / dn - (1.0 - refl.r1(s).norm_sqr())).norm());
    }
    Ok(worst)
}

/// `v4 = U R L` with analytic parts `a = θ r2(k)`, `θ ∈ {0, 1/2, 1}`.
fn factorization(refl: &ReflectionSamples, samples: usize) -> Result<f64, HarnessError> {
    let mut worst = 0f64;
    for r in radii(samples, 3.0) {
        let k = Complex64::new(-r, 0.0);
        let v4 = build_jump(4, X, T, k, refl).map_err(rh)?;
        for theta in [0.0, 0.5, 1.0] {
            let f = v4_factors(X, T, k, refl.r2(-r) * theta, refl).map_err(rh)?;
            worst = worst.max(max_abs(&(f.product() - v4)));
        }
    }
    Ok(worst)
}

fn symmetry(refl: &ReflectionSamples, samples: usize) -> Result<f64, HarnessError> {
    let data = model_data(refl)?;
    Ok(lambdas(samples).fold(0f64, |m, l| m.max(symmetry_check(&data, 0.4, l).max())))
}

/// Constraint, jump relations and the hexagon product at `λ = 0`.
fn closure(refl: &ReflectionSamples) -> Result<f64, HarnessError> {
    let data = model_data(refl)?;
    let (r1, r2) = data.relations();
    let mj = model_jumps(&data, 0.4, Complex64::new(0.0, 0.0)).map_err(rh)?;
    let hex = mj[..6].iter().fold(CMatrix3::identity(), |a, m| a * m) - CMatrix3::identity();
    Ok(data.constraint_residual().max(r1).max(r2).max(max_abs(&hex)))
}

pub fn run_suites(args: &RhCheckArgs) -> Result<Vec<SuiteResult>, HarnessError> {
    if !(args.amplitude.abs() < 1.0) {
        return Err(HarnessError::Config(format!(
            "--amplitude must satisfy |A| < 1, got {}",
            args.amplitude
        )));
    }
    if args.samples == 0 || args.samples > 10_000 {
        return Err(HarnessError::Config(format!(
            "--samples must lie in 1..=10000, got {}",
            args.samples
        )));
    }
    let refl = ReflectionSamples::preset(&args.preset, args.amplitude)
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let n = args.samples;
    Ok(vec![
        SuiteResult { name: "unimodularity", defect: unimodularity(&refl, n)?, tol: TOL_DET },
        SuiteResult { name: "plemelj", defect: plemelj(&refl, n)?, tol: TOL_PLEMELJ },
        SuiteResult { name: "factorization", defect: factorization(&refl, n)?, tol: TOL_SPLIT },
        SuiteResult { name: "symmetry", defect: symmetry(&refl, n)?, tol: TOL_SYMMETRY },
        SuiteResult { name: "closure", defect: closure(&refl)?, tol: TOL_CLOSURE },
    ])
}

pub fn table(results: &[SuiteResult]) -> String {
    let mut out = String::from("suite,defect,tolerance,status\n");
    for r in results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{},{},{},{status}", r.name, num(r.defect), num(r.tol));
    }
    out
}

pub fn cmd_rh_check(ctx: &Context, args: &RhCheckArgs) -> Result<(), HarnessError> {
    let results = run_suites(args)?;
    let text = table(&results);
    write_file(&ctx.out_dir(None), "rh_check.csv", &text)?;
    ctx.print(&text);
    let failed: Vec<_> = results.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::SuiteFailure(failed.join(", ")))
    }
}
