//! Algebraic and quadrature pieces of the 3×3 Riemann–Hilbert problems
//! for the MB equation: phase functions, jump matrices on the six rays,
//! the `δ` functions and the Painlevé IV model jumps.

mod delta;
mod jumps;
mod model;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix3;
use num_complex::Complex64;
use thiserror::Error;

pub use delta::{chi1, delta1, delta1_split, delta_matrix, nu};
pub use jumps::{build_jump, ray_direction, v4_factors, V4Factors};
pub use model::{model_jumps, model_jumps_unchecked, symmetry_check, ModelJumpData, SymmetryDefects};

pub type CMatrix3 = Matrix3<Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RhError {
    #[error("argument off ray {ray}: k={k}")]
    OffRay { ray: usize, k: Complex64 },
    #[error("ray index must be in 1..=6, got {0}")]
    BadRay(usize),
    #[error("k on branch cut: k={0}")]
    OnBranchCut(Complex64),
    #[error("quadrature tolerance must lie in [1e-12, 1e-6], got {0}")]
    BadTolerance(f64),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("constraint violated: residual {0:e}")]
    ConstraintViolated(f64),
    #[error("invalid reflection data: {0}")]
    InvalidReflection(String),
}

/// `ω = e^{2πi/3}`.
pub fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0)
}

fn omega_pow(n: u32) -> Complex64 {
    match n % 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => omega(),
        _ => omega().conj(),
    }
}

/// Index pair `(i, j)` of a phase function, one of `(2,1)`, `(3,1)`, `(3,2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseId {
    i: u32,
    j: u32,
}

impl PhaseId {
    pub const P21: PhaseId = PhaseId { i: 2, j: 1 };
    pub const P31: PhaseId = PhaseId { i: 3, j: 1 };
    pub const P32: PhaseId = PhaseId { i: 3, j: 2 };

    pub fn new(i: u32, j: u32) -> Option<Self> {
        matches!((i, j), (2, 1) | (3, 1) | (3, 2)).then_some(Self { i, j })
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    fn coefficients(&self) -> (Complex64, Complex64) {
        (
            omega_pow(self.i) - omega_pow(self.j),
            omega_pow(2 * self.i) - omega_pow(2 * self.j),
        )
    }
}

impl fmt::Display for PhaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.i, self.j)
    }
}

/// `Φ_ij(ζ, k) = (ω^i - ω^j) k ζ + (ω^{2i} - ω^{2j}) k²`.
pub fn phase(id: PhaseId, zeta: f64, k: Complex64) -> Complex64 {
    let (a, b) = id.coefficients();
    a * k * zeta + b * k * k
}

/// `dΦ_ij/dk`.
pub fn phase_dk(id: PhaseId, zeta: f64, k: Complex64) -> Complex64 {
    let (a, b) = id.coefficients();
    a * zeta + 2.0 * b * k
}

/// Stationary point `-ζ / (2(ω^i + ω^j))` of `Φ_ij(ζ, ·)`.
pub fn saddle_point(id: PhaseId, zeta: f64) -> Complex64 {
    -zeta / (2.0 * (omega_pow(id.i) + omega_pow(id.j)))
}

/// `ϑ_ij(x, t; k) = (ω^i - ω^j) k x + (ω^{2i} - ω^{2j}) k² t`.
pub fn vartheta(id: PhaseId, x: f64, t: f64, k: Complex64) -> Complex64 {
    let (a, b) = id.coefficients();
    a * k * x + b * k * k * t
}

/// Logarithm with `arg` in `[0, 2π)`.
pub fn log0(k: Complex64) -> Complex64 {
    let mut arg = k.im.atan2(k.re);
    if arg < 0.0 {
        arg += 2.0 * PI;
    }
    Complex64::new(k.norm().ln(), arg)
}

pub type RealFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Reflection coefficients: `r1` on `[0, ∞)`, `r2` on `(-∞, 0]`, and
/// optionally `r1'` (otherwise a central difference is used).
#[derive(Clone)]
pub struct ReflectionSamples {
    r1: RealFn,
    r2: RealFn,
    dr1: Option<RealFn>,
    name: String,
}

impl fmt::Debug for ReflectionSamples {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReflectionSamples")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

const BUMP_WIDTH: f64 = 2.0;

fn bump(s: f64) -> f64 {
    let u = s / BUMP_WIDTH;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

fn bump_dx(s: f64) -> f64 {
    let u = s / BUMP_WIDTH;
    if u.abs() >= 1.0 {
        0.0
    } else {
        -bump(s) * 2.0 * u / (BUMP_WIDTH * (1.0 - u * u).powi(2))
    }
}

impl ReflectionSamples {
    pub fn new(r1: RealFn, r2: RealFn, dr1: Option<RealFn>, name: impl Into<String>) -> Self {
        Self {
            r1,
            r2,
            dr1,
            name: name.into(),
        }
    }

    pub fn zero() -> Self {
        let z: RealFn = Arc::new(|_| Complex64::new(0.0, 0.0));
        Self::new(z.clone(), z.clone(), Some(z), "zero")
    }

    fn check_amplitude(amp: f64) -> Result<(), RhError> {
        if !(amp.abs() < 1.0) {
            return Err(RhError::InvalidReflection(format!(
                "amplitude must satisfy |A| < 1, got {amp}"
            )));
        }
        Ok(())
    }

    /// `r1 = A e^{-s²}`, `r2 = -A/(1+A) e^{-s²}`; the values at 0 satisfy
    /// the model-problem constraint.
    pub fn gaussian(amp: f64) -> Result<Self, RhError> {
        Self::check_amplitude(amp)?;
        let b = -amp / (1.0 + amp);
        Ok(Self::new(
            Arc::new(move |s| Complex64::new(amp * (-s * s).exp(), 0.0)),
            Arc::new(move |s| Complex64::new(b * (-s * s).exp(), 0.0)),
            Some(Arc::new(move |s| Complex64::new(-2.0 * s * amp * (-s * s).exp(), 0.0))),
            format!("gaussian({amp})"),
        ))
    }

    /// Smooth bump supported on `|s| < 2`, same normalisation as
    /// [`ReflectionSamples::gaussian`].
    pub fn bump(amp: f64) -> Result<Self, RhError> {
        Self::check_amplitude(amp)?;
        let b = -amp / (1.0 + amp);
        Ok(Self::new(
            Arc::new(move |s| Complex64::new(amp * bump(s), 0.0)),
            Arc::new(move |s| Complex64::new(b * bump(s), 0.0)),
            Some(Arc::new(move |s| Complex64::new(amp * bump_dx(s), 0.0))),
            format!("bump({amp})"),
        ))
    }

    /// Preset by name: `zero`, `gaussian`, `bump`.
    pub fn preset(name: &str, amp: f64) -> Result<Self, RhError> {
        match name {
            "zero" => Ok(Self::zero()),
            "gaussian" => Self::gaussian(amp),
            "bump" => Self::bump(amp),
            _ => Err(RhError::InvalidReflection(format!("unknown preset '{name}'"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn r1(&self, s: f64) -> Complex64 {
        (self.r1)(s)
    }

    pub fn r2(&self, s: f64) -> Complex64 {
        (self.r2)(s)
    }

    pub fn dr1(&self, s: f64) -> Complex64 {
        match &self.dr1 {
            Some(d) => d(s),
            None => {
                let h = 1e-5 * (1.0 + s.abs());
                let lo = (s - h).max(0.0);
                ((self.r1)(s + h) - (self.r1)(lo)) / (s + h - lo)
            }
        }
    }

    /// `ln(1 - |r1(s)|²)`.
    pub fn log_weight(&self, s: f64) -> f64 {
        (-self.r1(s).norm_sqr()).ln_1p()
    }

    /// `d/ds ln(1 - |r1(s)|²) = -2 Re(conj(r1) r1') / (1 - |r1|²)`.
    pub fn log_weight_ds(&self, s: f64) -> f64 {
        let r = self.r1(s);
        -2.0 * (r.conj() * self.dr1(s)).re / (1.0 - r.norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_examples() {
        assert_eq!(phase(PhaseId::P21, 1.3, Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
        let v = phase(PhaseId::P21, 1.0, Complex64::new(0.5, 0.0));
        assert!((v - Complex64::new(0.0, -0.25 * 3f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn saddles_are_stationary() {
        for id in [PhaseId::P21, PhaseId::P31, PhaseId::P32] {
            for zeta in [-2.0, 0.7, 3.0] {
                let k0 = saddle_point(id, zeta);
                assert!(phase_dk(id, zeta, k0).norm() < 1e-12, "{id} {zeta}");
            }
        }
        assert!((saddle_point(PhaseId::P21, 1.0) - 0.5).norm() < 1e-15);
    }

    #[test]
    fn log0_branch() {
        assert!((log0(Complex64::new(0.0, -1.0)).im - 1.5 * PI).abs() < 1e-15);
        assert_eq!(log0(Complex64::new(2.0, 0.0)).im, 0.0);
        assert!(PhaseId::new(1, 2).is_none());
    }

    #[test]
    fn presets_validate_amplitude() {
        assert!(ReflectionSamples::gaussian(1.0).is_err());
        assert!(ReflectionSamples::preset("nope", 0.1).is_err());
        let b = ReflectionSamples::bump(0.5).unwrap();
        assert_eq!(b.r1(2.5), Complex64::new(0.0, 0.0));
        assert!((b.r1(0.0).re - 0.5).abs() < 1e-15);
        let h = 1e-6;
        let fd = (b.r1(0.7 + h) - b.r1(0.7 - h)).re / (2.0 * h);
        assert!((fd - b.dr1(0.7).re).abs() < 1e-8);
    }
}
