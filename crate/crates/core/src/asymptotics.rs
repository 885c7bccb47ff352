//! Long-time asymptotics of the MB and GB solutions: region
//! classification, leading-order formulas and their error orders.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::painleve::{its_kapaev_eval, IkParams, PainleveError, PainleveSolution, PivParams};
use crate::special::arg_gamma;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("t must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("dispersive formula needs x > 0, got x={0}")]
    NegativeX(f64),
    #[error("invalid scattering data: {0}")]
    Scattering(String),
    #[error("invalid region constants: {0}")]
    RegionConstants(String),
    #[error(transparent)]
    Painleve(#[from] PainleveError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Default for RegionConstants {
    fn default() -> Self {
        Self {
            c1: 2.0,
            c2: 1.0,
            c3: 0.25,
        }
    }
}

impl RegionConstants {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self, AsymptoticsError> {
        if ![c1, c2, c3].iter().all(|c| c.is_finite() && *c > 0.0) {
            return Err(AsymptoticsError::RegionConstants(format!(
                "must be positive, got ({c1}, {c2}, {c3})"
            )));
        }
        Ok(Self { c1, c2, c3 })
    }

    /// Boundaries `c1 t^{1/2}`, `c2 t^{3/4}`, `c3 t` at time `t`.
    pub fn boundaries(&self, t: f64) -> [f64; 3] {
        [self.c1 * t.sqrt(), self.c2 * t.powf(0.75), self.c3 * t]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionLabel {
    Painleve,
    TransitionI,
    TransitionII,
    Dispersive,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 4] = [
        RegionLabel::Painleve,
        RegionLabel::TransitionI,
        RegionLabel::TransitionII,
        RegionLabel::Dispersive,
    ];
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionLabel::Painleve => "painleve",
            RegionLabel::TransitionI => "transition-1",
            RegionLabel::TransitionII => "transition-2",
            RegionLabel::Dispersive => "dispersive",
        })
    }
}

impl FromStr for RegionLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RegionLabel::ALL
            .into_iter()
            .find(|r| r.to_string() == s)
            .ok_or_else(|| format!("unknown region '{s}'"))
    }
}

/// Scattering data entering the dispersive formula at `k0 = x/(2t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringParams {
    pub r1_at_k0: Complex64,
    pub nu1: f64,
    pub theta1: f64,
    pub s_minus: Complex64,
}

impl ScatteringParams {
    /// `ν1 = -ln(1 - |r1|²)/(2π)`, `θ1 = 0`, `s₋ = conj(r1)`.
    pub fn from_r1(r1: Complex64) -> Result<Self, AsymptoticsError> {
        Self::with_theta(r1, 0.0)
    }

    pub fn with_theta(r1: Complex64, theta1: f64) -> Result<Self, AsymptoticsError> {
        let m2 = r1.norm_sqr();
        if !(m2 < 1.0) || !theta1.is_finite() {
            return Err(AsymptoticsError::Scattering(format!(
                "need |r1(k0)| < 1 and finite θ1, got |r1|={}, θ1={theta1}",
                r1.norm()
            )));
        }
        Ok(Self {
            r1_at_k0: r1,
            nu1: -(1.0 - m2).ln() / (2.0 * PI),
            theta1,
            s_minus: r1.conj(),
        })
    }
}

fn check_t(t: f64) -> Result<(), AsymptoticsError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(AsymptoticsError::NonPositiveTime(t))
    }
}

/// Region of `(x, t)`: `|x| < c1√t`, `c1√t <= |x| <= c2 t^{3/4}`,
/// `c2 t^{3/4} < |x| <= c3 t`, and the rest.
pub fn classify_region(x: f64, t: f64, rc: &RegionConstants) -> Result<RegionLabel, AsymptoticsError> {
    check_t(t)?;
    let ax = x.abs();
    let [b1, b2, b3] = rc.boundaries(t);
    Ok(if ax < b1 {
        RegionLabel::Painleve
    } else if ax <= b2 {
        RegionLabel::TransitionI
    } else if ax <= b3 {
        RegionLabel::TransitionII
    } else {
        RegionLabel::Dispersive
    })
}

/// `y = -√3 x / (2√t)`.
pub fn painleve_variable(x: f64, t: f64) -> f64 {
    -3f64.sqrt() * x / (2.0 * t.sqrt())
}

/// Leading-order `(p, q)` in the Painlevé region:
///
/// ```text
/// p = (√3/(4√t)) (P' + 2/3)/P,   q = (√3/(4√t)) (P + 2y/3)
/// ```
pub fn eval_mb_painleve(x: f64, t: f64, sol: &PainleveSolution) -> Result<(f64, f64), AsymptoticsError> {
    check_t(t)?;
    let y = painleve_variable(x, t);
    let (p, ratio) = sol.p_and_ratio_at(y)?;
    let c = 3f64.sqrt() / (4.0 * t.sqrt());
    Ok((c * ratio, c * (p + 2.0 * y / 3.0)))
}

/// Leading-order GB `u` in the Painlevé region:
///
/// ```text
/// u = -((3P' + 2)^2 - 9P^4 - 36yP^3 - 20y^2 P^2) / (32 t P^2)
/// ```
///
/// evaluated as `-(9R^2 - 9P^2 - 36yP - 20y^2)/(32t)` with `R = (P' + 2/3)/P`.
pub fn eval_gb_painleve(x: f64, t: f64, sol: &PainleveSolution) -> Result<f64, AsymptoticsError> {
    check_t(t)?;
    let y = painleve_variable(x, t);
    let (p, r) = sol.p_and_ratio_at(y)?;
    Ok(-(9.0 * r * r - 9.0 * p * p - 36.0 * y * p - 20.0 * y * y) / (32.0 * t))
}

/// Phase of the dispersive formula at `k0 = x/(2t)`.
fn dispersive_phase(k0: f64, t: f64, sp: &ScatteringParams) -> f64 {
    let arg_r1 = if sp.r1_at_k0 == Complex64::new(0.0, 0.0) {
        0.0
    } else {
        sp.r1_at_k0.arg()
    };
    let g = if sp.nu1 == 0.0 {
        0.0
    } else {
        arg_gamma(Complex64::new(0.0, sp.nu1))
    };
    let s = 3f64.sqrt() * k0 * k0 * t;
    5.0 * PI / 12.0 + arg_r1 + g + s - sp.nu1 * (6.0 * 3f64.sqrt() * k0 * k0 * t).ln() - sp.theta1
}

/// Leading-order `(p, q)` in the dispersive region, `x > 0`:
///
/// ```text
/// p =  3^{3/4} √ν1 / √(2t) cos Ψ
/// q = -3^{1/4} √ν1 / √(2t) sin Ψ
/// ```
pub fn eval_mb_dispersive(x: f64, t: f64, sp: &ScatteringParams) -> Result<(f64, f64), AsymptoticsError> {
    check_t(t)?;
    if !(x > 0.0) {
        return Err(AsymptoticsError::NegativeX(x));
    }
    if sp.nu1 == 0.0 {
        return Ok((0.0, 0.0));
    }
    let k0 = x / (2.0 * t);
    let psi = dispersive_phase(k0, t, sp);
    let amp = sp.nu1.sqrt() / (2.0 * t).sqrt();
    Ok((
        3f64.powf(0.75) * amp * psi.cos(),
        -3f64.powf(0.25) * amp * psi.sin(),
    ))
}

/// `|q_transition - q_dispersive|` at `x = 2 k0 t`, where the transition
/// side is the Painlevé formula with `P` replaced by its oscillatory
/// asymptotics for `s₋`, and the dispersive side uses `θ1 = 0`.
pub fn matching_discrepancy(k0: f64, t: f64, sp: &ScatteringParams) -> Result<f64, AsymptoticsError> {
    check_t(t)?;
    if !(k0 > 0.0) {
        return Err(AsymptoticsError::NegativeX(k0));
    }
    let x = 2.0 * k0 * t;
    let y = painleve_variable(x, t);
    let ik = IkParams::from_s_minus(sp.s_minus, PivParams::default())?;
    let q_tr = 3f64.sqrt() / (4.0 * t.sqrt()) * (its_kapaev_eval(y, &ik) + 2.0 * y / 3.0);
    let disp = ScatteringParams::with_theta(sp.r1_at_k0, 0.0)?;
    let (_, q_d) = eval_mb_dispersive(x, t, &disp)?;
    Ok((q_tr - q_d).abs())
}

/// Scaling of the printed error order of the MB formula for `region`
/// (no constant): `1/t`, `√τ/t = |x|/(2t^{3/2})`, `(t k0)^{-1} = 2/|x|`
/// and `ln t / t`.
pub fn error_band(region: RegionLabel, x: f64, t: f64) -> f64 {
    match region {
        RegionLabel::Painleve => 1.0 / t,
        RegionLabel::TransitionI => x.abs() / (2.0 * t.powf(1.5)),
        RegionLabel::TransitionII => 2.0 / x.abs(),
        RegionLabel::Dispersive => t.ln() / t,
    }
}

/// Error order `t^{-3/2}` of the GB Painlevé-region formula.
pub fn gb_error_band(t: f64) -> f64 {
    t.powf(-1.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        let rc = RegionConstants::default();
        assert_eq!(classify_region(0.0, 3.0, &rc).unwrap(), RegionLabel::Painleve);
        assert_eq!(classify_region(150.0, 1e4, &rc).unwrap(), RegionLabel::Painleve);
        assert_eq!(classify_region(500.0, 1e4, &rc).unwrap(), RegionLabel::TransitionI);
        assert_eq!(classify_region(-2000.0, 1e4, &rc).unwrap(), RegionLabel::TransitionII);
        assert_eq!(classify_region(3000.0, 1e4, &rc).unwrap(), RegionLabel::Dispersive);
        assert!(classify_region(1.0, 0.0, &rc).is_err());
    }

    #[test]
    fn boundaries_go_inward() {
        let rc = RegionConstants::default();
        let t: f64 = 1e4;
        assert_eq!(classify_region(200.0, t, &rc).unwrap(), RegionLabel::TransitionI);
        assert_eq!(classify_region(1000.0, t, &rc).unwrap(), RegionLabel::TransitionI);
        assert_eq!(classify_region(2500.0, t, &rc).unwrap(), RegionLabel::TransitionII);
    }

    #[test]
    fn band_examples() {
        assert!((error_band(RegionLabel::Painleve, 0.0, 100.0) - 0.01).abs() < 1e-16);
        assert!((error_band(RegionLabel::TransitionI, 500.0, 1e4) - 2.5e-4).abs() < 1e-16);
        assert!((error_band(RegionLabel::TransitionII, 2000.0, 1e4) - 1e-3).abs() < 1e-16);
        assert!((gb_error_band(100.0) - 1e-3).abs() < 1e-16);
    }

    #[test]
    fn nu_from_r1() {
        let sp = ScatteringParams::from_r1(Complex64::new(0.3, 0.4)).unwrap();
        assert!((sp.nu1 - 0.045_786_023_869_621_7).abs() < 1e-15);
        assert_eq!(sp.s_minus, Complex64::new(0.3, -0.4));
        assert!(ScatteringParams::from_r1(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn dispersive_refuses_left_half_line() {
        let sp = ScatteringParams::from_r1(Complex64::new(0.3, 0.0)).unwrap();
        assert_eq!(
            eval_mb_dispersive(-1.0, 10.0, &sp),
            Err(AsymptoticsError::NegativeX(-1.0))
        );
        let zero = ScatteringParams::from_r1(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(eval_mb_dispersive(5.0, 10.0, &zero).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn matching_identity_holds() {
        let sp = ScatteringParams::from_r1(Complex64::new(0.3, 0.0)).unwrap();
        for t in [1e4, 4e4] {
            let d = matching_discrepancy(0.1, t, &sp).unwrap();
            assert!(d <= 1e-12, "t={t}: {d}");
        }
    }

    #[test]
    fn background_member_gives_zero_fields() {
        let ys: Vec<f64> = (0..40).map(|i| -2.0 + 0.1 * i as f64 + 0.05).collect();
        let p = ys.iter().map(|y| -2.0 * y / 3.0).collect();
        let sol = PainleveSolution::new(ys.clone(), p, vec![-2.0 / 3.0; 40], PivParams::default())
            .unwrap();
        let (p, q) = eval_mb_painleve(3.0, 100.0, &sol).unwrap();
        assert!(p.abs() < 1e-15 && q.abs() < 1e-15);
        assert!(eval_gb_painleve(3.0, 100.0, &sol).unwrap().abs() < 1e-15);
        assert!(matches!(
            eval_mb_painleve(1e3, 100.0, &sol),
            Err(AsymptoticsError::Painleve(PainleveError::OutOfRange { .. }))
        ));
    }
}
