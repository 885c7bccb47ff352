//! Complex log-gamma.

use std::f64::consts::PI;

use num_complex::Complex64;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k - 1)), k = 1..=10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Principal-continuous `ln Γ(z)`: real on the positive axis and analytic in
/// the plane cut along the non-positive real axis.
///
/// Returns `NaN` parts at the poles `z = 0, -1, -2, ...`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Complex64::new(f64::INFINITY, f64::NAN);
    }
    if z.re < -30.0 {
        return reflected(z);
    }
    // Shift right until Stirling is accurate; each principal log stays off
    // its cut when Im z != 0, so the sum continues the branch.
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 17.0 || w.re < 8.0 {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// `ln Γ(z) = ln π - ln sin(πz) - ln Γ(1 - z)`, with the imaginary part
/// moved onto the continuous branch.
fn reflected(z: Complex64) -> Complex64 {
    let s = (z * PI).sin();
    let mut out = Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    out.im = wrap_like(out.im, continuous_im(z));
    out
}

/// Imaginary part of the continuous branch for `Re z < 0` via the
/// recurrence `ln Γ(z) = ln Γ(z + n) - Σ ln(z + j)`; only the phases are
/// summed so this is cheap even for large `n`.
fn continuous_im(z: Complex64) -> f64 {
    let n = (-z.re).ceil() as usize + 10;
    let mut phase = 0.0;
    let mut w = z;
    for _ in 0..n {
        phase += w.arg();
        w += 1.0;
    }
    ln_gamma(w).im - phase
}

fn wrap_like(value: f64, reference: f64) -> f64 {
    value + 2.0 * PI * ((reference - value) / (2.0 * PI)).round()
}

/// `arg Γ(z)` on the continuous branch of [`ln_gamma`].
pub fn arg_gamma(z: Complex64) -> f64 {
    ln_gamma(z).im
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_axis_values() {
        assert!(ln_gamma(c(1.0, 0.0)).norm() < 1e-14);
        assert!(ln_gamma(c(2.0, 0.0)).norm() < 1e-14);
        assert!((ln_gamma(c(0.5, 0.0)).re - 0.5 * PI.ln()).abs() < 5e-14);
        // ln 9! = ln 362880
        assert!((ln_gamma(c(10.0, 0.0)).re - 362_880f64.ln()).abs() < 1e-12);
        // Γ(-0.5) = -2√π: real part ln(2√π), phase π on the upper-limit branch
        let v = ln_gamma(c(-0.5, 1e-300));
        assert!((v.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
    }

    #[test]
    fn poles_are_flagged() {
        assert!(ln_gamma(c(0.0, 0.0)).re.is_infinite());
        assert!(ln_gamma(c(-3.0, 0.0)).re.is_infinite());
    }

    #[test]
    fn recurrence_holds_far_left() {
        for z in [c(-40.3, 0.7), c(-55.5, -2.0)] {
            let lhs = ln_gamma(z + 1.0);
            let rhs = ln_gamma(z) + z.ln();
            assert!((lhs - rhs).norm() < 1e-9, "{z}: {lhs} vs {rhs}");
        }
    }
}
