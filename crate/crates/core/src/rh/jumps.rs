//! Jump matrices on the six rays `arg k = π(j-1)/3`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{vartheta, CMatrix3, PhaseId, ReflectionSamples, RhError};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) fn mat(rows: [[Complex64; 3]; 3]) -> CMatrix3 {
    CMatrix3::from_fn(|i, j| rows[i][j])
}

/// `|k|` when `k` lies on ray `ray`, else an error.
fn radius_on_ray(ray: usize, k: Complex64) -> Result<f64, RhError> {
    if !(1..=6).contains(&ray) {
        return Err(RhError::BadRay(ray));
    }
    let z = k * Complex64::from_polar(1.0, -PI * (ray - 1) as f64 / 3.0);
    let scale = k.norm().max(1.0);
    if !(z.re >= -1e-12 * scale && z.im.abs() <= 1e-12 * scale) {
        return Err(RhError::OffRay { ray, k });
    }
    Ok(z.re.max(0.0))
}

/// The jump `v_ray(x, t; k)`. Reflection coefficients are evaluated at the
/// rotated real point (`r2(ωk)` on ray 2, `r1(ω²k)` on ray 3, ...).
///
/// On ray 6 the off-diagonal pair sits in positions (1,3) and (3,1), the
/// placement forced by unimodularity and by `v4(k) = A v6(ωk) A^{-1}`.
pub fn build_jump(
    ray: usize,
    x: f64,
    t: f64,
    k: Complex64,
    refl: &ReflectionSamples,
) -> Result<CMatrix3, RhError> {
    let rho = radius_on_ray(ray, k)?;
    let e21 = vartheta(PhaseId::P21, x, t, k).exp();
    let e31 = vartheta(PhaseId::P31, x, t, k).exp();
    let e32 = vartheta(PhaseId::P32, x, t, k).exp();
    Ok(match ray {
        1 => {
            let r = refl.r1(rho);
            mat([
                [ONE, -r / e21, ZERO],
                [r.conj() * e21, ONE - r.norm_sqr(), ZERO],
                [ZERO, ZERO, ONE],
            ])
        }
        2 => {
            let r = refl.r2(-rho);
            mat([
                [ONE, ZERO, ZERO],
                [ZERO, ONE - r.norm_sqr(), -r.conj() / e32],
                [ZERO, r * e32, ONE],
            ])
        }
        3 => {
            let r = refl.r1(rho);
            mat([
                [ONE - r.norm_sqr(), ZERO, r.conj() / e31],
                [ZERO, ONE, ZERO],
                [-r * e31, ZERO, ONE],
            ])
        }
        4 => {
            let r = refl.r2(-rho);
            mat([
                [ONE - r.norm_sqr(), -r.conj() / e21, ZERO],
                [r * e21, ONE, ZERO],
                [ZERO, ZERO, ONE],
            ])
        }
        5 => {
            let r = refl.r1(rho);
            mat([
                [ONE, ZERO, ZERO],
                [ZERO, ONE, -r / e32],
                [ZERO, r.conj() * e32, ONE - r.norm_sqr()],
            ])
        }
        _ => {
            let r = refl.r2(-rho);
            mat([
                [ONE, ZERO, r / e31],
                [ZERO, ONE, ZERO],
                [-r.conj() * e31, ZERO, ONE - r.norm_sqr()],
            ])
        }
    })
}

/// `v4 = U · R · L` for a split `r2(k) = a + ρ`:
///
/// ```text
/// U = [[1, -a* e^{-ϑ21}], [0, 1]]
/// R = [[1 - |ρ|², -ρ* e^{-ϑ21}], [ρ e^{ϑ21}, 1]]
/// L = [[1, 0], [a e^{ϑ21}, 1]]
/// ```
///
/// embedded in the upper-left 2×2 block.
#[derive(Debug, Clone, PartialEq)]
pub struct V4Factors {
    pub upper: CMatrix3,
    pub remainder: CMatrix3,
    pub lower: CMatrix3,
}

impl V4Factors {
    pub fn product(&self) -> CMatrix3 {
        self.upper * self.remainder * self.lower
    }
}

/// Factors of `v4` at `k < 0` with analytic part `a`; `ρ = r2(k) - a`.
pub fn v4_factors(
    x: f64,
    t: f64,
    k: Complex64,
    a: Complex64,
    refl: &ReflectionSamples,
) -> Result<V4Factors, RhError> {
    let rho_k = radius_on_ray(4, k)?;
    let e = vartheta(PhaseId::P21, x, t, k).exp();
    let rho = refl.r2(-rho_k) - a;
    Ok(V4Factors {
        upper: mat([
            [ONE, -a.conj() / e, ZERO],
            [ZERO, ONE, ZERO],
            [ZERO, ZERO, ONE],
        ]),
        remainder: mat([
            [ONE - rho.norm_sqr(), -rho.conj() / e, ZERO],
            [rho * e, ONE, ZERO],
            [ZERO, ZERO, ONE],
        ]),
        lower: mat([
            [ONE, ZERO, ZERO],
            [a * e, ONE, ZERO],
            [ZERO, ZERO, ONE],
        ]),
    })
}

/// Unit vector along ray `ray`.
pub fn ray_direction(ray: usize) -> Complex64 {
    Complex64::from_polar(1.0, PI * (ray - 1) as f64 / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &CMatrix3, b: &CMatrix3) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_reflection_gives_identity() {
        let z = ReflectionSamples::zero();
        for ray in 1..=6 {
            let v = build_jump(ray, 1.0, 2.0, 0.7 * ray_direction(ray), &z).unwrap();
            assert_eq!(v, CMatrix3::identity());
        }
    }

    #[test]
    fn unimodular_on_every_ray() {
        let r = ReflectionSamples::gaussian(0.6).unwrap();
        for ray in 1..=6 {
            for rad in [0.0, 0.3, 1.1] {
                let v = build_jump(ray, 0.4, 0.9, rad * ray_direction(ray), &r).unwrap();
                assert!((v.determinant() - ONE).norm() < 1e-12, "ray {ray}");
            }
        }
    }

    #[test]
    fn off_ray_is_rejected() {
        let r = ReflectionSamples::zero();
        assert!(matches!(
            build_jump(1, 0.0, 1.0, Complex64::new(1.0, 0.1), &r),
            Err(RhError::OffRay { ray: 1, .. })
        ));
        assert!(matches!(
            build_jump(4, 0.0, 1.0, Complex64::new(1.0, 0.0), &r),
            Err(RhError::OffRay { ray: 4, .. })
        ));
        assert_eq!(build_jump(7, 0.0, 1.0, ONE, &r), Err(RhError::BadRay(7)));
    }

    #[test]
    fn v4_exact_split() {
        let r = ReflectionSamples::gaussian(0.5).unwrap();
        let k = Complex64::new(-0.8, 0.0);
        let v4 = build_jump(4, 0.3, 1.2, k, &r).unwrap();
        for a in [r.r2(-0.8), Complex64::new(0.1, -0.05), ZERO] {
            let f = v4_factors(0.3, 1.2, k, a, &r).unwrap();
            assert!(close(&f.product(), &v4) < 1e-14);
        }
    }
}
