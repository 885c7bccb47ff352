//! Jumps of the Painlevé IV model problem on the six rays through 0 (and
//! the auxiliary contours 7..15):
//!
//! ```text
//! v1 = I + s1 E21 + s3 E23     v2 = I + s2 E31 + s4 E32
//! v3 = I + s3 E12 + s1 E13     v4 = I + s4 E21 + s2 E23
//! v5 = I + s3 E31 + s1 E32     v6 = I + s2 E12 + s4 E13
//! ```
//!
//! each conjugated by `e^{θ}` with `θ = 3yλJ + (27/4)λ²J²`,
//! `J = diag(ω, ω², 1)`; `v7..v12 = I`, `v13 = v6 v1`, `v14 = v2 v3`,
//! `v15 = v4 v5`.

use num_complex::Complex64;

use super::{omega, CMatrix3, RhError};

const CONSTRAINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelJumpData {
    pub s1: Complex64,
    pub s2: Complex64,
    pub s3: Complex64,
    pub s4: Complex64,
}

impl ModelJumpData {
    /// Arbitrary `s`, for perturbation studies.
    pub fn raw(s1: Complex64, s2: Complex64, s3: Complex64, s4: Complex64) -> Self {
        Self { s1, s2, s3, s4 }
    }

    /// `s1 = conj(r1(0))`, `s3 = -conj(r2(0))`, `s2 = -conj(s1)`, `s4 = -conj(s3)`.
    pub fn from_reflection(r1_0: Complex64, r2_0: Complex64) -> Self {
        let s1 = r1_0.conj();
        let s3 = -r2_0.conj();
        Self {
            s1,
            s2: -s1.conj(),
            s3,
            s4: -s3.conj(),
        }
    }

    /// Solves `conj(r2) + r1 + r2 conj(r1) = 0` for `r2(0)`; needs `|r1(0)| < 1`.
    pub fn constrained(r1_0: Complex64) -> Result<Self, RhError> {
        let (c, d) = (r1_0.re, r1_0.im);
        let det = 1.0 - r1_0.norm_sqr();
        if !(det > 0.0) {
            return Err(RhError::InvalidReflection(format!(
                "|r1(0)| must be < 1, got {}",
                r1_0.norm()
            )));
        }
        // With r2 = a + ib the constraint is
        //   (1 + c) a + d b = -c
        //   d a + (1 - c) b = d
        let a = (-c * (1.0 - c) - d * d) / det;
        let b = ((1.0 + c) * d + c * d) / det;
        Ok(Self::from_reflection(r1_0, Complex64::new(a, b)))
    }

    pub fn r1_0(&self) -> Complex64 {
        self.s1.conj()
    }

    pub fn r2_0(&self) -> Complex64 {
        -self.s3.conj()
    }

    /// `|conj(r2) + r1 + r2 conj(r1)|` at 0.
    pub fn constraint_residual(&self) -> f64 {
        let (r1, r2) = (self.r1_0(), self.r2_0());
        (r2.conj() + r1 + r2 * r1.conj()).norm()
    }

    /// Residuals of `s4 + s1 + s2 s3 = 0` and `s3 + s2 + s1² + s1 s2 s3 = 0`.
    pub fn relations(&self) -> (f64, f64) {
        let Self { s1, s2, s3, s4 } = *self;
        (
            (s4 + s1 + s2 * s3).norm(),
            (s3 + s2 + s1 * s1 + s1 * s2 * s3).norm(),
        )
    }

    fn invariant_defect(&self) -> f64 {
        (self.s2 + self.s1.conj())
            .norm()
            .max((self.s4 + self.s3.conj()).norm())
    }
}

fn unipotent(entries: &[(usize, usize, Complex64)]) -> CMatrix3 {
    let mut m = CMatrix3::identity();
    for &(i, j, v) in entries {
        m[(i - 1, j - 1)] = v;
    }
    m
}

/// All fifteen matrices without checking the data.
pub fn model_jumps_unchecked(data: &ModelJumpData, y: f64, lambda: Complex64) -> [CMatrix3; 15] {
    let ModelJumpData { s1, s2, s3, s4 } = *data;
    let w = omega();
    let jd = [w, w * w, Complex64::new(1.0, 0.0)];
    let theta: Vec<Complex64> = jd
        .iter()
        .map(|j| 3.0 * y * lambda * j + 6.75 * lambda * lambda * j * j)
        .collect();
    let conj = |m: CMatrix3| CMatrix3::from_fn(|a, b| m[(a, b)] * (theta[a] - theta[b]).exp());

    let v1 = conj(unipotent(&[(2, 1, s1), (2, 3, s3)]));
    let v2 = conj(unipotent(&[(3, 1, s2), (3, 2, s4)]));
    let v3 = conj(unipotent(&[(1, 2, s3), (1, 3, s1)]));
    let v4 = conj(unipotent(&[(2, 1, s4), (2, 3, s2)]));
    let v5 = conj(unipotent(&[(3, 1, s3), (3, 2, s1)]));
    let v6 = conj(unipotent(&[(1, 2, s2), (1, 3, s4)]));
    let id = CMatrix3::identity();
    [
        v1,
        v2,
        v3,
        v4,
        v5,
        v6,
        id,
        id,
        id,
        id,
        id,
        id,
        v6 * v1,
        v2 * v3,
        v4 * v5,
    ]
}

/// All fifteen matrices; fails unless the data satisfy the constraint and
/// the conjugation relations `s2 = -conj(s1)`, `s4 = -conj(s3)`.
pub fn model_jumps(data: &ModelJumpData, y: f64, lambda: Complex64) -> Result<[CMatrix3; 15], RhError> {
    let defect = data.constraint_residual().max(data.invariant_defect());
    if !(defect <= CONSTRAINT_TOL) {
        return Err(RhError::ConstraintViolated(defect));
    }
    Ok(model_jumps_unchecked(data, y, lambda))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryDefects {
    pub z3: f64,
    pub z2: f64,
}

impl SymmetryDefects {
    pub fn max(&self) -> f64 {
        self.z3.max(self.z2)
    }
}

fn perm(rows: [usize; 3]) -> CMatrix3 {
    let mut m = CMatrix3::zeros();
    for (i, &j) in rows.iter().enumerate() {
        m[(i, j)] = Complex64::new(1.0, 0.0);
    }
    m
}

fn max_abs(m: &CMatrix3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-norm defects of
///
/// ```text
/// Z3: v_j(λ) = A v_{σ(j)}(ωλ) A^{-1},              σ: j ↦ j+2 (mod 6), 13 ↦ 14 ↦ 15 ↦ 13
/// Z2: v_j(λ) = B conj(v_{τ(j)}(conj λ))^{-1} B,   τ: j ↦ 7-j, 13 ↦ 13, 14 ↔ 15
/// ```
///
/// over all fifteen contours.
pub fn symmetry_check(data: &ModelJumpData, y: f64, lambda: Complex64) -> SymmetryDefects {
    let a = perm([2, 0, 1]);
    let a_inv = a.transpose();
    let b = perm([1, 0, 2]);
    let here = model_jumps_unchecked(data, y, lambda);
    let rot = model_jumps_unchecked(data, y, omega() * lambda);
    let refl = model_jumps_unchecked(data, y, lambda.conj());

    let sigma = |j: usize| match j {
        1..=6 => (j + 1) % 6 + 1,
        7..=12 => j,
        13 => 14,
        14 => 15,
        _ => 13,
    };
    let tau = |j: usize| match j {
        1..=6 => 7 - j,
        7..=12 => j,
        13 => 13,
        14 => 15,
        _ => 14,
    };
    let mut out = SymmetryDefects { z3: 0.0, z2: 0.0 };
    for j in 1..=15 {
        let v = &here[j - 1];
        let z3 = a * rot[sigma(j) - 1] * a_inv;
        out.z3 = out.z3.max(max_abs(&(v - z3)));
        let c = refl[tau(j) - 1].map(|z| z.conj());
        let z2 = match c.try_inverse() {
            Some(inv) => b * inv * b,
            None => {
                out.z2 = f64::INFINITY;
                continue;
            }
        };
        out.z2 = out.z2.max(max_abs(&(v - z2)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constrained_real_example() {
        let d = ModelJumpData::constrained(c(0.2, 0.0)).unwrap();
        assert!((d.r2_0() - c(-1.0 / 6.0, 0.0)).norm() < 1e-15);
        assert!((d.s1 - 0.2).norm() < 1e-15);
        assert!((d.s2 + 0.2).norm() < 1e-15);
        assert!((d.s3 - 1.0 / 6.0).norm() < 1e-15);
        assert!((d.s4 + 1.0 / 6.0).norm() < 1e-15);
        let (e1, e2) = d.relations();
        assert!(e1 < 1e-15 && e2 < 1e-15);
    }

    #[test]
    fn complex_constraint_is_solved() {
        let d = ModelJumpData::constrained(c(0.3, -0.4)).unwrap();
        assert!(d.constraint_residual() < 1e-15);
        assert!(d.relations().0 < 1e-15);
    }

    #[test]
    fn hexagonal_product_at_origin() {
        for r1 in [c(0.2, 0.0), c(0.3, -0.4), c(-0.5, 0.1)] {
            let d = ModelJumpData::constrained(r1).unwrap();
            let v = model_jumps(&d, 0.7, c(0.0, 0.0)).unwrap();
            let p = v[..6].iter().fold(CMatrix3::identity(), |acc, m| acc * m);
            assert!(max_abs(&(p - CMatrix3::identity())) < 1e-13, "{r1}");
        }
    }

    #[test]
    fn zero_data_gives_identities() {
        let d = ModelJumpData::from_reflection(c(0.0, 0.0), c(0.0, 0.0));
        for m in model_jumps(&d, 1.0, c(0.4, 0.2)).unwrap() {
            assert_eq!(m, CMatrix3::identity());
        }
    }

    #[test]
    fn unimodular_and_symmetric() {
        let d = ModelJumpData::constrained(c(0.2, 0.0)).unwrap();
        let lam = c(0.3, 0.1);
        for m in model_jumps(&d, -0.8, lam).unwrap() {
            assert!((m.determinant() - 1.0).norm() < 1e-12);
        }
        let s = symmetry_check(&d, -0.8, lam);
        assert!(s.max() <= 1e-12, "{s:?}");
    }

    #[test]
    fn perturbation_breaks_symmetry_and_is_refused() {
        let mut d = ModelJumpData::constrained(c(0.2, 0.0)).unwrap();
        d.s2 += c(0.05, 0.02);
        assert!(matches!(model_jumps(&d, 0.0, c(0.1, 0.0)), Err(RhError::ConstraintViolated(_))));
        assert!(symmetry_check(&d, -0.8, c(0.3, 0.1)).max() > 1e-3);
    }
}
