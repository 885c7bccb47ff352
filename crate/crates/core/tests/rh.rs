use std::f64::consts::PI;

use boussinesq_core::rh::{
    build_jump, chi1, delta1, delta1_split, delta_matrix, model_jumps, nu, omega, phase,
    phase_dk, ray_direction, saddle_point, symmetry_check, v4_factors, CMatrix3, ModelJumpData,
    PhaseId, ReflectionSamples, RhError,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_abs(m: &CMatrix3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Tanh-sinh rule on `[a, b]` with step `h` and `|j| <= n`.
fn tanh_sinh(f: impl Fn(f64) -> Complex64, a: f64, b: f64, h: f64, n: i32) -> Complex64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = c(0.0, 0.0);
    for j in -n..=n {
        let s = j as f64 * h;
        let u = 0.5 * PI * s.sinh();
        let x = u.tanh();
        let w = 0.5 * PI * s.cosh() / u.cosh().powi(2);
        if w < 1e-300 {
            continue;
        }
        acc += f(mid + half * x) * w;
    }
    acc * h * half
}

fn delta1_oracle(k: Complex64, amp: f64) -> Complex64 {
    // The weight is below 1e-40 past s = 10.
    let integrand = |s: f64| {
        let w = (-(amp * (-s * s).exp()).powi(2)).ln_1p();
        c(w, 0.0) / (s - k)
    };
    let i = tanh_sinh(integrand, 0.0, 10.0, 1.0 / 64.0, 6 * 64);
    (i / (2.0 * PI * c(0.0, 1.0))).exp()
}

#[test]
fn delta1_agrees_with_tanh_sinh() {
    let r = ReflectionSamples::gaussian(0.5).unwrap();
    for k in [c(0.0, 1.0), c(0.5, 1.0), c(-1.0, 0.3), c(2.0, -0.7)] {
        let a = delta1(k, &r, 1e-10).unwrap();
        let b = delta1_oracle(k, 0.5);
        assert!((a - b).norm() < 1e-10, "{k}: {a} vs {b}");
    }
}

#[test]
fn plemelj_jump_for_both_presets() {
    for r in [ReflectionSamples::gaussian(0.6).unwrap(), ReflectionSamples::bump(0.6).unwrap()] {
        for s in [0.3, 1.0, 1.7] {
            let up = delta1(c(s, 1e-7), &r, 1e-11).unwrap();
            let dn = delta1(c(s, -1e-7), &r, 1e-11).unwrap();
            let expect = 1.0 - r.r1(s).norm_sqr();
            assert!((up / dn - expect).norm() < 1e-6, "{} s={s}", r.name());
        }
    }
}

#[test]
fn chi1_modulus_of_continuity() {
    for r in [ReflectionSamples::gaussian(0.5).unwrap(), ReflectionSamples::bump(0.7).unwrap()] {
        let c0 = chi1(c(0.0, 0.0), &r, 1e-11).unwrap();
        for theta in [PI / 4.0, PI / 2.0, 0.75 * PI] {
            for rad in [1e-1, 1e-2, 1e-3, 1e-4] {
                let k = Complex64::from_polar(rad, theta);
                let d = (chi1(k, &r, 1e-11).unwrap() - c0).norm();
                let bound = 2.0 * rad * (1.0 + rad.ln().abs());
                assert!(d <= bound, "{} θ={theta} |k|={rad}: {d} > {bound}", r.name());
            }
        }
    }
}

#[test]
fn split_form_matches_direct_form() {
    let r = ReflectionSamples::bump(0.4).unwrap();
    for k in [c(0.0, 0.5), c(-2.0, 0.0), c(1.5, -0.3)] {
        let a = delta1(k, &r, 1e-11).unwrap();
        let b = delta1_split(k, &r, 1e-11).unwrap();
        assert!((a - b).norm() < 1e-9);
    }
    assert!((nu(&r) + (1.0f64 - 0.16).ln() / (2.0 * PI)).abs() < 1e-15);
}

#[test]
fn delta_matrix_is_unimodular_and_cyclic() {
    let r = ReflectionSamples::gaussian(0.5).unwrap();
    for k in [Complex64::from_polar(0.7, PI / 6.0), c(-0.4, 0.9), Complex64::from_polar(1.3, 1.9)] {
        let d = delta_matrix(k, &r, 1e-10).unwrap();
        assert!((d.determinant() - 1.0).norm() < 1e-12);
        let e = delta_matrix(omega() * k, &r, 1e-10).unwrap();
        for i in 0..3 {
            assert!((e[(i, i)] - d[((i + 1) % 3, (i + 1) % 3)]).norm() < 1e-9, "{k} {i}");
        }
    }
    assert!(matches!(delta_matrix(c(2.0, 0.0), &r, 1e-10), Err(RhError::OnBranchCut(_))));
}

#[test]
fn sign_table_of_phi21() {
    for i in 1..200 {
        let theta = PI / 3.0 + (2.0 * PI / 3.0) * i as f64 / 200.0;
        let v = phase(PhaseId::P21, 1.0, Complex64::from_polar(1.0, theta));
        assert!(v.re > 0.0, "θ={theta}: {v}");
    }
    // and negative just below the real axis in the mirrored sector
    for i in 1..200 {
        let theta = -PI / 3.0 - (2.0 * PI / 3.0) * i as f64 / 200.0;
        assert!(phase(PhaseId::P21, 1.0, Complex64::from_polar(1.0, theta)).re < 0.0);
    }
}

#[test]
fn saddle_points_and_rotations() {
    for zeta in [-1.5, 0.4, 2.0] {
        let k0 = saddle_point(PhaseId::P21, zeta);
        assert!((k0 - zeta / 2.0).norm() < 1e-15);
        assert!(phase_dk(PhaseId::P21, zeta, k0).norm() < 1e-12);
        for id in [PhaseId::P31, PhaseId::P32] {
            let k = saddle_point(id, zeta);
            assert!(phase_dk(id, zeta, k).norm() < 1e-12);
            assert!((k.norm() - k0.norm()).abs() < 1e-14);
        }
    }
}

#[test]
fn jumps_are_unimodular_and_v4_factorizes() {
    let r = ReflectionSamples::bump(0.8).unwrap();
    for ray in 1..=6 {
        for rad in [0.0, 0.5, 1.5, 3.0] {
            let v = build_jump(ray, -0.7, 2.0, rad * ray_direction(ray), &r).unwrap();
            assert!((v.determinant() - 1.0).norm() <= 1e-12);
        }
    }
    let k = c(-1.1, 0.0);
    let v4 = build_jump(4, 0.2, 0.5, k, &r).unwrap();
    let f = v4_factors(0.2, 0.5, k, r.r2(-1.1), &r).unwrap();
    assert!(max_abs(&(f.product() - v4)) <= 1e-14);
    assert_eq!(f.remainder[(0, 1)], c(0.0, 0.0));
}

#[test]
fn ray_six_is_the_rotated_ray_four() {
    // v4(k) = A v6(ωk) A^{-1} with the cyclic permutation A.
    let r = ReflectionSamples::gaussian(0.5).unwrap();
    let mut a = CMatrix3::zeros();
    for (i, j) in [(0, 2), (1, 0), (2, 1)] {
        a[(i, j)] = c(1.0, 0.0);
    }
    let mut best = f64::INFINITY;
    for perm in [a, a.transpose()] {
        let mut worst = 0f64;
        for rad in [0.2, 0.9] {
            let k = -rad * c(1.0, 0.0);
            let v4 = build_jump(4, 0.3, 0.8, k, &r).unwrap();
            let v6 = build_jump(6, 0.3, 0.8, omega() * k, &r).unwrap();
            worst = worst.max(max_abs(&(v4 - perm * v6 * perm.transpose())));
        }
        best = best.min(worst);
    }
    assert!(best < 1e-12, "{best}");
}

#[test]
fn model_problem_identities() {
    let d = ModelJumpData::constrained(c(0.2, 0.0)).unwrap();
    assert!((d.s1 - 0.2).norm() < 1e-15 && (d.s3 - 1.0 / 6.0).norm() < 1e-15);
    let v = model_jumps(&d, 0.5, c(0.0, 0.0)).unwrap();
    let prod = v[..6].iter().fold(CMatrix3::identity(), |acc, m| acc * m);
    assert!(max_abs(&(prod - CMatrix3::identity())) <= 1e-13);
    for m in &v[6..12] {
        assert_eq!(*m, CMatrix3::identity());
    }
    assert!(symmetry_check(&d, 0.5, c(0.3, 0.1)).z3 <= 1e-12);
    let mut bad = d;
    bad.s2 = c(0.1, 0.3);
    assert!(symmetry_check(&bad, 0.5, c(0.3, 0.1)).max() > 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_jump_is_unimodular(
        ray in 1usize..=6,
        rad in 0.0f64..3.0,
        x in -5.0f64..5.0,
        t in 0.0f64..3.0,
        amp in -0.95f64..0.95,
    ) {
        let r = ReflectionSamples::gaussian(amp).unwrap();
        let v = build_jump(ray, x, t, rad * ray_direction(ray), &r).unwrap();
        let scale = 1.0 + max_abs(&v).powi(3);
        prop_assert!((v.determinant() - 1.0).norm() <= 1e-12 * scale);
    }

    #[test]
    fn constraint_closure(
        modulus in 0.0f64..0.9,
        arg in -PI..PI,
        y in -2.0f64..2.0,
        lre in -0.5f64..0.5,
        lim in -0.5f64..0.5,
    ) {
        let d = ModelJumpData::constrained(Complex64::from_polar(modulus, arg)).unwrap();
        prop_assert!(d.constraint_residual() < 1e-13);
        let (e1, e2) = d.relations();
        prop_assert!(e1 < 1e-13 && e2 < 1e-13);
        let v = model_jumps(&d, y, c(0.0, 0.0)).unwrap();
        let prod = v[..6].iter().fold(CMatrix3::identity(), |acc, m| acc * m);
        prop_assert!(max_abs(&(prod - CMatrix3::identity())) <= 1e-13);
        let lam = c(lre, lim);
        for m in model_jumps(&d, y, lam).unwrap() {
            prop_assert!((m.determinant() - 1.0).norm() <= 1e-12 * (1.0 + max_abs(&m).powi(3)));
        }
        prop_assert!(symmetry_check(&d, y, lam).max() <= 1e-12 * (1.0 + (lam.norm() * 10.0).exp()));
    }

    #[test]
    fn v4_split_is_exact_for_any_analytic_part(
        are in -0.5f64..0.5,
        aim in -0.5f64..0.5,
        rad in 0.01f64..2.0,
        x in -2.0f64..2.0,
        t in 0.0f64..2.0,
    ) {
        let r = ReflectionSamples::gaussian(0.7).unwrap();
        let k = c(-rad, 0.0);
        let v4 = build_jump(4, x, t, k, &r).unwrap();
        let f = v4_factors(x, t, k, c(are, aim), &r).unwrap();
        prop_assert!(max_abs(&(f.product() - v4)) <= 1e-13 * (1.0 + max_abs(&v4)).powi(2));
    }
}
