//! Finite-difference weights and local interpolation on sorted nodes.

/// Fornberg's recursion: weights `w[k][j]` such that
/// `f^(k)(x0) ≈ Σ_j w[k][j] f(xs[j])` for `k = 0..=m`.
pub fn fornberg_weights(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Second derivative at each node from five-point stencils (centred in the
/// interior, one-sided near the ends).
pub fn second_derivative_5pt(xs: &[f64], f: &[f64]) -> Vec<f64> {
    let n = xs.len();
    assert!(n >= 5, "need at least five nodes");
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(2).min(n - 5);
            let w = fornberg_weights(xs[i], &xs[lo..lo + 5], 2);
            (0..5).map(|j| w[2][j] * f[lo + j]).sum()
        })
        .collect()
}

/// First derivative at each node from five-point stencils.
pub fn first_derivative_5pt(xs: &[f64], f: &[f64]) -> Vec<f64> {
    let n = xs.len();
    assert!(n >= 5, "need at least five nodes");
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(2).min(n - 5);
            let w = fornberg_weights(xs[i], &xs[lo..lo + 5], 1);
            (0..5).map(|j| w[1][j] * f[lo + j]).sum()
        })
        .collect()
}

/// Index of the first node of the four-point stencil around `x`, or `None`
/// when `x` lies outside `[xs[0], xs[n-1]]`.
pub fn stencil4(xs: &[f64], x: f64) -> Option<usize> {
    let n = xs.len();
    if n < 4 || !(x >= xs[0] && x <= xs[n - 1]) {
        return None;
    }
    let right = xs.partition_point(|&v| v < x);
    Some(right.saturating_sub(2).min(n - 4))
}

/// Cubic Lagrange interpolation through the four nodes starting at `lo`.
pub fn lagrange4(xs: &[f64], f: &[f64], lo: usize, x: f64) -> f64 {
    let mut acc = 0.0;
    for i in lo..lo + 4 {
        let mut l = 1.0;
        for j in lo..lo + 4 {
            if i != j {
                l *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += l * f[i];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centred_weights_match_textbook_stencil() {
        let xs = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let w = fornberg_weights(0.0, &xs, 2);
        let expect = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for j in 0..5 {
            assert!((w[2][j] - expect[j]).abs() < 1e-14);
        }
        let expect1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        for j in 0..5 {
            assert!((w[1][j] - expect1[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn second_derivative_exact_on_quartics_nonuniform() {
        let xs: [f64; 7] = [0.0, 0.3, 0.7, 1.2, 1.4, 2.0, 2.1];
        let f: Vec<f64> = xs.iter().map(|x| x.powi(4) - 2.0 * x).collect();
        let d2 = second_derivative_5pt(&xs, &f);
        for (x, d) in xs.iter().zip(d2) {
            assert!((d - 12.0 * x * x).abs() < 1e-10);
        }
    }

    #[test]
    fn interpolation_is_exact_on_cubics() {
        let xs: Vec<f64> = (0..10).map(|i| (i as f64).powf(1.3)).collect();
        let f: Vec<f64> = xs.iter().map(|x| x * x * x - x).collect();
        for x in [0.0, 0.5, 3.3, xs[9]] {
            let lo = stencil4(&xs, x).unwrap();
            assert!((lagrange4(&xs, &f, lo, x) - (x * x * x - x)).abs() < 1e-9);
        }
        assert!(stencil4(&xs, -0.1).is_none());
    }
}
