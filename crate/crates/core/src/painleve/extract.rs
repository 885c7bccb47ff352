//! Inversion of the leading-order Painlevé-region formula for `q`:
//!
//! ```text
//! y = -√3 x / (2√t)
//! P(y)  = (4√t/√3) q(x, t) - 2y/3
//! P'(y) = -(8t/3) q_x(x, t) - 2/3
//! ```

use crate::spectral::{spectral_derivative, FieldState, System};

use super::{PainleveError, PainleveSolution, PivParams};

/// Smallest snapshot time accepted for extraction.
pub const MIN_EXTRACTION_TIME: f64 = 25.0;

/// `P` and `P'` on the grid nodes with `|y| <= y_max`, sorted by `y`.
pub fn extract_from_simulation(
    mb_state: &FieldState,
    y_max: f64,
) -> Result<PainleveSolution, PainleveError> {
    let bad = |e: crate::spectral::SpectralError| PainleveError::InvalidInput(e.to_string());
    mb_state.require(System::Mb).map_err(bad)?;
    let t = mb_state.t();
    if !(t >= MIN_EXTRACTION_TIME) {
        return Err(PainleveError::InvalidInput(format!(
            "extraction needs t >= {MIN_EXTRACTION_TIME}, got t={t}"
        )));
    }
    if !(y_max > 0.0 && y_max.is_finite()) {
        return Err(PainleveError::InvalidInput(format!(
            "y_max must be positive and finite, got {y_max}"
        )));
    }
    let grid = mb_state.grid();
    let q = mb_state.field_b();
    let qx = spectral_derivative(q, grid, 1).map_err(bad)?;
    let st = t.sqrt();
    let s3 = 3f64.sqrt();

    let mut rows: Vec<(f64, f64, f64)> = (0..grid.len())
        .filter_map(|j| {
            let y = -s3 * grid.x(j) / (2.0 * st);
            (y.abs() <= y_max).then(|| {
                let p = 4.0 * st / s3 * q[j] - 2.0 * y / 3.0;
                let dp = -8.0 * t / 3.0 * qx[j] - 2.0 / 3.0;
                (y, p, dp)
            })
        })
        .collect();
    if rows.len() < 2 {
        return Err(PainleveError::WindowEmpty { y_max });
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    PainleveSolution::new(
        rows.iter().map(|r| r.0).collect(),
        rows.iter().map(|r| r.1).collect(),
        rows.iter().map(|r| r.2).collect(),
        PivParams::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::PeriodicGrid;

    #[test]
    fn zero_field_gives_the_line() {
        let g = PeriodicGrid::new(40.0, 256).unwrap();
        let s = FieldState::zeros(g, System::Mb);
        let s = FieldState::new(g, 100.0, System::Mb, s.field_a().to_vec(), s.field_b().to_vec())
            .unwrap();
        let sol = extract_from_simulation(&s, 1.0).unwrap();
        assert!(sol.len() > 4);
        for ((y, p), dp) in sol.y().iter().zip(sol.p()).zip(sol.dp()) {
            assert!(y.abs() <= 1.0);
            assert!((p + 2.0 * y / 3.0).abs() < 1e-15);
            assert!((dp + 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn preconditions() {
        let g = PeriodicGrid::new(40.0, 64).unwrap();
        let early = FieldState::zeros(g, System::Mb);
        assert!(matches!(
            extract_from_simulation(&early, 1.0),
            Err(PainleveError::InvalidInput(_))
        ));
        let late = FieldState::new(g, 1e6, System::Mb, vec![0.0; 64], vec![0.0; 64]).unwrap();
        // Node spacing in y is √3·dx/(2√t) ≈ 1.1e-3; a tiny window holds no nodes.
        assert_eq!(
            extract_from_simulation(&late, 1e-6),
            Err(PainleveError::WindowEmpty { y_max: 1e-6 })
        );
        let gb = FieldState::new(g, 100.0, System::Gb, vec![0.0; 64], vec![0.0; 64]).unwrap();
        assert!(extract_from_simulation(&gb, 1.0).is_err());
    }
}
