//! Built-in initial data.

use crate::spectral::{FieldState, PeriodicGrid, SpectralError, System};

/// `p0(x) = -e^{-x^2/20} / 10`
pub fn paper_mb_p(x: f64) -> f64 {
    -0.1 * (-x * x / 20.0).exp()
}

/// `q0(x) = e^{-x^2/20} / 10`
pub fn paper_mb_q(x: f64) -> f64 {
    0.1 * (-x * x / 20.0).exp()
}

/// Image of the `paper_mb` pair under the `(u, w)` Miura map.
pub fn paper_gb_u(x: f64) -> f64 {
    -(-x * x / 10.0).exp() / 50.0 - x * (-x * x / 20.0).exp() / 100.0
}

pub fn paper_gb_w(x: f64) -> f64 {
    -x * (-x * x / 10.0).exp() / 250.0 + (0.01 - x * x / 1000.0) * (-x * x / 20.0).exp()
}

pub fn paper_mb(grid: PeriodicGrid) -> Result<FieldState, SpectralError> {
    FieldState::from_fn(grid, System::Mb, paper_mb_p, paper_mb_q)
}

pub fn paper_gb(grid: PeriodicGrid) -> Result<FieldState, SpectralError> {
    FieldState::from_fn(grid, System::Gb, paper_gb_u, paper_gb_w)
}
