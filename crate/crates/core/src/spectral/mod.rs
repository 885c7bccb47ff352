//! Pseudo-spectral machinery on a periodic box `[-L, L)`.

mod csv;
mod stepper;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

pub use csv::{read_field_csv, write_field_csv, FieldCsvError};
pub use stepper::{integrate, rhs_gb, rhs_mb, suggest_dt, Scheme, StepperConfig, BLOW_UP_THRESHOLD};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite field")]
    NonFinite,
    #[error("field length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("derivative order {0} not supported (expected 1..=4)")]
    UnsupportedOrder(u32),
    #[error("expected a {expected} state, got {got}")]
    WrongSystem { expected: System, got: System },
    #[error("mismatched grids")]
    MismatchedGrids,
    #[error("blow-up detected at t={t}: max |field| = {max_abs:e}")]
    BlowUp { t: f64, max_abs: f64 },
    #[error("time step {dt} exceeds the stability bound {bound} for this grid")]
    StepTooLarge { dt: f64, bound: f64 },
    #[error("invalid stepping parameters: {0}")]
    InvalidStepping(String),
}

/// Which pair of fields a [`FieldState`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    /// Modified Boussinesq, fields `(p, q)`.
    Mb,
    /// Good Boussinesq, fields `(u, w)`.
    Gb,
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Mb => "MB",
            System::Gb => "GB",
        })
    }
}

impl std::str::FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "MB" => Ok(System::Mb),
            "GB" => Ok(System::Gb),
            other => Err(format!("unknown system '{other}' (expected MB or GB)")),
        }
    }
}

/// Uniform periodic grid on `[-L, L)` with `N` nodes.
/// Largest accepted grid size.
pub const MAX_POINTS: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    half_length: f64,
    n_points: usize,
}

impl PeriodicGrid {
    pub fn new(half_length: f64, n_points: usize) -> Result<Self, SpectralError> {
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(SpectralError::InvalidGrid(format!(
                "half-length must be positive and finite, got {half_length}"
            )));
        }
        if !(16..=MAX_POINTS).contains(&n_points) || !n_points.is_power_of_two() {
            return Err(SpectralError::InvalidGrid(format!(
                "N must be a power of two in [16, {MAX_POINTS}], got {n_points}"
            )));
        }
        Ok(Self {
            half_length,
            n_points,
        })
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.n_points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Angular wavenumber of FFT bin `m`; the Nyquist bin gets the negative value.
    pub fn wavenumber(&self, m: usize) -> f64 {
        let n = self.n_points as i64;
        let m = m as i64;
        let signed = if m < n / 2 { m } else { m - n };
        PI * signed as f64 / self.half_length
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n_points).map(|m| self.wavenumber(m)).collect()
    }

    pub fn k_max(&self) -> f64 {
        PI * self.n_points as f64 / (2.0 * self.half_length)
    }

    /// Applies `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n_points).map(|j| f(self.x(j))).collect()
    }
}

/// A snapshot of two real periodic fields at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    grid: PeriodicGrid,
    t: f64,
    system: System,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl FieldState {
    pub fn new(
        grid: PeriodicGrid,
        t: f64,
        system: System,
        field_a: Vec<f64>,
        field_b: Vec<f64>,
    ) -> Result<Self, SpectralError> {
        for f in [&field_a, &field_b] {
            if f.len() != grid.len() {
                return Err(SpectralError::LengthMismatch {
                    expected: grid.len(),
                    got: f.len(),
                });
            }
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(SpectralError::InvalidStepping(format!(
                "time must be finite and non-negative, got {t}"
            )));
        }
        check_finite(&field_a)?;
        check_finite(&field_b)?;
        Ok(Self {
            grid,
            t,
            system,
            a: field_a,
            b: field_b,
        })
    }

    pub fn zeros(grid: PeriodicGrid, system: System) -> Self {
        let n = grid.len();
        Self {
            grid,
            t: 0.0,
            system,
            a: vec![0.0; n],
            b: vec![0.0; n],
        }
    }

    /// Samples `(f_a(x), f_b(x))` on the grid at `t = 0`.
    pub fn from_fn(
        grid: PeriodicGrid,
        system: System,
        f_a: impl Fn(f64) -> f64,
        f_b: impl Fn(f64) -> f64,
    ) -> Result<Self, SpectralError> {
        Self::new(grid, 0.0, system, grid.sample(f_a), grid.sample(f_b))
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn field_a(&self) -> &[f64] {
        &self.a
    }

    pub fn field_b(&self) -> &[f64] {
        &self.b
    }

    pub fn into_fields(self) -> (Vec<f64>, Vec<f64>) {
        (self.a, self.b)
    }

    pub fn mean_a(&self) -> f64 {
        mean(&self.a)
    }

    pub fn mean_b(&self) -> f64 {
        mean(&self.b)
    }

    pub(crate) fn require(&self, system: System) -> Result<(), SpectralError> {
        if self.system != system {
            return Err(SpectralError::WrongSystem {
                expected: system,
                got: self.system,
            });
        }
        Ok(())
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub(crate) fn check_finite(f: &[f64]) -> Result<(), SpectralError> {
    if f.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(SpectralError::NonFinite)
    }
}

/// Cached FFT plans and wavenumbers for one grid.
#[derive(Clone)]
pub struct SpectralOps {
    grid: PeriodicGrid,
    k: Vec<f64>,
    dealias: Vec<bool>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralOps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralOps").field("grid", &self.grid).finish()
    }
}

impl SpectralOps {
    pub fn new(grid: PeriodicGrid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.len();
        let k = grid.wavenumbers();
        let cutoff = 2.0 / 3.0 * grid.k_max();
        let dealias = k.iter().map(|k| k.abs() < cutoff).collect();
        Self {
            grid,
            k,
            dealias,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    /// True for modes kept by the 2/3 rule.
    pub fn dealias_mask(&self) -> &[bool] {
        &self.dealias
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
    }

    /// Inverse transform including the `1/N` normalisation.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inv.process(buf);
        let scale = 1.0 / buf.len() as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    pub fn to_spectral(&self, f: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }

    pub fn to_physical(&self, hat: &[Complex64]) -> Vec<f64> {
        let mut buf = hat.to_vec();
        self.inverse(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }

    /// Multiplier of `(d/dx)^order` at bin `m`; odd orders drop the Nyquist bin.
    pub fn derivative_symbol(&self, m: usize, order: u32) -> Complex64 {
        let n = self.grid.len();
        if order % 2 == 1 && m == n / 2 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(0.0, self.k[m]).powu(order)
    }

    pub fn derivative(&self, f: &[f64], order: u32) -> Result<Vec<f64>, SpectralError> {
        if !(1..=4).contains(&order) {
            return Err(SpectralError::UnsupportedOrder(order));
        }
        if f.len() != self.grid.len() {
            return Err(SpectralError::LengthMismatch {
                expected: self.grid.len(),
                got: f.len(),
            });
        }
        check_finite(f)?;
        let mut hat = self.to_spectral(f);
        for (m, v) in hat.iter_mut().enumerate() {
            *v *= self.derivative_symbol(m, order);
        }
        Ok(self.to_physical(&hat))
    }
}

/// `order`-th spectral derivative of `f` on `grid`.
pub fn spectral_derivative(
    f: &[f64],
    grid: &PeriodicGrid,
    order: u32,
) -> Result<Vec<f64>, SpectralError> {
    SpectralOps::new(*grid).derivative(f, order)
}
