//! Miura maps from modified Boussinesq `(p, q)` to good Boussinesq variables.

use crate::spectral::{FieldState, SpectralError, SpectralOps, System};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiuraVariant {
    /// `u = 3/4 - (2p_x + 3q^2 + p^2)`, `v = -2(q_xx + 3pq_x + qp_x + 2q(p^2 - q^2))`.
    Uv,
    /// `u = -p_x - p^2/2 - 3q^2/2`, `w = -q_xx - 3pq_x - qp_x - 2qp^2 + 2q^3`.
    Uw,
}

pub fn miura_transform(state: &FieldState, variant: MiuraVariant) -> Result<FieldState, SpectralError> {
    state.require(System::Mb)?;
    let ops = SpectralOps::new(*state.grid());
    let (p, q) = (state.field_a(), state.field_b());
    let px = ops.derivative(p, 1)?;
    let qx = ops.derivative(q, 1)?;
    let qxx = ops.derivative(q, 2)?;
    let n = p.len();
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for j in 0..n {
        let (p, q, px, qx, qxx) = (p[j], q[j], px[j], qx[j], qxx[j]);
        match variant {
            MiuraVariant::Uv => {
                u.push(0.75 - (2.0 * px + 3.0 * q * q + p * p));
                v.push(-2.0 * (qxx + 3.0 * p * qx + q * px + 2.0 * q * (p * p - q * q)));
            }
            MiuraVariant::Uw => {
                u.push(-px - 0.5 * p * p - 1.5 * q * q);
                v.push(-qxx - 3.0 * p * qx - q * px - 2.0 * q * p * p + 2.0 * q * q * q);
            }
        }
    }
    FieldState::new(*state.grid(), state.t(), System::Gb, u, v)
}

/// Max-norm residual of the good Boussinesq system between two nearby
/// snapshots: time derivatives by the finite difference, spatial terms
/// spectrally at the midpoint average.
pub fn gb_residual(state: &FieldState, state_next: &FieldState) -> Result<f64, SpectralError> {
    state.require(System::Gb)?;
    state_next.require(System::Gb)?;
    if state.grid() != state_next.grid() {
        return Err(SpectralError::MismatchedGrids);
    }
    let dt = state_next.t() - state.t();
    if !(dt > 0.0) {
        return Err(SpectralError::InvalidStepping(format!(
            "snapshots must be time-ordered, got dt={dt}"
        )));
    }
    let ops = SpectralOps::new(*state.grid());
    let mid = |a: &[f64], b: &[f64]| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
    };
    let u = mid(state.field_a(), state_next.field_a());
    let w = mid(state.field_b(), state_next.field_b());
    let u2: Vec<f64> = u.iter().map(|v| v * v).collect();
    let wx = ops.derivative(&w, 1)?;
    let u2x = ops.derivative(&u2, 1)?;
    let uxxx = ops.derivative(&u, 3)?;
    let mut worst = 0f64;
    for j in 0..u.len() {
        let ut = (state_next.field_a()[j] - state.field_a()[j]) / dt;
        let wt = (state_next.field_b()[j] - state.field_b()[j]) / dt;
        let r1 = ut - wx[j];
        let r2 = wt + 4.0 / 3.0 * u2x[j] + uxxx[j] / 3.0;
        worst = worst.max(r1.abs()).max(r2.abs());
    }
    Ok(worst)
}
