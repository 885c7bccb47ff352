//! Numerical laboratory for the good and modified Boussinesq equations.
//!
//! * [`spectral`]: periodic pseudo-spectral simulation with an
//!   integrating-factor RK4 stepper.
//! * [`miura`]: maps from `(p, q)` to the good Boussinesq variables.
//! * [`painleve`]: Painlevé IV integration, seeding, extraction from PDE
//!   data and reduction checks.
//! * [`asymptotics`]: region classification and closed-form long-time
//!   formulas.
//! * [`rh`]: jump matrices, delta functions and symmetry checks of the
//!   associated Riemann–Hilbert problems.

// `!(a < b)` also rejects NaN, which is the point in input checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod initial;
pub mod miura;
pub mod numeric;
pub mod ode;
pub mod painleve;
pub mod quad;
pub mod rh;
pub mod special;
pub mod spectral;
