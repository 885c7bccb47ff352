use num_complex::Complex64;

use super::{check_finite, FieldState, PeriodicGrid, SpectralError, SpectralOps, System};

/// Any field exceeding this magnitude aborts a run.
pub const BLOW_UP_THRESHOLD: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Integrating-factor (Lawson) classical RK4.
    #[default]
    IfRk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub t_end: f64,
    pub dealias: bool,
    pub scheme: Scheme,
}

impl StepperConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self {
            dt,
            t_end,
            dealias: true,
            scheme: Scheme::IfRk4,
        }
    }
}

/// Conservative step for the nonlinear flux terms; the linear dispersion is
/// propagated exactly and does not constrain it.
pub fn suggest_dt(grid: &PeriodicGrid, system: System) -> f64 {
    match system {
        System::Mb | System::Gb => 0.5 * grid.dx(),
    }
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Per-mode 2x2 propagator `exp(h L)`.
struct Propagator {
    c11: Vec<Complex64>,
    c12: Vec<Complex64>,
    c21: Vec<Complex64>,
    c22: Vec<Complex64>,
}

impl Propagator {
    fn new(k: &[f64], system: System, h: f64) -> Self {
        let n = k.len();
        let mut p = Self {
            c11: Vec::with_capacity(n),
            c12: Vec::with_capacity(n),
            c21: Vec::with_capacity(n),
            c22: Vec::with_capacity(n),
        };
        let s3 = 3f64.sqrt();
        for &k in k {
            let omega = k * k / s3;
            let (s, c) = (omega * h).sin_cos();
            let (c12, c21) = match system {
                // p_t = q_xx, q_t = -p_xx / 3
                System::Mb => (Complex64::from(-s3 * s), Complex64::from(s / s3)),
                // u_t = w_x, w_t = -u_xxx / 3
                System::Gb => {
                    if k == 0.0 {
                        (Complex64::from(0.0), Complex64::from(0.0))
                    } else {
                        (I * (k * s / omega), I * (k * k * k * s / (3.0 * omega)))
                    }
                }
            };
            p.c11.push(Complex64::from(c));
            p.c12.push(c12);
            p.c21.push(c21);
            p.c22.push(Complex64::from(c));
        }
        p
    }

    fn apply(&self, a: &mut [Complex64], b: &mut [Complex64]) {
        for m in 0..a.len() {
            let (x, y) = (a[m], b[m]);
            a[m] = self.c11[m] * x + self.c12[m] * y;
            b[m] = self.c21[m] * x + self.c22[m] * y;
        }
    }
}

struct Nonlinear<'a> {
    ops: &'a SpectralOps,
    system: System,
    mask: Vec<f64>,
    ik: Vec<Complex64>,
    z: Vec<Complex64>,
}

impl<'a> Nonlinear<'a> {
    fn new(ops: &'a SpectralOps, system: System, dealias: bool) -> Self {
        let n = ops.grid().len();
        let mask = if dealias {
            ops.dealias_mask()
                .iter()
                .map(|&keep| if keep { 1.0 } else { 0.0 })
                .collect()
        } else {
            vec![1.0; n]
        };
        let ik = (0..n).map(|m| ops.derivative_symbol(m, 1)).collect();
        Self {
            ops,
            system,
            mask,
            ik,
            z: vec![Complex64::from(0.0); n],
        }
    }

    /// Writes the nonlinear flux derivatives of `(a, b)` into `(na, nb)` and
    /// returns the largest physical magnitude seen.
    fn eval(
        &mut self,
        a: &[Complex64],
        b: &[Complex64],
        na: &mut [Complex64],
        nb: &mut [Complex64],
    ) -> f64 {
        let n = a.len();
        // Both fields are real, so one complex transform carries the pair.
        for m in 0..n {
            self.z[m] = (a[m] + I * b[m]) * self.mask[m];
        }
        self.ops.inverse(&mut self.z);
        let mut max_abs = 0f64;
        for v in self.z.iter_mut() {
            let (f, g) = (v.re, v.im);
            max_abs = max_abs.max(f.abs()).max(g.abs());
            if !(f.is_finite() && g.is_finite()) {
                max_abs = f64::INFINITY;
            }
            *v = match self.system {
                System::Mb => Complex64::new(2.0 * f * g, f * f / 3.0 - g * g),
                System::Gb => Complex64::new(-4.0 / 3.0 * f * f, 0.0),
            };
        }
        self.ops.forward(&mut self.z);
        for m in 0..n {
            let zm = self.z[m];
            let zc = self.z[(n - m) % n].conj();
            let f1 = (zm + zc) * 0.5;
            let f2 = (zm - zc) * Complex64::new(0.0, -0.5);
            let d = self.ik[m] * self.mask[m];
            match self.system {
                System::Mb => {
                    na[m] = d * f1;
                    nb[m] = d * f2;
                }
                System::Gb => {
                    na[m] = Complex64::from(0.0);
                    nb[m] = d * f1;
                }
            }
        }
        max_abs
    }
}

/// Right-hand side of the modified Boussinesq system at `state`.
pub fn rhs_mb(state: &FieldState, dealias: bool) -> Result<(Vec<f64>, Vec<f64>), SpectralError> {
    state.require(System::Mb)?;
    full_rhs(state, dealias)
}

/// Right-hand side of the good Boussinesq system at `state`.
pub fn rhs_gb(state: &FieldState, dealias: bool) -> Result<(Vec<f64>, Vec<f64>), SpectralError> {
    state.require(System::Gb)?;
    full_rhs(state, dealias)
}

fn full_rhs(state: &FieldState, dealias: bool) -> Result<(Vec<f64>, Vec<f64>), SpectralError> {
    check_finite(state.field_a())?;
    check_finite(state.field_b())?;
    let ops = SpectralOps::new(*state.grid());
    let a = ops.to_spectral(state.field_a());
    let b = ops.to_spectral(state.field_b());
    let n = a.len();
    let mut na = vec![Complex64::from(0.0); n];
    let mut nb = vec![Complex64::from(0.0); n];
    Nonlinear::new(&ops, state.system(), dealias).eval(&a, &b, &mut na, &mut nb);
    for m in 0..n {
        match state.system() {
            System::Mb => {
                na[m] += ops.derivative_symbol(m, 2) * b[m];
                nb[m] -= ops.derivative_symbol(m, 2) * a[m] / 3.0;
            }
            System::Gb => {
                na[m] += ops.derivative_symbol(m, 1) * b[m];
                nb[m] -= ops.derivative_symbol(m, 3) * a[m] / 3.0;
            }
        }
    }
    Ok((ops.to_physical(&na), ops.to_physical(&nb)))
}

/// Advances `state` to `cfg.t_end`.
pub fn integrate(state: &FieldState, cfg: &StepperConfig) -> Result<FieldState, SpectralError> {
    let grid = *state.grid();
    let bound = suggest_dt(&grid, state.system());
    if !(cfg.dt.is_finite() && cfg.dt > 0.0) {
        return Err(SpectralError::InvalidStepping(format!(
            "dt must be positive, got {}",
            cfg.dt
        )));
    }
    if cfg.dt > bound * (1.0 + 1e-12) {
        return Err(SpectralError::StepTooLarge { dt: cfg.dt, bound });
    }
    if !(cfg.t_end.is_finite() && cfg.t_end >= state.t()) {
        return Err(SpectralError::InvalidStepping(format!(
            "t_end={} precedes the state time {}",
            cfg.t_end,
            state.t()
        )));
    }
    check_finite(state.field_a())?;
    check_finite(state.field_b())?;
    let span = cfg.t_end - state.t();
    if span == 0.0 {
        return Ok(state.clone());
    }
    let steps = ((span / cfg.dt) - 1e-9).ceil().max(1.0) as usize;
    let h = span / steps as f64;

    let ops = SpectralOps::new(grid);
    let system = state.system();
    let full = Propagator::new(ops.k(), system, h);
    let half = Propagator::new(ops.k(), system, h / 2.0);
    let mut nl = Nonlinear::new(&ops, system, cfg.dealias);

    let n = grid.len();
    let zero = Complex64::from(0.0);
    let mut a = ops.to_spectral(state.field_a());
    let mut b = ops.to_spectral(state.field_b());
    let mut k1 = (vec![zero; n], vec![zero; n]);
    let mut k2 = (vec![zero; n], vec![zero; n]);
    let mut k3 = (vec![zero; n], vec![zero; n]);
    let mut k4 = (vec![zero; n], vec![zero; n]);
    let mut ea = vec![zero; n];
    let mut eb = vec![zero; n];
    let mut ta = vec![zero; n];
    let mut tb = vec![zero; n];

    for step in 0..steps {
        let max_abs = nl.eval(&a, &b, &mut k1.0, &mut k1.1);
        if !(max_abs <= BLOW_UP_THRESHOLD) {
            let t = state.t() + step as f64 * h;
            return Err(if max_abs.is_finite() {
                SpectralError::BlowUp { t, max_abs }
            } else {
                SpectralError::NonFinite
            });
        }

        // E(h/2) u
        ea.copy_from_slice(&a);
        eb.copy_from_slice(&b);
        half.apply(&mut ea, &mut eb);

        // stage 2: E(h/2)(u + h/2 k1)
        for m in 0..n {
            ta[m] = a[m] + k1.0[m] * (h / 2.0);
            tb[m] = b[m] + k1.1[m] * (h / 2.0);
        }
        half.apply(&mut ta, &mut tb);
        nl.eval(&ta, &tb, &mut k2.0, &mut k2.1);

        // stage 3: E(h/2) u + h/2 k2
        for m in 0..n {
            ta[m] = ea[m] + k2.0[m] * (h / 2.0);
            tb[m] = eb[m] + k2.1[m] * (h / 2.0);
        }
        nl.eval(&ta, &tb, &mut k3.0, &mut k3.1);

        // stage 4: E(h/2)(E(h/2) u + h k3)
        for m in 0..n {
            ta[m] = ea[m] + k3.0[m] * h;
            tb[m] = eb[m] + k3.1[m] * h;
        }
        half.apply(&mut ta, &mut tb);
        nl.eval(&ta, &tb, &mut k4.0, &mut k4.1);

        // u <- E(h)(u + h/6 k1) + h/3 E(h/2)(k2 + k3) + h/6 k4
        for m in 0..n {
            a[m] += k1.0[m] * (h / 6.0);
            b[m] += k1.1[m] * (h / 6.0);
            ta[m] = k2.0[m] + k3.0[m];
            tb[m] = k2.1[m] + k3.1[m];
        }
        full.apply(&mut a, &mut b);
        half.apply(&mut ta, &mut tb);
        for m in 0..n {
            a[m] += ta[m] * (h / 3.0) + k4.0[m] * (h / 6.0);
            b[m] += tb[m] * (h / 3.0) + k4.1[m] * (h / 6.0);
        }
    }

    let fa = ops.to_physical(&a);
    let fb = ops.to_physical(&b);
    let max_abs = fa.iter().chain(&fb).fold(0f64, |m, v| m.max(v.abs()));
    if !max_abs.is_finite() {
        return Err(SpectralError::NonFinite);
    }
    if max_abs > BLOW_UP_THRESHOLD {
        return Err(SpectralError::BlowUp {
            t: cfg.t_end,
            max_abs,
        });
    }
    FieldState::new(grid, cfg.t_end, system, fa, fb)
}
