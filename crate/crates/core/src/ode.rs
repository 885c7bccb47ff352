//! Dormand–Prince 5(4) with step-size control and a 4th-order continuous
//! extension, for small fixed-size systems.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError<E> {
    #[error("right-hand side failed: {0}")]
    Rhs(E),
    #[error("step size underflow at x={x}")]
    StepUnderflow { x: f64 },
    #[error("step limit reached at x={x}")]
    TooManySteps { x: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            max_steps: 200_000,
        }
    }
}

/// One accepted step with its interpolant.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep<const D: usize> {
    pub x0: f64,
    pub h: f64,
    rcont: [[f64; D]; 5],
}

impl<const D: usize> DenseStep<D> {
    pub fn x1(&self) -> f64 {
        self.x0 + self.h
    }

    pub fn start(&self) -> [f64; D] {
        self.rcont[0]
    }

    pub fn end(&self) -> [f64; D] {
        let mut y = self.rcont[0];
        for (yi, di) in y.iter_mut().zip(&self.rcont[1]) {
            *yi += di;
        }
        y
    }

    /// Continuous extension at `x` inside the step.
    pub fn eval(&self, x: f64) -> [f64; D] {
        let th = (x - self.x0) / self.h;
        let th1 = 1.0 - th;
        let r = &self.rcont;
        let mut y = [0.0; D];
        for i in 0..D {
            y[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        }
        y
    }
}

/// What the step observer wants next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy)]
pub struct Outcome<const D: usize> {
    pub x: f64,
    pub y: [f64; D],
    /// Last accepted step size, reusable to restart.
    pub h: f64,
    pub stopped: bool,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn axpy<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for i in 0..D {
        let mut s = 0.0;
        for (c, k) in terms {
            s += c * k[i];
        }
        out[i] += h * s;
    }
    out
}

/// Integrates `y' = f(x, y)` from `x0` to `x_end` (either direction),
/// calling `observe` after every accepted step.
pub fn solve<const D: usize, E, F, O>(
    mut f: F,
    x0: f64,
    y0: [f64; D],
    x_end: f64,
    tol: Tolerances,
    h_start: Option<f64>,
    mut observe: O,
) -> Result<Outcome<D>, OdeError<E>>
where
    F: FnMut(f64, &[f64; D]) -> Result<[f64; D], E>,
    O: FnMut(&DenseStep<D>) -> Flow,
{
    let dir = if x_end >= x0 { 1.0 } else { -1.0 };
    let span = (x_end - x0).abs();
    let mut x = x0;
    let mut y = y0;
    if span == 0.0 {
        return Ok(Outcome {
            x,
            y,
            h: 0.0,
            stopped: false,
        });
    }
    let mut k1 = f(x, &y).map_err(OdeError::Rhs)?;
    let scale = |a: &[f64; D], b: &[f64; D], i: usize| tol.atol + tol.rtol * a[i].abs().max(b[i].abs());

    let mut h = match h_start {
        Some(h) if h.abs() > 0.0 => h.abs().min(span),
        _ => initial_step(&mut f, x, &y, &k1, dir, span, &tol)?,
    };
    let mut fac_old: f64 = 1e-4;
    let mut reject = false;
    let mut steps = 0usize;

    loop {
        let remaining = (x_end - x) * dir;
        if remaining <= span * 1e-15 {
            return Ok(Outcome {
                x,
                y,
                h,
                stopped: false,
            });
        }
        steps += 1;
        if steps > tol.max_steps {
            return Err(OdeError::TooManySteps { x });
        }
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        if h < 1e-14 * x.abs().max(1.0) {
            return Err(OdeError::StepUnderflow { x });
        }
        let hs = h * dir;

        let k2 = f(x + C2 * hs, &axpy(&y, hs, &[(A21, &k1)])).map_err(OdeError::Rhs)?;
        let k3 = f(x + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)])).map_err(OdeError::Rhs)?;
        let k4 = f(
            x + C4 * hs,
            &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        )
        .map_err(OdeError::Rhs)?;
        let k5 = f(
            x + C5 * hs,
            &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )
        .map_err(OdeError::Rhs)?;
        let x_new = if last { x_end } else { x + hs };
        let k6 = f(
            x_new,
            &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        )
        .map_err(OdeError::Rhs)?;
        let y_new = axpy(
            &y,
            hs,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = f(x_new, &y_new).map_err(OdeError::Rhs)?;

        let mut err = 0.0;
        for i in 0..D {
            let e = hs
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sk = scale(&y, &y_new, i);
            err += (e / sk).powi(2);
        }
        let err = (err / D as f64).sqrt();
        if !err.is_finite() {
            h *= 0.1;
            reject = true;
            continue;
        }

        // Lund-stabilised controller.
        let fac11 = err.powf(0.2 - 0.04 * 0.75);
        let fac = (fac11 / fac_old.powf(0.04)) / 0.9;
        let fac = fac.clamp(1.0 / 10.0, 1.0 / 0.2);
        let h_new = h / fac;

        if err <= 1.0 {
            fac_old = err.max(1e-4);
            let mut rcont = [[0.0; D]; 5];
            for i in 0..D {
                let ydiff = y_new[i] - y[i];
                let bspl = hs * k1[i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - hs * k7[i] - bspl;
                rcont[4][i] = hs
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            let step = DenseStep { x0: x, h: hs, rcont };
            x = x_new;
            y = y_new;
            k1 = k7;
            let flow = observe(&step);
            let h_next = if reject { h_new.min(h) } else { h_new };
            reject = false;
            if flow == Flow::Stop {
                return Ok(Outcome {
                    x,
                    y,
                    h: h_next,
                    stopped: true,
                });
            }
            h = h_next;
        } else {
            h /= (fac11 / 0.9).min(1.0 / 0.2);
            reject = true;
        }
    }
}

fn initial_step<const D: usize, E, F>(
    f: &mut F,
    x: f64,
    y: &[f64; D],
    k1: &[f64; D],
    dir: f64,
    span: f64,
    tol: &Tolerances,
) -> Result<f64, OdeError<E>>
where
    F: FnMut(f64, &[f64; D]) -> Result<[f64; D], E>,
{
    let mut dnf = 0.0;
    let mut dny = 0.0;
    for i in 0..D {
        let sk = tol.atol + tol.rtol * y[i].abs();
        dnf += (k1[i] / sk).powi(2);
        dny += (y[i] / sk).powi(2);
    }
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        (dny / dnf).sqrt() * 0.01
    };
    h = h.min(span);
    let y1 = axpy(y, h * dir, &[(1.0, k1)]);
    let k2 = f(x + h * dir, &y1).map_err(OdeError::Rhs)?;
    let mut der2 = 0.0;
    for i in 0..D {
        let sk = tol.atol + tol.rtol * y[i].abs();
        der2 += ((k2[i] - k1[i]) / sk).powi(2);
    }
    let der2 = der2.sqrt() / h;
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    Ok((100.0 * h).min(h1).min(span))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Never = std::convert::Infallible;

    #[test]
    fn harmonic_oscillator_endpoint_and_dense_output() {
        let mut steps = Vec::new();
        let out = solve(
            |_x, y: &[f64; 2]| Ok::<_, Never>([y[1], -y[0]]),
            0.0,
            [0.0, 1.0],
            10.0,
            Tolerances::uniform(1e-11),
            None,
            |s| {
                steps.push(*s);
                Flow::Continue
            },
        )
        .unwrap();
        assert_eq!(out.x, 10.0);
        assert!((out.y[0] - 10f64.sin()).abs() < 1e-9);
        assert!((out.y[1] - 10f64.cos()).abs() < 1e-9);
        let mut worst: f64 = 0.0;
        for s in &steps {
            for th in [0.1, 0.37, 0.5, 0.81] {
                let x = s.x0 + th * s.h;
                worst = worst.max((s.eval(x)[0] - x.sin()).abs());
            }
            let e = s.end();
            assert!((e[0] - s.x1().sin()).abs() < 1e-9);
        }
        assert!(worst < 1e-9, "dense output error {worst}");
    }

    #[test]
    fn integrates_backwards() {
        let out = solve(
            |_x, y: &[f64; 1]| Ok::<_, Never>([y[0]]),
            1.0,
            [1.0],
            0.0,
            Tolerances::uniform(1e-12),
            None,
            |_| Flow::Continue,
        )
        .unwrap();
        assert!((out.y[0] - (-1f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn observer_can_stop() {
        let out = solve(
            |_x, _y: &[f64; 1]| Ok::<_, Never>([1.0]),
            0.0,
            [0.0],
            5.0,
            Tolerances::uniform(1e-8),
            None,
            |s| if s.x1() > 1.0 { Flow::Stop } else { Flow::Continue },
        )
        .unwrap();
        assert!(out.stopped);
        assert!(out.x > 1.0 && out.x < 5.0);
    }

    #[test]
    fn blow_up_underflows() {
        // y' = y^2, y(0) = 1 blows up at x = 1.
        let r = solve(
            |_x, y: &[f64; 1]| Ok::<_, Never>([y[0] * y[0]]),
            0.0,
            [1.0],
            2.0,
            Tolerances::uniform(1e-10),
            None,
            |_| Flow::Continue,
        );
        assert!(r.is_err());
    }
}
