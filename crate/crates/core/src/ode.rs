//! Embedded Dormand–Prince 5(4) integrator with dense output, plus a
//! fixed-step RK4 mode for bit-reproducible trajectories.
//!
//! The integrator is generic over the state container so the same driver
//! serves both the four hybrid ODEs (a handful of reals) and the vectorized
//! density-matrix master equation (N² complex entries).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// State container usable by the integrators.
///
/// Only linear-combination primitives are required; the drivers never need
/// elementwise access.
pub trait OdeState: Clone {
    /// self = src
    fn assign(&mut self, src: &Self);
    /// self += a * x
    fn axpy(&mut self, a: f64, x: &Self);
    /// Weighted RMS of `err` against scale atol + rtol·max(|y0|, |y1|).
    fn error_norm(err: &Self, y0: &Self, y1: &Self, atol: f64, rtol: f64) -> f64;
    fn is_finite(&self) -> bool;
}

impl OdeState for Vec<f64> {
    fn assign(&mut self, src: &Self) {
        self.copy_from_slice(src);
    }

    fn axpy(&mut self, a: f64, x: &Self) {
        for (s, xi) in self.iter_mut().zip(x) {
            *s += a * xi;
        }
    }

    fn error_norm(err: &Self, y0: &Self, y1: &Self, atol: f64, rtol: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..err.len() {
            let sc = atol + rtol * y0[i].abs().max(y1[i].abs());
            let r = err[i] / sc;
            acc += r * r;
        }
        (acc / err.len() as f64).sqrt()
    }

    fn is_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

impl OdeState for DMatrix<Complex64> {
    fn assign(&mut self, src: &Self) {
        self.copy_from(src);
    }

    fn axpy(&mut self, a: f64, x: &Self) {
        let a = Complex64::new(a, 0.0);
        for (s, xi) in self.iter_mut().zip(x.iter()) {
            *s += a * xi;
        }
    }

    fn error_norm(err: &Self, y0: &Self, y1: &Self, atol: f64, rtol: f64) -> f64 {
        let mut acc = 0.0;
        let n = err.len();
        for i in 0..n {
            let sc = atol + rtol * y0[i].norm().max(y1[i].norm());
            let r = err[i].norm() / sc;
            acc += r * r;
        }
        (acc / n as f64).sqrt()
    }

    fn is_finite(&self) -> bool {
        self.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order minus embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Dense-output weights for the 4th-degree interpolant.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone)]
pub struct AdaptiveOpts {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; defaults to 10⁻⁶ of the span.
    pub h_init: Option<f64>,
    pub max_steps: usize,
}

impl Default for AdaptiveOpts {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            h_init: None,
            max_steps: 20_000_000,
        }
    }
}

/// Integrate dy/dt = f(t, y) from `t0` to `t1`, invoking `observer` at each
/// of the (sorted, in-range) `sample_times` using the step interpolant.
///
/// `post_accept`, when given, is applied to the state after every accepted
/// step (used to re-symmetrize density matrices). Returns the state at `t1`.
pub fn integrate_adaptive<S, F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: &S,
    sample_times: &[f64],
    mut observer: impl FnMut(f64, &S),
    mut post_accept: Option<&mut dyn FnMut(&mut S)>,
    opts: &AdaptiveOpts,
) -> Result<S>
where
    S: OdeState,
    F: FnMut(f64, &S, &mut S),
{
    let span = t1 - t0;
    assert!(span > 0.0, "integration span must be positive");
    debug_assert!(sample_times.windows(2).all(|w| w[0] <= w[1]));

    let mut samples = sample_times.iter().copied().peekable();
    // Samples at (or before) t0 see the initial state directly.
    while samples.peek().is_some_and(|&s| s <= t0) {
        observer(samples.next().unwrap(), y0);
    }

    let mut t = t0;
    let mut y = y0.clone();
    let mut h = opts.h_init.unwrap_or(1e-6 * span).min(span);

    let mut k: Vec<S> = (0..7).map(|_| y0.clone()).collect();
    let mut y_stage = y0.clone();
    let mut y_new = y0.clone();
    let mut err = y0.clone();
    let mut y_old = y0.clone();
    // Scratch for the dense interpolant.
    let mut rc1 = y0.clone();
    let mut rc2 = y0.clone();
    let mut rc3 = y0.clone();
    let mut rc4 = y0.clone();
    let mut rc5 = y0.clone();
    let mut tmp_a = y0.clone();
    let mut tmp_b = y0.clone();

    f(t, &y, &mut k[0]);
    let mut fresh_k0 = true;

    for _ in 0..opts.max_steps {
        if t >= t1 {
            return Ok(y);
        }
        h = h.min(t1 - t);
        if h < 1e-14 * span {
            return Err(Error::IntegrationFailure {
                t,
                reason: "step size underflow".into(),
            });
        }
        if !fresh_k0 {
            f(t, &y, &mut k[0]);
            fresh_k0 = true;
        }

        for i in 1..7 {
            y_stage.assign(&y);
            for (j, kj) in k.iter().enumerate().take(i) {
                let a = A[i][j];
                if a != 0.0 {
                    y_stage.axpy(h * a, kj);
                }
            }
            if i == 6 {
                // Stage 7 is evaluated at y_new (FSAL).
                y_new.assign(&y_stage);
            }
            let (head, tail) = k.split_at_mut(i);
            let _ = head;
            f(t + C[i] * h, &y_stage, &mut tail[0]);
        }

        err.assign(&k[0]);
        // err = h * sum E_i k_i; start from E[0]*k[0] by rescaling.
        {
            // cheap trick: err currently equals k[0]; scale via axpy identity
            let mut first = true;
            for (i, ki) in k.iter().enumerate() {
                if E[i] == 0.0 {
                    continue;
                }
                if first {
                    err.assign(ki);
                    err.axpy(h * E[i] - 1.0, ki);
                    first = false;
                } else {
                    err.axpy(h * E[i], ki);
                }
            }
        }

        let err_norm = if err.is_finite() && y_new.is_finite() {
            S::error_norm(&err, &y, &y_new, opts.atol, opts.rtol)
        } else {
            f64::INFINITY
        };

        if err_norm <= 1.0 {
            // Accepted.
            let t_new = t + h;
            y_old.assign(&y);

            let has_samples = samples.peek().is_some_and(|&s| s <= t_new || t_new >= t1);
            if has_samples {
                // rc1 = y_old; rc2 = dy; rc3 = h k1 - dy;
                // rc4 = dy - h k7 - rc3; rc5 = h sum d_i k_i.
                rc1.assign(&y_old);
                rc2.assign(&y_new);
                rc2.axpy(-1.0, &y_old);
                rc3.assign(&k[0]);
                rc3.axpy(h - 1.0, &k[0]); // = h k1  (assign + axpy)
                rc3.axpy(-1.0, &rc2);
                rc4.assign(&rc2);
                rc4.axpy(-h, &k[6]);
                rc4.axpy(-1.0, &rc3);
                rc5.assign(&k[0]);
                rc5.axpy(h * D[0] - 1.0, &k[0]);
                for (i, ki) in k.iter().enumerate().skip(1) {
                    if D[i] != 0.0 {
                        rc5.axpy(h * D[i], ki);
                    }
                }
                while samples.peek().is_some_and(|&s| s <= t_new) {
                    let s = samples.next().unwrap();
                    let theta = ((s - t) / h).clamp(0.0, 1.0);
                    // y(theta) = rc1 + th*(rc2 + (1-th)*(rc3 + th*(rc4 + (1-th)*rc5)))
                    tmp_a.assign(&rc4);
                    tmp_a.axpy(1.0 - theta, &rc5);
                    tmp_b.assign(&rc3);
                    tmp_b.axpy(theta, &tmp_a);
                    tmp_a.assign(&rc2);
                    tmp_a.axpy(1.0 - theta, &tmp_b);
                    tmp_b.assign(&rc1);
                    tmp_b.axpy(theta, &tmp_a);
                    observer(s, &tmp_b);
                }
            }

            t = t_new;
            y.assign(&y_new);
            if let Some(hook) = post_accept.as_deref_mut() {
                hook(&mut y);
            }
            k.swap(0, 6); // FSAL: k7 at y_new becomes next k1
            fresh_k0 = post_accept.is_none();

            if t1 - t <= 1e-12 * span {
                // Within rounding of the endpoint; flush any trailing samples.
                for s in samples {
                    observer(s, &y);
                }
                return Ok(y);
            }

            let fac = (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0);
            h *= fac;
        } else {
            let fac = (0.9 * err_norm.powf(-0.2)).clamp(0.2, 1.0);
            h *= fac;
        }
    }

    Err(Error::IntegrationFailure {
        t,
        reason: format!("exceeded {} steps", opts.max_steps),
    })
}

/// Classic fixed-step RK4. Steps land exactly on every sample time and on
/// `t1`, so identical inputs produce bit-identical output.
pub fn integrate_rk4<S, F>(
    mut f: F,
    t0: f64,
    t1: f64,
    dt: f64,
    y0: &S,
    sample_times: &[f64],
    mut observer: impl FnMut(f64, &S),
) -> Result<S>
where
    S: OdeState,
    F: FnMut(f64, &S, &mut S),
{
    assert!(dt > 0.0 && t1 > t0);
    let mut samples = sample_times.iter().copied().peekable();
    while samples.peek().is_some_and(|&s| s <= t0) {
        observer(samples.next().unwrap(), y0);
    }

    let mut t = t0;
    let mut y = y0.clone();
    let mut k1 = y0.clone();
    let mut k2 = y0.clone();
    let mut k3 = y0.clone();
    let mut k4 = y0.clone();
    let mut y_stage = y0.clone();

    while t < t1 {
        let mut h = dt.min(t1 - t);
        if let Some(&s) = samples.peek() {
            if s > t && s - t < h {
                h = s - t;
            }
        }

        f(t, &y, &mut k1);
        y_stage.assign(&y);
        y_stage.axpy(0.5 * h, &k1);
        f(t + 0.5 * h, &y_stage, &mut k2);
        y_stage.assign(&y);
        y_stage.axpy(0.5 * h, &k2);
        f(t + 0.5 * h, &y_stage, &mut k3);
        y_stage.assign(&y);
        y_stage.axpy(h, &k3);
        f(t + h, &y_stage, &mut k4);

        y.axpy(h / 6.0, &k1);
        y.axpy(h / 3.0, &k2);
        y.axpy(h / 3.0, &k3);
        y.axpy(h / 6.0, &k4);
        t += h;

        if !y.is_finite() {
            return Err(Error::IntegrationFailure {
                t,
                reason: "state became non-finite".into(),
            });
        }
        while samples.peek().is_some_and(|&s| s <= t) {
            observer(samples.next().unwrap(), &y);
        }
    }
    Ok(y)
}
