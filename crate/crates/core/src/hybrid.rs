//! Hybrid phase-Fock-space evolution of a driven, damped, weakly nonlinear
//! resonator.
//!
//! The evolving state is the tuple (β, W₁, W₂, K): the phase-space center β
//! follows the classical equation
//!
//!   β̇ = −i[ω_r(|β|²) − ω_d]β − (κ/2)β − iε(t),
//!
//! while the three Fock-space shape parameters obey
//!
//!   Ẇ₁ = 8KW₁·Re(ε/β) + κ(c_b − W₁),
//!   Ẇ₂ = 8KW₂·Re(ε/β) + κW₂[1 − W₂(1+16K²)c_b],
//!   K̇  = [1/(4W₁W₂) − (1+16K²)/4]·Re(ε/β) − κKc_b/W₁ + (η_β/2)|β|²,
//!
//! with c_b = 1 + 2n_b = coth(ω_r0/2T_b) and η_β = dω_r/dn at n = |β|².
//! An equivalent phase-space form for (D₀, b, Δθ) is provided by
//! [`phase_rhs`], and the five lab-frame equations for a linear resonator by
//! [`linear_lab_frame_rhs`]; both exist to cross-check the primary form.
//!
//! The Kerr system admits a two-parameter reduction (ε̃, Δω̃_d); see
//! [`rescale`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockGaussianParams;
use crate::gaussian::GaussianState;
use crate::ode::{self, AdaptiveOpts};

/// Seed magnitude used for the vacuum initial condition so that arg(β) is
/// defined from the start; far below integrator tolerance.
pub const VACUUM_SEED: f64 = 1e-15;

/// The evolving hybrid tuple (β, W₁, W₂, K).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridState {
    pub beta: Complex64,
    pub w1: f64,
    pub w2: f64,
    pub k: f64,
}

impl HybridState {
    /// Vacuum: β = seed, W₁ = W₂ = 1, K = 0.
    pub fn vacuum() -> Self {
        Self {
            beta: Complex64::new(VACUUM_SEED, 0.0),
            w1: 1.0,
            w2: 1.0,
            k: 0.0,
        }
    }

    pub fn new(beta: Complex64, w1: f64, w2: f64, k: f64) -> Self {
        Self { beta, w1, w2, k }
    }

    /// View as Fock-space Gaussian parameters (requires |β| > 0).
    pub fn to_fock_params(&self) -> Result<FockGaussianParams> {
        FockGaussianParams::new(self.beta.norm(), self.beta.arg(), self.w1, self.w2, self.k)
    }

    /// Convert to the phase-space Gaussian state. Works at β = 0 as well
    /// (the shape does not depend on |β|).
    pub fn to_gaussian(&self) -> GaussianState {
        let d0 = (1.0 / self.w2 + self.w1 * (1.0 + 16.0 * self.k * self.k)) / 8.0;
        let b = (d0 * d0 - self.w1 / (16.0 * self.w2)).max(0.0).sqrt();
        let theta = 2.0 * self.beta.arg() + (self.k * self.w1).atan2(d0 - self.w1 / 4.0);
        GaussianState::new(self.beta, d0, b, theta)
            .expect("hybrid state with 0 < W2 <= W1 converts to a physical Gaussian state")
    }

    /// Bath-temperature rescaling W₁ → W₁c_b, W₂ → W₂/c_b: a trajectory at
    /// n_b > 0 equals the T_b = 0 trajectory with this map applied.
    pub fn with_bath_rescaling(&self, c_b: f64) -> Self {
        Self {
            beta: self.beta,
            w1: self.w1 * c_b,
            w2: self.w2 / c_b,
            k: self.k,
        }
    }
}

/// Complex drive amplitude schedule ε(t) in rad/s.
#[derive(Debug, Clone, PartialEq)]
pub enum Drive {
    Constant(Complex64),
    /// Segments (t_start, amplitude), sorted by start time; the first segment
    /// also covers t < t_start[0].
    PiecewiseConstant(Vec<(f64, Complex64)>),
}

impl Drive {
    pub fn amplitude(&self, t: f64) -> Complex64 {
        match self {
            Drive::Constant(eps) => *eps,
            Drive::PiecewiseConstant(segments) => {
                let mut current = segments.first().map_or(Complex64::default(), |s| s.1);
                for &(start, eps) in segments {
                    if t >= start {
                        current = eps;
                    } else {
                        break;
                    }
                }
                current
            }
        }
    }

    /// Largest segment amplitude, used for regularization scales.
    fn max_abs(&self) -> f64 {
        match self {
            Drive::Constant(eps) => eps.norm(),
            Drive::PiecewiseConstant(segments) => segments
                .iter()
                .map(|(_, e)| e.norm())
                .fold(0.0, f64::max),
        }
    }
}

/// Photon-number dependence of the resonator frequency, ω_r(n) − ω_r0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Nonlinearity {
    Linear,
    /// Kerr: ω_r(n) = ω_r0 + nη.
    Kerr { eta: f64 },
}

impl Nonlinearity {
    /// ω_r(n) − ω_r0.
    pub fn shift(&self, n: f64) -> f64 {
        match self {
            Nonlinearity::Linear => 0.0,
            Nonlinearity::Kerr { eta } => eta * n,
        }
    }

    /// dω_r/dn at photon number `n`.
    pub fn slope(&self, n: f64) -> f64 {
        match self {
            Nonlinearity::Linear => 0.0,
            Nonlinearity::Kerr { eta } => {
                let _ = n;
                *eta
            }
        }
    }
}

/// Simulation parameters; angular frequencies and rates in rad/s, times in
/// seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Energy relaxation rate κ.
    pub kappa: f64,
    /// Bare detuning ω_r0 − ω_d.
    pub detuning: f64,
    pub nonlinearity: Nonlinearity,
    pub drive: Drive,
    /// Bath photon number n_b ≥ 0.
    pub n_b: f64,
    pub t_final: f64,
    pub dt_out: f64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidConfig(format!("kappa = {} must be >= 0", self.kappa)));
        }
        if !(self.n_b >= 0.0) {
            return Err(Error::InvalidConfig(format!("n_b = {} must be >= 0", self.n_b)));
        }
        if !(self.t_final > 0.0) || !(self.dt_out > 0.0) {
            return Err(Error::InvalidConfig(
                "t_final and dt_out must be positive".into(),
            ));
        }
        Ok(())
    }

    /// coth(ω_r0/2T_b) = 1 + 2n_b.
    pub fn coth_factor(&self) -> f64 {
        1.0 + 2.0 * self.n_b
    }

    /// ω_r(n) − ω_d at photon number `n`.
    pub fn rotating_detuning(&self, n: f64) -> f64 {
        self.detuning + self.nonlinearity.shift(n)
    }

    /// Output grid 0, dt_out, 2·dt_out, …, t_final.
    pub fn sample_times(&self) -> Vec<f64> {
        let n = (self.t_final / self.dt_out + 1e-9).floor() as usize;
        let mut t: Vec<f64> = (0..=n).map(|i| i as f64 * self.dt_out).collect();
        if let Some(last) = t.last() {
            if *last < self.t_final - 1e-9 * self.dt_out {
                t.push(self.t_final);
            }
        }
        t
    }
}

/// Time derivative of a [`HybridState`].
#[derive(Debug, Clone, Copy)]
pub struct HybridDeriv {
    pub beta: Complex64,
    pub w1: f64,
    pub w2: f64,
    pub k: f64,
}

/// Regularized Re(ε/β): Re(ε·β*)/(|β|² + δ²) with δ = 1e-12·√(|ε|/κ), which
/// keeps the β → 0 limit finite without perturbing resolved dynamics.
fn drive_ratio(eps: Complex64, beta: Complex64, config: &SimConfig) -> f64 {
    if eps.norm_sqr() == 0.0 {
        return 0.0;
    }
    let eps_scale = config.drive.max_abs();
    let kappa = if config.kappa > 0.0 { config.kappa } else { 1.0 };
    let delta = 1e-12 * (eps_scale / kappa).sqrt();
    (eps * beta.conj()).re / (beta.norm_sqr() + delta * delta)
}

/// Right-hand side of the four hybrid evolution equations.
pub fn hybrid_rhs(t: f64, state: &HybridState, config: &SimConfig) -> HybridDeriv {
    let eps = config.drive.amplitude(t);
    let n = state.beta.norm_sqr();
    let c_b = config.coth_factor();
    let kappa = config.kappa;
    let r = drive_ratio(eps, state.beta, config);
    let shear = 1.0 + 16.0 * state.k * state.k;

    let beta_dot = -Complex64::i() * config.rotating_detuning(n) * state.beta
        - 0.5 * kappa * state.beta
        - Complex64::i() * eps;
    let w1_dot = 8.0 * state.k * state.w1 * r + kappa * (c_b - state.w1);
    let w2_dot = 8.0 * state.k * state.w2 * r + kappa * state.w2 * (1.0 - state.w2 * shear * c_b);
    let k_dot = (0.25 / (state.w1 * state.w2) - 0.25 * shear) * r
        - kappa * state.k * c_b / state.w1
        + 0.5 * n * config.nonlinearity.slope(n);

    HybridDeriv {
        beta: beta_dot,
        w1: w1_dot,
        w2: w2_dot,
        k: k_dot,
    }
}

/// One trajectory sample.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub state: HybridState,
    pub gauss: GaussianState,
}

/// Integrator selection for [`evolve_with`].
#[derive(Debug, Clone, Copy)]
pub enum IntegratorKind {
    /// Embedded Dormand-Prince 5(4), rtol 1e-9 / atol 1e-12, dense output.
    Adaptive,
    /// Adaptive with caller-chosen tolerances.
    AdaptiveTol { rtol: f64, atol: f64 },
    /// Fixed-step RK4; bit-reproducible for identical configs.
    FixedRk4 { dt: f64 },
}

fn pack(state: &HybridState) -> Vec<f64> {
    vec![
        state.beta.re,
        state.beta.im,
        state.w1,
        state.w2,
        state.k,
    ]
}

fn unpack(y: &[f64]) -> HybridState {
    HybridState {
        beta: Complex64::new(y[0], y[1]),
        w1: y[2],
        w2: y[3],
        k: y[4],
    }
}

/// Integrate the hybrid equations, sampling at `sample_times` (sorted,
/// within [0, t_final]). Each sample carries the converted phase-space
/// Gaussian state.
pub fn evolve(
    initial: HybridState,
    config: &SimConfig,
    sample_times: &[f64],
) -> Result<Vec<TrajectoryPoint>> {
    evolve_with(initial, config, sample_times, IntegratorKind::Adaptive)
}

pub fn evolve_with(
    initial: HybridState,
    config: &SimConfig,
    sample_times: &[f64],
    integrator: IntegratorKind,
) -> Result<Vec<TrajectoryPoint>> {
    config.validate()?;
    let rhs = |t: f64, y: &Vec<f64>, dy: &mut Vec<f64>| {
        let d = hybrid_rhs(t, &unpack(y), config);
        dy[0] = d.beta.re;
        dy[1] = d.beta.im;
        dy[2] = d.w1;
        dy[3] = d.w2;
        dy[4] = d.k;
    };

    let mut out = Vec::with_capacity(sample_times.len());
    let observer = |t: f64, y: &Vec<f64>| {
        let state = unpack(y);
        // Physicality along the trajectory.
        assert!(
            state.w2 > 0.0 && state.w2 <= state.w1 * (1.0 + 1e-10),
            "0 < W2 <= W1 violated at t = {t}: W1 = {}, W2 = {}",
            state.w1,
            state.w2
        );
        out.push(TrajectoryPoint {
            t,
            state,
            gauss: state.to_gaussian(),
        });
    };

    let y0 = pack(&initial);
    match integrator {
        IntegratorKind::Adaptive => {
            let opts = AdaptiveOpts::default();
            ode::integrate_adaptive(rhs, 0.0, config.t_final, &y0, sample_times, observer, None, &opts)?;
        }
        IntegratorKind::AdaptiveTol { rtol, atol } => {
            let opts = AdaptiveOpts {
                rtol,
                atol,
                ..Default::default()
            };
            ode::integrate_adaptive(rhs, 0.0, config.t_final, &y0, sample_times, observer, None, &opts)?;
        }
        IntegratorKind::FixedRk4 { dt } => {
            ode::integrate_rk4(rhs, 0.0, config.t_final, dt, &y0, sample_times, observer)?;
        }
    }
    Ok(out)
}

/// Phase-space shape variables (D₀, b, Δθ ≡ θ − 2·arg β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShapeState {
    pub d0: f64,
    pub b: f64,
    pub delta_theta: f64,
}

/// Time derivative of a [`PhaseShapeState`].
#[derive(Debug, Clone, Copy)]
pub struct PhaseShapeDeriv {
    pub d0: f64,
    pub b: f64,
    pub delta_theta: f64,
}

/// Right-hand side of the equivalent phase-space form:
///
///   Ḋ₀ = −κD₀ + (κ/4)c_b + 2η_β|β|²·b·sin Δθ,
///   ḃ  = −κb + 2η_β|β|²·D₀·sin Δθ,
///   Δθ̇ = 2·Re(ε/β) − 2η_β|β|²·[b − D₀cos Δθ]/b.
///
/// The division at b = 0 is regularized by max(b, 1e-14); the hybrid form
/// avoids this entirely and is the primary path.
pub fn phase_rhs(
    t: f64,
    beta: Complex64,
    shape: &PhaseShapeState,
    config: &SimConfig,
) -> PhaseShapeDeriv {
    let eps = config.drive.amplitude(t);
    let n = beta.norm_sqr();
    let eta_beta = config.nonlinearity.slope(n);
    let kappa = config.kappa;
    let c_b = config.coth_factor();
    let r = drive_ratio(eps, beta, config);
    let pump = 2.0 * eta_beta * n;

    let d0_dot = -kappa * shape.d0 + 0.25 * kappa * c_b + pump * shape.b * shape.delta_theta.sin();
    let b_dot = -kappa * shape.b + pump * shape.d0 * shape.delta_theta.sin();
    let b_safe = shape.b.max(1e-14);
    let dtheta_dot =
        2.0 * r - pump * (shape.b - shape.d0 * shape.delta_theta.cos()) / b_safe;

    PhaseShapeDeriv {
        d0: d0_dot,
        b: b_dot,
        delta_theta: dtheta_dot,
    }
}

/// Lab-frame Gaussian parameters of a linear resonator (test support for the
/// rotating-wave approximation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabFrameState {
    pub x_c: f64,
    pub p_c: f64,
    pub d_x: f64,
    pub d_p: f64,
    pub d_xp: f64,
}

/// Parameters for [`linear_lab_frame_rhs`]; the lab frame needs the absolute
/// resonator and drive frequencies, not just their difference.
#[derive(Debug, Clone, Copy)]
pub struct LabFrameParams {
    pub omega_r: f64,
    pub omega_d: f64,
    pub kappa: f64,
    pub eps: Complex64,
    /// coth(ω_r/2T_b).
    pub c_b: f64,
}

/// The five lab-frame evolution equations of a driven damped linear
/// resonator (no RWA assumed).
pub fn linear_lab_frame_rhs(t: f64, s: &LabFrameState, p: &LabFrameParams) -> LabFrameState {
    let drive = 2.0 * (p.eps * Complex64::from_polar(1.0, -p.omega_d * t)).re;
    LabFrameState {
        x_c: p.omega_r * s.p_c,
        p_c: -p.omega_r * s.x_c - p.kappa * s.p_c - drive,
        d_x: 2.0 * p.omega_r * s.d_xp,
        d_p: -2.0 * p.omega_r * s.d_xp - 2.0 * p.kappa * s.d_p + 0.25 * 2.0 * p.kappa * p.c_b,
        d_xp: -p.omega_r * (s.d_x - s.d_p) - p.kappa * s.d_xp,
    }
}

/// The two dimensionless parameters governing Kerr dynamics:
/// ε̃ = ε√|η|/κ^{3/2} and Δω̃_d = −sign(η)(ω_r0 − ω_d)/κ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimensionless {
    pub eps_tilde: f64,
    pub delta_omega_tilde: f64,
    pub sign_eta: f64,
}

/// Reduce a Kerr config with constant drive to its dimensionless parameters.
pub fn rescale(config: &SimConfig) -> Result<Dimensionless> {
    let eta = match config.nonlinearity {
        Nonlinearity::Kerr { eta } if eta != 0.0 => eta,
        _ => {
            return Err(Error::InvalidConfig(
                "dimensionless rescaling requires a nonzero Kerr nonlinearity".into(),
            ))
        }
    };
    let eps = config.drive.amplitude(0.0).norm();
    Ok(Dimensionless {
        eps_tilde: eps * eta.abs().sqrt() / config.kappa.powf(1.5),
        delta_omega_tilde: -eta.signum() * config.detuning / config.kappa,
        sign_eta: eta.signum(),
    })
}

impl Dimensionless {
    /// Inverse map: a physical config with κ = 1, |η| = 1 that realizes these
    /// dimensionless parameters. Time unit 1/κ, photon-number unit κ/|η|.
    pub fn to_config(&self, n_b: f64, t_final: f64, dt_out: f64) -> SimConfig {
        SimConfig {
            kappa: 1.0,
            detuning: -self.sign_eta * self.delta_omega_tilde,
            nonlinearity: Nonlinearity::Kerr { eta: self.sign_eta },
            drive: Drive::Constant(Complex64::new(self.eps_tilde, 0.0)),
            n_b,
            t_final,
            dt_out,
        }
    }
}
