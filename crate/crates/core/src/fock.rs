//! Fock-space Gaussian (sheared Gaussian) states.
//!
//! The density matrix is Gaussian in the sum and difference of the Fock
//! indices,
//!
//!   ⟨n|ρ|m⟩ = (2πW₁|β|²)^{-1/2}
//!             exp[ −(s−|β|²)²/(2W₁|β|²) − (n−m)²/(8W₂|β|²) ]
//!             exp[ iφ_β(n−m) − i(2K/|β|²)(s−|β|²)(n−m) ],   s = (n+m)/2,
//!
//! parameterized by (|β|, φ_β, W₁, W₂, K). W₁|β|² is the photon-number
//! variance, W₂ sets the coherence width in n−m, and the shear K accumulates
//! quadratic phase under a Kerr nonlinearity. Physicality requires
//! 0 < W₂ ≤ W₁. For |β| ≫ 1 this state is a phase-space Gaussian state up to
//! O(|β|⁻²) corrections; [`FockGaussianParams::to_phase_space`] and
//! [`FockGaussianParams::from_phase_space`] are the exact algebraic maps
//! between the two parameterizations.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::lindblad::FockDensityMatrix;

/// The five parameters of a Fock-space Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockGaussianParams {
    pub beta_abs: f64,
    pub phi_beta: f64,
    pub w1: f64,
    pub w2: f64,
    pub k: f64,
}

impl FockGaussianParams {
    pub fn new(beta_abs: f64, phi_beta: f64, w1: f64, w2: f64, k: f64) -> Result<Self> {
        if !(beta_abs > 0.0) {
            return Err(Error::DegenerateCenter);
        }
        if !(w2 > 0.0 && w2 <= w1) {
            return Err(Error::NonPhysicalMoments(format!(
                "Fock-space Gaussian requires 0 < W2 <= W1, got W1 = {w1}, W2 = {w2}"
            )));
        }
        Ok(Self {
            beta_abs,
            phi_beta,
            w1,
            w2,
            k,
        })
    }

    /// State center β = |β|e^{iφ_β}.
    pub fn center(&self) -> Complex64 {
        Complex64::from_polar(self.beta_abs, self.phi_beta)
    }

    /// Density-matrix element ⟨n|ρ|m⟩.
    pub fn density_element(&self, n: usize, m: usize) -> Complex64 {
        let n2 = self.beta_abs * self.beta_abs;
        let s = 0.5 * (n as f64 + m as f64) - n2;
        let d = n as f64 - m as f64;
        let mag = (-s * s / (2.0 * self.w1 * n2) - d * d / (8.0 * self.w2 * n2)).exp()
            / (2.0 * std::f64::consts::PI * self.w1 * n2).sqrt();
        let phase = self.phi_beta * d - (2.0 * self.k / n2) * s * d;
        Complex64::from_polar(mag, phase)
    }

    /// Fock window [n_lo, n_hi] holding all but an ~8σ tail of the state.
    pub fn fock_window(&self) -> (usize, usize) {
        let n2 = self.beta_abs * self.beta_abs;
        let spread = 8.0 * self.w1.sqrt() * self.beta_abs;
        let lo = (n2 - spread).floor().max(0.0) as usize;
        let hi = (n2 + spread).ceil() as usize;
        (lo, hi)
    }

    /// Materialize the density matrix in a truncated basis of dimension
    /// `dim`. Elements outside the 8σ window are left at zero (their
    /// magnitude is below 1e-14 of the peak).
    pub fn to_matrix(&self, dim: usize) -> Result<FockDensityMatrix> {
        let (lo, hi) = self.fock_window();
        let hi = hi.min(dim - 1);
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for j in lo..=hi {
            for i in lo..=hi {
                m[(i, j)] = self.density_element(i, j);
            }
        }
        FockDensityMatrix::from_matrix(m)
    }

    /// Convert to the phase-space shape (exact in the |β| → ∞ limit):
    /// D₀ = [1/W₂ + W₁(1+16K²)]/8, b = √(D₀² − W₁/(16W₂)),
    /// θ = 2φ_β + atan2(KW₁, D₀ − W₁/4).
    pub fn to_phase_space(&self) -> GaussianState {
        let d0 = (1.0 / self.w2 + self.w1 * (1.0 + 16.0 * self.k * self.k)) / 8.0;
        let radicand = d0 * d0 - self.w1 / (16.0 * self.w2);
        // Nonnegative by AM-GM whenever W2 > 0; a negative value means the
        // parameters were invalid, not a rounding issue.
        assert!(
            radicand >= -1e-12 * d0 * d0,
            "negative b radicand {radicand} for {self:?}"
        );
        let b = radicand.max(0.0).sqrt();
        let theta = 2.0 * self.phi_beta + (self.k * self.w1).atan2(d0 - self.w1 / 4.0);
        GaussianState::new(self.center(), d0, b, theta)
            .expect("conversion from valid Fock-space parameters is physical")
    }

    /// Inverse conversion from a phase-space Gaussian state.
    ///
    /// Fails with [`Error::DegenerateCenter`] when |⟨a⟩| = 0 (φ_β undefined).
    pub fn from_phase_space(state: &GaussianState) -> Result<Self> {
        let center = state.center();
        if center.norm() == 0.0 {
            return Err(Error::DegenerateCenter);
        }
        let phi_beta = center.arg();
        let rel = state.theta() - 2.0 * phi_beta;
        let bracket = state.d0() - state.b() * rel.cos();
        let w1 = 4.0 * bracket;
        let w2 = bracket / (4.0 * (state.d0().powi(2) - state.b().powi(2)));
        let k = state.b() * rel.sin() / (4.0 * bracket);
        Self::new(center.norm(), phi_beta, w1, w2, k)
    }

    /// Next-order (|β|⁻¹) correction to the state center:
    /// ⟨a⟩ = e^{iφ_β}[|β| − (W₁+1/W₂−2)/(8|β|) − 2K²W₁/|β| − iKW₁/|β|].
    ///
    /// Exposed for conversion-fidelity studies; the hybrid evolver does not
    /// apply it.
    pub fn corrected_center(&self) -> Complex64 {
        let b = self.beta_abs;
        let re = b - (self.w1 + 1.0 / self.w2 - 2.0) / (8.0 * b) - 2.0 * self.k * self.k * self.w1 / b;
        let im = -self.k * self.w1 / b;
        Complex64::from_polar(1.0, self.phi_beta) * Complex64::new(re, im)
    }

    /// Thermal occupation n_th = (√(W₁/W₂) − 1)/2.
    pub fn thermal_photons(&self) -> f64 {
        0.5 * ((self.w1 / self.w2).sqrt() - 1.0)
    }
}
