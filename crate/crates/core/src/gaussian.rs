//! Phase-space Gaussian states of a single bosonic mode.
//!
//! A Gaussian state is fully described by its complex center ⟨a⟩ and three
//! shape parameters: the mean quadrature variance D₀, the asymmetry b, and
//! the doubled short-axis angle θ. The quadrature variance along direction φ
//! is
//!
//!   σ²(φ) = D₀ − b·cos(2φ − θ),
//!
//! so D₀−b and D₀+b are the minimum and maximum variances and the minimum is
//! attained along φ = θ/2. The same state can be written as a displaced
//! squeezed thermal state (DSTS) with squeeze magnitude r and thermal
//! occupation n_th; [`GaussianState::to_dsts`]/[`GaussianState::from_dsts`]
//! convert both ways.
//!
//! Everything here is in the rotating frame; the vacuum has D₀ = 1/4.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Absolute tolerance on the Heisenberg bound 16(D₀²−b²) ≥ 1 when accepting
/// externally supplied moments (oracle matrices carry integration error).
const PURITY_TOL: f64 = 1e-9;

/// Immutable phase-space Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    center: Complex64,
    d0: f64,
    b: f64,
    theta: f64,
}

/// Displaced-squeezed-thermal-state shape: squeeze magnitude `r`, squeeze
/// angle `theta` (same θ as [`GaussianState`]), thermal occupation `n_th`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DstsShape {
    pub r: f64,
    pub theta: f64,
    pub n_th: f64,
}

fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t == TAU {
        0.0
    } else {
        t
    }
}

impl GaussianState {
    /// Build a state, validating D₀ > 0, 0 ≤ b ≤ D₀ and the Heisenberg bound
    /// (D₀+b)(D₀−b) ≥ 1/16 (up to `1e-9`). θ is stored in [0, 2π); b = 0
    /// stores θ = 0 canonically.
    pub fn new(center: Complex64, d0: f64, b: f64, theta: f64) -> Result<Self> {
        if !(d0 > 0.0) || !d0.is_finite() {
            return Err(Error::NonPhysicalMoments(format!("d0 = {d0} must be positive")));
        }
        if !(0.0..=d0).contains(&b) {
            return Err(Error::NonPhysicalMoments(format!(
                "variance asymmetry b = {b} outside [0, d0 = {d0}]"
            )));
        }
        if (d0 + b) * (d0 - b) < 1.0 / 16.0 - PURITY_TOL {
            return Err(Error::NonPhysicalMoments(format!(
                "(d0+b)(d0-b) = {} below the Heisenberg bound 1/16",
                (d0 + b) * (d0 - b)
            )));
        }
        let theta = if b == 0.0 { 0.0 } else { wrap_angle(theta) };
        Ok(Self { center, d0, b, theta })
    }

    /// Vacuum state: center 0, isotropic variance 1/4.
    pub fn vacuum() -> Self {
        Self {
            center: Complex64::new(0.0, 0.0),
            d0: 0.25,
            b: 0.0,
            theta: 0.0,
        }
    }

    /// Coherent state at `center`.
    pub fn coherent(center: Complex64) -> Self {
        Self {
            center,
            d0: 0.25,
            b: 0.0,
            theta: 0.0,
        }
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// Mean quadrature variance D₀ = (D_x + D_p)/2.
    pub fn d0(&self) -> f64 {
        self.d0
    }

    /// Variance asymmetry b ≥ 0.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Doubled short-axis angle, in [0, 2π).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Minimum quadrature variance D₀ − b.
    pub fn min_variance(&self) -> f64 {
        self.d0 - self.b
    }

    /// Maximum quadrature variance D₀ + b.
    pub fn max_variance(&self) -> f64 {
        self.d0 + self.b
    }

    /// [4(D₀−b)]⁻¹; > 1 means squeezed below vacuum, 2 is the 3 dB point.
    pub fn squeeze_factor(&self) -> f64 {
        1.0 / (4.0 * self.min_variance())
    }

    /// 4(D₀+b), the maximum variance in vacuum units.
    pub fn unsqueeze_factor(&self) -> f64 {
        4.0 * self.max_variance()
    }

    /// Variance of the quadrature x̂_φ = (a e^{−iφ} + a† e^{iφ})/2.
    pub fn quadrature_variance(&self, phi: f64) -> f64 {
        self.d0 - self.b * (2.0 * phi - self.theta).cos()
    }

    /// Wigner function at the phase-space point (x, p). Normalized so that
    /// ∫∫ W dx dp = 1.
    pub fn wigner(&self, x: f64, p: f64) -> f64 {
        // Rotate the offset into the diagonal (short-axis) basis.
        let d = (Complex64::new(x, p) - self.center)
            * Complex64::from_polar(1.0, -0.5 * self.theta);
        let (vmin, vmax) = (self.min_variance(), self.max_variance());
        let expo = -d.re * d.re / (2.0 * vmin) - d.im * d.im / (2.0 * vmax);
        expo.exp() / (2.0 * PI * (vmin * vmax).sqrt())
    }

    /// Husimi Q-function at (x, p): same Gaussian as [`Self::wigner`] with
    /// both diagonal variances increased by 1/4.
    pub fn husimi_q(&self, x: f64, p: f64) -> f64 {
        let d = (Complex64::new(x, p) - self.center)
            * Complex64::from_polar(1.0, -0.5 * self.theta);
        let (vmin, vmax) = (self.min_variance() + 0.25, self.max_variance() + 0.25);
        let expo = -d.re * d.re / (2.0 * vmin) - d.im * d.im / (2.0 * vmax);
        expo.exp() / (2.0 * PI * (vmin * vmax).sqrt())
    }

    /// Reconstruct the unique Gaussian state with the given first and second
    /// moments ⟨a⟩, ⟨a²⟩, ⟨a†a⟩.
    ///
    /// Fails with [`Error::NonPhysicalMoments`] when the implied variances
    /// are unphysical beyond tolerance, which signals a non-Gaussian or
    /// corrupted input density matrix.
    pub fn from_moments(mean_a: Complex64, mean_a2: Complex64, mean_n: f64) -> Result<Self> {
        let d0 = 0.5 * (mean_n + 0.5 - mean_a.norm_sqr());
        // Central second moment mu2 = <a^2> - <a>^2; b e^{i theta} = -mu2/2.
        let mu2 = mean_a2 - mean_a * mean_a;
        let b = 0.5 * mu2.norm();
        let theta = if b == 0.0 { 0.0 } else { (-mu2).arg() };
        Self::new(mean_a, d0, b, theta)
    }

    /// Average photon number n̄ = |⟨a⟩|² + 2D₀ − 1/2.
    pub fn mean_photon(&self) -> f64 {
        self.center.norm_sqr() + 2.0 * self.d0 - 0.5
    }

    /// Express the shape as squeeze/thermal parameters:
    /// n_th = 2√((D₀+b)(D₀−b)) − 1/2 and tanh 2r = b/D₀.
    pub fn to_dsts(&self) -> DstsShape {
        let n_th = (2.0 * (self.max_variance() * self.min_variance()).sqrt() - 0.5).max(0.0);
        let r = 0.5 * (self.b / self.d0).atanh();
        DstsShape {
            r,
            theta: self.theta,
            n_th,
        }
    }

    /// Inverse of [`Self::to_dsts`]: D₀ = (1/4 + n_th/2)·cosh 2r,
    /// b = (1/4 + n_th/2)·sinh 2r.
    pub fn from_dsts(shape: &DstsShape, center: Complex64) -> Self {
        let scale = 0.25 + 0.5 * shape.n_th;
        let d0 = scale * (2.0 * shape.r).cosh();
        let b = scale * (2.0 * shape.r).sinh();
        let theta = if b == 0.0 { 0.0 } else { wrap_angle(shape.theta) };
        Self { center, d0, b, theta }
    }

    /// Effective temperature from coth(ω_r0/2T_eff) = 1 + 2n_th, in the same
    /// (angular-frequency) units as `omega_r0`. Zero for n_th = 0.
    pub fn effective_temperature(&self, omega_r0: f64) -> f64 {
        let n_th = self.to_dsts().n_th;
        if n_th <= 0.0 {
            return 0.0;
        }
        let x = (1.0 / (1.0 + 2.0 * n_th)).atanh();
        omega_r0 / (2.0 * x)
    }
}

impl DstsShape {
    pub fn new(r: f64, theta: f64, n_th: f64) -> Result<Self> {
        if r < 0.0 || n_th < 0.0 || !r.is_finite() || !n_th.is_finite() {
            return Err(Error::NonPhysicalMoments(format!(
                "DSTS shape requires r >= 0 and n_th >= 0, got r = {r}, n_th = {n_th}"
            )));
        }
        Ok(Self { r, theta, n_th })
    }
}
