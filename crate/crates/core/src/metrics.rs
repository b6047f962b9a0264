//! State-comparison instruments: Uhlmann fidelity, displaced squeezed
//! thermal state construction, Gaussian fitting, numeric Wigner/Husimi
//! evaluation, and the conversion-infidelity estimate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fock::FockGaussianParams;
use crate::gaussian::{DstsShape, GaussianState};
use crate::lindblad::FockDensityMatrix;

/// Eigenvalues below this are an error; in [NEG_EIG_TOL, 0) they are clipped
/// to zero before taking square roots. Matches the positivity tolerance the
/// master-equation integrator guarantees for its outputs.
const NEG_EIG_TOL: f64 = -1e-9;

/// Extra Fock levels used while applying displacement/squeeze exponentials,
/// to keep truncation-edge reflections away from the retained block.
const PAD: usize = 20;

/// Overlap fidelity F = (Tr √(√ρ₁ ρ₂ √ρ₁))² / (Tr ρ₁ · Tr ρ₂).
///
/// The trace denominators make the definition robust to slightly
/// non-normalized inputs. Matrix square roots go through Hermitian
/// eigendecompositions; eigenvalues below −1e-9 (the oracle's positivity
/// tolerance) raise [`Error::NegativeSpectrum`], small negatives are
/// clipped to zero.
///
/// Tr √(√ρ₁ρ₂√ρ₁) is evaluated as the trace norm Σσ(√ρ₁√ρ₂): the two
/// quantities are identical, but singular values carry the noise floor
/// linearly instead of under a square root, keeping self-fidelities exact
/// to ~1e-12 even for spectra that cross machine precision.
pub fn fidelity(rho1: &FockDensityMatrix, rho2: &FockDensityMatrix) -> Result<f64> {
    assert_eq!(rho1.dim(), rho2.dim(), "fidelity requires equal dimensions");
    let sqrt1 = psd_sqrt(rho1.data())?;
    let sqrt2 = psd_sqrt(rho2.data())?;
    let svd = (sqrt1 * sqrt2).svd(false, false);
    let trace_norm: f64 = svd.singular_values.iter().sum();
    Ok(trace_norm * trace_norm / (rho1.trace() * rho2.trace()))
}

/// Fidelity against a pure state: ⟨ψ|ρ|ψ⟩ / (Tr ρ · ⟨ψ|ψ⟩).
pub fn fidelity_pure(psi: &DVector<Complex64>, rho: &FockDensityMatrix) -> f64 {
    assert_eq!(psi.len(), rho.dim());
    let overlap = psi.dotc(&(rho.data() * psi)).re;
    overlap / (rho.trace() * psi.norm_squared())
}

fn psd_sqrt(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = m.clone().symmetric_eigen();
    let lam_max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let mut scaled = eig.eigenvectors.clone();
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam < NEG_EIG_TOL {
            return Err(Error::NegativeSpectrum(lam));
        }
        // Eigenvalues at the solver's noise floor are zero.
        let lam = if lam < 1e-12 * lam_max { 0.0 } else { lam };
        scaled.column_mut(k).scale_mut(lam.sqrt());
    }
    Ok(&scaled * eig.eigenvectors.adjoint())
}

fn ladder(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Displacement operator D(α) = exp(αa† − α*a) on `dim` levels, evaluated by
/// scaling-and-squaring on the dense truncated generator.
fn displacement(alpha: Complex64, dim: usize) -> DMatrix<Complex64> {
    let a = ladder(dim);
    let gen = a.adjoint() * alpha - &a * alpha.conj();
    gen.exp()
}

/// Squeeze operator S(ξ) = exp(ξ*a²/2 − ξ(a†)²/2).
fn squeeze(xi: Complex64, dim: usize) -> DMatrix<Complex64> {
    let a = ladder(dim);
    let a2 = &a * &a;
    let gen = &a2 * (0.5 * xi.conj()) - a2.adjoint() * (0.5 * xi);
    gen.exp()
}

/// Displaced squeezed thermal state ρ = D(α)S(ξ)ν S†(ξ)D†(α) materialized on
/// `dim` Fock levels. The operators are built on `dim + 20` levels and the
/// result re-truncated.
pub fn dsts_density(center: Complex64, shape: &DstsShape, dim: usize) -> Result<FockDensityMatrix> {
    let rho = dsts_matrix(center, shape, dim)?;
    if rho.top_population(1) > 1e-6 {
        return Err(Error::TruncationOverflow(format!(
            "DSTS top-level population {:.3e} at dim {dim}",
            rho.top_population(1)
        )));
    }
    Ok(rho)
}

/// [`dsts_density`] without the truncation-adequacy check, for callers that
/// deliberately compare in a fixed shared basis.
fn dsts_matrix(center: Complex64, shape: &DstsShape, dim: usize) -> Result<FockDensityMatrix> {
    let m = dim + PAD;
    let xi = Complex64::from_polar(shape.r, shape.theta);
    let u = displacement(center, m) * squeeze(xi, m);
    let rho_pad = if shape.n_th <= 0.0 {
        let v = u.column(0).into_owned();
        DMatrix::from_fn(m, m, |i, j| v[i] * v[j].conj())
    } else {
        let q = shape.n_th / (1.0 + shape.n_th);
        let mut scaled = u.clone();
        for k in 0..m {
            let p = q.powi(k as i32) / (1.0 + shape.n_th);
            scaled.column_mut(k).scale_mut(p.sqrt());
        }
        &scaled * scaled.adjoint()
    };
    FockDensityMatrix::from_matrix(rho_pad.view((0, 0), (dim, dim)).into_owned())
}

/// Coherent state |α⟩ on `dim` levels. Amplitudes are evaluated in log space
/// so arbitrarily large |α| cannot underflow the small-n tail.
pub fn coherent_vector(alpha: Complex64, dim: usize) -> DVector<Complex64> {
    let r = alpha.norm();
    if r == 0.0 {
        let mut v = DVector::zeros(dim);
        v[0] = Complex64::new(1.0, 0.0);
        return v;
    }
    let phi = alpha.arg();
    let ln_r = r.ln();
    let mut log_fact = 0.0;
    DVector::from_fn(dim, |n, _| {
        if n > 0 {
            log_fact += (n as f64).ln();
        }
        let log_mag = -0.5 * r * r + n as f64 * ln_r - 0.5 * log_fact;
        if log_mag < -700.0 {
            Complex64::default()
        } else {
            Complex64::from_polar(log_mag.exp(), n as f64 * phi)
        }
    })
}

/// Displaced squeezed vacuum D(α)S(re^{iθ})|0⟩ via the ladder recurrence
///
///   μ√(n+1)·c_{n+1} = γ·c_n − ν√n·c_{n−1},  μ = cosh r, ν = e^{iθ}sinh r,
///   γ = μα + να*,
///
/// normalized, with the global phase fixed by c₀ > 0.
pub fn displaced_squeezed_vacuum(
    center: Complex64,
    r: f64,
    theta: f64,
    dim: usize,
) -> DVector<Complex64> {
    let mu = r.cosh();
    let nu = Complex64::from_polar(r.sinh(), theta);
    let gamma = mu * center + nu * center.conj();
    let mut c = vec![Complex64::default(); dim];
    c[0] = Complex64::new(1.0, 0.0);
    for n in 0..dim - 1 {
        let prev = if n == 0 { Complex64::default() } else { c[n - 1] };
        c[n + 1] = (gamma * c[n] - nu * (n as f64).sqrt() * prev)
            / Complex64::new(mu * ((n + 1) as f64).sqrt(), 0.0);
        // Keep the running pair in range; rescale everything accumulated so
        // far (normalization fixes the overall factor at the end).
        let mag = c[n + 1].norm();
        if mag > 1e120 {
            let inv = 1.0 / mag;
            for v in c[..=n + 1].iter_mut() {
                *v *= inv;
            }
        }
    }
    let mut v = DVector::from_vec(c);
    let norm = v.norm();
    v /= Complex64::new(norm, 0.0);
    v
}

/// Fit a Gaussian state with the same (⟨a⟩, ⟨a²⟩, ⟨a†a⟩) as `rho` and return
/// it together with the infidelity of the fit. Large values flag
/// non-Gaussian states.
pub fn gaussian_fit(rho: &FockDensityMatrix) -> Result<(GaussianState, f64)> {
    let (mean_a, mean_a2, mean_n) = crate::lindblad::moments(rho);
    let gauss = GaussianState::from_moments(mean_a, mean_a2, mean_n)?;
    let shape = gauss.to_dsts();
    // Compare in the caller's basis; no tail check (the fit of a strongly
    // non-Gaussian state may legitimately spill past it).
    let fit = dsts_matrix(gauss.center(), &shape, rho.dim())?;
    let f = fidelity(&fit, rho)?;
    Ok((gauss, 1.0 - f))
}

/// Wigner function W(α) = (2/π)·Tr[D(−α)ρD(α)e^{iπa†a}], with the
/// displacement applied as a matrix exponential on a padded basis and the
/// parity as the diagonal (−1)^n.
pub fn wigner_numeric(rho: &FockDensityMatrix, alpha: Complex64) -> Result<f64> {
    let dim = rho.dim();
    if alpha.norm_sqr() > 0.9 * dim as f64 {
        return Err(Error::TruncationOverflow(format!(
            "Wigner evaluation point |alpha|^2 = {:.1} too close to dim {dim}",
            alpha.norm_sqr()
        )));
    }
    let m = dim + PAD;
    let d = displacement(alpha, m);
    let mut rho_pad = DMatrix::zeros(m, m);
    rho_pad.view_mut((0, 0), (dim, dim)).copy_from(rho.data());
    let displaced = d.adjoint() * rho_pad * &d;
    let mut tr = 0.0;
    for n in 0..m {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        tr += sign * displaced[(n, n)].re;
    }
    Ok(2.0 / PI * tr)
}

/// Husimi function Q(α) = ⟨α|ρ|α⟩/π.
pub fn husimi_numeric(rho: &FockDensityMatrix, alpha: Complex64) -> f64 {
    let v = coherent_vector(alpha, rho.dim());
    v.dotc(&(rho.data() * &v)).re / PI
}

/// Infidelity 1 − F(ρ_h, ρ_m) between each hybrid trajectory sample
/// (materialized as a DSTS matrix in the oracle's basis) and the
/// master-equation state at the same time. Samples are processed in
/// parallel when the `parallel` feature is enabled.
pub fn hybrid_vs_oracle_infidelity(
    traj: &[crate::hybrid::TrajectoryPoint],
    oracle: &[(f64, FockDensityMatrix)],
) -> Result<Vec<f64>> {
    assert_eq!(traj.len(), oracle.len(), "sample grids must match");
    let pairs: Vec<(crate::hybrid::TrajectoryPoint, &(f64, FockDensityMatrix))> =
        traj.iter().copied().zip(oracle.iter()).collect();
    let results = crate::par::map_collect(&pairs, |(point, (t, rho_m))| {
        debug_assert!((point.t - t).abs() <= 1e-9 * t.abs().max(1.0));
        let shape = point.gauss.to_dsts();
        let rho_h = dsts_matrix(point.gauss.center(), &shape, rho_m.dim())?;
        Ok(1.0 - fidelity(&rho_h, rho_m)?)
    });
    results.into_iter().collect()
}

/// Infidelity of the coherent-state baseline: 1 − F(|β(t)⟩⟨β(t)|, ρ_m).
pub fn coherent_vs_oracle_infidelity(
    traj: &[crate::hybrid::TrajectoryPoint],
    oracle: &[(f64, FockDensityMatrix)],
) -> Vec<f64> {
    assert_eq!(traj.len(), oracle.len(), "sample grids must match");
    let pairs: Vec<(Complex64, &(f64, FockDensityMatrix))> = traj
        .iter()
        .map(|p| p.state.beta)
        .zip(oracle.iter())
        .collect();
    crate::par::map_collect(&pairs, |(beta, (_, rho_m))| {
        let psi = coherent_vector(*beta, rho_m.dim());
        1.0 - fidelity_pure(&psi, rho_m)
    })
}

/// Infidelity estimate 1 − F ≈ 0.04·[4(D₀+b)]³/|β|² for the conversion
/// between phase-space and Fock-space Gaussian states.
pub fn conversion_infidelity_estimate(d0: f64, b: f64, beta_abs: f64) -> f64 {
    0.04 * (4.0 * (d0 + b)).powi(3) / (beta_abs * beta_abs)
}

/// Measured conversion infidelity for a pure-shape Gaussian state: the
/// Fock-space Gaussian matrix is contracted against the displaced squeezed
/// vacuum over the 8σ Fock window.
///
/// `unsqueeze` is 4(D₀+b); the minimum variance follows from purity. The
/// center is placed at real β = `beta_abs` (the infidelity depends only on
/// θ/2 − arg β).
pub fn conversion_infidelity_pure(unsqueeze: f64, theta: f64, beta_abs: f64) -> Result<f64> {
    assert!(unsqueeze >= 1.0, "pure states have 4(D0+b) >= 1");
    let vmax = unsqueeze / 4.0;
    let vmin = 1.0 / (16.0 * vmax);
    let d0 = 0.5 * (vmax + vmin);
    let b = 0.5 * (vmax - vmin);
    let center = Complex64::new(beta_abs, 0.0);
    let gauss = GaussianState::new(center, d0, b, theta)?;
    let params = FockGaussianParams::from_phase_space(&gauss)?;
    let (lo, hi) = params.fock_window();

    let shape = gauss.to_dsts();
    let psi = displaced_squeezed_vacuum(center, shape.r, shape.theta, hi + 1);

    // <psi|rho|psi> and Tr rho over the window; |psi> is normalized.
    let mut overlap = Complex64::default();
    let mut trace = 0.0;
    for i in lo..=hi {
        let mut row = Complex64::default();
        for j in lo..=hi {
            row += params.density_element(i, j) * psi[j];
        }
        overlap += psi[i].conj() * row;
        trace += params.density_element(i, i).re;
    }
    Ok(1.0 - overlap.re / trace)
}
