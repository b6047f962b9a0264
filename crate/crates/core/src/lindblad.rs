//! Truncated-Fock-space Lindblad master-equation integrator.
//!
//! The rotating-frame master equation
//!
//!   ρ̇ = i[ρ, H] + κ(n_b+1)·D[a]ρ + κn_b·D[a†]ρ,
//!   H = Σ_n E_rf(n)|n⟩⟨n| + ε(t)a† + ε*(t)a,
//!   E_rf(n) = Σ_{k<n} [ω_r(k) − ω_d],
//!
//! is the brute-force ground truth against which the hybrid evolution is
//! measured. The right-hand side exploits the band structure of a and a†
//! (every term couples ρ_{ij} to at most nearest neighbors), so one
//! evaluation costs O(N²) and the N²×N² superoperator is never formed.
//! Columns of the derivative are independent; with the `parallel` feature
//! they are filled by rayon.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hybrid::{self, Drive, HybridState, SimConfig};
use crate::ode::{self, AdaptiveOpts};
use crate::par;

/// Maximum allowed |Tr ρ − 1| during evolution.
const TRACE_TOL: f64 = 1e-6;
/// Top-level population that triggers [`Error::TruncationOverflow`].
const TOP_LEVEL_TOL: f64 = 1e-6;

/// Hermitian, unit-trace (up to monitored deficit) density matrix in a
/// truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    dim: usize,
    data: DMatrix<Complex64>,
}

impl FockDensityMatrix {
    /// Wrap a matrix, verifying Hermiticity to 1e-12 of its scale; the
    /// stored matrix is exactly re-symmetrized.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        assert_eq!(m.nrows(), m.ncols(), "density matrix must be square");
        let scale = m.iter().map(|z| z.norm()).fold(f64::MIN, f64::max).max(1e-300);
        let mut dev: f64 = 0.0;
        for j in 0..m.ncols() {
            for i in 0..=j {
                dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if dev > 1e-12 * scale.max(1.0) {
            return Err(Error::NonHermitianInput(dev));
        }
        let mut out = Self {
            dim: m.nrows(),
            data: m,
        };
        out.hermitize();
        Ok(out)
    }

    /// |0⟩⟨0| in a `dim`-dimensional basis.
    pub fn vacuum(dim: usize) -> Self {
        let mut data = DMatrix::zeros(dim, dim);
        data[(0, 0)] = Complex64::new(1.0, 0.0);
        Self { dim, data }
    }

    /// |n⟩⟨n|.
    pub fn fock(dim: usize, n: usize) -> Self {
        assert!(n < dim);
        let mut data = DMatrix::zeros(dim, dim);
        data[(n, n)] = Complex64::new(1.0, 0.0);
        Self { dim, data }
    }

    /// Normalized projector |ψ⟩⟨ψ| onto `psi`.
    pub fn pure(psi: &DVector<Complex64>) -> Self {
        let norm = psi.norm();
        let v = psi / Complex64::new(norm, 0.0);
        let dim = v.len();
        let data = DMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj());
        Self { dim, data }
    }

    /// Thermal state with occupation `n_th` (geometric weights).
    pub fn thermal(dim: usize, n_th: f64) -> Self {
        let mut data = DMatrix::zeros(dim, dim);
        if n_th <= 0.0 {
            data[(0, 0)] = Complex64::new(1.0, 0.0);
        } else {
            let q = n_th / (1.0 + n_th);
            for n in 0..dim {
                data[(n, n)] = Complex64::new(q.powi(n as i32) / (1.0 + n_th), 0.0);
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|n| self.data[(n, n)].re).sum()
    }

    /// Total population of the top `levels` Fock levels.
    pub fn top_population(&self, levels: usize) -> f64 {
        (self.dim.saturating_sub(levels)..self.dim)
            .map(|n| self.data[(n, n)].re)
            .sum()
    }

    /// ρ ← (ρ + ρ†)/2.
    pub fn hermitize(&mut self) {
        hermitize_matrix(&mut self.data);
    }
}

fn hermitize_matrix(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    for j in 0..n {
        m[(j, j)] = Complex64::new(m[(j, j)].re, 0.0);
        for i in 0..j {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

/// Precomputed generator of the master equation for one configuration and
/// truncation dimension.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    dim: usize,
    /// Rotating-frame level energies E_rf(n).
    e_rf: Vec<f64>,
    sqrt_n: Vec<f64>,
    drive: Drive,
    /// κ(n_b + 1), multiplying D[a].
    pub kappa_down: f64,
    /// κ n_b, multiplying D[a†].
    pub kappa_up: f64,
}

/// Build the Hamiltonian/dissipator data for `config` on `dim` Fock levels.
pub fn build_generator(config: &SimConfig, dim: usize) -> LindbladGenerator {
    assert!(dim >= 2, "need at least two Fock levels");
    let mut e_rf = vec![0.0; dim];
    for n in 1..dim {
        // E(n) = E(n-1) + [omega_r(n-1) - omega_d]
        e_rf[n] = e_rf[n - 1] + config.detuning + config.nonlinearity.shift((n - 1) as f64);
    }
    let sqrt_n = (0..dim).map(|n| (n as f64).sqrt()).collect();
    LindbladGenerator {
        dim,
        e_rf,
        sqrt_n,
        drive: config.drive.clone(),
        kappa_down: config.kappa * (config.n_b + 1.0),
        kappa_up: config.kappa * config.n_b,
    }
}

impl LindbladGenerator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn energies(&self) -> &[f64] {
        &self.e_rf
    }

    /// Dense H(t) = diag(E_rf) + ε(t)a† + ε*(t)a, for inspection and tests.
    pub fn hamiltonian(&self, t: f64) -> DMatrix<Complex64> {
        let eps = self.drive.amplitude(t);
        let mut h = DMatrix::zeros(self.dim, self.dim);
        for n in 0..self.dim {
            h[(n, n)] = Complex64::new(self.e_rf[n], 0.0);
            if n + 1 < self.dim {
                // a†[n+1, n] = sqrt(n+1), a[n, n+1] = sqrt(n+1)
                h[(n + 1, n)] = eps * self.sqrt_n[n + 1];
                h[(n, n + 1)] = eps.conj() * self.sqrt_n[n + 1];
            }
        }
        h
    }

    /// Jump operators with their rates: [√(κ(n_b+1))·a, √(κn_b)·a†] given as
    /// (rate, operator) pairs; the a† entry is omitted at n_b = 0.
    pub fn jump_operators(&self) -> Vec<(f64, DMatrix<Complex64>)> {
        let mut a = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for n in 1..self.dim {
            a[(n - 1, n)] = Complex64::new(self.sqrt_n[n], 0.0);
        }
        let mut ops = vec![(self.kappa_down, a.clone())];
        if self.kappa_up > 0.0 {
            ops.push((self.kappa_up, a.transpose()));
        }
        ops
    }

    #[inline]
    fn fill_column(&self, j: usize, col: &mut [Complex64], rho: &[Complex64], eps: Complex64) {
        let n = self.dim;
        let at = |i: usize, jj: usize| rho[i + jj * n];
        let eps_c = eps.conj();
        let sq = &self.sqrt_n;
        for i in 0..n {
            let r = at(i, j);
            // i(rho H - H rho): level energies and drive couplings.
            let mut acc = Complex64::i() * ((self.e_rf[j] - self.e_rf[i]) * r);
            let mut drive = Complex64::new(0.0, 0.0);
            if j + 1 < n {
                drive += eps * (sq[j + 1] * at(i, j + 1));
            }
            if i > 0 {
                drive -= eps * (sq[i] * at(i - 1, j));
            }
            if j > 0 {
                drive += eps_c * (sq[j] * at(i, j - 1));
            }
            if i + 1 < n {
                drive -= eps_c * (sq[i + 1] * at(i + 1, j));
            }
            acc += Complex64::i() * drive;
            // kappa (n_b+1) D[a]
            let mut loss = -0.5 * (i + j) as f64 * r;
            if i + 1 < n && j + 1 < n {
                loss += sq[i + 1] * sq[j + 1] * at(i + 1, j + 1);
            }
            acc += self.kappa_down * loss;
            // kappa n_b D[a†]
            if self.kappa_up > 0.0 {
                let mut gain = -0.5 * (i + j + 2) as f64 * r;
                if i > 0 && j > 0 {
                    gain += sq[i] * sq[j] * at(i - 1, j - 1);
                }
                acc += self.kappa_up * gain;
            }
            col[i] = acc;
        }
    }

    /// dρ/dt into `out`; parallel over columns when the `parallel` feature
    /// is enabled.
    pub fn rhs_into(&self, t: f64, rho: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
        let eps = self.drive.amplitude(t);
        let dim = self.dim;
        let rho_slice = rho.as_slice();
        par::for_each_chunk(out.as_mut_slice(), dim, |j, col| {
            self.fill_column(j, col, rho_slice, eps);
        });
    }

    /// Single-threaded reference path; also what [`Self::rhs_into`] runs when
    /// the `parallel` feature is disabled.
    pub fn rhs_into_serial(&self, t: f64, rho: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
        let eps = self.drive.amplitude(t);
        let dim = self.dim;
        let rho_slice = rho.as_slice();
        for (j, col) in out.as_mut_slice().chunks_mut(dim).enumerate() {
            self.fill_column(j, col, rho_slice, eps);
        }
    }
}

/// Integrate the master equation, sampling the density matrix at
/// `sample_times`. Hermiticity is restored after every accepted step; the
/// trace and the top-level population are monitored at every sample.
pub fn evolve(
    rho0: &FockDensityMatrix,
    config: &SimConfig,
    sample_times: &[f64],
) -> Result<Vec<(f64, FockDensityMatrix)>> {
    config.validate()?;
    let gen = build_generator(config, rho0.dim());
    let rhs = |t: f64, y: &DMatrix<Complex64>, dy: &mut DMatrix<Complex64>| {
        gen.rhs_into(t, y, dy);
    };
    let mut raw: Vec<(f64, DMatrix<Complex64>)> = Vec::with_capacity(sample_times.len());
    let observer = |t: f64, y: &DMatrix<Complex64>| {
        raw.push((t, y.clone()));
    };
    let mut hermitize = |y: &mut DMatrix<Complex64>| hermitize_matrix(y);
    let opts = AdaptiveOpts {
        rtol: 1e-8,
        atol: 1e-12,
        ..Default::default()
    };
    ode::integrate_adaptive(
        rhs,
        0.0,
        config.t_final,
        &rho0.data,
        sample_times,
        observer,
        Some(&mut hermitize),
        &opts,
    )?;

    let mut out = Vec::with_capacity(raw.len());
    for (t, mut m) in raw {
        hermitize_matrix(&mut m);
        let rho = FockDensityMatrix { dim: m.nrows(), data: m };
        let trace = rho.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::IntegrationFailure {
                t,
                reason: format!("trace drifted to {trace}"),
            });
        }
        if rho.top_population(1) > TOP_LEVEL_TOL {
            return Err(Error::TruncationOverflow(format!(
                "top-level population {:.3e} at t = {t}; increase the Fock dimension",
                rho.top_population(1)
            )));
        }
        out.push((t, rho));
    }
    Ok(out)
}

/// First and second moments (⟨a⟩, ⟨a²⟩, ⟨a†a⟩), normalized by Tr ρ.
pub fn moments(rho: &FockDensityMatrix) -> (Complex64, Complex64, f64) {
    let n = rho.dim;
    let d = &rho.data;
    let mut mean_a = Complex64::default();
    let mut mean_a2 = Complex64::default();
    let mut mean_n = 0.0;
    for k in 0..n {
        mean_n += k as f64 * d[(k, k)].re;
        if k + 1 < n {
            mean_a += ((k + 1) as f64).sqrt() * d[(k + 1, k)];
        }
        if k + 2 < n {
            mean_a2 += (((k + 1) * (k + 2)) as f64).sqrt() * d[(k + 2, k)];
        }
    }
    let tr = rho.trace();
    (mean_a / tr, mean_a2 / tr, mean_n / tr)
}

/// Truncation dimension for `config` via a cheap hybrid pre-run:
/// N = ⌈n_peak + 8√(W₁_max·n_peak)⌉ + 30 with n_peak = max|β(t)|².
pub fn suggest_dim(config: &SimConfig) -> Result<usize> {
    let samples: Vec<f64> = (0..=600)
        .map(|i| i as f64 * config.t_final / 600.0)
        .collect();
    let traj = hybrid::evolve(HybridState::vacuum(), config, &samples)?;
    let n_peak = traj
        .iter()
        .map(|p| p.state.beta.norm_sqr())
        .fold(0.0, f64::max);
    let w1_max = traj.iter().map(|p| p.state.w1).fold(0.0, f64::max);
    Ok((n_peak + 8.0 * (w1_max * n_peak).sqrt()).ceil() as usize + 30)
}
