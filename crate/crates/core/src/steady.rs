//! Closed-form steady-state analytics for the Kerr resonator: classical
//! amplitude branches, squeezing/heating formulas, the 3 dB bound, and the
//! small-damping (Dykman) limit.
//!
//! With ñ = n_st|η|/κ, ε̃ = ε√|η|/κ^{3/2} and Δω̃_d = −sign(η)(ω_r0−ω_d)/κ,
//! the steady photon number solves the cubic
//!
//!   ñ[(ñ − Δω̃_d)² + 1/4] = ε̃²,
//!
//! which has one or three positive roots; three iff Δω̃_d > √3/2 and ε̃ lies
//! inside the bistability window. The steady shape follows from
//!
//!   4(D₀ ± b) = c_b/(1 ∓ s),   s = 2η_β|β|² sin(Δθ)/κ ∈ [0, 1),
//!
//! so the squeeze factor [4(D₀−b)]⁻¹ is bounded by 2/c_b < 2 (the 3 dB
//! limit); s → 1 marks the parametric instability where D₀+b diverges, and
//! s > 1 holds exactly on the (classically unstable) middle branch.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::hybrid::{Nonlinearity, SimConfig};
use crate::par;

/// Position of a steady root on the classical response curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchLabel {
    Lower,
    /// Classically unstable; the shape formulas are outside validity here.
    Middle,
    Upper,
}

impl std::fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BranchLabel::Lower => write!(f, "lower"),
            BranchLabel::Middle => write!(f, "middle"),
            BranchLabel::Upper => write!(f, "upper"),
        }
    }
}

/// One classical steady-state solution.
#[derive(Debug, Clone, Copy)]
pub struct SteadyBranch {
    pub beta: Complex64,
    /// Dimensionless photon number ñ = n_st·|η|/κ.
    pub n_tilde: f64,
    pub label: BranchLabel,
}

impl SteadyBranch {
    pub fn is_stable(&self) -> bool {
        self.label != BranchLabel::Middle
    }
}

/// Real roots of x³ + a₂x² + a₁x + a₀, ascending, via the trigonometric /
/// hyperbolic closed forms plus one Newton polish per root.
fn cubic_roots(a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2.powi(3) / 27.0 - a2 * a1 / 3.0 + a0;
    let shift = -a2 / 3.0;
    let disc = -4.0 * p.powi(3) - 27.0 * q * q;
    let disc_scale = 4.0 * p.abs().powi(3) + 27.0 * q * q;

    // Treat a vanishing discriminant (fold boundary, double root) as the
    // three-root case; the clamped arccos merges the pair exactly.
    let mut roots: Vec<f64> = if p < 0.0 && disc > -1e-9 * disc_scale {
        // Three distinct real roots (requires p < 0).
        let m = 2.0 * (-p / 3.0).sqrt();
        let acos_arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = acos_arg.acos() / 3.0;
        (0..3)
            .map(|k| shift + m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect()
    } else if p.abs() < 1e-12 && q.abs() < 1e-12 {
        // Triple root.
        vec![shift; 3]
    } else if 4.0 * p.abs().powi(3) < 1e-12 * 27.0 * q * q {
        // |p|^3 << q^2: the depressed cubic is effectively x^3 = -q; the
        // Newton polish recovers the O(p) correction.
        vec![shift + (-q).cbrt()]
    } else if p < 0.0 {
        // One real root, cosh branch (|q| dominates).
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = -3.0 * q.abs() / (2.0 * p) * (-3.0 / p).sqrt();
        let x = -q.signum() * m * (arg.max(1.0).acosh() / 3.0).cosh();
        vec![shift + x]
    } else {
        // One real root, sinh branch.
        let m = 2.0 * (p / 3.0).sqrt();
        let arg = 3.0 * q / (2.0 * p) * (3.0 / p).sqrt();
        let x = -m * (arg.asinh() / 3.0).sinh();
        vec![shift + x]
    };

    // Newton polish on the original cubic; skipped near degenerate roots
    // where f' ~ 0 would produce wild steps.
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let f = ((*r + a2) * *r + a1) * *r + a0;
            let df = (3.0 * *r + 2.0 * a2) * *r + a1;
            let step = f / df;
            if step.is_finite() && step.abs() < 1e-3 * (1.0 + r.abs()) {
                *r -= step;
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Positive roots ñ of ñ[(ñ − Δω̃_d)² + 1/4] = ε̃².
pub fn steady_photon_roots(eps_tilde: f64, delta_omega_tilde: f64) -> Vec<f64> {
    assert!(eps_tilde >= 0.0);
    if eps_tilde == 0.0 {
        return vec![0.0];
    }
    let roots = cubic_roots(
        -2.0 * delta_omega_tilde,
        delta_omega_tilde * delta_omega_tilde + 0.25,
        -eps_tilde * eps_tilde,
    );
    roots.into_iter().filter(|&r| r > -1e-12).map(|r| r.max(0.0)).collect()
}

/// Classical steady centers in the dimensionless frame (κ = 1, η = −1,
/// ε = ε̃ real), labeled lower/middle/upper.
///
/// A single root is labeled `Lower` when it continues the low-amplitude
/// response (below the bistability window at Δω̃_d > √3/2) and `Upper`
/// otherwise.
pub fn steady_centers(eps_tilde: f64, delta_omega_tilde: f64) -> Vec<SteadyBranch> {
    let roots = steady_photon_roots(eps_tilde, delta_omega_tilde);
    let config = crate::hybrid::Dimensionless {
        eps_tilde,
        delta_omega_tilde,
        sign_eta: -1.0,
    }
    .to_config(0.0, 1.0, 1.0);
    label_roots(&roots, delta_omega_tilde)
        .into_iter()
        .map(|(n_tilde, label)| SteadyBranch {
            beta: center_for_root(n_tilde, &config),
            n_tilde,
            label,
        })
        .collect()
}

fn label_roots(roots: &[f64], delta_omega_tilde: f64) -> Vec<(f64, BranchLabel)> {
    match roots.len() {
        3 => vec![
            (roots[0], BranchLabel::Lower),
            (roots[1], BranchLabel::Middle),
            (roots[2], BranchLabel::Upper),
        ],
        1 => {
            let label = if delta_omega_tilde > 3f64.sqrt() / 2.0
                && roots[0] < 2.0 * delta_omega_tilde / 3.0
            {
                BranchLabel::Lower
            } else {
                BranchLabel::Upper
            };
            vec![(roots[0], label)]
        }
        // Tangent cases collapse to the generic ordering.
        _ => roots
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let label = if i == 0 { BranchLabel::Lower } else { BranchLabel::Upper };
                (r, label)
            })
            .collect(),
    }
}

/// β for a photon-number root of `config`: β = −iε/[i(Δ + ηn) + κ/2].
fn center_for_root(n_tilde: f64, config: &SimConfig) -> Complex64 {
    let (kappa, eta) = match config.nonlinearity {
        Nonlinearity::Kerr { eta } => (config.kappa, eta),
        Nonlinearity::Linear => (config.kappa, 0.0),
    };
    let n = if eta == 0.0 { 0.0 } else { n_tilde * kappa / eta.abs() };
    let eps = config.drive.amplitude(f64::INFINITY);
    let denom = Complex64::new(0.5 * kappa, config.detuning + eta * n);
    -Complex64::i() * eps / denom
}

/// Steady branches for a physical configuration (constant drive assumed;
/// the last drive segment is used). A linear resonator has the single
/// closed-form branch.
pub fn steady_branches(config: &SimConfig) -> Result<Vec<SteadyBranch>> {
    config.validate()?;
    match config.nonlinearity {
        Nonlinearity::Linear => Ok(vec![SteadyBranch {
            beta: center_for_root(0.0, config),
            n_tilde: 0.0,
            label: BranchLabel::Upper,
        }]),
        Nonlinearity::Kerr { eta } => {
            let dl = crate::hybrid::rescale(config)?;
            let roots = steady_photon_roots(dl.eps_tilde, dl.delta_omega_tilde);
            let _ = eta;
            Ok(label_roots(&roots, dl.delta_omega_tilde)
                .into_iter()
                .map(|(n_tilde, label)| SteadyBranch {
                    beta: center_for_root(n_tilde, config),
                    n_tilde,
                    label,
                })
                .collect())
        }
    }
}

/// True within a small box around the bistability onset at
/// ε̃ = 3^{−3/4} ≈ 0.44, Δω̃_d = √3/2, where the cubic degenerates to a
/// triple root.
pub fn near_critical_point(eps_tilde: f64, delta_omega_tilde: f64) -> bool {
    (eps_tilde - 3f64.powf(-0.75)).abs() < 0.01
        && (delta_omega_tilde - 3f64.sqrt() / 2.0).abs() < 0.01
}

/// Largest number of (nearly) coincident roots; 3 flags the critical point.
pub fn root_multiplicity(branches: &[SteadyBranch]) -> usize {
    let mut best = 1;
    for i in 0..branches.len() {
        let mut count = 1;
        for j in 0..branches.len() {
            if i != j {
                let scale = branches[i].n_tilde.abs().max(1e-6);
                if (branches[i].n_tilde - branches[j].n_tilde).abs() < 1e-5 * scale.max(1.0) {
                    count += 1;
                }
            }
        }
        best = best.max(count);
    }
    best
}

/// Steady-state Gaussian shape at a classical root.
#[derive(Debug, Clone, Copy)]
pub struct SteadyShape {
    pub gauss: GaussianState,
    /// [4(D₀−b)]⁻¹.
    pub squeeze_factor: f64,
    /// 4(D₀+b).
    pub unsqueeze_factor: f64,
}

/// Evaluate the steady-state shape formulas at the root `beta`.
///
/// Fails with [`Error::InstabilityBound`] when 2η_β|β|²sin(Δθ) ≥ κ (the
/// middle branch, and the fold points where D₀+b diverges).
pub fn steady_shape(beta: Complex64, config: &SimConfig) -> Result<SteadyShape> {
    let kappa = config.kappa;
    let c_b = config.coth_factor();
    let n = beta.norm_sqr();
    let eta_beta = config.nonlinearity.slope(n);

    if eta_beta == 0.0 || n == 0.0 {
        // Linear limit: thermal shape, no squeezing.
        let gauss = GaussianState::new(beta, 0.25 * c_b, 0.0, 0.0)?;
        return Ok(SteadyShape {
            gauss,
            squeeze_factor: 1.0 / c_b,
            unsqueeze_factor: c_b,
        });
    }

    let eps = config.drive.amplitude(f64::INFINITY);
    let re_ratio = (eps / beta).re;
    let d = eta_beta * n - re_ratio;
    // Two-argument form of the steady angle; continuous at d = 0 and
    // guaranteeing eta_beta * sin(dtheta) >= 0.
    let delta_theta = if eta_beta > 0.0 {
        (0.5 * kappa).atan2(d)
    } else {
        (-0.5 * kappa).atan2(-d)
    };
    let s = 2.0 * eta_beta * n * delta_theta.sin() / kappa;
    debug_assert!(s >= 0.0);
    if s >= 1.0 {
        return Err(Error::InstabilityBound);
    }
    let d0 = 0.25 * c_b / (1.0 - s * s);
    let b = d0 * s;
    let theta = 2.0 * beta.arg() + delta_theta;
    let gauss = GaussianState::new(beta, d0, b, theta)?;
    Ok(SteadyShape {
        gauss,
        squeeze_factor: gauss.squeeze_factor(),
        unsqueeze_factor: gauss.unsqueeze_factor(),
    })
}

/// Steady analytics at one sweep grid point.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub eps_tilde: f64,
    pub delta_omega_tilde: f64,
    pub n_b: f64,
    /// Shape is `None` where the formulas are outside validity
    /// (InstabilityBound; always the middle branch).
    pub branches: Vec<(SteadyBranch, Option<SteadyShape>)>,
}

fn sweep_one(&(eps_tilde, delta_omega_tilde, n_b): &(f64, f64, f64)) -> SweepPoint {
    let config = crate::hybrid::Dimensionless {
        eps_tilde,
        delta_omega_tilde,
        sign_eta: -1.0,
    }
    .to_config(n_b, 1.0, 1.0);
    let branches = steady_centers(eps_tilde, delta_omega_tilde)
        .into_iter()
        .map(|br| {
            let shape = steady_shape(br.beta, &config).ok();
            (br, shape)
        })
        .collect();
    SweepPoint {
        eps_tilde,
        delta_omega_tilde,
        n_b,
        branches,
    }
}

/// Evaluate steady analytics over `(ε̃, Δω̃_d, n_b)` grid points; parallel
/// when the `parallel` feature is enabled.
pub fn sweep_steady(points: &[(f64, f64, f64)]) -> Vec<SweepPoint> {
    par::map_collect(points, sweep_one)
}

/// Single-threaded reference path for [`sweep_steady`].
pub fn sweep_steady_serial(points: &[(f64, f64, f64)]) -> Vec<SweepPoint> {
    points.iter().map(sweep_one).collect()
}

/// Supremum of the steady squeeze factor over the sweep (branches inside
/// the validity region only).
pub fn three_db_bound_check(points: &[(f64, f64, f64)]) -> f64 {
    sweep_steady(points)
        .iter()
        .flat_map(|p| p.branches.iter().filter_map(|(_, s)| s.as_ref()))
        .map(|s| s.squeeze_factor)
        .fold(0.0, f64::max)
}

/// One branch of the κ → 0 steady-state limit.
#[derive(Debug, Clone, Copy)]
pub struct DykmanBranch {
    /// Signed squeeze parameter; ξ < 0 means θ = π (lower branch).
    pub xi: f64,
    pub n_th: f64,
}

/// Result of [`dykman_limit`]; `ambiguous` is set inside the bistable window
/// 0 < β_p < 4/27, where both physical branches are returned and the caller
/// chooses.
#[derive(Debug, Clone, Copy)]
pub struct DykmanResult {
    pub upper: DykmanBranch,
    pub lower: Option<DykmanBranch>,
    pub ambiguous: bool,
}

/// Small-damping limit of the steady shape for a Duffing oscillator, as a
/// function of β_p = ε²η/(ω_d − ω_r0)³:
///
///   ξ = (1/4)·ln[(3Q² − 1)/(Q² − 1)],  Q(Q² − 1) = √β_p,
///   n_th = n_b + (2n_b + 1)·sinh²|ξ|,
///
/// taking the largest real Q for the upper branch, the middle root for the
/// lower branch (θ = π), and the purely imaginary Q when β_p < 0.
pub fn dykman_limit(beta_param: f64, n_b: f64) -> Result<DykmanResult> {
    if beta_param == 0.0 || !beta_param.is_finite() {
        return Err(Error::InvalidConfig(
            "dykman_limit is undefined at beta_param = 0".into(),
        ));
    }
    let branch = |q_sq: f64| -> DykmanBranch {
        let xi = 0.25 * ((3.0 * q_sq - 1.0) / (q_sq - 1.0)).ln();
        let r = xi.abs();
        DykmanBranch {
            xi,
            n_th: n_b + (2.0 * n_b + 1.0) * r.sinh().powi(2),
        }
    };

    if beta_param < 0.0 {
        // Q = -is with s(s^2+1) = sqrt(|beta_param|): roots of s^3 + s - rt.
        let rt = (-beta_param).sqrt();
        let roots = cubic_roots(0.0, 1.0, -rt);
        let s = roots[0];
        // Q^2 = -s^2.
        let q_sq = -s * s;
        let xi = 0.25 * ((3.0 * q_sq - 1.0) / (q_sq - 1.0)).ln();
        return Ok(DykmanResult {
            upper: DykmanBranch {
                xi,
                n_th: n_b + (2.0 * n_b + 1.0) * xi.abs().sinh().powi(2),
            },
            lower: None,
            ambiguous: false,
        });
    }

    let rt = beta_param.sqrt();
    let roots = cubic_roots(0.0, -1.0, -rt);
    if beta_param > 4.0 / 27.0 {
        let q = *roots.last().unwrap();
        Ok(DykmanResult {
            upper: branch(q * q),
            lower: None,
            ambiguous: false,
        })
    } else {
        // Bistable window: three real roots; largest -> upper branch,
        // middle -> lower branch.
        let q_upper = roots[2];
        let q_lower = roots[1];
        Ok(DykmanResult {
            upper: branch(q_upper * q_upper),
            lower: Some(branch(q_lower * q_lower)),
            ambiguous: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hybrid::{hybrid_rhs, Dimensionless, Drive, HybridState};
    use crate::FockGaussianParams;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn critical_point_is_a_triple_root() {
        let eps = 3f64.powf(-0.75);
        let dwt = 3f64.sqrt() / 2.0;
        let branches = steady_centers(eps, dwt);
        assert_eq!(root_multiplicity(&branches), 3);
        for b in &branches {
            assert_abs_diff_eq!(b.n_tilde, 1.0 / 3f64.sqrt(), epsilon = 1e-4);
        }
    }

    #[test]
    fn zero_detuning_is_monostable() {
        for eps in [0.05, 0.4, 3.0, 20.0] {
            let branches = steady_centers(eps, 0.0);
            assert_eq!(branches.len(), 1, "eps_tilde = {eps}");
            assert_eq!(branches[0].label, BranchLabel::Upper);
        }
    }

    #[test]
    fn bistability_window_boundaries_at_detuning_two() {
        let dwt = 2.0f64;
        let disc = (dwt * dwt - 0.75).sqrt();
        let n_plus = (2.0 * dwt + disc) / 3.0;
        let n_minus = (2.0 * dwt - disc) / 3.0;
        let eps_minus = (n_plus * (n_plus - dwt).powi(2) + n_plus / 4.0).sqrt();
        let eps_plus = (n_minus * (n_minus - dwt).powi(2) + n_minus / 4.0).sqrt();
        assert!(eps_minus < eps_plus);
        // Inside the window: three roots; outside: one.
        let inside = steady_centers(0.5 * (eps_minus + eps_plus), dwt);
        assert_eq!(inside.len(), 3);
        assert!(!inside[1].is_stable());
        assert_eq!(steady_centers(0.9 * eps_minus, dwt).len(), 1);
        assert_eq!(steady_centers(1.1 * eps_plus, dwt).len(), 1);
        assert_eq!(
            steady_centers(0.9 * eps_minus, dwt)[0].label,
            BranchLabel::Lower
        );
        assert_eq!(
            steady_centers(1.1 * eps_plus, dwt)[0].label,
            BranchLabel::Upper
        );
        // Roots merge at the boundaries.
        let at_minus = steady_centers(eps_minus, dwt);
        assert!(root_multiplicity(&at_minus) >= 2, "{at_minus:?}");
    }

    #[test]
    fn residual_of_steady_centers() {
        for (eps, dwt) in [(0.4, 0.0), (1.2, 2.0), (0.3, 1.5), (10.0, 3.0)] {
            let config = Dimensionless {
                eps_tilde: eps,
                delta_omega_tilde: dwt,
                sign_eta: -1.0,
            }
            .to_config(0.0, 1.0, 1.0);
            for br in steady_centers(eps, dwt) {
                let state = HybridState::new(br.beta, 1.0, 1.0, 0.0);
                let d = hybrid_rhs(0.0, &state, &config);
                assert!(
                    d.beta.norm() < 1e-10 * eps,
                    "residual {:.2e} at eps={eps}, dwt={dwt}, {:?}",
                    d.beta.norm(),
                    br.label
                );
            }
        }
    }

    #[test]
    fn linear_steady_shape_is_thermal() {
        let config = SimConfig {
            kappa: 1.0,
            detuning: 0.3,
            nonlinearity: Nonlinearity::Linear,
            drive: Drive::Constant(Complex64::new(1.0, 0.0)),
            n_b: 0.25,
            t_final: 1.0,
            dt_out: 0.1,
        };
        let branches = steady_branches(&config).unwrap();
        assert_eq!(branches.len(), 1);
        let shape = steady_shape(branches[0].beta, &config).unwrap();
        let c_b = 1.5;
        assert_abs_diff_eq!(shape.gauss.d0(), c_b / 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(shape.gauss.b(), 0.0);
        assert_abs_diff_eq!(shape.squeeze_factor, 1.0 / c_b, epsilon = 1e-14);
    }

    #[test]
    fn steady_shape_is_fixed_point_of_hybrid_rhs() {
        let config = Dimensionless {
            eps_tilde: 0.40,
            delta_omega_tilde: 0.0,
            sign_eta: -1.0,
        }
        .to_config(3.2e-3, 1.0, 1.0);
        let br = steady_centers(0.40, 0.0)[0];
        let config = SimConfig { n_b: 3.2e-3, ..config };
        let shape = steady_shape(br.beta, &config).unwrap();
        let params = FockGaussianParams::from_phase_space(&shape.gauss).unwrap();
        let state = HybridState::new(br.beta, params.w1, params.w2, params.k);
        let d = hybrid_rhs(0.0, &state, &config);
        assert!(d.beta.norm() < 1e-8, "beta residual {:.2e}", d.beta.norm());
        assert!(d.w1.abs() < 1e-8, "W1 residual {:.2e}", d.w1);
        assert!(d.w2.abs() < 1e-8, "W2 residual {:.2e}", d.w2);
        assert!(d.k.abs() < 1e-8, "K residual {:.2e}", d.k);
        // Ratio identity b/D0 = s by construction.
        let s = 2.0 * (-1.0) * br.beta.norm_sqr()
            * (shape.gauss.theta() - 2.0 * br.beta.arg()).sin();
        assert_relative_eq!(shape.gauss.b() / shape.gauss.d0(), s, max_relative = 1e-12);
    }

    #[test]
    fn middle_branch_is_outside_validity() {
        let dwt = 2.0;
        let eps = 1.05; // inside the window for dwt = 2
        let config = Dimensionless {
            eps_tilde: eps,
            delta_omega_tilde: dwt,
            sign_eta: -1.0,
        }
        .to_config(0.0, 1.0, 1.0);
        let branches = steady_centers(eps, dwt);
        assert_eq!(branches.len(), 3);
        for br in &branches {
            let shape = steady_shape(br.beta, &config);
            if br.is_stable() {
                assert!(shape.is_ok());
            } else {
                assert!(matches!(shape, Err(Error::InstabilityBound)));
            }
        }
    }

    #[test]
    fn three_db_on_a_coarse_grid() {
        let mut points = Vec::new();
        for i in 0..20 {
            for j in 0..20 {
                let eps = 0.02 + 0.41 * i as f64 / 19.0;
                let dwt = -3.0 + 3.8 * j as f64 / 19.0;
                points.push((eps, dwt, 0.0));
                points.push((eps, dwt, 0.5));
            }
        }
        let max = three_db_bound_check(&points);
        assert!(max < 2.0, "max squeeze factor {max}");
        // Serial path agrees.
        let serial = sweep_steady_serial(&points);
        let parallel = sweep_steady(&points);
        for (a, b) in serial.iter().zip(&parallel) {
            assert_eq!(a.branches.len(), b.branches.len());
        }
    }

    #[test]
    fn dykman_reference_point() {
        // beta_param = 2 gives Q = sqrt(2): xi = ln(5)/4.
        let res = dykman_limit(2.0, 0.0).unwrap();
        assert!(!res.ambiguous);
        assert_relative_eq!(res.upper.xi, 5f64.ln() / 4.0, max_relative = 1e-12);
        assert_relative_eq!(
            res.upper.n_th,
            res.upper.xi.sinh().powi(2),
            max_relative = 1e-12
        );
        // Thermal floor at n_b > 0.
        let warm = dykman_limit(2.0, 0.1).unwrap();
        assert_relative_eq!(
            warm.upper.n_th,
            0.1 + 1.2 * res.upper.xi.sinh().powi(2),
            max_relative = 1e-12
        );
    }

    #[test]
    fn dykman_branches_in_the_bistable_window() {
        let res = dykman_limit(0.1, 0.0).unwrap();
        assert!(res.ambiguous);
        let lower = res.lower.unwrap();
        assert!(lower.xi < 0.0, "lower-branch xi = {}", lower.xi);
        assert!(res.upper.xi > 0.0);
        // Negative beta_param: single real answer.
        let neg = dykman_limit(-0.5, 0.0).unwrap();
        assert!(!neg.ambiguous);
        assert!(neg.upper.xi > 0.0);
        assert!(neg.lower.is_none());
    }

    #[test]
    fn dykman_is_the_small_kappa_limit_of_steady_shape() {
        // eps^2 eta / (omega_d - omega_r0)^3 = 2 with eta < 0.
        let eps = 1.0;
        let detuning = 1.0; // omega_r0 - omega_d = 1 => (omega_d - omega_r0)^3 = -1
        let eta = -2.0;
        let kappa = 1e-4;
        let config = SimConfig {
            kappa,
            detuning,
            nonlinearity: Nonlinearity::Kerr { eta },
            drive: Drive::Constant(Complex64::new(eps, 0.0)),
            n_b: 0.05,
            t_final: 1.0,
            dt_out: 0.1,
        };
        let branches = steady_branches(&config).unwrap();
        assert_eq!(branches.len(), 1);
        let shape = steady_shape(branches[0].beta, &config).unwrap();
        let dsts = shape.gauss.to_dsts();
        let reference = dykman_limit(2.0, 0.05).unwrap();
        assert_relative_eq!(dsts.r, reference.upper.xi.abs(), max_relative = 1e-3);
        assert_relative_eq!(dsts.n_th, reference.upper.n_th, max_relative = 1e-3);
    }
}
