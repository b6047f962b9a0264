//! Mode dispatch: run the requested scenario and write its outputs.

use std::path::Path;
use std::time::Instant;

use hybrid_gaussian::hybrid::{self, HybridState, IntegratorKind, TrajectoryPoint};
use hybrid_gaussian::lindblad::{self, FockDensityMatrix};
use hybrid_gaussian::steady;
use hybrid_gaussian::{metrics, Error, GaussianState, KB_OVER_HBAR};
use serde_json::json;

use crate::config::{sweep_grid, Mode, RunSpec};
use crate::output::{fmt, trajectory_csv, write_atomic};

#[derive(Debug)]
pub enum RunError {
    Io(std::io::Error),
    Numerical(String),
    Truncation(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io(_) => 1,
            RunError::Numerical(_) => 3,
            RunError::Truncation(_) => 4,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Io(e) => write!(f, "i/o error: {e}"),
            RunError::Numerical(e) => write!(f, "numerical failure: {e}"),
            RunError::Truncation(e) => write!(f, "truncation overflow: {e}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::TruncationOverflow(msg) => RunError::Truncation(msg),
            other => RunError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

pub struct Options {
    pub fixed_step: Option<f64>,
    pub fock_dim: Option<usize>,
}

/// Execute the run; returns the summary JSON (also written to disk).
pub fn run(spec: &RunSpec, out_dir: &Path, opts: &Options) -> Result<serde_json::Value, RunError> {
    std::fs::create_dir_all(out_dir)?;
    let summary = match spec.mode {
        Mode::Hybrid => run_hybrid(spec, out_dir, opts)?,
        Mode::Lindblad => run_lindblad(spec, out_dir, opts)?,
        Mode::Compare => run_compare(spec, out_dir, opts)?,
        Mode::Steady => run_steady(spec, out_dir)?,
        Mode::Sweep => run_sweep(spec, out_dir)?,
    };
    write_atomic(
        &out_dir.join("summary.json"),
        &format!("{:#}\n", summary),
    )?;
    Ok(summary)
}

fn integrator(opts: &Options) -> IntegratorKind {
    match opts.fixed_step {
        Some(dt) => IntegratorKind::FixedRk4 { dt },
        None => IntegratorKind::Adaptive,
    }
}

/// Times at which the Eq.-68-style validity criterion |β|² > [4(D₀+b)]³
/// fails; the hybrid description is then suspect.
fn validity_violations(traj: &[TrajectoryPoint]) -> Vec<f64> {
    traj.iter()
        .filter(|p| p.state.beta.norm_sqr() <= p.gauss.unsqueeze_factor().powi(3))
        .map(|p| p.t)
        .collect()
}

fn trajectory_stats(traj: &[TrajectoryPoint], omega_r0: Option<f64>) -> serde_json::Value {
    let last = traj.last().expect("non-empty trajectory");
    let peak_squeeze = traj.iter().map(|p| p.gauss.squeeze_factor()).fold(0.0, f64::max);
    let peak_unsqueeze = traj
        .iter()
        .map(|p| p.gauss.unsqueeze_factor())
        .fold(0.0, f64::max);
    let max_nbar = traj.iter().map(|p| p.gauss.mean_photon()).fold(0.0, f64::max);
    let n_th = last.gauss.to_dsts().n_th;
    let mut steady = json!({
        "t": last.t,
        "re_beta": last.state.beta.re,
        "im_beta": last.state.beta.im,
        "nbar": last.gauss.mean_photon(),
        "squeeze_factor": last.gauss.squeeze_factor(),
        "unsqueeze_factor": last.gauss.unsqueeze_factor(),
        "n_th": n_th,
    });
    if let Some(w) = omega_r0 {
        steady["t_eff_mk"] =
            json!(last.gauss.effective_temperature(w) / KB_OVER_HBAR * 1e3);
    }
    json!({
        "steady": steady,
        "peak_squeeze_factor": peak_squeeze,
        "peak_unsqueeze_factor": peak_unsqueeze,
        "max_nbar": max_nbar,
    })
}

fn run_hybrid(spec: &RunSpec, out_dir: &Path, opts: &Options) -> Result<serde_json::Value, RunError> {
    let samples = spec.config.sample_times();
    let t0 = Instant::now();
    let traj = hybrid::evolve_with(HybridState::vacuum(), &spec.config, &samples, integrator(opts))?;
    let elapsed = t0.elapsed().as_secs_f64();
    write_atomic(&out_dir.join("trajectory.csv"), &trajectory_csv(&traj, None))?;

    let violations = validity_violations(&traj);
    if let Some(t) = violations.first() {
        eprintln!(
            "warning: validity criterion |beta|^2 > [4(D0+b)]^3 violated at {} of {} samples \
             (first at t = {})",
            violations.len(),
            traj.len(),
            fmt(*t)
        );
    }
    let mut summary = trajectory_stats(&traj, spec.omega_r0);
    summary["mode"] = json!("hybrid");
    summary["samples"] = json!(traj.len());
    summary["validity_warning"] = json!(!violations.is_empty());
    summary["wall_clock_seconds"] = json!({ "hybrid": elapsed });
    if let Some(dl) = spec.dimensionless {
        summary["dimensionless"] = json!({
            "eps_tilde": dl.eps_tilde,
            "delta_omega_tilde": dl.delta_omega_tilde,
            "sign_eta": dl.sign_eta,
        });
    }
    Ok(summary)
}

/// Fock-space shape parameters of a Gaussian state, tolerating a zero
/// center (φ_β := 0 there, as at the vacuum start of an oracle run).
fn lenient_fock_params(g: &GaussianState) -> (f64, f64, f64) {
    let phi = if g.center().norm() > 0.0 { g.center().arg() } else { 0.0 };
    let rel = g.theta() - 2.0 * phi;
    let bracket = g.d0() - g.b() * rel.cos();
    (
        4.0 * bracket,
        bracket / (4.0 * (g.d0().powi(2) - g.b().powi(2))),
        g.b() * rel.sin() / (4.0 * bracket),
    )
}

fn oracle_trajectory(
    oracle: &[(f64, FockDensityMatrix)],
) -> Result<Vec<TrajectoryPoint>, RunError> {
    oracle
        .iter()
        .map(|(t, rho)| {
            let (ma, ma2, mn) = lindblad::moments(rho);
            let gauss = GaussianState::from_moments(ma, ma2, mn)?;
            let (w1, w2, k) = lenient_fock_params(&gauss);
            Ok(TrajectoryPoint {
                t: *t,
                state: HybridState::new(gauss.center(), w1, w2, k),
                gauss,
            })
        })
        .collect()
}

fn resolve_dim(spec: &RunSpec, opts: &Options) -> Result<usize, RunError> {
    if let Some(d) = opts.fock_dim.or(spec.fock_dim) {
        if d < 2 {
            return Err(RunError::Numerical("fock_dim must be at least 2".into()));
        }
        return Ok(d);
    }
    Ok(lindblad::suggest_dim(&spec.config)?)
}

fn run_lindblad(spec: &RunSpec, out_dir: &Path, opts: &Options) -> Result<serde_json::Value, RunError> {
    let dim = resolve_dim(spec, opts)?;
    let samples = spec.config.sample_times();
    let t0 = Instant::now();
    let oracle = lindblad::evolve(&FockDensityMatrix::vacuum(dim), &spec.config, &samples)?;
    let elapsed = t0.elapsed().as_secs_f64();
    let traj = oracle_trajectory(&oracle)?;
    write_atomic(&out_dir.join("trajectory.csv"), &trajectory_csv(&traj, None))?;

    let trace_deviation = oracle
        .iter()
        .map(|(_, rho)| (rho.trace() - 1.0).abs())
        .fold(0.0, f64::max);
    let (_, fit_infidelity) = metrics::gaussian_fit(&oracle.last().unwrap().1)?;
    let mut summary = trajectory_stats(&traj, spec.omega_r0);
    summary["mode"] = json!("lindblad");
    summary["samples"] = json!(traj.len());
    summary["fock_dim"] = json!(dim);
    summary["max_trace_deviation"] = json!(trace_deviation);
    summary["final_gaussian_fit_infidelity"] = json!(fit_infidelity);
    summary["wall_clock_seconds"] = json!({ "lindblad": elapsed });
    Ok(summary)
}

fn run_compare(spec: &RunSpec, out_dir: &Path, opts: &Options) -> Result<serde_json::Value, RunError> {
    let dim = resolve_dim(spec, opts)?;
    let samples = spec.config.sample_times();
    let t0 = Instant::now();
    let traj = hybrid::evolve_with(HybridState::vacuum(), &spec.config, &samples, integrator(opts))?;
    let hybrid_s = t0.elapsed().as_secs_f64();
    let t0 = Instant::now();
    let oracle = lindblad::evolve(&FockDensityMatrix::vacuum(dim), &spec.config, &samples)?;
    let oracle_s = t0.elapsed().as_secs_f64();
    let infidelity = metrics::hybrid_vs_oracle_infidelity(&traj, &oracle)?;
    let coherent = metrics::coherent_vs_oracle_infidelity(&traj, &oracle);
    write_atomic(
        &out_dir.join("trajectory.csv"),
        &trajectory_csv(&traj, Some(&infidelity)),
    )?;

    let violations = validity_violations(&traj);
    let mut summary = trajectory_stats(&traj, spec.omega_r0);
    summary["mode"] = json!("compare");
    summary["samples"] = json!(traj.len());
    summary["fock_dim"] = json!(dim);
    summary["final_infidelity"] = json!(infidelity.last().unwrap());
    summary["peak_infidelity"] = json!(infidelity.iter().cloned().fold(0.0, f64::max));
    summary["final_coherent_infidelity"] = json!(coherent.last().unwrap());
    summary["validity_warning"] = json!(!violations.is_empty());
    summary["wall_clock_seconds"] = json!({
        "hybrid": hybrid_s,
        "lindblad": oracle_s,
        "speedup": oracle_s / hybrid_s,
    });
    Ok(summary)
}

fn branch_rows(
    branches: &[(steady::SteadyBranch, Option<steady::SteadyShape>)],
    prefix: &str,
) -> Vec<String> {
    branches
        .iter()
        .map(|(branch, shape)| {
            let mut fields = vec![
                format!("{prefix}{}", branch.label),
                fmt(branch.n_tilde),
                fmt(branch.beta.re),
                fmt(branch.beta.im),
            ];
            match shape {
                Some(s) => {
                    let n_th = s.gauss.to_dsts().n_th;
                    fields.extend([
                        fmt(s.gauss.d0()),
                        fmt(s.gauss.b()),
                        fmt(s.gauss.theta()),
                        fmt(s.squeeze_factor),
                        fmt(s.unsqueeze_factor),
                        fmt(n_th),
                        "1".into(),
                    ]);
                }
                None => {
                    fields.extend(std::iter::repeat("nan".to_string()).take(6));
                    fields.push("0".into());
                }
            }
            fields.join(",")
        })
        .collect()
}

fn run_steady(spec: &RunSpec, out_dir: &Path) -> Result<serde_json::Value, RunError> {
    let branches = steady::steady_branches(&spec.config)?;
    let with_shapes: Vec<(steady::SteadyBranch, Option<steady::SteadyShape>)> = branches
        .iter()
        .map(|b| (*b, steady::steady_shape(b.beta, &spec.config).ok()))
        .collect();

    let mut csv = String::from(
        "branch,n_tilde,re_beta,im_beta,d0,b,theta,squeeze_factor,unsqueeze_factor,n_th,valid\n",
    );
    for row in branch_rows(&with_shapes, "") {
        csv.push_str(&row);
        csv.push('\n');
    }
    write_atomic(&out_dir.join("branches.csv"), &csv)?;

    let dl = spec.dimensionless.expect("steady mode requires Kerr");
    let multiplicity = steady::root_multiplicity(&branches);
    let critical = steady::near_critical_point(dl.eps_tilde, dl.delta_omega_tilde);
    let branch_json: Vec<serde_json::Value> = with_shapes
        .iter()
        .map(|(b, s)| {
            let mut v = json!({
                "label": b.label.to_string(),
                "n_tilde": b.n_tilde,
                "stable": b.is_stable(),
                "re_beta": b.beta.re,
                "im_beta": b.beta.im,
            });
            if let Some(s) = s {
                v["squeeze_factor"] = json!(s.squeeze_factor);
                v["unsqueeze_factor"] = json!(s.unsqueeze_factor);
                v["n_th"] = json!(s.gauss.to_dsts().n_th);
                if let Some(w) = spec.omega_r0 {
                    v["t_eff_mk"] =
                        json!(s.gauss.effective_temperature(w) / KB_OVER_HBAR * 1e3);
                }
            } else {
                v["outside_validity"] = json!(true);
            }
            v
        })
        .collect();
    Ok(json!({
        "mode": "steady",
        "eps_tilde": dl.eps_tilde,
        "delta_omega_tilde": dl.delta_omega_tilde,
        "root_multiplicity": multiplicity,
        "critical_point": critical || multiplicity == 3,
        "branches": branch_json,
    }))
}

fn run_sweep(spec: &RunSpec, out_dir: &Path) -> Result<serde_json::Value, RunError> {
    let grid = sweep_grid(spec);
    let t0 = Instant::now();
    let points = steady::sweep_steady(&grid);
    let elapsed = t0.elapsed().as_secs_f64();

    let mut csv = String::from(
        "eps_tilde,delta_omega_tilde,n_b,branch,n_tilde,re_beta,im_beta,d0,b,theta,\
         squeeze_factor,unsqueeze_factor,n_th,valid\n",
    );
    let mut max_squeeze: f64 = 0.0;
    let mut outside = 0usize;
    for point in &points {
        let prefix = format!(
            "{},{},{},",
            fmt(point.eps_tilde),
            fmt(point.delta_omega_tilde),
            fmt(point.n_b)
        );
        for row in branch_rows(&point.branches, &prefix) {
            csv.push_str(&row);
            csv.push('\n');
        }
        for (_, shape) in &point.branches {
            match shape {
                Some(s) => max_squeeze = max_squeeze.max(s.squeeze_factor),
                None => outside += 1,
            }
        }
    }
    write_atomic(&out_dir.join("sweep.csv"), &csv)?;

    Ok(json!({
        "mode": "sweep",
        "points": grid.len(),
        "max_squeeze_factor": max_squeeze,
        "branches_outside_validity": outside,
        "wall_clock_seconds": { "sweep": elapsed },
    }))
}
