//! JSON run configuration: schema, units, and validation.
//!
//! Angular frequencies accept either form
//!
//!   {"rad_per_s": 3.14e7}   or   {"hz_over_2pi": 5.0e6}
//!
//! (the latter meaning ω = 2π·5 MHz); times accept {"seconds": ...} or
//! {"over_kappa": ...}. A config either gives physical parameters (kappa,
//! detuning, kerr_eta, drive) or a "dimensionless" block (eps_tilde,
//! delta_omega_tilde, sign_eta) realized at κ = 1, |η| = 1. Unknown keys are
//! rejected.

use hybrid_gaussian::hybrid::{Dimensionless, Drive, Nonlinearity, SimConfig};
use num_complex::Complex64;
use serde::Deserialize;
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Hybrid,
    Lindblad,
    Compare,
    Steady,
    Sweep,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Mode::Hybrid => "hybrid",
            Mode::Lindblad => "lindblad",
            Mode::Compare => "compare",
            Mode::Steady => "steady",
            Mode::Sweep => "sweep",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FreqValue {
    rad_per_s: Option<f64>,
    hz_over_2pi: Option<f64>,
}

impl FreqValue {
    fn resolve(&self, field: &str) -> Result<f64, String> {
        match (self.rad_per_s, self.hz_over_2pi) {
            (Some(v), None) => Ok(v),
            (None, Some(v)) => Ok(TAU * v),
            (Some(_), Some(_)) => Err(format!(
                "{field}: give exactly one of rad_per_s / hz_over_2pi, not both"
            )),
            (None, None) => Err(format!("{field}: missing rad_per_s or hz_over_2pi")),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TimeValue {
    seconds: Option<f64>,
    over_kappa: Option<f64>,
}

impl TimeValue {
    fn resolve(&self, kappa: f64, field: &str) -> Result<f64, String> {
        match (self.seconds, self.over_kappa) {
            (Some(v), None) => Ok(v),
            (None, Some(v)) => Ok(v / kappa),
            (Some(_), Some(_)) => Err(format!(
                "{field}: give exactly one of seconds / over_kappa, not both"
            )),
            (None, None) => Err(format!("{field}: missing seconds or over_kappa")),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DriveSpec {
    eps: Option<FreqValue>,
    #[serde(default)]
    phase_rad: f64,
    segments: Option<Vec<SegmentSpec>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentSpec {
    t_start: TimeValue,
    eps: FreqValue,
    #[serde(default)]
    phase_rad: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DimensionlessSpec {
    eps_tilde: f64,
    #[serde(default)]
    delta_omega_tilde: f64,
    #[serde(default = "default_sign_eta")]
    sign_eta: f64,
}

fn default_sign_eta() -> f64 {
    -1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSpec {
    axes: Vec<SweepAxis>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kappa: Option<FreqValue>,
    detuning: Option<FreqValue>,
    kerr_eta: Option<FreqValue>,
    drive: Option<DriveSpec>,
    #[serde(default)]
    n_b: Option<f64>,
    omega_r0: Option<FreqValue>,
    t_final: Option<TimeValue>,
    dt_out: Option<TimeValue>,
    dimensionless: Option<DimensionlessSpec>,
    fock_dim: Option<usize>,
    sweep: Option<SweepSpec>,
}

/// Canonical, validated run specification.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub mode: Mode,
    pub config: SimConfig,
    /// ω_r0 in rad/s, when given (enables effective-temperature readouts).
    pub omega_r0: Option<f64>,
    pub fock_dim: Option<usize>,
    /// Present when the config was given (or is reducible to) dimensionless
    /// form.
    pub dimensionless: Option<Dimensionless>,
    pub sweep_axes: Vec<SweepAxis>,
}

/// Parse and validate raw JSON text into a [`RunSpec`] for `mode`.
pub fn validate_config(raw: &str, mode: Mode) -> Result<RunSpec, String> {
    let parsed: RawConfig = serde_json::from_str(raw).map_err(|e| format!("config parse: {e}"))?;
    let needs_trajectory = matches!(mode, Mode::Hybrid | Mode::Lindblad | Mode::Compare);

    let n_b = parsed.n_b.unwrap_or(0.0);
    if n_b < 0.0 {
        return Err(format!("n_b: must be >= 0, got {n_b}"));
    }

    let (config, dimensionless) = if let Some(dl) = &parsed.dimensionless {
        for (name, present) in [
            ("kappa", parsed.kappa.is_some()),
            ("detuning", parsed.detuning.is_some()),
            ("kerr_eta", parsed.kerr_eta.is_some()),
            ("drive", parsed.drive.is_some()),
        ] {
            if present {
                return Err(format!(
                    "{name}: not allowed together with the dimensionless block"
                ));
            }
        }
        if dl.eps_tilde < 0.0 {
            return Err(format!("dimensionless.eps_tilde: must be >= 0, got {}", dl.eps_tilde));
        }
        if dl.sign_eta != 1.0 && dl.sign_eta != -1.0 {
            return Err(format!(
                "dimensionless.sign_eta: must be +1 or -1, got {}",
                dl.sign_eta
            ));
        }
        let dim = Dimensionless {
            eps_tilde: dl.eps_tilde,
            delta_omega_tilde: dl.delta_omega_tilde,
            sign_eta: dl.sign_eta,
        };
        // kappa = 1, so over_kappa and seconds coincide.
        let t_final = match &parsed.t_final {
            Some(t) => t.resolve(1.0, "t_final")?,
            None if needs_trajectory => return Err("t_final: required for this mode".into()),
            None => 1.0,
        };
        let dt_out = match &parsed.dt_out {
            Some(t) => t.resolve(1.0, "dt_out")?,
            None if needs_trajectory => return Err("dt_out: required for this mode".into()),
            None => 0.1,
        };
        (dim.to_config(n_b, t_final, dt_out), Some(dim))
    } else {
        let kappa = parsed
            .kappa
            .as_ref()
            .ok_or("kappa: required (or use a dimensionless block)")?
            .resolve("kappa")?;
        if kappa <= 0.0 {
            return Err(format!("kappa: must be positive, got {kappa} rad/s"));
        }
        let detuning = match &parsed.detuning {
            Some(d) => d.resolve("detuning")?,
            None => 0.0,
        };
        let nonlinearity = match &parsed.kerr_eta {
            Some(e) => Nonlinearity::Kerr { eta: e.resolve("kerr_eta")? },
            None => Nonlinearity::Linear,
        };
        let drive_spec = parsed.drive.as_ref().ok_or("drive: required")?;
        let drive = build_drive(drive_spec, kappa)?;
        let t_final = match &parsed.t_final {
            Some(t) => t.resolve(kappa, "t_final")?,
            None if needs_trajectory => return Err("t_final: required for this mode".into()),
            None => 1.0 / kappa,
        };
        let dt_out = match &parsed.dt_out {
            Some(t) => t.resolve(kappa, "dt_out")?,
            None if needs_trajectory => return Err("dt_out: required for this mode".into()),
            None => 0.1 / kappa,
        };
        if t_final <= 0.0 || dt_out <= 0.0 {
            return Err("t_final/dt_out: must be positive".into());
        }
        let config = SimConfig {
            kappa,
            detuning,
            nonlinearity,
            drive,
            n_b,
            t_final,
            dt_out,
        };
        let dim = hybrid_gaussian::hybrid::rescale(&config).ok();
        (config, dim)
    };

    let omega_r0 = match &parsed.omega_r0 {
        Some(f) => Some(f.resolve("omega_r0")?),
        None => None,
    };

    let sweep_axes = match (mode, parsed.sweep) {
        (Mode::Sweep, Some(s)) => {
            if s.axes.is_empty() || s.axes.len() > 3 {
                return Err("sweep.axes: give between 1 and 3 axes".into());
            }
            for axis in &s.axes {
                if !matches!(axis.param.as_str(), "eps_tilde" | "delta_omega_tilde" | "n_b") {
                    return Err(format!(
                        "sweep.axes.param: unknown parameter '{}' (expected eps_tilde, \
                         delta_omega_tilde, or n_b)",
                        axis.param
                    ));
                }
                if axis.count < 1 {
                    return Err("sweep.axes.count: must be >= 1".into());
                }
            }
            s.axes
        }
        (Mode::Sweep, None) => return Err("sweep: required in sweep mode".into()),
        (_, Some(_)) => return Err("sweep: only allowed in sweep mode".into()),
        (_, None) => Vec::new(),
    };

    if matches!(mode, Mode::Steady | Mode::Sweep) && dimensionless.is_none() {
        return Err(format!(
            "{mode} mode requires a Kerr nonlinearity (or a dimensionless block)"
        ));
    }

    Ok(RunSpec {
        mode,
        config,
        omega_r0,
        fock_dim: parsed.fock_dim,
        dimensionless,
        sweep_axes,
    })
}

fn build_drive(spec: &DriveSpec, kappa: f64) -> Result<Drive, String> {
    match (&spec.eps, &spec.segments) {
        (Some(eps), None) => {
            let amp = eps.resolve("drive.eps")?;
            Ok(Drive::Constant(Complex64::from_polar(amp, spec.phase_rad)))
        }
        (None, Some(segments)) if !segments.is_empty() => {
            let mut out = Vec::with_capacity(segments.len());
            for seg in segments {
                let t = seg.t_start.resolve(kappa, "drive.segments.t_start")?;
                let amp = seg.eps.resolve("drive.segments.eps")?;
                out.push((t, Complex64::from_polar(amp, seg.phase_rad)));
            }
            if !out.windows(2).all(|w| w[0].0 < w[1].0) {
                return Err("drive.segments: t_start values must be strictly increasing".into());
            }
            Ok(Drive::PiecewiseConstant(out))
        }
        (Some(_), Some(_)) => Err("drive: give either eps or segments, not both".into()),
        _ => Err("drive: give a constant eps or a segments list".into()),
    }
}

/// Expand the sweep axes into a grid of (eps_tilde, delta_omega_tilde, n_b)
/// points, taking unswept values from the base spec.
pub fn sweep_grid(spec: &RunSpec) -> Vec<(f64, f64, f64)> {
    let base = spec
        .dimensionless
        .expect("sweep mode guarantees a dimensionless reduction");
    let mut values: Vec<Vec<(String, f64)>> = Vec::new();
    for axis in &spec.sweep_axes {
        let pts = (0..axis.count)
            .map(|i| {
                let f = if axis.count == 1 {
                    0.0
                } else {
                    i as f64 / (axis.count - 1) as f64
                };
                (axis.param.clone(), axis.from + (axis.to - axis.from) * f)
            })
            .collect();
        values.push(pts);
    }
    let mut grid = vec![(base.eps_tilde, base.delta_omega_tilde, spec.config.n_b)];
    for axis_values in values {
        let mut next = Vec::with_capacity(grid.len() * axis_values.len());
        for point in &grid {
            for (param, v) in &axis_values {
                let mut p = *point;
                match param.as_str() {
                    "eps_tilde" => p.0 = *v,
                    "delta_omega_tilde" => p.1 = *v,
                    _ => p.2 = *v,
                }
                next.push(p);
            }
        }
        grid = next;
    }
    grid
}
