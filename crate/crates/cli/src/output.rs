//! CSV and JSON output with a fixed column contract and atomic writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hybrid_gaussian::hybrid::TrajectoryPoint;

/// Scientific notation with 12 significant digits, locale-independent.
pub fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

/// Column order of trajectory CSVs. Compare mode appends `infidelity`.
pub const TRAJECTORY_COLUMNS: &[&str] = &[
    "t",
    "re_beta",
    "im_beta",
    "w1",
    "w2",
    "k",
    "d0",
    "b",
    "theta",
    "squeeze_factor",
    "unsqueeze_factor",
    "n_th",
    "nbar",
];

pub fn trajectory_row(p: &TrajectoryPoint, infidelity: Option<f64>) -> String {
    let dsts = p.gauss.to_dsts();
    let mut fields = vec![
        fmt(p.t),
        fmt(p.state.beta.re),
        fmt(p.state.beta.im),
        fmt(p.state.w1),
        fmt(p.state.w2),
        fmt(p.state.k),
        fmt(p.gauss.d0()),
        fmt(p.gauss.b()),
        fmt(p.gauss.theta()),
        fmt(p.gauss.squeeze_factor()),
        fmt(p.gauss.unsqueeze_factor()),
        fmt(dsts.n_th),
        fmt(p.gauss.mean_photon()),
    ];
    if let Some(f) = infidelity {
        fields.push(fmt(f));
    }
    fields.join(",")
}

pub fn trajectory_csv(traj: &[TrajectoryPoint], infidelity: Option<&[f64]>) -> String {
    let mut header = TRAJECTORY_COLUMNS.join(",");
    if infidelity.is_some() {
        header.push_str(",infidelity");
    }
    let mut out = String::with_capacity(64 * (traj.len() + 1));
    out.push_str(&header);
    out.push('\n');
    for (i, p) in traj.iter().enumerate() {
        out.push_str(&trajectory_row(p, infidelity.map(|f| f[i])));
        out.push('\n');
    }
    out
}

/// Write via a temp file in the same directory, then rename into place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp: PathBuf = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}
