//! CSV and JSON writers for trajectories and sweeps.
//!
//! CSV floats are written with 17 significant digits so that identical runs
//! produce byte-identical files and every value round-trips exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuits::SpectrumPoint;
use crate::error::{Error, Result};
use crate::evolution::{Representation, Trajectory};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// 17 significant digits, scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trajectory_columns(rep: Representation) -> &'static [&'static str] {
    match rep {
        Representation::Complex2 => &["t", "re1", "im1", "re2", "im2"],
        Representation::Real4 => &["t", "v1", "v2", "v3", "v4"],
        Representation::SecondOrder2 => &["t", "v1", "v2"],
    }
}

pub fn trajectory_csv(t: &Trajectory) -> String {
    let mut out = trajectory_columns(t.representation).join(",");
    out.push('\n');
    for (time, row) in t.times.iter().zip(&t.states) {
        out.push_str(&fmt_f64(*time));
        for v in row {
            out.push(',');
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct TrajectoryFile {
    spec_version: u32,
    columns: Vec<String>,
    #[serde(flatten)]
    trajectory: Trajectory,
}

pub fn trajectory_json(t: &Trajectory) -> Result<String> {
    let file = TrajectoryFile {
        spec_version: SCHEMA_VERSION,
        columns: trajectory_columns(t.representation).iter().map(|s| s.to_string()).collect(),
        trajectory: t.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).map_err(|e| Error::Spec(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn parse_trajectory_json(text: &str) -> Result<Trajectory> {
    let file: TrajectoryFile =
        serde_json::from_str(text).map_err(|e| Error::Spec(format!("trajectory file: {e}")))?;
    if file.spec_version != SCHEMA_VERSION {
        return Err(Error::Spec(format!("unsupported spec_version {}", file.spec_version)));
    }
    let t = file.trajectory;
    if t.states.len() != t.times.len()
        || t.states.iter().any(|r| r.len() != t.representation.width())
    {
        return Err(Error::Spec("trajectory rows do not match representation".into()));
    }
    Ok(t)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn export_trajectory(t: &Trajectory, fmt: OutputFormat, path: &Path) -> Result<()> {
    if t.is_empty() {
        return Err(Error::InvalidParameter("cannot export an empty trajectory".into()));
    }
    let text = match fmt {
        OutputFormat::Csv => trajectory_csv(t),
        OutputFormat::Json => trajectory_json(t)?,
    };
    write_file(path, &text)
}

pub fn import_trajectory(path: &Path) -> Result<Trajectory> {
    parse_trajectory_json(&read_file(path)?)
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "gamma", "re1", "re2", "re3", "re4", "im1", "im2", "im3", "im4", "classification",
];

/// Sweep table with mode values normalized by `omega0`.
pub fn sweep_csv(points: &[SpectrumPoint], omega0: f64) -> String {
    let mut out = SWEEP_COLUMNS.join(",");
    out.push('\n');
    for p in points {
        let modes = p.normalized(omega0);
        let mut fields = vec![fmt_f64(p.gamma)];
        fields.extend(modes.iter().map(|z| fmt_f64(z.re)));
        fields.extend(modes.iter().map(|z| fmt_f64(z.im)));
        fields.push(p.classification.label().to_string());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
