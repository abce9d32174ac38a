//! State files and CSV exports.
//!
//! A state file is UTF-8 JSON:
//!
//! ```json
//! { "grid": { "k_max": 12.0, "n": 4001 }, "amp": [[0.71, 0.0], ...] }
//! ```
//!
//! with `n` amplitude pairs `[re, im]` on the uniform grid `k_i = i k_max/(n-1)`.
//! Floats are written in shortest round-trip form, so write-then-read gives
//! back the same bits.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use lcu_core::{Complex64, MomentumGrid, Quadrature, SampleBatch, SpectralState, TimeAmplitude};
use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use crate::error::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    k_max: f64,
    n: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    grid: GridSpec,
    amp: Vec<[f64; 2]>,
}

fn json_error(e: serde_json::Error) -> CliError {
    match e.classify() {
        Category::Data => CliError::Schema(e.to_string()),
        Category::Io => CliError::io("<input>", e.into()),
        Category::Syntax | Category::Eof => {
            let message = e.to_string();
            // serde_json appends " at line L column C"; keep only the cause
            let message = match message.rfind(" at line ") {
                Some(i) => message[..i].to_string(),
                None => message,
            };
            CliError::Parse {
                line: e.line(),
                column: e.column(),
                message,
            }
        }
    }
}

/// Parses a state file from any reader.
pub fn read_state_from(reader: impl Read) -> Result<SpectralState, CliError> {
    let file: StateFile = serde_json::from_reader(reader).map_err(json_error)?;
    let GridSpec { k_max, n } = file.grid;
    if !(k_max.is_finite() && k_max > 0.0) {
        return Err(CliError::Schema(format!("grid.k_max must be positive, found {k_max}")));
    }
    if n < 3 || n % 2 == 0 {
        return Err(CliError::Schema(format!(
            "grid.n must be odd and at least 3, found {n}"
        )));
    }
    if file.amp.len() != n {
        return Err(CliError::Schema(format!(
            "amp has {} entries but grid.n is {n}",
            file.amp.len()
        )));
    }
    let grid = MomentumGrid::new(k_max, n)?;
    let amp = file.amp.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
    Ok(SpectralState::new(grid, amp)?)
}

pub fn read_state(path: &Path) -> Result<SpectralState, CliError> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_state_from(BufReader::new(f))
}

pub fn write_state_to(state: &SpectralState, mut writer: impl Write) -> Result<(), CliError> {
    let file = StateFile {
        grid: GridSpec {
            k_max: state.grid().k_max(),
            n: state.grid().n(),
        },
        amp: state.amp().iter().map(|a| [a.re, a.im]).collect(),
    };
    serde_json::to_writer(&mut writer, &file).map_err(json_error)?;
    writeln!(writer).map_err(|e| CliError::io("<output>", e))
}

pub fn write_state(state: &SpectralState, path: &Path) -> Result<(), CliError> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(f);
    write_state_to(state, &mut w)?;
    w.flush().map_err(|e| CliError::io(path, e))
}

fn csv_error(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io("<output>", io),
        other => CliError::Validation(format!("csv: {other:?}")),
    }
}

/// `tau,re,im,density` rows.
pub fn write_time_csv(ta: &TimeAmplitude, writer: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["tau", "re", "im", "density"]).map_err(csv_error)?;
    for (&t, a) in ta.grid().nodes().iter().zip(ta.amp()) {
        w.serialize((t, a.re, a.im, a.norm_sqr())).map_err(csv_error)?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))
}

/// Single `value` column.
pub fn write_samples_csv(batch: &SampleBatch, writer: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["value"]).map_err(csv_error)?;
    for v in &batch.values {
        w.serialize([v]).map_err(csv_error)?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))
}

/// `frame,k,density` rows for a list of labelled states.
pub fn write_density_csv(frames: &[(&str, &SpectralState)], writer: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["frame", "k", "density"]).map_err(csv_error)?;
    for (label, state) in frames {
        for (&k, a) in state.grid().nodes().iter().zip(state.amp()) {
            w.serialize((label, k, a.norm_sqr())).map_err(csv_error)?;
        }
    }
    w.flush().map_err(|e| CliError::io("<output>", e))
}

/// Buffered writer on a freshly created file.
pub fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}
