//! CSV and JSON artifacts.

use std::fs;
use std::io::Write;
use std::path::Path;

use rapidec::fourier::SpectralSamples;
use rapidec::{CellFit, ExponentProfile};

use crate::error::CliError;

/// First line of every CSV when timestamps are enabled.
pub fn timestamp_line(stamp: &str) -> String {
    format!("# generated: {stamp}\n")
}

/// Shortest round-trip text; scientific notation outside `[1e-4, 1e15)`.
pub fn num(v: f64) -> String {
    let v = v + 0.0;
    if v == 0.0 || (1e-4..1e15).contains(&v.abs()) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>, stamp: Option<&str>) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    if let Some(s) = stamp {
        out.extend_from_slice(timestamp_line(s).as_bytes());
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: "<csv buffer>".into(),
        source,
    })?;
    w.into_inner().map_err(|e| CliError::Io {
        path: "<csv buffer>".into(),
        source: e.into_error(),
    })
}

/// Columns `q,l,exponent,residual,decay_class`.
pub fn write_profile(path: &Path, profile: &ExponentProfile, stamp: Option<&str>) -> Result<(), CliError> {
    let rows = profile.cells().map(|((q, l), cell)| match cell {
        CellFit::Fit(f) => vec![
            q.to_string(),
            l.to_string(),
            num(f.exponent),
            num(f.residual),
            f.decay_class.label().to_string(),
        ],
        CellFit::InsufficientData { .. } => {
            vec![q.to_string(), l.to_string(), String::new(), String::new(), "insufficient_data".into()]
        }
    });
    let bytes = csv_bytes(&["q", "l", "exponent", "residual", "decay_class"], rows, stamp)?;
    write_file(path, &bytes)
}

/// Columns `eps,xi,abs,re,im` for one-dimensional spectra.
pub fn write_spectra(path: &Path, spectra: &[SpectralSamples<f64>], stamp: Option<&str>) -> Result<(), CliError> {
    let rows = spectra.iter().flat_map(|s| {
        let axis = &s.axes[0];
        axis.xi.iter().zip(&axis.values).map(move |(xi, v)| {
            let v = v * s.amplitude;
            vec![
                num(s.eps),
                num(*xi),
                num(v.norm()),
                num(v.re),
                num(v.im),
            ]
        })
    });
    let bytes = csv_bytes(&["eps", "xi", "abs", "re", "im"], rows, stamp)?;
    write_file(path, &bytes)
}

pub fn write_json<S: serde::Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.write_all(b"\n").expect("writing to a Vec cannot fail");
    write_file(path, &bytes)
}
