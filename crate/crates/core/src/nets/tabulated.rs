//! Nets given by samples, read from CSV with columns
//! `eps,x,value_re[,value_im]`.

use std::io::Read;
use std::path::Path;

use rustfft::num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Fewest nodes accepted per slice.
pub const MIN_NODES: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TabSlice<T> {
    pub eps: T,
    pub nodes: Vec<T>,
    #[serde(skip)]
    pub values: Vec<Complex<T>>,
}

impl<T: Scalar> TabSlice<T> {
    pub fn spacing(&self) -> T {
        self.nodes[1] - self.nodes[0]
    }
}

/// One-dimensional tabulated net; every slice has the same node count on a
/// uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TabulatedNet<T> {
    pub source: String,
    pub slices: Vec<TabSlice<T>>,
}

impl<T: Scalar> TabulatedNet<T> {
    pub fn from_slices(source: impl Into<String>, mut slices: Vec<TabSlice<T>>) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::Tabulated("no samples".into()));
        }
        slices.sort_by(|a, b| b.eps.partial_cmp(&a.eps).unwrap());
        let len = slices[0].nodes.len();
        for s in &slices {
            if s.nodes.len() != len || s.values.len() != len {
                return Err(Error::Tabulated(format!(
                    "ragged data: eps = {} has {} nodes, expected {len}",
                    s.eps,
                    s.nodes.len()
                )));
            }
            if len < MIN_NODES {
                return Err(Error::Tabulated(format!(
                    "eps = {} has {len} nodes, need at least {MIN_NODES}",
                    s.eps
                )));
            }
            if !(s.eps > T::zero() && s.eps <= T::one()) {
                return Err(Error::EpsOutOfRange(crate::scalar::to_f64(s.eps)));
            }
            let h = s.spacing();
            let uniform = s
                .nodes
                .windows(2)
                .all(|w| ((w[1] - w[0]) - h).abs() <= lit::<T>(1e-9) * h.abs());
            if !(h > T::zero()) || !uniform {
                return Err(Error::Tabulated(format!(
                    "eps = {}: nodes must be increasing and uniformly spaced",
                    s.eps
                )));
            }
        }
        if slices.windows(2).any(|w| w[0].eps == w[1].eps) {
            return Err(Error::Tabulated("duplicate eps slice".into()));
        }
        Ok(Self {
            source: source.into(),
            slices,
        })
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::parse_csv(file, path.display().to_string())
    }

    pub fn parse_csv(reader: impl Read, source: String) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h == name);
        let (Some(ce), Some(cx), Some(cre)) = (col("eps"), col("x"), col("value_re")) else {
            return Err(Error::Tabulated(format!(
                "{source}: header must contain eps,x,value_re (value_im optional)"
            )));
        };
        let cim = col("value_im");
        let allowed = ["eps", "x", "value_re", "value_im"];
        if let Some(extra) = headers.iter().find(|h| !allowed.contains(h)) {
            return Err(Error::Tabulated(format!("{source}: unknown column `{extra}`")));
        }
        let mut slices: Vec<TabSlice<T>> = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let field = |i: usize| -> Result<T> {
                let raw = record.get(i).unwrap_or("");
                let v: f64 = raw.parse().map_err(|_| {
                    Error::Tabulated(format!("{source}: row {}: cannot parse `{raw}`", row + 2))
                })?;
                if !v.is_finite() {
                    return Err(Error::Tabulated(format!("{source}: row {}: non-finite value", row + 2)));
                }
                Ok(lit(v))
            };
            let eps = field(ce)?;
            let x = field(cx)?;
            let re = field(cre)?;
            let im = match cim {
                Some(i) => field(i)?,
                None => T::zero(),
            };
            match slices.iter_mut().find(|s| s.eps == eps) {
                Some(s) => {
                    s.nodes.push(x);
                    s.values.push(Complex::new(re, im));
                }
                None => slices.push(TabSlice {
                    eps,
                    nodes: vec![x],
                    values: vec![Complex::new(re, im)],
                }),
            }
        }
        Self::from_slices(source, slices)
    }

    pub fn slice(&self, eps: T) -> Result<&TabSlice<T>> {
        self.slices
            .iter()
            .find(|s| (s.eps - eps).abs() <= lit::<T>(1e-12) * eps)
            .ok_or_else(|| Error::Tabulated(format!("eps = {eps} is not tabulated in {}", self.source)))
    }

    pub fn eps_values(&self) -> Vec<T> {
        self.slices.iter().map(|s| s.eps).collect()
    }

    pub fn is_complex(&self) -> bool {
        self.slices
            .iter()
            .any(|s| s.values.iter().any(|v| v.im != T::zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_text(rows: &[(f64, f64, f64)]) -> String {
        let mut s = String::from("eps,x,value_re\n");
        for (e, x, v) in rows {
            s.push_str(&format!("{e},{x},{v}\n"));
        }
        s
    }

    fn rows(eps: &[f64], n: usize) -> Vec<(f64, f64, f64)> {
        eps.iter()
            .flat_map(|&e| (0..n).map(move |j| (e, -1.0 + j as f64 * 0.25, e * j as f64)))
            .collect()
    }

    #[test]
    fn parses_slices() {
        let text = csv_text(&rows(&[0.5, 0.25], 9));
        let t = TabulatedNet::<f64>::parse_csv(text.as_bytes(), "mem".into()).unwrap();
        assert_eq!(t.eps_values(), vec![0.5, 0.25]);
        assert_eq!(t.slice(0.25).unwrap().values[2].re, 0.5);
        assert!(t.slice(0.3).is_err());
    }

    #[test]
    fn rejects_ragged_and_bad_rows() {
        let mut r = rows(&[0.5, 0.25], 9);
        r.pop();
        let text = csv_text(&r);
        assert!(TabulatedNet::<f64>::parse_csv(text.as_bytes(), "mem".into()).is_err());
        let bad = "eps,x,value_re\n0.5,0.0,abc\n";
        assert!(TabulatedNet::<f64>::parse_csv(bad.as_bytes(), "mem".into()).is_err());
        let extra = "eps,x,value_re,junk\n";
        assert!(TabulatedNet::<f64>::parse_csv(extra.as_bytes(), "mem".into()).is_err());
    }
}
