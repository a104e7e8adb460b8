//! Plain-text parameter files.
//!
//! ```text
//! fxround-params 1
//! path fixed
//! format 16W8F
//! mode rr
//! shape 784 100
//! w1 <n1*n0 integers>
//! b1 <n1 integers>
//! w2 <n1 integers>
//! b2 <1 integer>
//! ```
//!
//! Fixed-point files store mantissas. Reference files use `path reference`,
//! omit `format`/`mode` and store shortest round-trip decimal floats.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::fixed::NetworkParams;
use super::reference::{RefMatrix, RefParams};
use super::train::TrainedParams;
use crate::error::{FxError, Result};
use crate::fxcore::{QFormat, RoundingMode};
use crate::fxlinalg::FxMatrix;

const MAGIC: &str = "fxround-params 1";

fn push_row<T: std::fmt::Debug>(out: &mut String, name: &str, values: impl IntoIterator<Item = T>) {
    out.push_str(name);
    for v in values {
        write!(out, " {v:?}").unwrap();
    }
    out.push('\n');
}

pub fn params_to_string(params: &TrainedParams) -> String {
    let mut out = format!("{MAGIC}\n");
    match params {
        TrainedParams::Fixed { params: p, mode } => {
            writeln!(out, "path fixed\nformat {}\nmode {}", p.format(), mode.tag()).unwrap();
            writeln!(out, "shape {} {}", p.inputs(), p.hidden()).unwrap();
            for (name, m) in [("w1", &p.w1), ("b1", &p.b1), ("w2", &p.w2), ("b2", &p.b2)] {
                push_row(&mut out, name, m.mantissas());
            }
        }
        TrainedParams::Reference(p) => {
            writeln!(out, "path reference\nshape {} {}", p.w1.cols, p.w1.rows).unwrap();
            for (name, m) in [("w1", &p.w1), ("b1", &p.b1), ("w2", &p.w2), ("b2", &p.b2)] {
                push_row(&mut out, name, &m.data);
            }
        }
    }
    out
}

pub fn write_params(path: &Path, params: &TrainedParams) -> Result<()> {
    fs::write(path, params_to_string(params))?;
    Ok(())
}

pub fn read_params(path: &Path) -> Result<TrainedParams> {
    parse_params(&fs::read_to_string(path)?)
}

fn bad(msg: impl Into<String>) -> FxError {
    FxError::Parse(format!("parameter file: {}", msg.into()))
}

pub fn parse_params(text: &str) -> Result<TrainedParams> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some(MAGIC) {
        return Err(bad("missing header"));
    }
    let mut fields = std::collections::HashMap::new();
    for line in lines {
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        if fields.insert(key.to_string(), rest.trim().to_string()).is_some() {
            return Err(bad(format!("duplicate key {key}")));
        }
    }
    let field = |k: &str| fields.get(k).map(String::as_str).ok_or_else(|| bad(format!("missing {k}")));
    let dims: Vec<usize> = field("shape")?
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| bad("bad shape")))
        .collect::<Result<_>>()?;
    let [n0, n1] = dims[..] else {
        return Err(bad("shape needs two dimensions"));
    };
    let shapes = [("w1", n1, n0), ("b1", n1, 1), ("w2", 1, n1), ("b2", 1, 1)];

    fn numbers<T: std::str::FromStr>(s: &str, name: &str, len: usize) -> Result<Vec<T>> {
        let v: Vec<T> = s
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(format!("bad number {t:?} in {name}"))))
            .collect::<Result<_>>()?;
        if v.len() != len {
            return Err(bad(format!("{name} has {} values, expected {len}", v.len())));
        }
        Ok(v)
    }

    match field("path")? {
        "fixed" => {
            let format: QFormat = field("format")?.parse()?;
            let mode: RoundingMode = field("mode")?.parse()?;
            let mut m = Vec::new();
            for (name, r, c) in shapes {
                let v = numbers::<i64>(field(name)?, name, r * c)?;
                m.push(FxMatrix::from_mantissas(r, c, v, format)?);
            }
            let [w1, b1, w2, b2]: [FxMatrix; 4] = m.try_into().unwrap();
            let params = NetworkParams { w1, b1, w2, b2 };
            params.validate()?;
            Ok(TrainedParams::Fixed { params, mode })
        }
        "reference" => {
            let mut m = Vec::new();
            for (name, r, c) in shapes {
                m.push(RefMatrix::from_vec(r, c, numbers::<f64>(field(name)?, name, r * c)?));
            }
            let [w1, b1, w2, b2]: [RefMatrix; 4] = m.try_into().unwrap();
            Ok(TrainedParams::Reference(RefParams { w1, b1, w2, b2 }))
        }
        other => Err(bad(format!("unknown path {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_round_trip() {
        let fmt = QFormat::Q16_8;
        let mut p = NetworkParams::zeros(3, 2, fmt);
        p.w1 = FxMatrix::from_mantissas(2, 3, vec![1, -2, 3, -32768, 32767, 0], fmt).unwrap();
        p.b2 = FxMatrix::from_mantissas(1, 1, vec![-7], fmt).unwrap();
        let t = TrainedParams::Fixed { params: p, mode: RoundingMode::Rr };
        assert_eq!(parse_params(&params_to_string(&t)).unwrap(), t);
    }

    #[test]
    fn reference_round_trip_is_bit_exact() {
        let mut p = RefParams::zeros(2, 2);
        p.w1.data = vec![0.1, -1.0 / 3.0, 1e-300, f64::MIN_POSITIVE];
        p.b2.data = vec![-0.0];
        let t = TrainedParams::Reference(p);
        let back = parse_params(&params_to_string(&t)).unwrap();
        let (TrainedParams::Reference(a), TrainedParams::Reference(b)) = (&t, &back) else {
            panic!("wrong path");
        };
        let bits = |m: &RefMatrix| m.data.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a.w1), bits(&b.w1));
        assert_eq!(bits(&a.b2), bits(&b.b2));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_params("nope").is_err());
        let t = TrainedParams::Reference(RefParams::zeros(2, 2));
        let s = params_to_string(&t).replace("w2 0.0 0.0", "w2 0.0");
        assert!(parse_params(&s).is_err());
        let s = params_to_string(&t).replace("reference", "quantum");
        assert!(parse_params(&s).is_err());
    }
}
