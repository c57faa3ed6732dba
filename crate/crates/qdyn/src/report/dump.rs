//! Matrix dumps: `{"object", "n", "rep", "dims", "entries": [[row, col, scalar]]}`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::cgtwist::CgTwist;
use crate::coboundary::{build_gauss_factors, GaussOptions};
use crate::dyncore::{solve_abrr, DynError};
use crate::linalg::Mat;
use crate::looprefl::primitive_loop;
use crate::repspace::RepSpace;
use crate::rmatrix::build_r;
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DumpObject {
    /// Standard `R` on `V⊗V`.
    R,
    /// Cremmer–Gervais twist `J` on `V⊗V`.
    J,
    /// ABRR solution `F(x)` on `V⊗V`.
    F,
    /// Coboundary `M(x)` on `V`.
    M,
    /// Primitive loop `P(x)` on `V`.
    P,
}

impl FromStr for DumpObject {
    type Err = DumpError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" => Ok(DumpObject::R),
            "J" => Ok(DumpObject::J),
            "F" => Ok(DumpObject::F),
            "M" => Ok(DumpObject::M),
            "P" => Ok(DumpObject::P),
            _ => Err(DumpError::UnknownObject(s.to_string())),
        }
    }
}

impl fmt::Display for DumpObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DumpObject::R => "R",
            DumpObject::J => "J",
            DumpObject::F => "F",
            DumpObject::M => "M",
            DumpObject::P => "P",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum DumpError {
    #[error("unknown object `{0}`, expected one of R, J, F, M, P")]
    UnknownObject(String),
    #[error("unrecognized representation `{0}`, expected fund^k with k >= 1")]
    BadRep(String),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error(transparent)]
    Dyn(#[from] DynError),
}

/// Parses `fund`, `fund^k`.
pub fn parse_fund_power(s: &str) -> Result<usize, DumpError> {
    let bad = || DumpError::BadRep(s.to_string());
    match s.strip_prefix("fund") {
        Some("") => Ok(1),
        Some(rest) => {
            let k: usize = rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if k == 0 {
                Err(bad())
            } else {
                Ok(k)
            }
        }
        None => Err(bad()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixDump {
    pub object: String,
    pub n: usize,
    pub rep: String,
    /// Dimensions of the tensor legs.
    pub dims: Vec<usize>,
    pub entries: Vec<(usize, usize, String)>,
}

impl MatrixDump {
    pub fn from_mat(object: DumpObject, n: usize, k: usize, dims: Vec<usize>, m: &Mat<ExactScalar>) -> Self {
        MatrixDump {
            object: object.to_string(),
            n,
            rep: format!("fund^{k}"),
            dims,
            entries: m.entries().map(|(r, c, v)| (r, c, v.to_string())).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dump serializes")
    }
}

/// Builds `object` with `V = fund^k`; two-leg objects act on `V⊗V`.
pub fn dump(object: DumpObject, n: usize, k: usize) -> Result<MatrixDump, DumpError> {
    if n == 0 {
        return Err(DumpError::ZeroRank);
    }
    let v = RepSpace::fund_power(n, k);
    let t = CgTwist::new(n);
    let d = v.dim();
    let (m, dims) = match object {
        DumpObject::R => (build_r(&t.conv, &v, &v), vec![d, d]),
        DumpObject::J => (t.build_j(&v, &v), vec![d, d]),
        DumpObject::F => (solve_abrr(&t.conv, &v, &v)?, vec![d, d]),
        DumpObject::M => (build_gauss_factors(&v, &GaussOptions::default())?.m, vec![d]),
        DumpObject::P => (primitive_loop(&t.conv, &v, &GaussOptions::default())?, vec![d]),
    };
    Ok(MatrixDump::from_mat(object, n, k, dims, &m))
}
