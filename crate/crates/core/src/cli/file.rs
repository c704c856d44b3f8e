//! Problem files: TOML by default, JSON when the path ends in `.json`.

use std::path::Path;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::master::{Budget, MasterError, SchubertProblem};
use crate::polycore::{GaussRational, MarkedPoints};

pub const SCHEMA: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0} (expected {SCHEMA})")]
    Schema(u32),
    #[error("bad number {0:?}")]
    Number(String),
    #[error("give exactly one of `w` or `special`")]
    Indices,
    #[error("invalid marked points: {0}")]
    Points(String),
    #[error(transparent)]
    Problem(#[from] MasterError),
}

/// A real coordinate: an integer, a `[num, den]` pair, or a decimal or `a/b` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Int(i64),
    Pair([i64; 2]),
    Text(String),
}

impl Coord {
    pub fn to_rational(&self) -> Result<Rational, FileError> {
        match self {
            Coord::Int(v) => Ok(Rational::from(*v)),
            Coord::Pair([_, 0]) => Err(FileError::Number(format!("{self:?}"))),
            Coord::Pair([n, d]) => Ok(Rational::from((*n, *d))),
            Coord::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Real(Coord),
    Complex {
        re: Coord,
        #[serde(default = "zero_coord")]
        im: Coord,
    },
}

fn zero_coord() -> Coord {
    Coord::Int(0)
}

impl PointSpec {
    pub fn to_gauss(&self) -> Result<GaussRational, FileError> {
        match self {
            PointSpec::Real(c) => Ok(GaussRational::real(c.to_rational()?)),
            PointSpec::Complex { re, im } => Ok(GaussRational::new(re.to_rational()?, im.to_rational()?)),
        }
    }
}

/// Exact value of `"3"`, `"-7/4"`, `"0.125"` or `"1.5e-3"`.
pub fn parse_rational(s: &str) -> Result<Rational, FileError> {
    let bad = || FileError::Number(s.to_string());
    let t = s.trim();
    if t.contains('/') {
        return Rational::from_str(t).map_err(|_| bad());
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = Integer::from_str(&format!("{int}{frac}")).map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let mut r = Rational::from(digits);
    let p = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs()));
    if scale >= 0 {
        r *= p;
    } else {
        r /= p;
    }
    Ok(if neg { -r } else { r })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialSpec {
    pub m: Vec<usize>,
    pub k: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverSpec {
    pub starts: Option<usize>,
    pub max_iter: Option<usize>,
    pub precision_bits: Option<u32>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub p: usize,
    /// Required with `w`; recovered from the level counts with `special`.
    pub d: Option<usize>,
    pub z: Vec<PointSpec>,
    /// `w(1), …, w(n), w(∞)`.
    pub w: Option<Vec<Vec<usize>>>,
    pub special: Option<SpecialSpec>,
    #[serde(default)]
    pub solver: SolverSpec,
}

fn default_schema() -> u32 {
    SCHEMA
}

impl ProblemFile {
    pub fn from_toml(text: &str) -> Result<Self, FileError> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_json(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    /// TOML unless the path ends in `.json`; `-` reads standard input and accepts either.
    pub fn load(path: &Path) -> Result<Self, FileError> {
        let read_err = |source| FileError::Read { path: path.display().to_string(), source };
        if path.as_os_str() == "-" {
            let text = std::io::read_to_string(std::io::stdin()).map_err(read_err)?;
            return match text.trim_start().starts_with('{') {
                true => Self::from_json(&text),
                false => Self::from_toml(&text),
            };
        }
        let text = std::fs::read_to_string(path).map_err(read_err)?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn points(&self) -> Result<MarkedPoints, FileError> {
        let z = self.z.iter().map(PointSpec::to_gauss).collect::<Result<Vec<_>, _>>()?;
        MarkedPoints::new(z).map_err(|e| FileError::Points(e.to_string()))
    }

    pub fn problem(&self) -> Result<SchubertProblem, FileError> {
        if self.schema != SCHEMA {
            return Err(FileError::Schema(self.schema));
        }
        let z = self.points()?;
        match (&self.w, &self.special) {
            (Some(w), None) => {
                let d = self.d.ok_or(FileError::Indices)?;
                Ok(SchubertProblem::build(self.p, d, z, w.clone())?)
            }
            (None, Some(s)) => {
                let prob = SchubertProblem::from_special(self.p, &s.m, &s.k, z)?;
                match self.d {
                    Some(d) if d != prob.d => Err(FileError::Problem(MasterError::SpecialForm(format!(
                        "d = {d} given, but the level counts force d = {}",
                        prob.d
                    )))),
                    _ => Ok(prob),
                }
            }
            _ => Err(FileError::Indices),
        }
    }

    /// The file's solver table over the defaults.
    pub fn budget(&self) -> Budget {
        let b = Budget::default();
        Budget {
            starts: self.solver.starts.unwrap_or(b.starts),
            max_iter: self.solver.max_iter.unwrap_or(b.max_iter),
            precision_bits: self.solver.precision_bits.unwrap_or(b.precision_bits),
            seed: self.solver.seed.unwrap_or(b.seed),
        }
    }
}
