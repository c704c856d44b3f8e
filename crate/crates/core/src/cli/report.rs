//! Machine-readable run reports.

use rug::Complex;
use serde::{Deserialize, Serialize};

use crate::fuchsian::{FuchsProfile, SpecialFormVerdict};
use crate::master::{Budget, CriticalOrbit, SchubertProblem};
use crate::reconstruct::{Checks, OperatorDigest, PlaneDigest};

use super::file::ProblemFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Complete,
    Partial,
    Verified,
    Failed,
    Agree,
    Disagree,
    EmptyNonDominant,
    AllMatch,
    Mismatch,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Complete | Verdict::Verified | Verdict::Agree | Verdict::EmptyNonDominant | Verdict::AllMatch => 0,
            Verdict::Partial | Verdict::Mismatch => 3,
            Verdict::Failed | Verdict::Disagree => 4,
        }
    }
}

/// Decimal digits carried by a complex number printed at `prec` bits.
fn digits(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize
}

/// `re im` in scientific notation with a digit count fixed by the precision.
pub fn format_complex(c: &Complex) -> String {
    let n = Some(digits(c.prec().0));
    format!("{} {}", c.real().to_string_radix(10, n), c.imag().to_string_radix(10, n))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemEcho {
    pub p: usize,
    pub d: usize,
    pub z: Vec<String>,
    pub w: Vec<Vec<usize>>,
    pub m: Vec<usize>,
    /// `k_1, …, k_{p-1}`.
    pub k: Vec<usize>,
    pub degrees: Vec<usize>,
}

impl ProblemEcho {
    pub fn new(prob: &SchubertProblem) -> Self {
        Self {
            p: prob.p,
            d: prob.d,
            z: prob.z.points().iter().map(ToString::to_string).collect(),
            w: prob.w.iter().map(|w| w.w().to_vec()).collect(),
            m: prob.m.clone(),
            k: prob.k.k.clone(),
            degrees: prob.degs.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    /// `t[i-1]` are the roots of `T_i`, each as `"re im"`.
    pub t: Vec<Vec<String>>,
    pub residual_norm: f64,
    pub recheck_residual: f64,
    pub log_value: String,
    pub precision: u32,
}

impl OrbitRecord {
    pub fn new(o: &CriticalOrbit) -> Self {
        Self {
            t: o.rep.t.iter().map(|g| g.iter().map(format_complex).collect()).collect(),
            residual_norm: o.residual_norm,
            recheck_residual: o.recheck_residual,
            log_value: format_complex(&o.log_value),
            precision: o.precision,
        }
    }
}

/// Reconstruction and analysis of one plane in one coefficient domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneAnalysis {
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub checks: Checks,
    pub plane: Option<PlaneDigest>,
    /// Operator assembled from the flag of Wronskians.
    pub operator: Option<OperatorDigest>,
    /// Operator from the determinant of the plane.
    pub equation: Option<OperatorDigest>,
    pub profile: Option<FuchsProfile>,
    pub special_form: Option<SpecialFormVerdict>,
}

impl PlaneAnalysis {
    pub fn failed(error: String) -> Self {
        Self {
            verified: false,
            error: Some(error),
            checks: Checks::new(),
            plane: None,
            operator: None,
            equation: None,
            profile: None,
            special_form: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionRecord {
    pub orbit: usize,
    pub verified: bool,
    pub numeric: PlaneAnalysis,
    /// Present when the orbit has an exact Gaussian-rational form.
    pub exact: Option<PlaneAnalysis>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub input: ProblemFile,
    pub problem: ProblemEcho,
    pub budget: Budget,
    pub bound: u64,
    pub dim_singular: u64,
    pub starts_used: usize,
    pub precision: u32,
    pub orbits: Vec<OrbitRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub reconstructions: Vec<ReconstructionRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub distinct_planes: Option<bool>,
    pub verdict: Verdict,
    pub seed: u64,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub schema: u32,
    pub command: String,
    pub input: ProblemFile,
    pub problem: Option<ProblemEcho>,
    pub bound: u64,
    pub dim_singular: u64,
    pub dominant: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub z: Vec<String>,
    pub orbits: usize,
    pub complete: bool,
    pub starts_used: usize,
    pub max_residual: f64,
    #[serde(with = "crate::reconstruct::verify::nonfinite")]
    pub max_residue_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: u32,
    pub command: String,
    pub input: ProblemFile,
    pub budget: Budget,
    pub seed: u64,
    pub bound: u64,
    pub dim_singular: u64,
    pub trials: Vec<TrialRecord>,
    /// `(orbit count, number of trials)`, by increasing orbit count.
    pub distribution: Vec<(usize, usize)>,
    pub verdict: Verdict,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Run(RunReport),
    Count(CountReport),
    Sweep(SweepReport),
}

impl Report {
    pub fn verdict(&self) -> Verdict {
        match self {
            Report::Run(r) => r.verdict,
            Report::Count(r) => r.verdict,
            Report::Sweep(r) => r.verdict,
        }
    }

    /// The same report with the wall time zeroed, for comparisons between runs.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        match &mut r {
            Report::Run(x) => x.wall_time_s = 0.0,
            Report::Sweep(x) => x.wall_time_s = 0.0,
            Report::Count(_) => {}
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        match self {
            Report::Count(r) => {
                line(format!("intersection number: {}", r.bound));
                line(format!("singular-vector dimension: {}", r.dim_singular));
                line(format!("dominant: {}", r.dominant));
            }
            Report::Run(r) => {
                line(format!("p = {}, d = {}, k = {:?}", r.problem.p, r.problem.d, r.problem.k));
                line(format!("bound: {}, orbits found: {} ({} starts)", r.bound, r.orbits.len(), r.starts_used));
                for (i, o) in r.orbits.iter().enumerate() {
                    line(format!("orbit {}: residual {:e}", i + 1, o.residual_norm));
                    for (l, g) in o.t.iter().enumerate() {
                        line(format!("  t({}) = [{}]", l + 1, g.join(", ")));
                    }
                }
                for rec in &r.reconstructions {
                    let a = rec.exact.as_ref().unwrap_or(&rec.numeric);
                    let basis = a.plane.as_ref().map(|p| p.basis.join(", ")).unwrap_or_default();
                    line(format!("orbit {} plane: {{{basis}}} verified: {}", rec.orbit + 1, rec.verified));
                    for (name, c) in a.checks.iter().filter(|(_, c)| !c.pass) {
                        line(format!("  {name} failed: defect {:e} {}", c.defect, c.note.clone().unwrap_or_default()));
                    }
                    if let Some(e) = &a.error {
                        line(format!("  error: {e}"));
                    }
                }
                line(format!("wall time: {:.3} s", r.wall_time_s));
            }
            Report::Sweep(r) => {
                line(format!("bound: {}, singular-vector dimension: {}", r.bound, r.dim_singular));
                for (count, trials) in &r.distribution {
                    line(format!("{trials} trials with {count} orbits"));
                }
                line(format!("wall time: {:.3} s", r.wall_time_s));
            }
        }
        line(format!("verdict: {}", serde_json::to_string(&self.verdict()).expect("verdict").trim_matches('"')));
        out
    }
}
