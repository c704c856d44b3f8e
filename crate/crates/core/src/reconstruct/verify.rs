use std::collections::BTreeMap;

use rug::Complex;
use serde::{Deserialize, Serialize};

use crate::master::{rationalize_point, refine_orbit, sep_tol, BethePoint, CriticalOrbit, SchubertProblem};
use crate::polycore::{GaussRational, Poly, Scalar};

use super::flag::{flag_from_point, residue_identity_defect, WronskianFlag};
use super::operator::{operator_from_flag, LinearOperator};
use super::plane::{iterated_integral_plane, kernel_plane, PPlane};
use super::ReconstructError;

const MAX_PREC: u32 = 1024;

/// Tolerance for numeric defects: `10^{-prec/8}`, or 0 when exact.
pub fn check_tolerance<S: Scalar>(ctx: S::Ctx) -> f64 {
    if S::EXACT {
        0.0
    } else {
        10f64.powf(-(S::work_precision(ctx) as f64) / 8.0)
    }
}

/// One named verdict; `pass` iff `defect <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    #[serde(with = "nonfinite")]
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Check {
    pub fn new(defect: f64, tolerance: f64) -> Self {
        Self { defect, tolerance, pass: defect <= tolerance, note: None }
    }

    /// A count of violations, which must be zero.
    pub fn count(bad: usize, note: Option<String>) -> Self {
        Self { defect: bad as f64, tolerance: 0.0, pass: bad == 0, note }
    }

    pub fn failed(note: String) -> Self {
        Self { defect: f64::INFINITY, tolerance: 0.0, pass: false, note: Some(note) }
    }
}

pub type Checks = BTreeMap<String, Check>;

/// JSON has no infinities; those are written as the strings `"inf"`, `"-inf"`, `"nan"`.
pub mod nonfinite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        match *v {
            x if x.is_finite() => s.serialize_f64(x),
            x if x.is_nan() => s.serialize_str("nan"),
            x if x > 0.0 => s.serialize_str("inf"),
            _ => s.serialize_str("-inf"),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("not a number: {t}"))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionReport<S: Scalar> {
    pub flag: WronskianFlag<S>,
    pub operator: LinearOperator<S>,
    /// From the kernel of the operator.
    pub plane: PPlane<S>,
    /// From the nested integrals, when they could be formed.
    pub integral_plane: Option<PPlane<S>>,
    pub checks: Checks,
}

impl<S: Scalar> ReconstructionReport<S> {
    pub fn verified(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    /// Names of the failing checks.
    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, c)| !c.pass).map(|(k, _)| k.as_str()).collect()
    }
}

fn monic_distance<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> f64 {
    match (a.monic(), b.monic()) {
        (Some(a), Some(b)) if a.degree() == b.degree() => a.relative_distance(&b),
        _ => f64::INFINITY,
    }
}

fn close<S: Scalar>(a: &S, b: &S, tol: f64) -> bool {
    if S::EXACT {
        a == b
    } else {
        a.sub(b).magnitude() <= tol * (1.0 + a.magnitude().max(b.magnitude()))
    }
}

/// Check that `plane` is a nondegenerate point of the problem's Schubert intersection with flag `flag`.
pub fn verify_membership<S: Scalar>(prob: &SchubertProblem, plane: &PPlane<S>, flag: &WronskianFlag<S>) -> Checks {
    let ctx = plane.ctx();
    let tol = check_tolerance::<S>(ctx);
    let p = prob.p;
    let mut checks = Checks::new();
    if plane.len() != p {
        let note = format!("plane has {} elements, expected {p}", plane.len());
        for name in ["wronskian_match", "flag_match", "exponents_match", "nondegeneracy"] {
            checks.insert(name.into(), Check::failed(note.clone()));
        }
        return checks;
    }
    let points: Vec<S> = prob.z.in_domain::<S>(ctx).into_iter().flatten().collect();

    let target = prob.w_target.try_map(ctx, |c| S::from_gauss(c, ctx));
    let wr = plane.wronskian();
    checks.insert(
        "wronskian_match".into(),
        match (&wr, target) {
            (Ok(w), Some(t)) => Check::new(monic_distance(w, &t), tol),
            (Err(e), _) => Check::failed(e.to_string()),
            (_, None) => Check::failed("marked points outside the coefficient domain".into()),
        },
    );

    let mut flag_defect: f64 = 0.0;
    for i in 1..=p {
        flag_defect = flag_defect.max(match plane.sub_wronskian(i) {
            Ok(w) => monic_distance(&w, &flag.w[i]),
            Err(_) => f64::INFINITY,
        });
    }
    checks.insert("flag_match".into(), Check::new(flag_defect, tol));

    let mut bad = Vec::new();
    for (j, z) in points.iter().enumerate() {
        let mut got = plane.orders_at(z, p);
        got.reverse();
        if got != prob.rho[j] {
            bad.push(format!("z_{}: {got:?} != {:?}", j + 1, prob.rho[j]));
        }
    }
    if plane.degrees() != prob.degs {
        bad.push(format!("infinity: degrees {:?} != {:?}", plane.degrees(), prob.degs));
    }
    checks.insert("exponents_match".into(), Check::count(bad.len(), (!bad.is_empty()).then(|| bad.join("; "))));

    checks.insert(
        "residue_identity".into(),
        match residue_identity_defect(flag) {
            Ok(d) => Check::new(d, tol),
            Err(e) => Check::failed(e.to_string()),
        },
    );

    // flag realizes exact orders at the marked points; unmarked roots of
    // consecutive Wronskians are disjoint
    let mut bad = Vec::new();
    for (j, z) in points.iter().enumerate() {
        let mut rho = prob.rho[j].clone();
        rho.sort_unstable();
        for i in 1..=p {
            let got = plane.orders_at(z, i);
            if got != rho[..i] {
                bad.push(format!("z_{}, V({i}): orders {got:?} != {:?}", j + 1, &rho[..i]));
            }
        }
    }
    let stol = if S::EXACT { 0.0 } else { sep_tol(S::work_precision(ctx)) };
    for i in 1..p.saturating_sub(1) {
        let here = &flag.roots[p - i];
        let next = &flag.roots[p - i - 1];
        for t in here {
            if next.iter().any(|s| close(t, s, stol)) || points.iter().any(|z| close(t, z, stol)) {
                bad.push(format!("unmarked root {t} of W_{i} is shared with W_{}", i + 1));
            }
        }
    }
    checks.insert("nondegeneracy".into(), Check::count(bad.len(), (!bad.is_empty()).then(|| bad.join("; "))));
    checks
}

/// Full reconstruction of one critical point in an arbitrary domain.
pub fn reconstruct_point<S: Scalar>(
    prob: &SchubertProblem,
    pt: &BethePoint<S>,
    ctx: S::Ctx,
) -> Result<ReconstructionReport<S>, ReconstructError> {
    let flag = flag_from_point(prob, pt, ctx)?;
    let operator = operator_from_flag(&flag)?;
    let plane = kernel_plane(&operator, prob.d)?;
    let mut checks = verify_membership(prob, &plane, &flag);
    let integral_plane = match iterated_integral_plane(&flag) {
        Ok(ip) => {
            checks.insert("path_agreement".into(), Check::new(plane.distance(&ip), check_tolerance::<S>(ctx)));
            Some(ip)
        }
        Err(e) => {
            checks.insert("path_agreement".into(), Check::failed(e.to_string()));
            None
        }
    };
    Ok(ReconstructionReport { flag, operator, plane, integral_plane, checks })
}

/// Numeric reconstruction of a certified orbit, re-polishing at higher precision
/// when the kernel rank decision is not clear-cut. If the orbit cannot be
/// re-polished in place, the kernel error is returned.
pub fn reconstruct_orbit(prob: &SchubertProblem, orbit: &CriticalOrbit) -> Result<ReconstructionReport<Complex>, ReconstructError> {
    let mut current = orbit.clone();
    loop {
        match reconstruct_point(prob, &current.rep, current.precision) {
            Err(e @ (ReconstructError::KernelDimension { .. } | ReconstructError::RankGap(_))) if current.precision < MAX_PREC => {
                current = refine_orbit(prob, &current, current.precision * 2).ok_or(e)?;
            }
            other => return other,
        }
    }
}

/// Exact reconstruction over the Gaussian rationals, when the orbit has an exact rational form.
pub fn reconstruct_exact(
    prob: &SchubertProblem,
    orbit: &CriticalOrbit,
) -> Option<Result<ReconstructionReport<GaussRational>, ReconstructError>> {
    let pt = rationalize_point(prob, orbit)?;
    Some(reconstruct_point(prob, &pt, ()))
}
