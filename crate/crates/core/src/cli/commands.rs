use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Complex;

use crate::fuchsian::{equation_from_plane, profile, special_form_check, strip_common_factor};
use crate::master::{generic_points, solve_bethe, Budget, CriticalOrbit, SchubertProblem, SolveOutcome};
use crate::polycore::Scalar;
use crate::reconstruct::{
    check_tolerance, flag_from_orbit, reconstruct_exact, reconstruct_orbit, residue_identity_defect, Check,
    ReconstructError, ReconstructionReport,
};
use crate::schubert::{dim_singular, dominant_weight_check, GrassmannBox, LevelCounts, WeightVector};

use super::file::{FileError, ProblemFile, SCHEMA};
use super::report::{
    CountReport, OrbitRecord, PlaneAnalysis, ProblemEcho, ReconstructionRecord, RunReport, SweepReport, TrialRecord,
    Verdict,
};

/// Planes closer than this are reported as coinciding.
const DISTINCT_PLANES: f64 = 1e-8;

/// Called on each certified orbit before reconstruction; the index is the orbit's position.
pub type Tamper<'a> = &'a dyn Fn(usize, &mut CriticalOrbit);

pub fn singular_dimension(prob: &SchubertProblem) -> u64 {
    dim_singular(&prob.weights(), &prob.k, prob.grassmann_box())
}

pub fn count(file: &ProblemFile) -> Result<CountReport, FileError> {
    let report = |problem, bound, dim_singular, dominant, verdict| CountReport {
        schema: SCHEMA,
        command: "count".into(),
        input: file.clone(),
        problem,
        bound,
        dim_singular,
        dominant,
        verdict,
    };
    match file.problem() {
        Ok(prob) => {
            let bound = prob.lr_bound();
            let dim = singular_dimension(&prob);
            let dominant = dominant_weight_check(&prob.weights(), &prob.k).is_some();
            let verdict = match (dominant, bound == dim) {
                (false, true) if bound == 0 => Verdict::EmptyNonDominant,
                (_, true) => Verdict::Agree,
                (_, false) => Verdict::Disagree,
            };
            Ok(report(Some(ProblemEcho::new(&prob)), bound, dim, dominant, verdict))
        }
        // a special form whose weight at infinity is not dominant has no admissible problem at all
        Err(FileError::Problem(e)) => {
            let Some(s) = &file.special else { return Err(FileError::Problem(e)) };
            let p = file.p;
            let weights: Vec<WeightVector> = s
                .m
                .iter()
                .map(|&m| {
                    let mut a = vec![0; p.saturating_sub(1)];
                    if let Some(first) = a.first_mut() {
                        *first = m;
                    }
                    WeightVector::new(a)
                })
                .collect();
            let k = LevelCounts::new(s.k.clone());
            if p < 2 || s.k.len() + 1 != p || dominant_weight_check(&weights, &k).is_some() {
                return Err(FileError::Problem(e));
            }
            let bx = GrassmannBox::new(p, s.m.iter().copied().max().unwrap_or(0) + p - 1).map_err(|_| FileError::Problem(e))?;
            let dim = dim_singular(&weights, &k, bx);
            let verdict = if dim == 0 { Verdict::EmptyNonDominant } else { Verdict::Disagree };
            Ok(report(None, 0, dim, false, verdict))
        }
        Err(e) => Err(e),
    }
}

fn run_report(file: &ProblemFile, prob: &SchubertProblem, budget: &Budget, command: &str) -> (RunReport, Vec<CriticalOrbit>) {
    let out = solve_bethe(prob, budget);
    let verdict = if out.complete { Verdict::Complete } else { Verdict::Partial };
    let report = RunReport {
        schema: SCHEMA,
        command: command.into(),
        input: file.clone(),
        problem: ProblemEcho::new(prob),
        budget: *budget,
        bound: out.bound,
        dim_singular: singular_dimension(prob),
        starts_used: out.starts_used,
        precision: out.precision,
        orbits: out.orbits.iter().map(OrbitRecord::new).collect(),
        reconstructions: Vec::new(),
        distinct_planes: None,
        verdict,
        seed: budget.seed,
        wall_time_s: 0.0,
    };
    (report, out.orbits)
}

pub fn solve(file: &ProblemFile, budget: &Budget) -> Result<RunReport, FileError> {
    let start = Instant::now();
    let prob = file.problem()?;
    let (mut report, _) = run_report(file, &prob, budget, "solve");
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Reconstruction checks together with the Fuchsian analysis of the plane.
pub fn analyse<S: Scalar>(prob: &SchubertProblem, rep: Result<ReconstructionReport<S>, ReconstructError>) -> PlaneAnalysis {
    let rep = match rep {
        Ok(r) => r,
        Err(e) => return PlaneAnalysis::failed(e.to_string()),
    };
    let ctx = rep.plane.ctx();
    let mut checks = rep.checks.clone();
    let prof = profile(&rep.plane, prob.d);
    checks.insert(
        "profile_invariants".into(),
        Check::count(prof.violations.len(), (!prof.holds()).then(|| prof.violations.join("; "))),
    );
    let equation = equation_from_plane(&rep.plane);
    let agreement = match (&equation, strip_common_factor(rep.operator.clone()).normalized()) {
        (Ok(eq), Some(op)) => Check::new(eq.max_relative_distance(&op), check_tolerance::<S>(ctx)),
        (Err(e), _) => Check::failed(e.to_string()),
        (_, None) => Check::failed("flag operator has zero leading coefficient".into()),
    };
    checks.insert("equation_agreement".into(), agreement);
    let special_form = prob.is_special().then(|| special_form_check(&rep.plane, &prob.z));
    if let Some(v) = &special_form {
        checks.insert(
            "special_form".into(),
            Check::count(v.defects.len() + usize::from(v.matches && !v.certified), (!v.certified).then(|| v.defects.join("; "))),
        );
    }
    PlaneAnalysis {
        verified: checks.values().all(|c| c.pass),
        error: None,
        checks,
        plane: Some(rep.plane.digest()),
        operator: Some(rep.operator.digest()),
        equation: equation.ok().map(|e| e.digest()),
        profile: Some(prof),
        special_form,
    }
}

pub fn verify(file: &ProblemFile, budget: &Budget, tamper: Option<Tamper>) -> Result<RunReport, FileError> {
    let start = Instant::now();
    let prob = file.problem()?;
    let (mut report, mut orbits) = run_report(file, &prob, budget, "verify");
    if let Some(f) = tamper {
        for (i, o) in orbits.iter_mut().enumerate() {
            f(i, o);
        }
        report.orbits = orbits.iter().map(OrbitRecord::new).collect();
    }
    let mut planes = Vec::new();
    for (i, o) in orbits.iter().enumerate() {
        let rep = reconstruct_orbit(&prob, o);
        if let Ok(r) = &rep {
            planes.push(r.plane.clone());
        }
        let mut numeric = analyse(&prob, rep);
        if numeric.error.is_some() {
            // the flag exists even when no plane does
            if let Ok(d) = flag_from_orbit(&prob, o).and_then(|f| residue_identity_defect(&f)) {
                numeric.checks.insert("residue_identity".into(), Check::new(d, check_tolerance::<Complex>(o.precision)));
            }
        }
        let exact = reconstruct_exact(&prob, o).map(|r| analyse(&prob, r));
        let verified = numeric.verified && exact.as_ref().is_none_or(|e| e.verified);
        report.reconstructions.push(ReconstructionRecord { orbit: i, verified, numeric, exact });
    }
    let distinct = planes
        .iter()
        .enumerate()
        .all(|(i, a)| planes[i + 1..].iter().all(|b| a.distance(b) > DISTINCT_PLANES));
    report.distinct_planes = Some(distinct);
    let all_ok = distinct && planes.len() == orbits.len() && report.reconstructions.iter().all(|r| r.verified);
    report.verdict = match (all_ok, report.verdict) {
        (false, _) => Verdict::Failed,
        (true, Verdict::Complete) => Verdict::Verified,
        (true, v) => v,
    };
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// One trial of a sweep: the problem at freshly drawn points and its solver outcome.
pub struct SweepRun {
    pub problem: SchubertProblem,
    pub outcome: SolveOutcome,
}

/// Re-solve a special-form template at freshly drawn generic points.
///
/// Trial `i` draws its points from a stream seeded by `seed` and runs the solver with seed `seed + i`.
pub fn sweep_runs(file: &ProblemFile, budget: &Budget, trials: usize, seed: u64) -> Result<Vec<SweepRun>, FileError> {
    let Some(s) = &file.special else {
        return Err(FileError::Indices);
    };
    file.problem()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut runs = Vec::with_capacity(trials);
    for trial in 0..trials {
        let z = generic_points(s.m.len(), &mut rng);
        let problem = SchubertProblem::from_special(file.p, &s.m, &s.k, z)?;
        let b = Budget { seed: seed.wrapping_add(trial as u64), ..*budget };
        let outcome = solve_bethe(&problem, &b);
        runs.push(SweepRun { problem, outcome });
    }
    Ok(runs)
}

pub fn summarize_sweep(file: &ProblemFile, budget: &Budget, seed: u64, runs: &[SweepRun], wall_time_s: f64) -> Result<SweepReport, FileError> {
    let template = file.problem()?;
    let dim = singular_dimension(&template);
    let records: Vec<TrialRecord> = runs
        .iter()
        .map(|SweepRun { problem, outcome }| {
            let residue = outcome
                .orbits
                .iter()
                .map(|o| {
                    flag_from_orbit(problem, o)
                        .and_then(|f| residue_identity_defect(&f))
                        .unwrap_or(f64::INFINITY)
                })
                .fold(0.0, f64::max);
            TrialRecord {
                z: problem.z.points().iter().map(ToString::to_string).collect(),
                orbits: outcome.orbits.len(),
                complete: outcome.complete,
                starts_used: outcome.starts_used,
                max_residual: outcome.orbits.iter().map(|o| o.residual_norm).fold(0.0, f64::max),
                max_residue_defect: residue,
            }
        })
        .collect();
    let mut distribution = BTreeMap::new();
    for r in &records {
        *distribution.entry(r.orbits).or_insert(0) += 1;
    }
    let verdict = if records.iter().all(|r| r.orbits as u64 == dim) { Verdict::AllMatch } else { Verdict::Mismatch };
    Ok(SweepReport {
        schema: SCHEMA,
        command: "sweep".into(),
        input: file.clone(),
        budget: *budget,
        seed,
        bound: template.lr_bound(),
        dim_singular: dim,
        trials: records,
        distribution: distribution.into_iter().collect(),
        verdict,
        wall_time_s,
    })
}

pub fn sweep(file: &ProblemFile, budget: &Budget, trials: usize, seed: u64) -> Result<SweepReport, FileError> {
    let start = Instant::now();
    let runs = sweep_runs(file, budget, trials, seed)?;
    summarize_sweep(file, budget, seed, &runs, start.elapsed().as_secs_f64())
}
