//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Rational};

use schubert_bethe::cli::{analyse, sweep_runs, verify, ProblemFile, SweepRun, Verdict};
use schubert_bethe::fuchsian::{equation_from_plane, hypergeometric_case, profile};
use schubert_bethe::master::{
    bethe_residuals, generic_points, is_admissible, master_log_value, solve_bethe, Budget, CriticalOrbit, NumPoint,
    SchubertProblem,
};
use schubert_bethe::polycore::{monic_wronskian, GaussPoly, GaussRational, MarkedPoints, Poly, Scalar};
use schubert_bethe::reconstruct::{
    flag_from_orbit, reconstruct_exact, reconstruct_orbit, residue_identity_defect, LinearOperator, PPlane,
    ReconstructError,
};
use schubert_bethe::schubert::{
    dim_singular, intersection_number, lr_product, GrassmannBox, LevelCounts, SchubertIndex, WeightVector,
};

type Outcome = Result<String, String>;

/// Certified orbits gathered by the count criteria, checked again by the identity criteria.
type Pool = Vec<(SchubertProblem, CriticalOrbit)>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: f64) -> Result<f64, String> {
    let s = start.elapsed().as_secs_f64();
    ensure(s < limit, || format!("took {s:.2} s, limit {limit} s"))?;
    Ok(s)
}

fn g(num: i64, den: i64) -> GaussRational {
    GaussRational::real(Rational::from((num, den)))
}

fn gpoly(c: &[(i64, i64)]) -> GaussPoly {
    Poly::new(c.iter().map(|&(n, d)| g(n, d)).collect(), ())
}

fn special_file(p: usize, z: &str, m: &[usize], k: &[usize]) -> ProblemFile {
    ProblemFile::from_toml(&format!("p = {p}\nz = {z}\n[special]\nm = {m:?}\nk = {k:?}\n")).expect("valid problem file")
}

fn c1_worked(pool: &mut Pool) -> Outcome {
    let start = Instant::now();
    let z = MarkedPoints::from_reals(&[0, 1]).map_err(|e| e.to_string())?;
    let prob = SchubertProblem::from_special(2, &[1, 1], &[1], z).map_err(|e| e.to_string())?;
    let out = solve_bethe(&prob, &Budget::default());
    ensure(out.orbits.len() == 1, || format!("{} orbits", out.orbits.len()))?;
    let orbit = &out.orbits[0];
    let half = Complex::with_val(orbit.precision, 0.5);
    let dt = orbit.rep.t[0][0].sub(&half).magnitude();
    ensure(dt <= 1e-30, || format!("t = {} is {dt:e} from 1/2", orbit.rep.t[0][0]))?;

    let exact = reconstruct_exact(&prob, orbit)
        .ok_or("orbit has no exact form")?
        .map_err(|e| e.to_string())?;
    ensure(exact.verified(), || format!("exact checks failed: {:?}", exact.failures()))?;
    let target = gpoly(&[(1, 4), (-1, 2), (1, 1)]);
    let mut spanning = exact.plane.basis().to_vec();
    ensure(spanning[0] == gpoly(&[(-1, 2), (1, 1)]), || format!("first basis element {}", spanning[0]))?;
    spanning.push(target);
    ensure(matches!(PPlane::new(&spanning), Err(ReconstructError::DependentBasis)), || {
        "x^2 - x/2 + 1/4 is not in the plane".into()
    })?;
    let w = monic_wronskian(exact.plane.basis()).map_err(|e| e.to_string())?;
    ensure(w == gpoly(&[(0, 1), (-1, 1), (1, 1)]), || format!("Wronskian {w}"))?;

    let numeric = reconstruct_orbit(&prob, orbit).map_err(|e| e.to_string())?;
    let reference: Vec<Poly<Complex>> = exact.plane.basis().iter().map(|b| b.to_numeric(orbit.precision)).collect();
    let reference = PPlane::new(&reference).map_err(|e| e.to_string())?;
    let dist = numeric.plane.distance(&reference);
    ensure(dist <= 1e-20, || format!("numeric plane {dist:e} from exact"))?;
    let secs = within(start, 1.0)?;
    pool.push((prob, orbit.clone()));
    Ok(format!("t = 1/2, plane {{x - 1/2, x^2}}, W = x^2 - x, numeric defect {dist:.1e}, {secs:.2} s"))
}

fn c2_hypergeometric(pool: &mut Pool) -> Outcome {
    let mut notes = Vec::new();
    for (m1, m2, d, k1, degrees, c) in [(2, 2, 4, 2, [0, 3, 4], 6), (1, 1, 3, 1, [0, 2, 3], 2)] {
        let start = Instant::now();
        let file = special_file(3, "[0, 1]", &[m1, m2], &[k1, 0]);
        let report = verify(&file, &file.budget(), None).map_err(|e| e.to_string())?;
        ensure(report.verdict == Verdict::Verified, || format!("({m1},{m2},{d}): verdict {:?}", report.verdict))?;
        ensure(report.orbits.len() == 1, || format!("({m1},{m2},{d}): {} orbits", report.orbits.len()))?;
        ensure(report.problem.d == d && report.problem.degrees == degrees, || {
            format!("({m1},{m2},{d}): d = {}, degrees {:?}", report.problem.d, report.problem.degrees)
        })?;
        let got = report.reconstructions[0].numeric.plane.as_ref().map(|p| p.degrees.clone());
        ensure(got.as_deref() == Some(&degrees[..]), || format!("plane degrees {got:?}"))?;

        let prob = file.problem().map_err(|e| e.to_string())?;
        let out = solve_bethe(&prob, &file.budget());
        let Some(orbit) = out.orbits.first() else { return Err("solver lost the orbit".into()) };
        let rep = reconstruct_orbit(&prob, orbit).map_err(|e| e.to_string())?;
        let op = equation_from_plane(&rep.plane).map_err(|e| e.to_string())?;
        let constant = op.a[1].coeff(0);
        let found = constant.real().to_f64();
        ensure((found - c as f64).abs() < 1e-20 && constant.imag().to_f64().abs() < 1e-20, || {
            format!("({m1},{m2},{d}): c = {constant}, expected {c}")
        })?;
        let h = hypergeometric_case(3, m1, m2, d).ok_or("closed form rejected an admissible case")?;
        ensure(h.c == c && h.degrees == degrees, || format!("closed form gives c = {}, degrees {:?}", h.c, h.degrees))?;
        let closed = LinearOperator { a: h.operator.a.iter().map(|x| x.to_numeric(rep.plane.ctx())).collect() };
        let dist = op.max_relative_distance(&closed);
        ensure(dist < 1e-20, || format!("({m1},{m2},{d}): operator {dist:e} from closed form"))?;
        let secs = within(start, 5.0)?;
        pool.push((prob, orbit.clone()));
        notes.push(format!("({m1},{m2},{d}) c = {c} in {secs:.2} s"));
    }
    // without an admissible middle degree there is no Schubert problem at all
    for (m1, m2) in [(1, 1), (2, 2), (1, 2)] {
        for d in 3..=7usize {
            if hypergeometric_case(3, m1, m2, d).is_some() {
                continue;
            }
            let bx = GrassmannBox::new(3, d).map_err(|e| e.to_string())?;
            let z = MarkedPoints::from_reals(&[0, 1]).map_err(|e| e.to_string())?;
            let mut count = 0;
            for winf in bx.all_indices() {
                let w = vec![vec![m1, 0, 0], vec![m2, 0, 0], winf.w().to_vec()];
                if let Ok(prob) = SchubertProblem::build(3, d, z.clone(), w) {
                    let degs = &prob.degs;
                    if degs[0] == 0 {
                        count += solve_bethe(&prob, &Budget::default()).orbits.len();
                    }
                }
            }
            ensure(count == 0, || format!("inadmissible ({m1},{m2},{d}) has {count} orbits"))?;
        }
    }
    notes.push("inadmissible d: 0".into());
    Ok(notes.join(", "))
}

fn c3_p2(pool: &mut Pool) -> Outcome {
    let start = Instant::now();
    let file = special_file(2, "[0, 1, 2, 3]", &[1, 1, 1, 1], &[2]);
    let template = file.problem().map_err(|e| e.to_string())?;
    let bound = template.lr_bound();
    let dim = dim_singular(&template.weights(), &template.k, template.grassmann_box());
    let pieri = common::pieri_two_rows(template.grassmann_box().width());
    ensure(bound == 2 && dim == 2 && pieri == 2, || format!("bound {bound}, dim_singular {dim}, Pieri {pieri}"))?;
    let runs = sweep_runs(&file, &file.budget(), 50, 3).map_err(|e| e.to_string())?;
    for (i, SweepRun { problem, outcome }) in runs.iter().enumerate() {
        ensure(outcome.orbits.len() == 2, || format!("trial {i}: {} orbits", outcome.orbits.len()))?;
        let pairs = common::two_variable_critical_pairs(problem.z.points(), 256);
        ensure(pairs.len() == 2, || format!("trial {i}: elimination finds {} pairs", pairs.len()))?;
        for o in &outcome.orbits {
            let t = &o.rep.t[0];
            let off = pairs
                .iter()
                .map(|(a, b)| {
                    let straight = t[0].sub(a).magnitude().max(t[1].sub(b).magnitude());
                    let swapped = t[0].sub(b).magnitude().max(t[1].sub(a).magnitude());
                    straight.min(swapped)
                })
                .fold(f64::INFINITY, f64::min);
            ensure(off < 1e-20, || format!("trial {i}: orbit {off:e} from the eliminated pairs"))?;
        }
        pool.extend(outcome.orbits.iter().map(|o| (problem.clone(), o.clone())));
    }
    let secs = within(start, 60.0)?;
    Ok(format!("50 trials x 2 orbits = intersection number = dim_singular = Pieri count = elimination count, {secs:.1} s"))
}

fn c4_p3(pool: &mut Pool) -> Outcome {
    let start = Instant::now();
    let file = special_file(3, "[0, 1, 2]", &[1, 1, 1], &[1, 0]);
    let template = file.problem().map_err(|e| e.to_string())?;
    let dim = dim_singular(&template.weights(), &template.k, template.grassmann_box());
    ensure(dim == 2, || format!("dim_singular {dim}"))?;
    let runs = sweep_runs(&file, &file.budget(), 50, 4).map_err(|e| e.to_string())?;
    for (i, SweepRun { problem, outcome }) in runs.iter().enumerate() {
        ensure(outcome.orbits.len() == 2, || format!("trial {i}: {} orbits", outcome.orbits.len()))?;
        let crit = common::one_variable_critical_points(problem.z.points(), 256);
        let found: Vec<Complex> = outcome.orbits.iter().map(|o| o.rep.t[0][0].clone()).collect();
        let off = common::match_distance(&found, &crit).max(common::match_distance(&crit, &found));
        ensure(off < 1e-20, || format!("trial {i}: orbits {off:e} from the roots of P'"))?;
        pool.extend(outcome.orbits.iter().map(|o| (problem.clone(), o.clone())));
    }
    let secs = within(start, 30.0)?;
    Ok(format!("50 trials x 2 orbits = dim_singular = roots of P', {secs:.1} s"))
}

fn c5_residue(pool: &Pool) -> Outcome {
    let mut worst: f64 = 0.0;
    for (prob, o) in pool {
        let d = flag_from_orbit(prob, o).and_then(|f| residue_identity_defect(&f)).map_err(|e| e.to_string())?;
        worst = worst.max(d);
    }
    ensure(worst <= 1e-10, || format!("largest defect {worst:e}"))?;
    Ok(format!("{} orbits, largest defect {worst:.1e}", pool.len()))
}

/// Random non-special problems with `p = 3` and at most three Bethe variables.
fn mixed_instances(count: usize, rng: &mut ChaCha8Rng) -> Vec<SchubertProblem> {
    let mut shapes = Vec::new();
    for d in 3..=6usize {
        let bx = GrassmannBox::new(3, d).expect("box");
        let finite: Vec<SchubertIndex> = bx.all_indices().into_iter().filter(|w| w.w()[2] == 0 && w.size() > 0).collect();
        for n in 1..=4usize {
            let mut tries = 0;
            while tries < 400 {
                tries += 1;
                let mut w: Vec<Vec<usize>> = (0..n).map(|_| finite.choose(rng).expect("indices").w().to_vec()).collect();
                let used: usize = w.iter().map(|x| x.iter().sum::<usize>()).sum();
                let Some(rest) = bx.dim().checked_sub(used) else { continue };
                let infs: Vec<SchubertIndex> = bx.all_indices().into_iter().filter(|x| x.size() == rest).collect();
                let Some(winf) = infs.choose(rng) else { continue };
                w.push(winf.w().to_vec());
                shapes.push((d, w));
            }
        }
    }
    shapes.shuffle(rng);
    let mut out: Vec<SchubertProblem> = Vec::new();
    for (d, w) in shapes {
        let z = generic_points(w.len() - 1, rng);
        let Ok(prob) = SchubertProblem::build(3, d, z, w) else { continue };
        if prob.is_special() || prob.unknowns() > 3 || prob.lr_bound() == 0 {
            continue;
        }
        if out.iter().any(|q| q.w == prob.w) {
            continue;
        }
        out.push(prob);
        if out.len() == count {
            break;
        }
    }
    out
}

fn c6_bound(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances = mixed_instances(24, &mut rng);
    ensure(instances.len() >= 20, || format!("only {} admissible instances", instances.len()))?;
    let (mut orbits, mut bounds) = (0, 0);
    for prob in &instances {
        let out = solve_bethe(prob, &Budget::default());
        let w: Vec<_> = prob.w.iter().map(|x| x.w().to_vec()).collect();
        ensure(out.orbits.len() as u64 <= out.bound, || format!("{w:?}: {} orbits above bound {}", out.orbits.len(), out.bound))?;
        orbits += out.orbits.len();
        bounds += out.bound;
        for o in &out.orbits {
            let rep = reconstruct_orbit(prob, o);
            let plane = rep.as_ref().ok().map(|r| r.plane.clone());
            let a = analyse(prob, rep);
            ensure(a.verified, || {
                let bad: Vec<_> = a.checks.iter().filter(|(_, c)| !c.pass).map(|(k, c)| format!("{k}: {}", c.note.clone().unwrap_or_default())).collect();
                format!("{w:?} at {}: orbit fails verification {bad:?} {:?}", prob.z.points().iter().map(|z| z.to_string()).collect::<Vec<_>>().join(", "), a.error)
            })?;
            // the plane's local exponents give back the indices that were imposed
            let prof = profile(&plane.expect("verified plane"), prob.d);
            for s in &prof.finite {
                let at = Complex::with_val(64, (s.re, s.im));
                let j = (0..prob.n())
                    .min_by(|&a, &b| {
                        let da = prob.point(a).to_complex(64).sub(&at).magnitude();
                        let db = prob.point(b).to_complex(64).sub(&at).magnitude();
                        da.total_cmp(&db)
                    })
                    .expect("marked points");
                ensure(s.index == prob.w[j].w(), || format!("{w:?}: index {:?} at z_{}", s.index, j + 1))?;
            }
            ensure(prof.infinity.index == prob.infinity_index().w(), || format!("{w:?}: index at infinity {:?}", prof.infinity.index))?;
        }
    }
    Ok(format!("{} instances, {orbits} verified orbits, total bound {bounds}", instances.len()))
}

fn c7_paths(pool: &Pool) -> Outcome {
    let mut worst: f64 = 0.0;
    for (prob, o) in pool {
        let rep = reconstruct_orbit(prob, o).map_err(|e| e.to_string())?;
        let ip = rep.integral_plane.as_ref().ok_or("no iterated-integral plane")?;
        worst = worst.max(rep.plane.distance(ip));
    }
    ensure(worst <= 1e-15, || format!("largest disagreement {worst:e}"))?;
    Ok(format!("{} orbits, largest disagreement {worst:.1e}", pool.len()))
}

fn c8_combinatorics() -> Outcome {
    let (mut products, mut triples) = (0, 0);
    for p in 1..=3usize {
        for d in p - 1..=6 {
            let bx = GrassmannBox::new(p, d).map_err(|e| e.to_string())?;
            let all = bx.all_indices();
            for u in &all {
                for v in &all {
                    let got: Vec<(Vec<usize>, u64)> = lr_product(u, v)
                        .map_err(|e| e.to_string())?
                        .into_iter()
                        .map(|(w, c)| (w.w().to_vec(), c))
                        .collect();
                    let want: Vec<(Vec<usize>, u64)> = common::box_product(u.w(), v.w(), p, bx.width()).into_iter().collect();
                    ensure(got == want, || format!("G({p},{d}) {:?}*{:?}: {got:?} vs {want:?}", u.w(), v.w()))?;
                    products += 1;
                }
            }
            let top = vec![bx.width(); p];
            for (a, u) in all.iter().enumerate() {
                for (b, v) in all.iter().enumerate().skip(a) {
                    for w in all.iter().skip(b) {
                        if u.size() + v.size() + w.size() != bx.dim() {
                            continue;
                        }
                        let got = intersection_number(&[u.clone(), v.clone(), w.clone()]).map_err(|e| e.to_string())?.value;
                        let want: u64 = common::box_product(u.w(), v.w(), p, bx.width())
                            .iter()
                            .map(|(x, c)| c * common::box_product(x, w.w(), p, bx.width()).get(&top).copied().unwrap_or(0))
                            .sum();
                        ensure(got == want, || format!("G({p},{d}) <{:?},{:?},{:?}> = {got}, oracle {want}", u.w(), v.w(), w.w()))?;
                        triples += 1;
                    }
                }
            }
        }
    }
    let mut table = 0;
    for p in 2..=4usize {
        let bx = GrassmannBox::new(p, p + 1).map_err(|e| e.to_string())?;
        for m1 in 1..=5usize {
            for m2 in 1..=5usize {
                let weight = |m: usize| {
                    let mut a = vec![0; p - 1];
                    a[0] = m;
                    WeightVector::new(a)
                };
                for k1 in 0..=7usize {
                    for k2 in 0..=2usize {
                        if p == 2 && k2 > 0 {
                            continue;
                        }
                        let mut k = vec![0; p - 1];
                        k[0] = k1;
                        if p > 2 {
                            k[1] = k2;
                        }
                        let want = u64::from(k1 <= m1.min(m2) && k2 == 0);
                        let got = dim_singular(&[weight(m1), weight(m2)], &LevelCounts::new(k.clone()), bx);
                        ensure(got == want, || format!("p={p} m=({m1},{m2}) k={k:?}: {got}, expected {want}"))?;
                        table += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{products} products, {triples} triple intersections, {table} two-point entries"))
}

fn c9_gradient(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let families = [
        special_file(2, "[0, 1, 2, 3]", &[1, 1, 1, 1], &[2]),
        special_file(3, "[0, 1, 2]", &[1, 1, 1], &[1, 0]),
        special_file(3, "[0, 1]", &[2, 2], &[2, 0]),
        ProblemFile::from_toml("p = 3\nd = 4\nz = [0, 1, 2]\nw = [[1, 1, 0], [1, 0, 0], [1, 0, 0], [1, 1, 0]]\n").expect("file"),
    ];
    let prec = 128;
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for file in &families {
        let prob = file.problem().map_err(|e| e.to_string())?;
        ensure(prob.unknowns() > 0, || "family without unknowns".into())?;
        let mut points = 0;
        while points < 100 {
            let flat: Vec<Complex> =
                (0..prob.unknowns()).map(|_| Complex::with_val(prec, (rng.gen_range(-1.0..3.0), rng.gen_range(-1.5..1.5)))).collect();
            let t = NumPoint::from_flat(&prob, &flat);
            if !is_admissible(&prob, &t, 0.05).ok {
                continue;
            }
            points += 1;
            let grad: Vec<Complex> = bethe_residuals(&prob, &t).map_err(|e| e.to_string())?.into_iter().flatten().collect();
            let mut num = 0.0f64;
            let mut den = 0.0f64;
            for (i, gi) in grad.iter().enumerate() {
                let shifted = |s: f64| {
                    let mut v = flat.clone();
                    v[i] = v[i].add(&Complex::with_val(prec, s));
                    master_log_value(&prob, &NumPoint::from_flat(&prob, &v)).log.expect("admissible")
                };
                let diff = shifted(h).sub(&shifted(-h));
                let tau = 2.0 * std::f64::consts::PI;
                let im = diff.imag().to_f64();
                let wrapped = im - tau * (im / tau).round();
                let fd = Complex::with_val(prec, (diff.real().to_f64(), wrapped)).mul(&Complex::with_val(prec, 0.5 / h));
                num += fd.sub(gi).magnitude().powi(2);
                den += gi.magnitude().powi(2);
            }
            let rel = num.sqrt() / den.sqrt().max(f64::MIN_POSITIVE);
            ensure(rel <= 1e-6, || format!("relative error {rel:e} at {flat:?}"))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("4 families x 100 points, largest relative error {worst:.1e}"))
}

fn main() {
    let mut pool = Pool::new();
    let mut failed = 0;
    let mut report = |n: u32, name: &str, r: Outcome| match r {
        Ok(msg) => println!("PASS criterion {n} ({name}): {msg}"),
        Err(msg) => {
            failed += 1;
            println!("FAIL criterion {n} ({name}): {msg}");
        }
    };
    report(1, "worked p=2 instance", c1_worked(&mut pool));
    report(2, "two-point hypergeometric family", c2_hypergeometric(&mut pool));
    report(3, "special p=2 count", c3_p2(&mut pool));
    report(4, "special p=3 count", c4_p3(&mut pool));
    report(5, "residue identity", c5_residue(&pool));
    report(6, "count bound on mixed instances", c6_bound(6));
    report(7, "dual-path agreement", c7_paths(&pool));
    report(8, "combinatorics oracle", c8_combinatorics());
    report(9, "gradient check", c9_gradient(9));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
