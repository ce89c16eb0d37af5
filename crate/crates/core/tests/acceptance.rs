//! Acceptance gate. Runs every criterion, prints one line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, TestRunner};

use mub_core::classify::{classify_all, conjugation_identification, d4_triple, render_table, verify_complete_set};
use mub_core::equivalence::{are_equivalent, d5_triple, inequivalence_d5_triples, verify_identity_catalog, Verdict};
use mub_core::matrices::{dephase, Basis, MuBasisSet, PhaseMatrix, Vector};
use mub_core::scalar::angle_distance;
use mub_core::search::{match_against, search, SearchConfig};
use mub_core::solvers::{build_named, family_member, h3, h5, solve, solve_d4, F4Angle, Named};
use mub_core::MuBasisSet64;

fn proptest_runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

/// Largest deviation of `|⟨h_k, v⟩|²` from `1/d` over the normalised
/// columns of `h`, computed directly in complex arithmetic.
fn mu_residual(h: &Basis<f64>, v: &[Complex64]) -> f64 {
    let m = h.to_complex();
    let d = m.dim();
    let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut worst: f64 = 0.0;
    for k in 0..d {
        let col = m.column(k);
        let cn: f64 = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let ip: Complex64 = col.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
        worst = worst.max(((ip.norm() / (cn * vn)).powi(2) - 1.0 / d as f64).abs());
    }
    for z in v {
        worst = worst.max((z.norm_sqr() / (vn * vn) - 1.0 / d as f64).abs());
    }
    worst
}

fn criterion_1() -> Outcome {
    let mut parts = Vec::new();
    for (d, want) in [(2, 2), (3, 6), (5, 20)] {
        let t = Instant::now();
        let closed = ok(solve(d, None))?;
        ensure(
            closed.discrete.len() == want,
            format!("d={d}: {} closed-form vectors", closed.discrete.len()),
        )?;
        let found = ok(search(
            &Basis::<f64>::Phase(PhaseMatrix::fourier(d)),
            &SearchConfig::for_dim(d),
        ))?;
        let isolated = found.isolated().count();
        ensure(isolated == want, format!("d={d}: oracle found {isolated}"))?;
        let m = match_against(&found, &closed, 1e-8);
        ensure(m.is_perfect() && m.matched.len() == want, format!("d={d}: {m:?}"))?;
        let elapsed = t.elapsed();
        if d == 5 {
            ensure(
                elapsed < Duration::from_secs(60),
                format!("d=5 oracle took {elapsed:?}"),
            )?;
        }
        parts.push(format!("d={d}: {want}/{want}"));
    }
    Ok(parts.join(", "))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut runner = TestRunner::deterministic();
    let strategy = (0.0..PI).prop_filter("x = π/2", |x: &f64| (x - FRAC_PI_2).abs() > 1e-6);
    let xs: Vec<f64> = (0..50)
        .map(|_| strategy.new_tree(&mut runner).map(|t| t.current()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    let mut check = |x: F4Angle, want: usize| -> Result<(), String> {
        let sol = solve_d4(x);
        ensure(
            sol.families.len() == want,
            format!("x={}: {} families", x.value(), sol.families.len()),
        )?;
        let h = ok(build_named::<f64>(&Named::F4(x)))?;
        for fam in &sol.families {
            let (lo, hi) = fam.param_range;
            for i in 0..100 {
                let s = lo + (hi - lo) * i as f64 / 100.0;
                let Vector::Float(v) = ok(family_member::<f64>(fam, s))? else {
                    return Err("family member is not a float vector".into());
                };
                worst = worst.max(mu_residual(&h, &v));
                samples += 1;
            }
        }
        Ok(())
    };
    for &x in &xs {
        check(ok(F4Angle::new(x))?, 4)?;
    }
    check(F4Angle::half_pi(), 12)?;
    ensure(worst < 1e-9, format!("max residual {worst:e}"))?;
    ensure(t.elapsed() < Duration::from_secs(5), format!("took {:?}", t.elapsed()))?;
    Ok(format!(
        "{} generic x with 4 families, 12 at π/2, {samples} samples, max residual {worst:.1e}",
        xs.len()
    ))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for d in 2..=5 {
        let a = ok(verify_complete_set(d))?;
        ensure(a.passed(), format!("d={d}: audit failed"))?;
        ensure(a.audit.fully_exact, format!("d={d}: audit not exact"))?;
        parts.push(format!("d={d}: {} overlaps", a.audit.overlaps_checked()));
        if d == 5 {
            ensure(a.audit.overlaps_checked() == 375, "d=5 overlap count")?;
        }
    }
    ensure(t.elapsed() < Duration::from_secs(1), format!("took {:?}", t.elapsed()))?;
    Ok(parts.join(", "))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let cat = verify_identity_catalog();
    let mut required = vec![
        "H3(1) = D F3".to_string(),
        "D^5 = I".into(),
        "F5^† = F5 P".into(),
        "F5^† H5(1) = H5(1) M".into(),
        "F5^† H5(2) = H5(3) D(2) P".into(),
        "(H5(1))^† F5 = H5(4) M".into(),
    ];
    required.extend((1..=4).map(|k| format!("H5({k}) = D^{k} F5")));
    for name in &required {
        let c = cat.get(name).ok_or(format!("missing {name}"))?;
        ensure(c.holds, format!("{name} fails: {}", c.detail))?;
    }
    ensure(cat.all_hold(), "catalog has a failing identity")?;
    ensure(t.elapsed() < Duration::from_secs(1), format!("took {:?}", t.elapsed()))?;
    Ok(format!("{} identities hold exactly", cat.checks.len()))
}

fn d5_set(ks: &[u32]) -> MuBasisSet64 {
    let mut bases = vec![Basis::identity(5), Basis::Phase(PhaseMatrix::fourier(5))];
    bases.extend(ks.iter().map(|&k| Basis::Phase(h5(k))));
    MuBasisSet::new(bases).unwrap()
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let cert = ok(inequivalence_d5_triples())?;
    ensure(cert.verdict == Verdict::Inequivalent, "restricted argument verdict")?;
    let r = cert.refutation.as_ref().ok_or("no refutation")?;
    ensure(
        r.permutations_tried() > 0 && r.candidates_tried() > 0,
        "no exhaustion counts",
    )?;
    for s in &r.steps {
        ensure(s.holds, format!("{}: {}", s.name, s.detail))?;
    }
    let delta = r
        .steps
        .iter()
        .find(|s| s.name == "delta obstruction")
        .ok_or("no delta step")?;
    ensure(delta.matches == 0, "delta obstruction found a match")?;
    ensure(ok(cert.replay(&d5_triple(1), &d5_triple(2)))?, "replay")?;

    let direct = ok(are_equivalent(&d5_triple(1), &d5_triple(2)))?;
    ensure(direct.verdict == Verdict::Inequivalent, "direct search verdict")?;

    let qutrit = |k| {
        MuBasisSet::new(vec![
            Basis::identity(3),
            Basis::Phase(PhaseMatrix::fourier(3)),
            Basis::Phase(h3(k)),
        ])
    };
    let mut pairs: Vec<(MuBasisSet64, MuBasisSet64)> = vec![(ok(qutrit(1))?, ok(qutrit(2))?)];
    for (a, b) in [
        (&[1][..], &[4][..]),
        (&[2], &[3]),
        (&[1, 2], &[3, 4]),
        (&[1, 2], &[1, 4]),
        (&[1, 3], &[2, 4]),
        (&[1, 3], &[2, 3]),
        (&[1, 2], &[1, 3]),
        (&[1, 2, 3], &[1, 2, 4]),
        (&[1, 2, 3], &[1, 3, 4]),
        (&[1, 2, 3], &[2, 3, 4]),
    ] {
        pairs.push((d5_set(a), d5_set(b)));
    }
    for (a, b) in &pairs {
        let c = ok(are_equivalent(a, b))?;
        ensure(c.verdict == Verdict::Equivalent, "asserted equivalence not found")?;
        ensure(ok(c.replay(a, b))?, "equivalence replay")?;
    }
    ensure(
        t.elapsed() < Duration::from_secs(300),
        format!("took {:?}", t.elapsed()),
    )?;
    Ok(format!(
        "inequivalent after {} permutations and {} candidates; delta matches 0; {} equivalences confirmed",
        r.permutations_tried(),
        r.candidates_tried(),
        pairs.len()
    ))
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let reports = ok(classify_all())?;
    for r in &reports {
        ensure(
            r.matches_expected(),
            format!("d={}: {:?} vs {:?}", r.dim, r.counts, r.expected),
        )?;
        ensure(r.evidence_holds(), format!("d={}: failing evidence", r.dim))?;
    }
    ensure(
        t.elapsed() < Duration::from_secs(600),
        format!("took {:?}", t.elapsed()),
    )?;
    print!("{}", render_table(&reports));
    Ok("every count and continuum marker reproduced".into())
}

fn criterion_7() -> Outcome {
    let mut runner = proptest_runner(256);
    ok(runner.run(&(0.0..2.0 * PI), |t| {
        let e = Complex64::from_polar(1.0, t);
        let s = (Complex64::new(1.0, 0.0) + e).norm_sqr() + (Complex64::new(1.0, 0.0) - e).norm_sqr();
        prop_assert!((s - 4.0).abs() < 1e-12);
        Ok(())
    }))
    .map_err(|e| format!("quadruple exclusion: {e}"))?;

    let mut runner = proptest_runner(64);
    ok(runner.run(
        &(0.01..PI - 0.01, 0.0..PI, 0.0..FRAC_PI_2, 0usize..3),
        |(x, y, z, rot)| {
            let mut bases = d4_triple(x, y, z).unwrap().into_bases();
            bases.rotate_left(rot);
            let set = MuBasisSet::new(bases).unwrap();
            let once = dephase(&set).unwrap();
            let twice = dephase(&once).unwrap();
            for (a, b) in once.bases().iter().zip(twice.bases()) {
                prop_assert!(a.approx_eq(b, 1e-9));
            }
            Ok(())
        },
    ))
    .map_err(|e| format!("dephase idempotence: {e}"))?;

    let sizes = (1usize..=3).prop_flat_map(|k| {
        let pick = || prop::sample::subsequence(vec![1u32, 2, 3, 4], k);
        (pick(), pick())
    });
    let mut runner = proptest_runner(16);
    ok(runner.run(&sizes, |(ka, kb): (Vec<u32>, Vec<u32>)| {
        let (a, b) = (d5_set(&ka), d5_set(&kb));
        let cert = are_equivalent(&a, &b).unwrap();
        if cert.verdict == Verdict::Equivalent {
            prop_assert!(cert.replay(&a, &b).unwrap());
            prop_assert!(cert.witness.as_ref().unwrap().maps(&a, &b).unwrap());
        }
        Ok(())
    }))
    .map_err(|e| format!("certificate replay: {e}"))?;

    for (d, n) in [(2, 2), (3, 6)] {
        let f = Basis::<f64>::Phase(PhaseMatrix::fourier(d));
        let mut cfg = SearchConfig::for_dim(d);
        let base = ok(search(&f, &cfg))?;
        cfg.grid_points_per_angle *= 2;
        let doubled = ok(search(&f, &cfg))?;
        ensure(
            base.clusters.len() == n && doubled.clusters.len() == n,
            format!("grid doubling d={d}"),
        )?;
        for (a, b) in base.clusters.iter().zip(&doubled.clusters) {
            let gap = a
                .angles
                .iter()
                .zip(&b.angles)
                .map(|(p, q)| angle_distance(*p, *q))
                .fold(0.0, f64::max);
            ensure(gap < 1e-8, format!("grid doubling moved a root by {gap:e}"))?;
        }
    }

    let mut runner = proptest_runner(20);
    ok(runner.run(
        &(0.01..PI - 0.01, 0.01..PI - 0.01, 0.01..FRAC_PI_2 - 0.01),
        |(x, y, z)| {
            let cert = conjugation_identification(x, y, z).unwrap();
            prop_assert_eq!(cert.verdict, Verdict::Equivalent);
            let a = d4_triple(x, y, z).unwrap().conj();
            let b = d4_triple(PI - x, PI - y, PI - z).unwrap();
            let w = cert.witness.as_ref().unwrap();
            let image = w.apply(&a).unwrap();
            for (p, q) in image.bases().iter().zip(b.bases()) {
                prop_assert!(p.approx_eq(q, 1e-9));
            }
            Ok(())
        },
    ))
    .map_err(|e| format!("conjugation set map: {e}"))?;
    Ok("exclusion identity, dephase idempotence, certificate replay, grid doubling, conjugation map".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 MU-vector counts", criterion_1),
        ("2 d=4 family structure", criterion_2),
        ("3 exact complete-set audits", criterion_3),
        ("4 identity catalog", criterion_4),
        ("5 d=5 triple inequivalence", criterion_5),
        ("6 class-count table", criterion_6),
        ("7 property suites", criterion_7),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({secs:.2} s) {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({secs:.2} s) {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
