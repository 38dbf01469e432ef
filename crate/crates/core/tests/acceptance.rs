//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use slopelab::algpoints::{best_iq_line, eisenstein_a2_line, iq_line_degree, IQRing};
use slopelab::exact::{rat, rint, LogRational};
use slopelab::git::{
    both_sided_check, left_right_check, restricted_margin, verify_witness, CandidatePool, GitStatus, GitWitness,
    SearchConfig, Side,
};
use slopelab::harness::{run_suite, Row, Suite, Summary, TrialConfig};
use slopelab::hn::is_semistable;
use slopelab::minima::aut::commutant_dimension;
use slopelab::minima::{automorphism_group, first_degree_z, max_slope, Budget};
use slopelab::tensor::TensorSubspace;
use slopelab::{Lattice, Mode, Status};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, format!("took {e:.1?}, limit {limit:?}"))
}

fn cfg(trials: usize, rank_max: usize, entry_bound: i64, seed: u64) -> TrialConfig {
    TrialConfig {
        seed,
        rank_min: 1,
        rank_max,
        entry_bound,
        trials,
        budget: Budget::default(),
    }
}

fn rows_named<'a>(rows: &'a [Row], name: &str) -> Vec<&'a Row> {
    rows.iter().filter(|r| r.report.name == name).collect()
}

fn first_fail(rows: &[Row]) -> String {
    rows.iter()
        .find(|r| r.report.status == Status::Fail)
        .map(|r| format!("case {} seed {}: {}", r.case_id, r.seed, r.report))
        .unwrap_or_default()
}

fn no_fail(rows: &[Row]) -> Result<Summary, String> {
    let s = Summary::of(rows);
    ensure(s.fail == 0, format!("{s}; first {}", first_fail(rows)))?;
    Ok(s)
}

fn half_log(n: i64) -> LogRational {
    LogRational::half_log(&rint(n)).unwrap()
}

fn oracle_a_n() -> Outcome {
    let t = Instant::now();
    for n in 1..=6usize {
        let l = Lattice::a_n(n);
        let want = -LogRational::log(&rint(n as i64 + 1)).unwrap().div_int(2 * n as u64);
        ensure(l.slope() == want, format!("A_{n}: slope {} != {}", l.slope(), want))?;
        let s = is_semistable(&l, Budget::default()).map_err(|e| e.to_string())?;
        ensure(s.verdict() == Some(true), format!("A_{n}: {s:?}"))?;
    }
    within(t, Duration::from_secs(1))?;
    Ok(format!("slopes of A_1..A_6 exact, semistable ({:.0?})", t.elapsed()))
}

fn a2_suite() -> Outcome {
    let t = Instant::now();
    let a2 = Lattice::a_n(2);
    let err = |e: slopelab::Error| e.to_string();
    let g = automorphism_group(&a2).map_err(err)?;
    ensure(g.len() == 12, format!("|Aut| = {}", g.len()))?;
    ensure(commutant_dimension(&g, 2) == 1, "commutant dimension")?;
    ensure(is_semistable(&a2, Budget::default()).map_err(err)?.verdict() == Some(true), "not semistable")?;
    let mx = max_slope(&a2, Budget::default()).map_err(err)?;
    let log3 = LogRational::log(&rint(3)).unwrap();
    ensure(mx.mode == Mode::Exact && mx.value == -log3.div_int(4), format!("max slope {}", mx.value))?;
    let z = first_degree_z(&a2).map_err(err)?.value;
    ensure(z == -half_log(2), format!("best integral line {z}"))?;
    let e = iq_line_degree(&a2, &eisenstein_a2_line()).map_err(err)?;
    ensure(e == -log3.div_int(2), format!("Eisenstein line {e}"))?;
    let (_, found) = best_iq_line(&a2, IQRing::Eisenstein, 2).map_err(err)?;
    let gap = &mx.value - &found;
    ensure(gap == LogRational::log(&rat(4, 3)).unwrap().div_int(4), format!("gap {gap}"))?;
    within(t, Duration::from_secs(5))?;
    Ok(format!("|Aut| = 12, commutant 1, max slope {}, gap {} ({:.0?})", mx.value, gap, t.elapsed()))
}

fn minkowski() -> Outcome {
    let t = Instant::now();
    let rows = run_suite(Suite::Minkowski, &cfg(500, 4, 5, 3)).map_err(|e| e.to_string())?;
    let s = no_fail(&rows)?;
    ensure(s.pass == s.total(), format!("not all exact: {s}"))?;
    within(t, Duration::from_secs(300))?;
    Ok(format!("500 lattices: {s} ({:.1?})", t.elapsed()))
}

fn transference() -> Outcome {
    let rows = run_suite(Suite::Transference, &cfg(100, 3, 3, 4)).map_err(|e| e.to_string())?;
    let s = no_fail(&rows)?;
    let exact = rows_named(&rows, "dual slopes").iter().filter(|r| r.report.status == Status::Pass).map(|r| r.case_id).collect::<std::collections::BTreeSet<_>>();
    ensure(exact.len() == 100, format!("{} of 100 lattices exact on both sides", exact.len()))?;
    Ok(format!("100 lattices: {s}"))
}

fn theorem_a() -> Outcome {
    let t = Instant::now();
    let rows = run_suite(Suite::TheoremA, &cfg(300, 3, 3, 5)).map_err(|e| e.to_string())?;
    let s = no_fail(&rows)?;
    let main = rows_named(&rows, "tensor maximal slope");
    ensure(main.len() == 300, format!("{} main rows", main.len()))?;
    let exact = main.iter().filter(|r| r.report.lhs.is_point() && r.report.rhs.is_point()).count();
    ensure(exact * 100 >= 95 * 300, format!("only {exact}/300 exact"))?;
    ensure(main.iter().all(|r| r.report.status == Status::Pass || !r.report.lhs.is_point()), "exact row not PASS")?;
    within(t, Duration::from_secs(1800))?;
    Ok(format!("300 pairs, {exact} exact: {s} ({:.1?})", t.elapsed()))
}

fn theorem_b() -> Outcome {
    let rows = run_suite(Suite::TheoremB, &cfg(1000, 3, 3, 6)).map_err(|e| e.to_string())?;
    let s = no_fail(&rows)?;
    let sub = rows_named(&rows, "subspace slope vs maximal slopes");
    let lines = rows_named(&rows, "line degree vs image slopes");
    let global = rows_named(&rows, "line degree vs maximal slopes");
    ensure(sub.len() == 1000 && lines.len() == 1000 && global.len() == 1000, "missing rows")?;
    ensure(lines.iter().all(|r| r.report.status == Status::Pass), "local line bound not PASS")?;
    Ok(format!("1000 subspaces and 1000 lines: {s}"))
}

fn filtrations() -> Outcome {
    let t = Instant::now();
    let rows = run_suite(Suite::Filtrations, &cfg(1250, 3, 3, 7)).map_err(|e| e.to_string())?;
    let s = no_fail(&rows)?;
    ensure(s.total() >= 10_000, format!("only {} checks", s.total()))?;
    ensure(s.pass == s.total(), format!("{s}"))?;
    within(t, Duration::from_secs(60))?;
    Ok(format!("{s} ({:.1?})", t.elapsed()))
}

fn git_counterexample() -> Outcome {
    let unit = |i: usize, j: usize| slopelab::exact::QMatrix::from_fn(3, 3, |x, y| rint(((x, y) == (i, j)) as i64));
    let v = TensorSubspace::new(
        Lattice::standard(3),
        Lattice::standard(3),
        vec![unit(0, 1).add(&unit(1, 0)), unit(0, 2).add(&unit(2, 0))],
    )
    .map_err(|e| e.to_string())?;
    let pool = CandidatePool::default();
    let err = |e: slopelab::Error| e.to_string();
    for side in [Side::Left, Side::Right] {
        let r = left_right_check(&v, side, &pool, 0).map_err(err)?;
        ensure(r.status == GitStatus::StableCertified, format!("{side}: {}", r.status))?;
    }
    let run = || both_sided_check(&v, &pool, SearchConfig::default());
    let both = run().map_err(err)?;
    ensure(both.status == GitStatus::Unstable, format!("both: {}", both.status))?;
    let w = both.witness.clone().ok_or("no witness")?;
    let GitWitness::Filtrations { f, g, margin, .. } = &w else {
        return Err(format!("unexpected witness {w}"));
    };
    ensure(*margin == rat(1, 3), format!("margin {margin}"))?;
    ensure(restricted_margin(&v, f, g).map_err(err)? == rat(1, 3), "recomputed margin")?;
    ensure(verify_witness(&v, Side::Both, &w).map_err(err)?, "witness does not verify")?;
    ensure(run().map_err(err)?.witness == both.witness, "witness not reproducible")?;
    Ok(format!("left/right stable, both-sided unstable, margin 1/3 with F = {f}, G = {g}"))
}

fn duality() -> Outcome {
    let rows = run_suite(Suite::Duality, &cfg(500, 3, 3, 9)).map_err(|e| e.to_string())?;
    let s = no_fail(&rows)?;
    ensure(s.pass == s.total(), format!("{s}"))?;
    for name in ["orthogonal degree", "exact sequence", "submodularity"] {
        ensure(rows_named(&rows, name).len() == 500, format!("missing {name} rows"))?;
    }
    Ok(format!("500 pairs: {s}"))
}

fn epsilon() -> Outcome {
    let rows = run_suite(Suite::Epsilon, &cfg(1000, 3, 3, 10)).map_err(|e| e.to_string())?;
    let s = no_fail(&rows)?;
    for name in ["operator norm vs hermitian norm", "product of wedges"] {
        let r = rows_named(&rows, name);
        ensure(r.len() == 1000, format!("{} {name} rows", r.len()))?;
        ensure(r.iter().all(|x| x.report.status == Status::Pass), format!("{name} not all PASS"))?;
    }
    Ok(format!("1000 elements, 1000 configurations: {s}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 oracle exactness", oracle_a_n),
        ("2 A_2 suite", a2_suite),
        ("3 Minkowski sandwich", minkowski),
        ("4 transference", transference),
        ("5 tensor maximal slope bound", theorem_a),
        ("6 subspace slope bound", theorem_b),
        ("7 filtration calculus", filtrations),
        ("8 GIT counterexample", git_counterexample),
        ("9 duality and exactness", duality),
        ("10 hermitian vs operator norm", epsilon),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(msg) => println!("PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
