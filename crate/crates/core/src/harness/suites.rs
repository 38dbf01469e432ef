use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{random_filtration, random_lattice, random_matrix, random_saturated_subspace, Suite, TrialConfig};
use crate::algpoints::{best_iq_line, check_an_alpha_bound, eisenstein_a2_line, iq_line_degree, IQRing};
use crate::check::{CheckReport, Mode, Status};
use crate::error::Result;
use crate::exact::rational::{fmt_rational, harmonic_tail};
use crate::exact::{rat, rint, Enclosure, ExactReal, LogRational, QMatrix, Rational};
use crate::filtration::RFiltration;
use crate::git::{
    both_sided_check, check_semistable_slope, constraint_checks, left_right_check, verify_witness, CandidatePool,
    GitStatus, GitWitness, SearchConfig, SemistabilityVerdict, Side,
};
use crate::hn::{hn_data, is_semistable};
use crate::lattice::{Lattice, Sublattice};
use crate::minima::aut::commutant_dimension;
use crate::minima::{automorphism_group, first_degree_z, max_slope, varsigma_estimate, SlopeCertificate};
use crate::tensor::{check_majoration, check_mumax_sum, check_rank2_local, check_two_split, siegel_lines, TensorElement, TensorSubspace};

const EPS_START: i64 = 1 << 10;
const EPS_FINEST: i64 = 1 << 40;

fn pt(x: LogRational) -> Enclosure {
    Enclosure::point(ExactReal::from_log(x))
}

fn ptq(x: Rational) -> Enclosure {
    Enclosure::point(ExactReal::from_rational(x))
}

fn cert(c: &SlopeCertificate) -> Enclosure {
    match c.mode {
        Mode::Exact => pt(c.value.clone()),
        Mode::LowerBound => Enclosure::at_least(ExactReal::from_log(c.value.clone())),
    }
}

fn half_log(n: usize) -> LogRational {
    LogRational::half_log(&rint(n as i64)).expect("positive")
}

fn eqq(name: &str, lhs: Rational, rhs: Rational, witness: impl Into<String>) -> CheckReport {
    CheckReport::eq(name, ExactReal::from_rational(lhs), ExactReal::from_rational(rhs), witness)
}

fn eql(name: &str, lhs: LogRational, rhs: LogRational, witness: impl Into<String>) -> CheckReport {
    CheckReport::eq(name, ExactReal::from_log(lhs), ExactReal::from_log(rhs), witness)
}

fn flag(name: &str, ok: bool, witness: impl Into<String>) -> CheckReport {
    eqq(name, rint(ok as i64), rint(1), witness)
}

fn gram_str(l: &Lattice) -> String {
    let rows: Vec<String> = l
        .gram()
        .rows_iter()
        .map(|r| format!("[{}]", r.iter().map(fmt_rational).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

fn matrix_str(m: &QMatrix) -> String {
    let rows: Vec<String> = m
        .rows_iter()
        .map(|r| format!("[{}]", r.iter().map(fmt_rational).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<Rational> {
    (0..n).map(|_| rint(rng.gen_range(-bound..=bound))).collect()
}

fn random_nonzero(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> QMatrix {
    loop {
        let m = random_matrix(rng, rows, cols, bound);
        if m.entries().iter().any(|x| !x.is_zero()) {
            return m;
        }
    }
}

fn random_sub(rng: &mut ChaCha8Rng, l: &Lattice, k: usize, bound: i64) -> Result<Sublattice> {
    loop {
        let m = random_matrix(rng, k, l.rank(), bound);
        if m.rank() == k {
            return Sublattice::saturated(l, &m);
        }
    }
}

pub(super) fn trial(suite: Suite, cfg: &TrialConfig, rng: &mut ChaCha8Rng, seed: u64) -> Result<Vec<CheckReport>> {
    match suite {
        Suite::Oracles => Ok(oracles()),
        Suite::TheoremA => theorem_a(cfg, rng),
        Suite::TheoremB => theorem_b(cfg, rng),
        Suite::Tenserr => tenserr(cfg, rng),
        Suite::Filtrations => filtrations(cfg, rng),
        Suite::Git => git(cfg, rng, seed),
        Suite::Minkowski => minkowski(cfg, rng),
        Suite::Transference => transference(cfg, rng),
        Suite::Duality => duality(cfg, rng),
        Suite::Epsilon => epsilon(cfg, rng),
    }
}

fn theorem_a(cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let (a, b) = (cfg.rank(rng), cfg.rank(rng));
    let e = random_lattice(rng, a, cfg.entry_bound);
    let f = random_lattice(rng, b, cfg.entry_bound);
    let w = format!("E={} F={}", gram_str(&e), gram_str(&f));
    let ce = max_slope(&e, cfg.budget)?;
    let cf = max_slope(&f, cfg.budget)?;
    let ct = max_slope(&e.tensor(&f), cfg.budget)?;
    let sum = cert(&ce).add(&cert(&cf));
    let tail = harmonic_tail(a).min(harmonic_tail(b)) * rat(1, 2);
    let mut out = vec![CheckReport::le(
        "tensor maximal slope",
        cert(&ct),
        sum.shift(&ExactReal::from_rational(tail)),
        w.clone(),
    )];

    let vs = varsigma_estimate(&f.dual(), cfg.budget)?;
    let sigma = match vs.mode {
        Mode::Exact => Enclosure::between(vs.lower, vs.upper),
        Mode::LowerBound => Enclosure::at_most(vs.upper),
    };
    out.push(CheckReport::le("tensor maximal slope vs dual quotient degree", cert(&ct), cert(&ce).sub(&sigma), w.clone()));

    // additivity; the reverse inequality always holds
    let all_exact = [&ce, &cf, &ct].iter().all(|c| c.mode == Mode::Exact);
    out.push(if all_exact {
        eql("maximal slope additivity", ct.value.clone(), &ce.value + &cf.value, w)
    } else {
        CheckReport::le("maximal slope additivity", cert(&ct), sum, w)
    });
    Ok(out)
}

fn theorem_b(cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let (a, b) = (cfg.rank(rng), cfg.rank(rng));
    let e = random_lattice(rng, a, cfg.entry_bound);
    let f = random_lattice(rng, b, cfg.entry_bound);
    let m = rng.gen_range(1..=(a * b).min(4));
    let v = random_saturated_subspace(rng, &e, &f, m, 2);
    let w = format!("E={} F={} V={}", gram_str(&e), gram_str(&f), matrix_str(&v.flat()));
    let mut c = check_mumax_sum(&v, cfg.budget)?;
    c.witness = format!("{}; {w}", c.witness);
    let mut out = vec![c];
    let s = TensorElement::new(e.clone(), f.clone(), random_nonzero(rng, a, b, cfg.entry_bound))?;
    let ws = format!("E={} F={} s={}", gram_str(&e), gram_str(&f), matrix_str(&s.matrix));
    for mut c in check_majoration(&s, cfg.budget)? {
        c.witness = format!("{}; {ws}", c.witness);
        out.push(c);
    }
    Ok(out)
}

fn tenserr(cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let (a, b) = (cfg.rank(rng), cfg.rank(rng));
    let e = random_lattice(rng, a, cfg.entry_bound);
    let f = random_lattice(rng, b, cfg.entry_bound);
    let ce = max_slope(&e, cfg.budget)?;
    let cf = max_slope(&f, cfg.budget)?;
    let ct = max_slope(&e.tensor(&f), cfg.budget)?;
    let rhs = cert(&ce).add(&cert(&cf)).shift(&ExactReal::from_log(half_log(a * b)));
    let mut out = vec![CheckReport::le(
        "two-fold tensor bound",
        cert(&ct),
        rhs,
        format!("E={} F={}", gram_str(&e), gram_str(&f)),
    )];

    let top = cfg.rank_max.min(2);
    let lo = cfg.rank_min.min(top);
    let ls: Vec<Lattice> = (0..3)
        .map(|_| {
            let r = rng.gen_range(lo..=top);
            random_lattice(rng, r, cfg.entry_bound)
        })
        .collect();
    let prod = ls[0].tensor(&ls[1]).tensor(&ls[2]);
    let mut rhs = pt(half_log(prod.rank()));
    for l in &ls {
        rhs = rhs.add(&cert(&max_slope(l, cfg.budget)?));
    }
    out.push(CheckReport::le(
        "three-fold tensor bound",
        cert(&max_slope(&prod, cfg.budget)?),
        rhs,
        ls.iter().map(gram_str).collect::<Vec<_>>().join(" "),
    ));
    Ok(out)
}

/// rank of each subquotient, keyed by weight
fn sq_ranks(f: &RFiltration) -> BTreeMap<Rational, usize> {
    f.weights().iter().cloned().zip(f.jump_ranks()).collect()
}

fn filtrations(cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let (d1, d2) = (cfg.rank(rng), cfg.rank(rng));
    let f = random_filtration(rng, d1);
    let g = random_filtration(rng, d2);
    let w = format!("F = {f}; G = {g}");
    let ef = f.expectation();
    let mut out = Vec::new();

    let fg = f.tensor(&g);
    out.push(eqq("tensor expectation", fg.expectation(), &ef + g.expectation(), w.clone()));

    let mut conv: BTreeMap<Rational, usize> = BTreeMap::new();
    for (x, p) in sq_ranks(&f) {
        for (y, q) in sq_ranks(&g) {
            *conv.entry(&x + &y).or_default() += p * q;
        }
    }
    let got = sq_ranks(&fg);
    let bad = conv.keys().chain(got.keys()).filter(|t| conv.get(*t) != got.get(*t)).count();
    out.push(eqq("tensor subquotient ranks", rint(bad as i64), Rational::zero(), w.clone()));

    let n = rng.gen_range(1..=d1);
    out.push(eqq(
        "exterior power expectation",
        f.exterior(n)?.expectation(),
        &ef * rint(n as i64),
        format!("n = {n}; {w}"),
    ));

    let fd = f.dual();
    out.push(eqq("dual expectation", fd.expectation(), -ef.clone(), w.clone()));
    out.push(eqq("dual norm", fd.norm_sq(), f.norm_sq(), w.clone()));

    let t = rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
    out.push(eqq("translation", f.translate(&t).expectation(), &ef + &t, format!("t = {}; {w}", fmt_rational(&t))));
    let eps = rat(rng.gen_range(1..=6), rng.gen_range(1..=4));
    out.push(eqq("dilation", f.dilate(&eps)?.expectation(), &ef * &eps, format!("eps = {}; {w}", fmt_rational(&eps))));

    if d1 >= 2 {
        let k = rng.gen_range(1..d1);
        let sub = loop {
            let m = random_matrix(rng, k, d1, 2);
            if m.rank() == k {
                break m;
            }
        };
        let lhs = f.restrict(&sub)?.expectation() * rint(k as i64) + f.quotient(&sub)?.expectation() * rint((d1 - k) as i64);
        out.push(eqq(
            "restriction and quotient",
            lhs,
            &ef * rint(d1 as i64),
            format!("W = {}; {w}", matrix_str(&sub)),
        ));
    }

    let basis = loop {
        let m = random_matrix(rng, d1, d1, 2);
        if m.rank() == d1 {
            break m;
        }
    };
    let avg = basis.rows_iter().map(|r| f.lambda(r).expect("basis vectors are non-zero")).sum::<Rational>() / rint(d1 as i64);
    out.push(CheckReport::le("arbitrary basis average", ptq(avg), ptq(ef), format!("basis = {}; {w}", matrix_str(&basis))));
    Ok(out)
}

fn witness_row(v: &TensorSubspace, verdict: &SemistabilityVerdict) -> Result<CheckReport> {
    let w = verdict.witness.as_ref().expect("unstable verdicts carry a witness");
    let ok = verify_witness(v, verdict.side, w)?;
    let name = format!("{} witness", verdict.side);
    let text = format!("{w}; V = {}", matrix_str(&v.flat()));
    Ok(match w {
        GitWitness::Filtrations { margin, .. } => {
            CheckReport::lt(name, ptq(Rational::zero()), ptq(margin.clone()), text).with_status(if ok { Status::Pass } else { Status::Fail })
        }
        _ => flag(&name, ok, text),
    })
}

fn git(cfg: &TrialConfig, rng: &mut ChaCha8Rng, seed: u64) -> Result<Vec<CheckReport>> {
    let top = cfg.rank_max.min(3);
    let lo = cfg.rank_min.min(top);
    let (a, b) = (rng.gen_range(lo..=top), rng.gen_range(lo..=top));
    let m = rng.gen_range(1..=(a * b).min(3));
    let e = random_lattice(rng, a, cfg.entry_bound);
    let f = random_lattice(rng, b, cfg.entry_bound);
    let v = random_saturated_subspace(rng, &e, &f, m, 2);
    let pool = CandidatePool::default();
    let sc = SearchConfig::with_seed(seed);
    let mut out = Vec::new();

    for side in [Side::Left, Side::Right] {
        let r = left_right_check(&v, side, &pool, seed)?;
        match r.status {
            GitStatus::Unstable => out.push(witness_row(&v, &r)?),
            GitStatus::StableCertified => out.extend(constraint_checks(&v, side, seed)?),
            _ => {}
        }
    }
    let both = both_sided_check(&v, &pool, sc)?;
    match both.status {
        GitStatus::Unstable => out.push(witness_row(&v, &both)?),
        GitStatus::StableCertified => out.extend(constraint_checks(&v, Side::Both, seed)?),
        _ => {}
    }
    // a one-sided destabilizer is also a both-sided one
    if out.iter().any(|c| c.name.starts_with("LEFT") || c.name.starts_with("RIGHT")) {
        out.push(flag(
            "one-sided instability implies both-sided",
            both.status == GitStatus::Unstable,
            format!("V = {}", matrix_str(&v.flat())),
        ));
    }
    if both.status != GitStatus::Unstable {
        let mut c = check_semistable_slope(&v, &pool, sc)?;
        c.witness = format!("{}; E={} F={} V={}", c.witness, gram_str(&e), gram_str(&f), matrix_str(&v.flat()));
        out.push(c);
    }
    // checks whose hypotheses fail say so and carry no information
    out.retain(|c| !(c.status == Status::Inconclusive && c.witness.starts_with("not applicable")));
    Ok(out)
}

fn minkowski(cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let r = cfg.rank(rng);
    let l = random_lattice(rng, r, cfg.entry_bound);
    let w = gram_str(&l);
    let c = max_slope(&l, cfg.budget)?;
    let z = first_degree_z(&l)?.value;
    Ok(vec![
        CheckReport::le("first minimum vs maximal slope", pt(z.clone()), cert(&c), w.clone()),
        CheckReport::le("maximal slope vs first minimum", cert(&c), pt(&z + &half_log(r)), w),
    ])
}

fn transference(cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let r = cfg.rank(rng);
    let l = random_lattice(rng, r, cfg.entry_bound);
    let w = gram_str(&l);
    let h = hn_data(&l, cfg.budget)?;
    let hd = hn_data(&l.dual(), cfg.budget)?;
    if h.mode != Mode::Exact || hd.mode != Mode::Exact {
        let z = ptq(Rational::zero());
        return Ok(vec![CheckReport::le("dual slopes", z.clone(), z, format!("polygon not exact; {w}")).with_status(Status::Inconclusive)]);
    }
    Ok((0..r)
        .map(|i| eql("dual slopes", hd.slopes[i].clone(), -h.slopes[r - 1 - i].clone(), format!("i = {}; {w}", i + 1)))
        .collect())
}

fn duality(cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let r = cfg.rank(rng).max(2);
    let l = random_lattice(rng, r, cfg.entry_bound);
    let k = rng.gen_range(1..r);
    let v = random_sub(rng, &l, k, cfg.entry_bound)?;
    let w = format!("G={} V={}", gram_str(&l), matrix_str(v.basis()));
    let mut out = vec![
        eql("orthogonal degree", v.orthogonal_complement()?.ndeg(), &v.ndeg() - &l.ndeg(), w.clone()),
        eql("exact sequence", l.ndeg(), &v.ndeg() + &v.quotient()?.ndeg(), w.clone()),
    ];
    let j = rng.gen_range(1..r);
    let u = random_sub(rng, &l, j, cfg.entry_bound)?;
    let meet = v.intersection(&u)?.map(|s| s.ndeg()).unwrap_or_default();
    let join = v.sum(&u)?.ndeg();
    out.push(CheckReport::le(
        "submodularity",
        pt(&v.ndeg() + &u.ndeg()),
        pt(&meet + &join),
        format!("{w} W={}", matrix_str(u.basis())),
    ));
    Ok(out)
}

fn epsilon(cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let (a, b) = (cfg.rank(rng), cfg.rank(rng));
    let e = random_lattice(rng, a, cfg.entry_bound);
    let f = random_lattice(rng, b, cfg.entry_bound);
    let s = TensorElement::new(e.clone(), f.clone(), random_nonzero(rng, a, b, cfg.entry_bound))?;
    let w = format!("E={} F={} s={}", gram_str(&e), gram_str(&f), matrix_str(&s.matrix));
    let hs = ptq(s.hs_norm_sq());
    let mut den = EPS_START;
    let mut out = vec![loop {
        let iv = s.eps_norm_sq(&rat(1, den))?;
        let lhs = Enclosure::between(ExactReal::from_rational(iv.lower), ExactReal::from_rational(iv.upper));
        let c = CheckReport::le("operator norm vs hermitian norm", lhs, hs.clone(), w.clone());
        if c.status != Status::Inconclusive || den >= EPS_FINEST {
            break c;
        }
        den <<= 10;
    }];

    let es = [random_vec(rng, a, cfg.entry_bound), random_vec(rng, a, cfg.entry_bound)];
    let fs = [random_vec(rng, b, cfg.entry_bound), random_vec(rng, b, cfg.entry_bound)];
    let vs = |x: &[Vec<Rational>; 2]| x.iter().map(|r| format!("[{}]", r.iter().map(fmt_rational).collect::<Vec<_>>().join(","))).collect::<Vec<_>>().join(",");
    let wv = format!("E={} F={} e={} f={}", gram_str(&e), gram_str(&f), vs(&es), vs(&fs));
    let mut c = check_rank2_local(&e, &f, [&es[0], &es[1]], [&fs[0], &fs[1]])?;
    c.witness = wv.clone();
    out.push(c);
    if a == 2 && b == 2 {
        if let Ok(mut c) = check_two_split(&e, &f, [&es[0], &es[1]], [&fs[0], &fs[1]]) {
            c.witness = wv;
            out.push(c);
        }
    }
    Ok(out)
}

fn unit(a: usize, b: usize, i: usize, j: usize) -> QMatrix {
    QMatrix::from_fn(a, b, |x, y| if (x, y) == (i, j) { Rational::one() } else { Rational::zero() })
}

fn counterexample() -> TensorSubspace {
    TensorSubspace::new(
        Lattice::standard(3),
        Lattice::standard(3),
        vec![unit(3, 3, 0, 1).add(&unit(3, 3, 1, 0)), unit(3, 3, 0, 2).add(&unit(3, 3, 2, 0))],
    )
    .expect("independent generators")
}

fn or_error(name: &str, r: Result<CheckReport>) -> CheckReport {
    r.unwrap_or_else(|e| flag(name, false, format!("error: {e}")))
}

/// Fixed cases with known values.
pub(super) fn oracles() -> Vec<CheckReport> {
    let budget = crate::minima::Budget::default();
    let mut out = Vec::new();
    for n in 1..=6usize {
        let l = Lattice::a_n(n);
        let want = -LogRational::log(&rint(n as i64 + 1)).expect("positive").div_int(2 * n as u64);
        out.push(eql("A_n slope", l.slope(), want.clone(), format!("n = {n}")));
        if n <= 4 {
            out.push(or_error(
                "A_n maximal slope",
                max_slope(&l, budget).map(|c| {
                    let r = eql("A_n maximal slope", c.value, want, format!("n = {n}, {}", c.mode));
                    if c.mode == Mode::Exact { r } else { r.with_status(Status::Fail) }
                }),
            ));
        }
    }

    let a2 = Lattice::a_n(2);
    let log3 = LogRational::log(&rint(3)).expect("positive");
    out.push(or_error(
        "A_2 automorphisms",
        automorphism_group(&a2).map(|g| {
            let c = commutant_dimension(&g, 2);
            eqq("A_2 automorphisms", rint((g.len() * 10 + c) as i64), rint(121), format!("order {}, commutant dim {c}", g.len()))
        }),
    ));
    out.push(or_error(
        "A_2 semistable",
        is_semistable(&a2, budget).map(|s| flag("A_2 semistable", s.verdict() == Some(true), format!("{s:?}"))),
    ));
    out.push(or_error(
        "A_2 maximal slope",
        max_slope(&a2, budget).map(|c| {
            let r = eql("A_2 maximal slope", c.value, -log3.div_int(4), c.mode.to_string());
            if c.mode == Mode::Exact { r } else { r.with_status(Status::Fail) }
        }),
    ));
    out.push(or_error(
        "A_2 best integral line",
        first_degree_z(&a2).map(|c| eql("A_2 best integral line", c.value, -half_log(2), "")),
    ));
    out.push(or_error(
        "A_2 Eisenstein line",
        iq_line_degree(&a2, &eisenstein_a2_line()).map(|d| eql("A_2 Eisenstein line", d, -log3.div_int(2), eisenstein_a2_line().to_string())),
    ));
    out.push(or_error(
        "A_2 Eisenstein alpha bound",
        check_an_alpha_bound(2, &eisenstein_a2_line()),
    ));
    out.push(or_error(
        "A_2 gap",
        max_slope(&a2, budget).and_then(|c| {
            let (v, best) = best_iq_line(&a2, IQRing::Eisenstein, 2)?;
            let gap = LogRational::log(&rat(4, 3))?.div_int(4);
            Ok(eql("A_2 gap", &c.value - &best, gap, format!("line {v}")))
        }),
    ));

    let v = counterexample();
    let pool = CandidatePool::default();
    for side in [Side::Left, Side::Right] {
        out.push(or_error(
            "counterexample one-sided",
            left_right_check(&v, side, &pool, 0).map(|r| {
                flag(&format!("counterexample {side}"), r.status == GitStatus::StableCertified, format!("{}: {}", r.status, r.evidence))
            }),
        ));
    }
    out.push(or_error(
        "counterexample both-sided",
        both_sided_check(&v, &pool, SearchConfig::default()).map(|r| match (&r.status, &r.witness) {
            (GitStatus::Unstable, Some(w @ GitWitness::Filtrations { margin, .. })) => {
                eqq("counterexample both-sided margin", margin.clone(), rat(1, 3), w.to_string())
            }
            _ => flag("counterexample both-sided margin", false, format!("{}", r.status)),
        }),
    ));

    for n in 2..=4 {
        let l = Lattice::a_n(n);
        out.push(or_error(
            "Siegel identity",
            siegel_lines(&l).map(|s| {
                eql(
                    "Siegel identity",
                    l.ndeg(),
                    &(&s.sum + &s.hadamard) + &s.index,
                    format!("A_{n}, identity flag {}", s.identity_holds),
                )
            }),
        ));
    }

    let a3 = Lattice::a_n(3);
    let (h, hd) = (hn_data(&a3, budget), hn_data(&a3.dual(), budget));
    match (h, hd) {
        (Ok(h), Ok(hd)) if h.mode == Mode::Exact && hd.mode == Mode::Exact => {
            for i in 0..3 {
                out.push(eql("A_3 dual slopes", hd.slopes[i].clone(), -h.slopes[2 - i].clone(), format!("i = {}", i + 1)));
            }
        }
        _ => out.push(flag("A_3 dual slopes", false, "polygon not exact")),
    }
    out
}
