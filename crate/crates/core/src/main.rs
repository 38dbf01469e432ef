use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;

use slopelab::exact::rational::{fmt_rational, parse_rational};
use slopelab::exact::{LogRational, QMatrix, Rational};
use slopelab::git::{both_sided_check, left_right_check, CandidatePool, GitWitness, SearchConfig, Side};
use slopelab::harness::{parse_suites, run_suites, write_csv, Summary, TrialConfig};
use slopelab::hn::{hn_data, is_semistable, Semistability};
use slopelab::io::{filtration_to_value, matrix_from_spec, read_filtration, read_lattice, read_tensor_subspace};
use slopelab::minima::aut::commutant_dimension;
use slopelab::minima::{automorphism_group, Budget};
use slopelab::tensor::{line_degree, rho_profile, Metric, TensorElement};
use slopelab::{Error, RFiltration, Status};

#[derive(Parser)]
#[command(name = "slopelab", version, about = "Exact slopes of Euclidean lattices and their tensor products")]
struct Cli {
    /// Enumeration caps: N, or vectors=N,subsets=M (default: SLOPELAB_BUDGET or built-in)
    #[arg(long, global = true)]
    enum_budget: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Single lattice queries
    Lat {
        #[command(subcommand)]
        cmd: LatCmd,
    },
    Tensor {
        #[command(subcommand)]
        cmd: TensorCmd,
    },
    Git {
        #[command(subcommand)]
        cmd: GitCmd,
    },
    Filt {
        #[command(subcommand)]
        cmd: FiltCmd,
    },
    Harness {
        #[command(subcommand)]
        cmd: HarnessCmd,
    },
}

#[derive(Subcommand)]
enum LatCmd {
    /// Rank, degree, slope and semistability
    Info { file: PathBuf },
    /// Harder-Narasimhan polygon and flag
    Hn { file: PathBuf },
    /// Automorphism group order and commutant
    Aut { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Eps,
    Herm,
}

#[derive(Subcommand)]
enum TensorCmd {
    /// Degree of the line spanned by an element of E ⊗ F
    Deg {
        left: PathBuf,
        right: PathBuf,
        /// coefficient matrix, inline JSON or a file
        #[arg(long)]
        element: String,
        #[arg(long, value_enum, default_value = "herm")]
        metric: MetricArg,
    },
    /// Successive tensorial ranks of a subspace
    Rho {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum GitCmd {
    /// Semistability of V ⊂ E ⊗ F
    Check {
        file: PathBuf,
        #[arg(long, default_value = "both")]
        side: Side,
        /// flags tried per side in the filtration search
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FiltOp {
    Show,
    Expectation,
    Norm,
    Dual,
    Translate,
    Dilate,
    Exterior,
    Tensor,
    Sum,
    Inner,
    Restrict,
    Quotient,
    Lambda,
}

#[derive(Subcommand)]
enum FiltCmd {
    /// Apply an operation to a filtration
    Eval {
        file: PathBuf,
        #[arg(long, value_enum)]
        op: FiltOp,
        /// second filtration for tensor, sum, inner
        #[arg(long)]
        with: Option<PathBuf>,
        /// rational for translate or dilate
        #[arg(long)]
        by: Option<String>,
        /// exterior power
        #[arg(long)]
        n: Option<usize>,
        /// subspace basis (restrict, quotient) or vector (lambda), inline JSON or a file
        #[arg(long)]
        sub: Option<String>,
    },
}

#[derive(Subcommand)]
enum HarnessCmd {
    /// Run verification suites and write a CSV report
    Run {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        rank_min: usize,
        #[arg(long, default_value_t = 3)]
        rank_max: usize,
        #[arg(long, default_value_t = 3)]
        entry_bound: i64,
        /// CSV path; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
        /// omit the generation time line
        #[arg(long)]
        no_timestamp: bool,
    },
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Other(msg.into())
}

fn log_str(x: &LogRational) -> String {
    format!("{} ≈ {:.6}", x.exact_string(), x.to_f64())
}

fn lat(cmd: LatCmd, budget: Budget) -> Result<bool, Error> {
    match cmd {
        LatCmd::Info { file } => {
            let l = read_lattice(&file)?;
            if !l.label().is_empty() {
                println!("label: {}", l.label());
            }
            println!("rank: {}", l.rank());
            println!("det: {}", fmt_rational(&l.det()));
            println!("ndeg: {}", log_str(&l.ndeg()));
            println!("slope: {}", log_str(&l.slope()));
            let s = is_semistable(&l, budget)?;
            let v = match s.verdict() {
                Some(true) => "true",
                Some(false) => "false",
                None => "unknown",
            };
            println!("semistable: {v}");
            match s {
                Semistability::Unstable { witness, slope } => {
                    println!("destabilizing sublattice of slope {}: {}", log_str(&slope), rows(witness.basis()))
                }
                Semistability::Semistable(c) => println!("certificate: {c:?}"),
                Semistability::Inconclusive => println!("certificate: none within budget"),
            }
        }
        LatCmd::Hn { file } => {
            let l = read_lattice(&file)?;
            let h = hn_data(&l, budget)?;
            println!("mode: {}", h.mode);
            for (i, s) in h.slopes.iter().enumerate() {
                println!("mu_{}: {}", i + 1, log_str(s));
            }
            for (r, d) in &h.polygon {
                println!("vertex ({r}, {})", log_str(d));
            }
            for (i, s) in h.flag.iter().enumerate() {
                println!("step {}: rank {}, basis {}", i + 1, s.rank(), rows(s.basis()));
            }
        }
        LatCmd::Aut { file } => {
            let l = read_lattice(&file)?;
            let g = automorphism_group(&l)?;
            let c = commutant_dimension(&g, l.rank());
            println!("order: {}", g.len());
            println!("commutant dimension: {c}");
            println!("absolutely irreducible: {}", c == 1);
        }
    }
    Ok(true)
}

fn rows(m: &QMatrix) -> String {
    serde_json::to_string(&slopelab::io::matrix_to_value(m)).unwrap_or_default()
}

fn tensor(cmd: TensorCmd) -> Result<bool, Error> {
    match cmd {
        TensorCmd::Deg { left, right, element, metric } => {
            let e = read_lattice(&left)?;
            let f = read_lattice(&right)?;
            let s = TensorElement::new(e, f, matrix_from_spec(&element)?)?;
            let m = match metric {
                MetricArg::Eps => Metric::Epsilon,
                MetricArg::Herm => Metric::Hermitian,
            };
            let d = line_degree(&s, m)?;
            println!("tensorial rank: {}", s.tensorial_rank()?);
            println!("degree: {} ≈ {:.6}", d.exact_string(), d.midpoint_f64());
        }
        TensorCmd::Rho { file, seed } => {
            let v = read_tensor_subspace(&file)?;
            let p = rho_profile(&v, seed)?;
            for (i, (lo, hi)) in p.per_index.iter().enumerate() {
                if lo == hi {
                    println!("rho_{}: {lo}", i + 1);
                } else {
                    println!("rho_{}: in [{lo}, {hi}]", i + 1);
                }
            }
            println!("certified: {}", p.is_certified());
        }
    }
    Ok(true)
}

fn git(cmd: GitCmd) -> Result<bool, Error> {
    let GitCmd::Check { file, side, budget, seed } = cmd;
    let v = read_tensor_subspace(&file)?;
    let mut cfg = SearchConfig::with_seed(seed);
    if let Some(b) = budget {
        cfg.flags_per_side = b.max(1);
    }
    let pool = CandidatePool::default();
    let r = match side {
        Side::Both => both_sided_check(&v, &pool, cfg)?,
        s => left_right_check(&v, s, &pool, seed)?,
    };
    println!("side: {}", r.side);
    println!("status: {}", r.status);
    if let Some(w) = &r.witness {
        println!("witness: {w}");
        if let GitWitness::Filtrations { f, g, .. } = w {
            println!("F: {}", serde_json::to_string(&filtration_to_value(f)).unwrap_or_default());
            println!("G: {}", serde_json::to_string(&filtration_to_value(g)).unwrap_or_default());
        }
    }
    println!("evidence: {}", r.evidence);
    Ok(true)
}

fn filt(cmd: FiltCmd) -> Result<bool, Error> {
    let FiltCmd::Eval { file, op, with, by, n, sub } = cmd;
    let f = read_filtration(&file)?;
    let other = || -> Result<RFiltration, Error> { read_filtration(with.as_ref().ok_or_else(|| usage("--with is required"))?) };
    let by = || -> Result<Rational, Error> {
        let s = by.as_deref().ok_or_else(|| usage("--by is required"))?;
        parse_rational(s).ok_or_else(|| usage(format!("bad rational '{s}'")))
    };
    let sub = || -> Result<QMatrix, Error> { matrix_from_spec(sub.as_deref().ok_or_else(|| usage("--sub is required"))?) };
    let show = |g: RFiltration| println!("{}", serde_json::to_string(&filtration_to_value(&g)).unwrap_or_default());
    match op {
        FiltOp::Show => show(f),
        FiltOp::Expectation => println!("{}", fmt_rational(&f.expectation())),
        FiltOp::Norm => println!("{}", fmt_rational(&f.norm_sq())),
        FiltOp::Dual => show(f.dual()),
        FiltOp::Translate => show(f.translate(&by()?)),
        FiltOp::Dilate => {
            let e = by()?;
            if !e.is_positive() {
                return Err(usage("dilation factor must be positive"));
            }
            show(f.dilate(&e)?)
        }
        FiltOp::Exterior => show(f.exterior(n.ok_or_else(|| usage("--n is required"))?)?),
        FiltOp::Tensor => show(f.tensor(&other()?)),
        FiltOp::Sum => show(f.direct_sum(&other()?)),
        FiltOp::Inner => println!("{}", fmt_rational(&f.inner(&other()?)?)),
        FiltOp::Restrict => show(f.restrict(&sub()?)?),
        FiltOp::Quotient => show(f.quotient(&sub()?)?),
        FiltOp::Lambda => {
            let x = sub()?;
            for r in x.rows_iter() {
                match f.lambda(r) {
                    Some(t) => println!("{}", fmt_rational(&t)),
                    None => println!("inf"),
                }
            }
        }
    }
    Ok(true)
}

fn harness(cmd: HarnessCmd, budget: Budget) -> Result<bool, Error> {
    let HarnessCmd::Run {
        suite,
        trials,
        seed,
        rank_min,
        rank_max,
        entry_bound,
        out,
        no_timestamp,
    } = cmd;
    let suites = parse_suites(&suite)?;
    let cfg = TrialConfig {
        seed,
        rank_min,
        rank_max,
        entry_bound,
        trials,
        budget,
    };
    cfg.validate()?;
    let rows = run_suites(&suites, &cfg)?;
    let stamp = if no_timestamp {
        None
    } else {
        SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
    };
    match &out {
        Some(p) => {
            let f = File::create(p).map_err(|e| Error::input(p.display().to_string(), e.to_string()))?;
            write_csv(&rows, BufWriter::new(f), stamp)?;
        }
        None => write_csv(&rows, io::stdout().lock(), stamp)?,
    }
    for s in &suites {
        let mine: Vec<_> = rows.iter().filter(|r| r.suite == *s).cloned().collect();
        eprintln!("{s}: {}", Summary::of(&mine));
    }
    let fails: Vec<_> = rows.iter().filter(|r| r.report.status == Status::Fail).collect();
    for r in fails.iter().take(10) {
        eprintln!("FAIL {} case {} seed {}: {}", r.suite, r.case_id, r.seed, r.report);
    }
    Ok(fails.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = match cli.enum_budget.as_deref() {
        None => Budget::from_env(),
        Some(s) => match Budget::parse(s) {
            Some(b) => b,
            None => {
                eprintln!("error: bad budget '{s}'");
                return ExitCode::from(2);
            }
        },
    };
    let res = match cli.cmd {
        Cmd::Lat { cmd } => lat(cmd, budget),
        Cmd::Tensor { cmd } => tensor(cmd),
        Cmd::Git { cmd } => git(cmd),
        Cmd::Filt { cmd } => filt(cmd),
        Cmd::Harness { cmd } => harness(cmd, budget),
    };
    let _ = io::stdout().flush();
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
