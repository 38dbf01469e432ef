//! Elements and subspaces of tensor products of lattices, with hermitian and operator-norm metrics.

mod rho;
mod siegel;

use num_traits::Zero;

use crate::check::{CheckReport, Mode, Status};
use crate::error::{Error, Result};
use crate::exact::eigen::largest_positive_root;
use crate::exact::rational::{content, harmonic_tail};
use crate::exact::{rat, rint, EigenInterval, Enclosure, ExactReal, LogRational, QMatrix, Rational};
use crate::lattice::{Lattice, Sublattice};
use crate::minima::{max_slope, Budget};

pub use rho::{generic_rank, pencil_min_rank, rank_drop_poly, rho_profile, RankProfile};
pub use siegel::{siegel_lines, SiegelLines};

/// Coarsest and finest widths tried for operator-norm enclosures.
const EPS_START: i64 = 1 << 10;
const EPS_FINEST: i64 = 1 << 40;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Metric {
    Hermitian,
    Epsilon,
}

/// `Σ m_ij e_i ⊗ f_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    pub left: Lattice,
    pub right: Lattice,
    pub matrix: QMatrix,
}

impl TensorElement {
    pub fn new(left: Lattice, right: Lattice, matrix: QMatrix) -> Result<Self> {
        if matrix.nrows() != left.rank() || matrix.ncols() != right.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} coefficients for ranks {} and {}",
                matrix.nrows(),
                matrix.ncols(),
                left.rank(),
                right.rank()
            )));
        }
        Ok(TensorElement { left, right, matrix })
    }

    pub fn split(left: Lattice, right: Lattice, u: &[Rational], v: &[Rational]) -> Result<Self> {
        let m = QMatrix::from_fn(u.len(), v.len(), |i, j| &u[i] * &v[j]);
        Self::new(left, right, m)
    }

    /// The identity of `L` seen in `L ⊗ L^∨`.
    pub fn trace(l: &Lattice) -> Self {
        TensorElement {
            left: l.clone(),
            right: l.dual(),
            matrix: QMatrix::identity(l.rank()),
        }
    }

    /// Coordinates in the product basis `e_i ⊗ f_j`, index `i * rk F + j`.
    pub fn flatten(&self) -> Vec<Rational> {
        self.matrix.entries().to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    fn nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::Degenerate)
        } else {
            Ok(())
        }
    }

    /// Generator of the saturated line through `self`.
    pub fn primitive(&self) -> Result<TensorElement> {
        self.nonzero()?;
        let c = content(self.matrix.entries());
        Ok(TensorElement {
            left: self.left.clone(),
            right: self.right.clone(),
            matrix: self.matrix.scale(&c.recip()),
        })
    }

    pub fn tensorial_rank(&self) -> Result<usize> {
        self.nonzero()?;
        Ok(self.matrix.rank())
    }

    /// `G_E M G_F M^T`, whose spectrum gives the squared singular values.
    fn operator_gram(&self) -> QMatrix {
        self.left
            .gram()
            .mul(&self.matrix)
            .mul(self.right.gram())
            .mul(&self.matrix.transpose())
    }

    pub fn hs_norm_sq(&self) -> Rational {
        self.operator_gram().trace()
    }

    pub fn eps_norm_sq(&self, eps: &Rational) -> Result<EigenInterval> {
        self.nonzero()?;
        largest_positive_root(&self.operator_gram(), eps).ok_or(Error::Degenerate)
    }

    /// Left and right images: saturations of the column and row spans.
    pub fn images(&self) -> Result<(Sublattice, Sublattice)> {
        self.nonzero()?;
        Ok((
            Sublattice::saturated(&self.left, &self.matrix.transpose())?,
            Sublattice::saturated(&self.right, &self.matrix)?,
        ))
    }

    pub fn hermitian_degree(&self) -> Result<LogRational> {
        let p = self.primitive()?;
        LogRational::half_log(&p.hs_norm_sq().recip())
    }

    pub fn eps_degree(&self, eps: &Rational) -> Result<Enclosure> {
        let p = self.primitive()?;
        let iv = p.eps_norm_sq(eps)?;
        if iv.is_exact() {
            return Ok(Enclosure::point(ExactReal::from_log(LogRational::half_log(&iv.upper.recip())?)));
        }
        Ok(Enclosure::between(
            ExactReal::from_log(LogRational::half_log(&iv.upper.recip())?),
            ExactReal::from_log(LogRational::half_log(&iv.lower.recip())?),
        ))
    }
}

/// Degree of the saturated line through `s`.
pub fn line_degree(s: &TensorElement, metric: Metric) -> Result<Enclosure> {
    match metric {
        Metric::Hermitian => Ok(Enclosure::point(ExactReal::from_log(s.hermitian_degree()?))),
        Metric::Epsilon => s.eps_degree(&rat(1, EPS_START)),
    }
}

/// A certified maximal slope turns `FAIL` into `INCONCLUSIVE` when it is only a lower bound.
fn soften(mut c: CheckReport, mode: Mode) -> CheckReport {
    if mode == Mode::LowerBound && c.status == Status::Fail {
        c.status = Status::Inconclusive;
    }
    c
}

fn sum_max_slopes(e: &Lattice, f: &Lattice, budget: Budget) -> Result<(LogRational, Mode)> {
    let a = max_slope(e, budget)?;
    let b = max_slope(f, budget)?;
    let mode = if a.mode == Mode::Exact && b.mode == Mode::Exact {
        Mode::Exact
    } else {
        Mode::LowerBound
    };
    Ok((&a.value + &b.value, mode))
}

fn neg_half_log(n: u64) -> Result<LogRational> {
    LogRational::half_log(&rat(1, n as i64))
}

/// Hadamard-type bounds for the line through `s`: against the slopes of its images, then against maximal slopes.
pub fn check_majoration(s: &TensorElement, budget: Budget) -> Result<Vec<CheckReport>> {
    let lhs = s.hermitian_degree()?;
    let rho = s.tensorial_rank()?;
    let corr = neg_half_log(rho as u64)?;
    let (e1, f1) = s.images()?;
    let local = &(&e1.slope() + &f1.slope()) + &corr;
    let (mx, mode) = sum_max_slopes(&s.left, &s.right, budget)?;
    let global = &mx + &corr;
    let pt = |x: &LogRational| Enclosure::point(ExactReal::from_log(x.clone()));
    let w = format!("rank {rho}");
    Ok(vec![
        CheckReport::le("line degree vs image slopes", pt(&lhs), pt(&local), w.clone()),
        soften(CheckReport::le("line degree vs maximal slopes", pt(&lhs), pt(&global), w), mode),
    ])
}

/// Operator-norm line degree against the sum of maximal slopes, refining the enclosure when undecided.
pub fn check_eps_first_degree(s: &TensorElement, budget: Budget) -> Result<CheckReport> {
    let (mx, mode) = sum_max_slopes(&s.left, &s.right, budget)?;
    let rhs = Enclosure::point(ExactReal::from_log(mx));
    let mut den = EPS_START;
    loop {
        let lhs = s.eps_degree(&rat(1, den))?;
        let c = CheckReport::le("operator-norm line degree", lhs, rhs.clone(), "");
        if c.status != Status::Inconclusive || den >= EPS_FINEST {
            return Ok(soften(c, mode));
        }
        den <<= 10;
    }
}

/// Linearly independent tensors spanning a subspace of `E ⊗ F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSubspace {
    pub left: Lattice,
    pub right: Lattice,
    pub generators: Vec<QMatrix>,
}

impl TensorSubspace {
    pub fn new(left: Lattice, right: Lattice, generators: Vec<QMatrix>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::ZeroRank);
        }
        for g in &generators {
            TensorElement::new(left.clone(), right.clone(), g.clone())?;
        }
        let s = TensorSubspace { left, right, generators };
        if s.flat().rank() != s.dim() {
            return Err(Error::Degenerate);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.left.rank(), self.right.rank())
    }

    /// Generators as rows in the product basis.
    pub fn flat(&self) -> QMatrix {
        QMatrix::from_rows(self.generators.iter().map(|g| g.entries().to_vec()).collect())
            .expect("generators share a shape")
    }

    pub fn element(&self, coeffs: &[Rational]) -> QMatrix {
        let (a, b) = self.shape();
        let mut m = QMatrix::zeros(a, b);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            if !c.is_zero() {
                m = m.add(&g.scale(c));
            }
        }
        m
    }

    pub fn ambient(&self) -> Lattice {
        self.left.tensor(&self.right)
    }

    pub fn sublattice(&self) -> Result<Sublattice> {
        Sublattice::saturated(&self.ambient(), &self.flat())
    }

    pub fn slope(&self) -> Result<LogRational> {
        Ok(self.sublattice()?.slope())
    }

    pub fn ndeg(&self) -> Result<LogRational> {
        Ok(self.sublattice()?.ndeg())
    }
}

/// `μ̂(V) <= μ̂_max(E) + μ̂_max(F)`.
pub fn check_mumax_sum(v: &TensorSubspace, budget: Budget) -> Result<CheckReport> {
    let lhs = v.slope()?;
    let (mx, mode) = sum_max_slopes(&v.left, &v.right, budget)?;
    Ok(soften(
        CheckReport::le(
            "subspace slope vs maximal slopes",
            Enclosure::point(ExactReal::from_log(lhs)),
            Enclosure::point(ExactReal::from_log(mx)),
            format!("rank {}", v.dim()),
        ),
        mode,
    ))
}

/// `μ̂(V) <= μ̂_max(E) + μ̂_max(F) + ℓ(r)/2 - (1/2r) Σ log ρ_i(V)`, with certified lower bounds for the `ρ_i`.
pub fn check_majo_de_mu(v: &TensorSubspace, budget: Budget, seed: u64) -> Result<CheckReport> {
    let r = v.dim();
    let lhs = v.slope()?;
    let prof = rho_profile(v, seed)?;
    let prod: Rational = prof.per_index.iter().map(|&(lo, _)| rint(lo as i64)).product();
    let corr = -LogRational::half_log(&prod)?.div_int(r as u64);
    let (mx, mode) = sum_max_slopes(&v.left, &v.right, budget)?;
    let rhs = ExactReal::new(&mx + &corr, harmonic_tail(r) / rint(2));
    let lo: Vec<String> = prof.per_index.iter().map(|p| p.0.to_string()).collect();
    Ok(soften(
        CheckReport::le(
            "subspace slope vs tensorial ranks",
            Enclosure::point(ExactReal::from_log(lhs)),
            Enclosure::point(rhs),
            format!("rho >= ({})", lo.join(",")),
        ),
        mode,
    ))
}

fn gram2(g: &QMatrix, x: &[Rational], y: &[Rational]) -> [Rational; 3] {
    [g.form(x, x), g.form(x, y), g.form(y, y)]
}

/// `||e1⊗f1 ∧ e2⊗f2||² >= ||e1 ∧ e2||² ||f1 ∧ f2||²` at the archimedean place.
pub fn check_rank2_local(e: &Lattice, f: &Lattice, es: [&[Rational]; 2], fs: [&[Rational]; 2]) -> Result<CheckReport> {
    if es.iter().any(|x| x.len() != e.rank()) || fs.iter().any(|x| x.len() != f.rank()) {
        return Err(Error::DimensionMismatch("vector length differs from rank".into()));
    }
    let [a11, a12, a22] = gram2(e.gram(), es[0], es[1]);
    let [b11, b12, b22] = gram2(f.gram(), fs[0], fs[1]);
    let lhs = &a11 * &b11 * &a22 * &b22 - &a12 * &a12 * &b12 * &b12;
    let rhs = (&a11 * &a22 - &a12 * &a12) * (&b11 * &b22 - &b12 * &b12);
    Ok(CheckReport::le(
        "product of wedges",
        Enclosure::point(ExactReal::from_rational(rhs)),
        Enclosure::point(ExactReal::from_rational(lhs)),
        "",
    ))
}

/// For rank two `E`, `F` and rational bases, `V = <e1⊗f1, e2⊗f2>` satisfies `μ̂(V) <= μ̂(E) + μ̂(F)`.
pub fn check_two_split(e: &Lattice, f: &Lattice, es: [&[Rational]; 2], fs: [&[Rational]; 2]) -> Result<CheckReport> {
    if e.rank() != 2 || f.rank() != 2 {
        return Err(Error::DimensionMismatch("both factors must have rank 2".into()));
    }
    let basis = |x: [&[Rational]; 2]| QMatrix::from_rows(vec![x[0].to_vec(), x[1].to_vec()]);
    if basis(es)?.rank() != 2 || basis(fs)?.rank() != 2 {
        return Err(Error::Degenerate);
    }
    let gens = vec![
        QMatrix::from_fn(2, 2, |i, j| &es[0][i] * &fs[0][j]),
        QMatrix::from_fn(2, 2, |i, j| &es[1][i] * &fs[1][j]),
    ];
    let v = TensorSubspace::new(e.clone(), f.clone(), gens)?;
    let lhs = v.slope()?;
    let rhs = &e.slope() + &f.slope();
    Ok(CheckReport::le(
        "split pair slope",
        Enclosure::point(ExactReal::from_log(lhs)),
        Enclosure::point(ExactReal::from_log(rhs)),
        "",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Lattice {
        Lattice::standard(n)
    }

    fn el(l: &Lattice, r: &Lattice, rows: &[&[i64]]) -> TensorElement {
        TensorElement::new(l.clone(), r.clone(), QMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn ranks() {
        assert_eq!(el(&z(2), &z(2), &[&[1, 0], &[0, 0]]).tensorial_rank().unwrap(), 1);
        assert_eq!(el(&z(2), &z(2), &[&[1, 0], &[0, 1]]).tensorial_rank().unwrap(), 2);
        assert_eq!(TensorElement::trace(&Lattice::a_n(3)).tensorial_rank().unwrap(), 3);
        assert!(el(&z(2), &z(2), &[&[0, 0], &[0, 0]]).tensorial_rank().is_err());
    }

    #[test]
    fn norms() {
        let s = el(&z(2), &z(2), &[&[1, 0], &[0, 0]]);
        assert_eq!(s.hs_norm_sq(), rint(1));
        assert_eq!(s.eps_norm_sq(&rat(1, 1000)).unwrap().upper, rint(1));
        let id = el(&z(2), &z(2), &[&[1, 0], &[0, 1]]);
        assert_eq!(id.hs_norm_sq(), rint(2));
        assert!(id.eps_norm_sq(&rat(1, 1000)).unwrap().contains(&rint(1)));
        let t = TensorElement::trace(&Lattice::a_n(2));
        assert_eq!(t.hs_norm_sq(), rint(2));
    }

    #[test]
    fn degrees() {
        let id = el(&z(2), &z(2), &[&[1, 0], &[0, 1]]);
        let h = line_degree(&id, Metric::Hermitian).unwrap();
        assert_eq!(h, Enclosure::point(ExactReal::from_log(LogRational::half_log(&rat(1, 2)).unwrap())));
        let e = line_degree(&id, Metric::Epsilon).unwrap();
        assert!(e.is_point());
        assert_eq!(e.midpoint_f64(), 0.0);
        let two = el(&z(2), &z(2), &[&[2, 0], &[0, 0]]);
        assert!(two.hermitian_degree().unwrap().is_zero());
    }

    #[test]
    fn majoration_examples() {
        let id = el(&z(2), &z(2), &[&[1, 0], &[0, 1]]);
        for c in check_majoration(&id, Budget::default()).unwrap() {
            assert_eq!(c.status, Status::Pass);
            assert_eq!(c.slack_f64(), 0.0);
        }
        let t = TensorElement::trace(&Lattice::a_n(2));
        let cs = check_majoration(&t, Budget::default()).unwrap();
        assert!(cs.iter().all(|c| c.passed()));
        let c = check_eps_first_degree(&t, Budget::default()).unwrap();
        assert_eq!(c.status, Status::Pass);
        assert_eq!(c.slack_f64(), 0.0);
        let c = check_eps_first_degree(&id, Budget::default()).unwrap();
        assert_eq!(c.status, Status::Pass);
    }

    #[test]
    fn split_pairs() {
        let e = Lattice::diagonal(&[1, 4]).unwrap();
        let f = Lattice::a_n(2);
        let es: [&[Rational]; 2] = [&[rint(1), rint(1)], &[rint(0), rint(1)]];
        let fs: [&[Rational]; 2] = [&[rint(2), rint(-1)], &[rint(1), rint(1)]];
        assert!(check_rank2_local(&e, &f, es, fs).unwrap().passed());
        assert!(check_two_split(&e, &f, es, fs).unwrap().passed());
        let q = Lattice::new(QMatrix::identity(2).scale(&rat(1, 16))).unwrap();
        let std: [&[Rational]; 2] = [&[rint(1), rint(0)], &[rint(0), rint(1)]];
        let c = check_two_split(&q, &q, std, std).unwrap();
        assert_eq!(c.status, Status::Pass);
        assert_eq!(c.slack_f64(), 0.0);
    }

    #[test]
    fn subspace_bounds() {
        let gens = vec![QMatrix::from_i64(&[&[1, 0], &[0, 1]])];
        let v = TensorSubspace::new(z(2), z(2), gens).unwrap();
        assert!(check_mumax_sum(&v, Budget::default()).unwrap().passed());
        assert!(check_majo_de_mu(&v, Budget::default(), 1).unwrap().passed());
        let a = Lattice::a_n(2);
        let gens = vec![QMatrix::from_i64(&[&[1, 0], &[0, 1]]), QMatrix::from_i64(&[&[0, 1], &[1, 1]])];
        let v = TensorSubspace::new(a.clone(), a, gens).unwrap();
        assert!(check_mumax_sum(&v, Budget::default()).unwrap().passed());
        assert!(check_majo_de_mu(&v, Budget::default(), 1).unwrap().passed());
        assert!(TensorSubspace::new(z(2), z(2), vec![QMatrix::identity(2), QMatrix::identity(2).scale(&rint(3))]).is_err());
    }
}
