//! Euclidean lattices given by exact Gram matrices, their sublattices and linear maps.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::eigen::{largest_positive_root, EigenInterval};
use crate::exact::hnf::{complete_to_basis, hnf, integer_left_kernel, saturate};
use crate::exact::matrix::is_positive_definite;
use crate::exact::rational::{content, rat, rint};
use crate::exact::{Enclosure, ExactReal, LogRational, QMatrix, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    gram: QMatrix,
    label: String,
}

impl Lattice {
    pub fn new(gram: QMatrix) -> Result<Self> {
        Self::with_label(gram, "")
    }

    pub fn with_label(gram: QMatrix, label: impl Into<String>) -> Result<Self> {
        if !gram.is_square() || gram.nrows() == 0 {
            return Err(Error::DimensionMismatch("gram must be square and non-empty".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::NonSymmetric);
        }
        if !is_positive_definite(&gram) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Lattice {
            gram,
            label: label.into(),
        })
    }

    pub(crate) fn unchecked(gram: QMatrix, label: impl Into<String>) -> Self {
        Lattice {
            gram,
            label: label.into(),
        }
    }

    pub fn standard(r: usize) -> Self {
        Self::unchecked(QMatrix::identity(r), format!("Z^{r}"))
    }

    /// Root lattice A_n in its simple-root basis.
    pub fn a_n(n: usize) -> Self {
        let g = QMatrix::from_fn(n, n, |i, j| {
            if i == j {
                rint(2)
            } else if i.abs_diff(j) == 1 {
                rint(-1)
            } else {
                Rational::zero()
            }
        });
        Self::unchecked(g, format!("A_{n}"))
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        Self::new(QMatrix::from_fn(n, n, |i, j| {
            if i == j {
                rint(entries[i])
            } else {
                Rational::zero()
            }
        }))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(QMatrix::from_i64(rows))
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn det(&self) -> Rational {
        self.gram.det()
    }

    /// Normalized Arakelov degree `-½ log det(gram)`.
    pub fn ndeg(&self) -> LogRational {
        LogRational::half_log(&self.det().recip()).expect("positive determinant")
    }

    pub fn slope(&self) -> LogRational {
        self.ndeg().div_int(self.rank() as u64)
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        self.gram.form(x, y)
    }

    pub fn norm_sq(&self, x: &[Rational]) -> Rational {
        self.gram.form(x, x)
    }

    pub fn dual(&self) -> Lattice {
        let inv = self.gram.inverse().expect("definite gram is invertible");
        Self::unchecked(inv, format!("{}^dual", self.label))
    }

    pub fn tensor(&self, other: &Lattice) -> Lattice {
        Self::unchecked(
            self.gram.kron(&other.gram),
            format!("{}(x){}", self.label, other.label),
        )
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Self::unchecked(
            self.gram.direct_sum(&other.gram),
            format!("{}(+){}", self.label, other.label),
        )
    }

    /// Gram of the k-th exterior power in the basis of increasing k-subsets.
    pub fn exterior(&self, k: usize) -> Result<Lattice> {
        let r = self.rank();
        if k > r {
            return Err(Error::DimensionMismatch(format!("exterior power {k} > rank {r}")));
        }
        if k == 0 {
            return Ok(Self::unchecked(QMatrix::identity(1), "1"));
        }
        let subsets = k_subsets(r, k);
        let g = QMatrix::from_fn(subsets.len(), subsets.len(), |a, b| {
            self.gram.submatrix(&subsets[a], &subsets[b]).det()
        });
        Ok(Self::unchecked(g, format!("L^{k}({})", self.label)))
    }

    pub fn det_line(&self) -> Lattice {
        self.exterior(self.rank()).expect("top exterior power")
    }

    pub fn scaled(&self, c: &Rational) -> Result<Lattice> {
        if !c.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self::unchecked(self.gram.scale(c), self.label.clone()))
    }

    /// Positive rational `c` with `c * gram` integral, and the scaled lattice.
    pub fn integral_scaling(&self) -> (Rational, Lattice) {
        use num_integer::Integer;
        let l = self
            .gram
            .entries()
            .iter()
            .fold(crate::exact::Int::one(), |acc, x| acc.lcm(x.denom()));
        let c = Rational::from_integer(l);
        (c.clone(), Self::unchecked(self.gram.scale(&c), self.label.clone()))
    }

    pub fn full(&self) -> Sublattice {
        Sublattice {
            parent: self.clone(),
            basis: QMatrix::identity(self.rank()),
            saturated: true,
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} gram={}", self.label, self.gram)
    }
}

pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// A sublattice given by integral generator rows in parent coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sublattice {
    parent: Lattice,
    basis: QMatrix,
    saturated: bool,
}

impl Sublattice {
    /// Saturation of the rational span of `generators`, stored in Hermite form.
    pub fn saturated(parent: &Lattice, generators: &QMatrix) -> Result<Self> {
        if generators.ncols() != parent.rank() {
            return Err(Error::DimensionMismatch("generator length differs from rank".into()));
        }
        let basis = saturate(generators)?;
        Ok(Sublattice {
            parent: parent.clone(),
            basis,
            saturated: true,
        })
    }

    /// Sublattice spanned by the given independent integral rows, not saturated.
    pub fn spanned(parent: &Lattice, rows: &QMatrix) -> Result<Self> {
        if rows.ncols() != parent.rank() {
            return Err(Error::DimensionMismatch("generator length differs from rank".into()));
        }
        if !rows.is_integral() {
            return Err(Error::Other("requires integral matrix".into()));
        }
        if rows.nrows() == 0 || rows.rank() != rows.nrows() {
            return Err(Error::Degenerate);
        }
        let basis = hnf(rows)?;
        let saturated = basis == saturate(rows)?;
        Ok(Sublattice {
            parent: parent.clone(),
            basis,
            saturated,
        })
    }

    pub fn parent(&self) -> &Lattice {
        &self.parent
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn gram(&self) -> QMatrix {
        self.basis.mul(self.parent.gram()).mul(&self.basis.transpose())
    }

    pub fn induced(&self) -> Lattice {
        Lattice::unchecked(self.gram(), format!("sub({})", self.parent.label))
    }

    pub fn ndeg(&self) -> LogRational {
        self.induced().ndeg()
    }

    pub fn slope(&self) -> LogRational {
        self.induced().slope()
    }

    pub fn contains_span_of(&self, other: &Sublattice) -> bool {
        self.basis.vstack(&other.basis).rank() == self.rank()
    }

    /// Saturation of the sum.
    pub fn sum(&self, other: &Sublattice) -> Result<Sublattice> {
        Sublattice::saturated(&self.parent, &self.basis.vstack(&other.basis))
    }

    /// Intersection of the rational spans, saturated; `None` when it is zero.
    pub fn intersection(&self, other: &Sublattice) -> Result<Option<Sublattice>> {
        let inter = span_intersection(&self.basis, &other.basis);
        if inter.nrows() == 0 {
            return Ok(None);
        }
        Ok(Some(Sublattice::saturated(&self.parent, &inter)?))
    }

    /// Quotient lattice with the orthogonal-projection metric, on a completed basis.
    pub fn quotient(&self) -> Result<Lattice> {
        if !self.saturated {
            return Err(Error::Other("quotient has torsion".into()));
        }
        let n = self.parent.rank();
        let k = self.rank();
        if k == n {
            return Err(Error::ZeroRank);
        }
        let c = complete_to_basis(&self.basis)?;
        let full = self.basis.vstack(&c);
        let m = full.mul(self.parent.gram()).mul(&full.transpose());
        let idx_a: Vec<usize> = (0..k).collect();
        let idx_d: Vec<usize> = (k..n).collect();
        let a = m.submatrix(&idx_a, &idx_a);
        let x = m.submatrix(&idx_a, &idx_d);
        let d = m.submatrix(&idx_d, &idx_d);
        let schur = d.sub(&x.transpose().mul(&a.inverse()?).mul(&x));
        Ok(Lattice::unchecked(schur, format!("{}/sub", self.parent.label)))
    }

    /// The annihilator of this sublattice inside the dual lattice.
    pub fn orthogonal_complement(&self) -> Result<Sublattice> {
        if !self.saturated {
            return Err(Error::Other("complement of a non-saturated sublattice".into()));
        }
        if self.rank() == self.parent.rank() {
            return Err(Error::ZeroRank);
        }
        let k = integer_left_kernel(&self.basis.transpose())?;
        Ok(Sublattice {
            parent: self.parent.dual(),
            basis: k,
            saturated: true,
        })
    }

    /// Annihilator of a dual sublattice, as a saturated sublattice of `primal`.
    pub fn annihilator_in(&self, primal: &Lattice) -> Result<Sublattice> {
        if self.rank() == primal.rank() {
            return Err(Error::ZeroRank);
        }
        let k = integer_left_kernel(&self.basis.transpose())?;
        Ok(Sublattice {
            parent: primal.clone(),
            basis: k,
            saturated: true,
        })
    }
}

/// Rows spanning the intersection of the row spaces of `a` and `b`.
pub fn span_intersection(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let stacked = a.vstack(b);
    let lk = stacked.left_kernel();
    let ka = lk.nrows();
    if ka == 0 {
        return QMatrix::zeros(0, a.ncols());
    }
    let xa = QMatrix::from_fn(ka, a.nrows(), |i, j| lk[(i, j)].clone());
    xa.mul(a).row_space()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap {
    pub source: Lattice,
    pub target: Lattice,
    /// Row i holds the image of the i-th source basis vector in target coordinates.
    pub matrix: QMatrix,
}

#[derive(Clone, Debug)]
pub struct Height {
    pub op_norm_sq: EigenInterval,
    pub content: Rational,
    pub value: Enclosure,
}

impl LinearMap {
    pub fn new(source: Lattice, target: Lattice, matrix: QMatrix) -> Result<Self> {
        if matrix.nrows() != source.rank() || matrix.ncols() != target.rank() {
            return Err(Error::DimensionMismatch("map matrix shape".into()));
        }
        Ok(LinearMap {
            source,
            target,
            matrix,
        })
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// `h(f) = log ||f||_op - log content`, enclosed.
    pub fn height(&self) -> Result<Height> {
        if self.matrix.is_zero() {
            return Err(Error::Other("height of zero map".into()));
        }
        let a = &self.matrix;
        let op = self
            .source
            .gram()
            .inverse()?
            .mul(a)
            .mul(self.target.gram())
            .mul(&a.transpose());
        let iv = largest_positive_root(&op, &rat(1, 1 << 30)).ok_or(Error::Degenerate)?;
        let c = content(a.entries());
        let c2 = &c * &c;
        let lo = ExactReal::from_log(LogRational::half_log(&(&iv.lower / &c2))?);
        let hi = ExactReal::from_log(LogRational::half_log(&(&iv.upper / &c2))?);
        Ok(Height {
            op_norm_sq: iv,
            content: c,
            value: Enclosure::between(lo, hi),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rint;
    use proptest::prelude::*;

    fn hl(n: i64, d: i64) -> LogRational {
        LogRational::half_log(&rat(n, d)).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(Lattice::standard(2).ndeg(), LogRational::zero());
        assert_eq!(Lattice::a_n(2).ndeg(), -hl(3, 1));
        assert_eq!(Lattice::diagonal(&[1, 4]).unwrap().ndeg(), -LogRational::log(&rint(2)).unwrap());
        assert_eq!(Lattice::a_n(2).slope(), -LogRational::new(rint(3), 2).unwrap());
        for n in 1..=6 {
            let expect = -LogRational::new(rint(n as i64 + 1), n as u64).unwrap();
            assert_eq!(Lattice::a_n(n).slope(), expect);
        }
    }

    #[test]
    fn induced_and_dual() {
        let z3 = Lattice::standard(3);
        let line = Sublattice::saturated(&z3, &QMatrix::from_i64(&[&[0, 1, -1]])).unwrap();
        assert_eq!(line.gram(), QMatrix::from_i64(&[&[2]]));
        let d = Lattice::a_n(2).dual();
        assert_eq!(d.gram(), &QMatrix::from_fn(2, 2, |i, j| if i == j { rat(2, 3) } else { rat(1, 3) }));
        assert_eq!(d.ndeg(), hl(3, 1));
    }

    #[test]
    fn quotient_and_complement() {
        let l = Lattice::diagonal(&[1, 4]).unwrap();
        let e1 = Sublattice::saturated(&l, &QMatrix::from_i64(&[&[1, 0]])).unwrap();
        let q = e1.quotient().unwrap();
        assert_eq!(q.ndeg(), -LogRational::log(&rint(2)).unwrap());
        let perp = e1.orthogonal_complement().unwrap();
        assert_eq!(perp.ndeg(), &e1.ndeg() - &l.ndeg());
        assert!(l.full().orthogonal_complement().is_err());
    }

    #[test]
    fn tensor_exterior() {
        let t = Lattice::standard(2).tensor(&Lattice::a_n(2));
        assert_eq!(t.ndeg(), -LogRational::log(&rint(3)).unwrap());
        let e = Lattice::a_n(2).exterior(2).unwrap();
        assert_eq!(e.gram(), &QMatrix::from_i64(&[&[3]]));
        assert_eq!(Lattice::a_n(2).exterior(0).unwrap().ndeg(), LogRational::zero());
        assert!(Lattice::a_n(2).exterior(3).is_err());
    }

    #[test]
    fn heights() {
        let id = LinearMap::new(Lattice::standard(2), Lattice::standard(2), QMatrix::identity(2)).unwrap();
        assert!(id.height().unwrap().value.is_point());
        assert_eq!(id.height().unwrap().value.lo.unwrap(), ExactReal::zero());
        let two = LinearMap::new(Lattice::standard(1), Lattice::standard(1), QMatrix::from_i64(&[&[2]])).unwrap();
        assert_eq!(two.height().unwrap().value.lo.unwrap(), ExactReal::zero());
        let inc = LinearMap::new(
            Lattice::standard(2),
            Lattice::standard(3),
            QMatrix::from_i64(&[&[1, -1, 0], &[0, 1, -1]]),
        )
        .unwrap();
        let h = inc.height().unwrap();
        assert!(h.value.is_point());
        assert_eq!(h.value.lo.unwrap(), ExactReal::from_log(hl(3, 1)));
        // with the A_2 metric on the source the same map is an isometry
        let iso = LinearMap::new(Lattice::a_n(2), Lattice::standard(3), inc.matrix.clone()).unwrap();
        assert_eq!(iso.height().unwrap().value.lo.unwrap(), ExactReal::zero());
    }

    fn random_lattice(entries: &[i64], r: usize) -> Option<Lattice> {
        let b = QMatrix::from_fn(r, r, |i, j| rint(entries[i * r + j]));
        if b.det().is_zero() {
            return None;
        }
        Lattice::new(b.mul(&b.transpose())).ok()
    }

    proptest! {
        #[test]
        fn degree_identities(e in proptest::collection::vec(-4i64..=4, 9),
                             f in proptest::collection::vec(-4i64..=4, 4),
                             g in proptest::collection::vec(-3i64..=3, 6)) {
            let Some(l) = random_lattice(&e, 3) else { return Ok(()) };
            let Some(m) = random_lattice(&f, 2) else { return Ok(()) };
            prop_assert_eq!(l.dual().ndeg(), -l.ndeg());
            let t = l.tensor(&m);
            prop_assert_eq!(t.ndeg(), &l.ndeg().mul_int(2) + &m.ndeg().mul_int(3));
            let gens = QMatrix::from_fn(2, 3, |i, j| rint(g[3 * i + j]));
            if gens.rank() == 0 { return Ok(()); }
            let sub = Sublattice::saturated(&l, &gens).unwrap();
            if sub.rank() < 3 {
                let q = sub.quotient().unwrap();
                prop_assert_eq!(l.ndeg(), &sub.ndeg() + &q.ndeg());
                let perp = sub.orthogonal_complement().unwrap();
                prop_assert_eq!(perp.ndeg(), &sub.ndeg() - &l.ndeg());
            }
            prop_assert_eq!(l.det_line().ndeg(), l.ndeg());
        }
    }
}
