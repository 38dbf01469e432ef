//! Real filtrations of finite dimensional Q-vector spaces, stored as weighted flags.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::exact::rational::fmt_rational;
use crate::exact::{Enclosure, ExactReal, QMatrix, Rational};
use crate::lattice::{k_subsets, span_intersection};

/// `W_1 ⊂ … ⊂ W_n = Q^dim` with weights `a_1 > … > a_n`; `F^t = W_i` for `a_{i+1} < t <= a_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RFiltration {
    dim: usize,
    flag: Vec<QMatrix>,
    weights: Vec<Rational>,
}

fn echelon(m: &QMatrix) -> QMatrix {
    m.row_space()
}

fn contains(space: &QMatrix, x: &[Rational]) -> bool {
    if x.iter().all(|v| v.is_zero()) {
        return true;
    }
    if space.nrows() == 0 {
        return false;
    }
    space.vstack(&QMatrix::row_vector(x)).rank() == space.nrows()
}

impl RFiltration {
    pub fn new(dim: usize, flag: Vec<QMatrix>, weights: Vec<Rational>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroRank);
        }
        if flag.is_empty() || flag.len() != weights.len() {
            return Err(Error::NotAFlag("one weight per flag step is required".into()));
        }
        let mut steps = Vec::with_capacity(flag.len());
        let mut prev = 0;
        for (i, m) in flag.iter().enumerate() {
            if m.ncols() != dim {
                return Err(Error::DimensionMismatch(format!("flag step {i} has {} columns, expected {dim}", m.ncols())));
            }
            let e = echelon(m);
            if e.nrows() <= prev {
                return Err(Error::NotAFlag(format!("step {i} does not grow")));
            }
            if let Some(last) = steps.last() {
                if e.vstack(last).rank() != e.nrows() {
                    return Err(Error::NotAFlag(format!("step {i} does not contain step {}", i - 1)));
                }
            }
            prev = e.nrows();
            steps.push(e);
        }
        if prev != dim {
            return Err(Error::NotAFlag("last step must be the whole space".into()));
        }
        if weights.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::WeightsNotDecreasing);
        }
        Ok(RFiltration {
            dim,
            flag: steps,
            weights,
        })
    }

    /// Single jump at `a`.
    pub fn constant(dim: usize, a: Rational) -> Self {
        RFiltration {
            dim,
            flag: vec![QMatrix::identity(dim)],
            weights: vec![a],
        }
    }

    pub fn trivial(dim: usize) -> Self {
        Self::constant(dim, Rational::zero())
    }

    /// Filtration attached to a basis and a weight per basis vector: `F^t` is spanned by vectors of weight ≥ t.
    pub fn from_weighted_basis(basis: &QMatrix, weights: &[Rational]) -> Result<Self> {
        let dim = basis.ncols();
        if basis.nrows() != dim || basis.rank() != dim {
            return Err(Error::Degenerate);
        }
        let mut distinct: Vec<Rational> = weights.to_vec();
        distinct.sort();
        distinct.dedup();
        distinct.reverse();
        let flag = distinct
            .iter()
            .map(|w| {
                let idx: Vec<usize> = (0..dim).filter(|&j| &weights[j] >= w).collect();
                basis.select_rows(&idx)
            })
            .collect();
        Self::new(dim, flag, distinct)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flag(&self) -> &[QMatrix] {
        &self.flag
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Dimensions of the successive subquotients.
    pub fn jump_ranks(&self) -> Vec<usize> {
        let mut prev = 0;
        self.flag
            .iter()
            .map(|s| {
                let d = s.nrows() - prev;
                prev = s.nrows();
                d
            })
            .collect()
    }

    /// `sup{t : x ∈ F^t}`; `None` stands for +∞ (x = 0).
    pub fn lambda(&self, x: &[Rational]) -> Option<Rational> {
        if x.iter().all(|v| v.is_zero()) {
            return None;
        }
        self.flag
            .iter()
            .zip(&self.weights)
            .find(|(s, _)| contains(s, x))
            .map(|(_, w)| w.clone())
    }

    pub fn expectation(&self) -> Rational {
        let r = Rational::from_integer(self.dim.into());
        self.weights
            .iter()
            .zip(self.jump_ranks())
            .map(|(a, d)| a * Rational::from_integer(d.into()))
            .sum::<Rational>()
            / r
    }

    /// `Z_F(i) = sup{t : rank F^t ≥ i}`, i = 1..dim.
    pub fn z_vector(&self) -> Vec<Rational> {
        self.weights
            .iter()
            .zip(self.jump_ranks())
            .flat_map(|(a, d)| std::iter::repeat_n(a.clone(), d))
            .collect()
    }

    pub fn norm_sq(&self) -> Rational {
        let r = Rational::from_integer(self.dim.into());
        self.z_vector().iter().map(|z| z * z).sum::<Rational>() / r
    }

    /// A basis compatible with the flag, with the weight of each vector.
    pub fn compatible_basis(&self) -> (QMatrix, Vec<Rational>) {
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut weights = Vec::new();
        for (s, w) in self.flag.iter().zip(&self.weights) {
            for v in s.rows_iter() {
                let cur = QMatrix::from_rows(rows.clone()).unwrap_or_else(|_| QMatrix::zeros(0, self.dim));
                if !contains(&cur, v) {
                    rows.push(v.to_vec());
                    weights.push(w.clone());
                }
            }
        }
        (QMatrix::from_rows(rows).expect("full basis"), weights)
    }

    /// Lift bases of the subquotients, one block per step.
    pub fn step_bases(&self) -> Vec<QMatrix> {
        let (b, _) = self.compatible_basis();
        let mut start = 0;
        self.jump_ranks()
            .into_iter()
            .map(|d| {
                let blk = b.select_rows(&(start..start + d).collect::<Vec<_>>());
                start += d;
                blk
            })
            .collect()
    }

    /// `<F, G>` computed on a basis compatible with both.
    pub fn inner(&self, other: &RFiltration) -> Result<Rational> {
        let basis = common_compatible_basis(self, other)?;
        let r = Rational::from_integer(self.dim.into());
        let mut s = Rational::zero();
        for v in basis.rows_iter() {
            let a = self.lambda(v).expect("basis vectors are non-zero");
            let b = other.lambda(v).expect("basis vectors are non-zero");
            s += a * b;
        }
        Ok(s / r)
    }

    /// Restriction to the subspace spanned by the rows of `v`, in the coordinates of its echelon basis.
    pub fn restrict(&self, v: &QMatrix) -> Result<RFiltration> {
        let vb = echelon(v);
        let k = vb.nrows();
        if k == 0 {
            return Err(Error::ZeroRank);
        }
        let mut flag = Vec::new();
        let mut weights = Vec::new();
        let mut prev = 0;
        for (s, w) in self.flag.iter().zip(&self.weights) {
            let inter = span_intersection(s, &vb);
            if inter.nrows() > prev {
                prev = inter.nrows();
                let coords = QMatrix::from_rows(
                    inter
                        .rows_iter()
                        .map(|x| vb.solve_left(x).expect("vector lies in the subspace"))
                        .collect(),
                )?;
                flag.push(coords);
                weights.push(w.clone());
            }
        }
        RFiltration::new(k, flag, weights)
    }

    /// Quotient by the span of `v`, in the coordinates of [`quotient_coordinates`].
    pub fn quotient(&self, v: &QMatrix) -> Result<RFiltration> {
        let vb = echelon(v);
        let q = quotient_map(&vb, self.dim);
        let qd = q.ncols();
        if qd == 0 {
            return Err(Error::ZeroRank);
        }
        let mut flag = Vec::new();
        let mut weights = Vec::new();
        let mut prev = 0;
        for (s, w) in self.flag.iter().zip(&self.weights) {
            let img = echelon(&s.mul(&q));
            if img.nrows() > prev {
                prev = img.nrows();
                flag.push(img);
                weights.push(w.clone());
            }
        }
        RFiltration::new(qd, flag, weights)
    }

    /// `(F^∨)^t = (F^{-t})^⊥` in dual coordinates.
    pub fn dual(&self) -> RFiltration {
        let (b, w) = self.compatible_basis();
        let d = b.inverse().expect("basis").transpose();
        let neg: Vec<Rational> = w.iter().map(|x| -x).collect();
        Self::from_weighted_basis(&d, &neg).expect("dual basis")
    }

    /// Filtration of the tensor product, basis index `i * dim(G) + j`.
    pub fn tensor(&self, other: &RFiltration) -> RFiltration {
        let (e, we) = self.compatible_basis();
        let (f, wf) = other.compatible_basis();
        let basis = e.kron(&f);
        let w: Vec<Rational> = we.iter().flat_map(|a| wf.iter().map(move |b| a + b)).collect();
        Self::from_weighted_basis(&basis, &w).expect("tensor of bases")
    }

    /// Filtration of the n-th exterior power, basis of increasing n-subsets.
    pub fn exterior(&self, n: usize) -> Result<RFiltration> {
        if n == 0 || n > self.dim {
            return Err(Error::DimensionMismatch(format!("exterior power {n} of dimension {}", self.dim)));
        }
        let (e, we) = self.compatible_basis();
        let subsets = k_subsets(self.dim, n);
        let basis = QMatrix::from_fn(subsets.len(), subsets.len(), |s, t| e.submatrix(&subsets[s], &subsets[t]).det());
        let w: Vec<Rational> = subsets.iter().map(|s| s.iter().map(|&i| we[i].clone()).sum()).collect();
        Self::from_weighted_basis(&basis, &w)
    }

    pub fn direct_sum(&self, other: &RFiltration) -> RFiltration {
        let (e, we) = self.compatible_basis();
        let (f, wf) = other.compatible_basis();
        let basis = e.direct_sum(&f);
        let w: Vec<Rational> = we.into_iter().chain(wf).collect();
        Self::from_weighted_basis(&basis, &w).expect("block basis")
    }

    pub fn translate(&self, a: &Rational) -> RFiltration {
        RFiltration {
            dim: self.dim,
            flag: self.flag.clone(),
            weights: self.weights.iter().map(|w| w + a).collect(),
        }
    }

    pub fn dilate(&self, eps: &Rational) -> Result<RFiltration> {
        if !eps.is_positive() {
            return Err(Error::Other("dilation factor must be positive".into()));
        }
        Ok(RFiltration {
            dim: self.dim,
            flag: self.flag.clone(),
            weights: self.weights.iter().map(|w| w * eps).collect(),
        })
    }

    /// Refinement by one filtration per subquotient, each in the coordinates of [`step_bases`].
    pub fn refine(&self, per_step: &[RFiltration]) -> Result<RFiltration> {
        let steps = self.step_bases();
        if per_step.len() != steps.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} subquotients but {} filtrations",
                steps.len(),
                per_step.len()
            )));
        }
        let mut rows = QMatrix::zeros(0, self.dim);
        let mut w = Vec::new();
        for (lift, g) in steps.iter().zip(per_step) {
            if g.dim != lift.nrows() {
                return Err(Error::DimensionMismatch("subquotient filtration has the wrong dimension".into()));
            }
            let (c, wc) = g.compatible_basis();
            rows = rows.vstack(&c.mul(lift));
            w.extend(wc);
        }
        Self::from_weighted_basis(&rows, &w)
    }
}

/// Linear map `Q^dim → Q^(dim - k)` with kernel the span of the echelon rows `vb`: keeps non-pivot coordinates after reduction.
fn quotient_map(vb: &QMatrix, dim: usize) -> QMatrix {
    let (r, pivots) = vb.rref();
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    // x ↦ x - sum_i x_{p_i} r_i, then take the free coordinates
    QMatrix::from_fn(dim, free.len(), |i, j| {
        let fj = free[j];
        let mut v = if i == fj { Rational::from_integer(1.into()) } else { Rational::zero() };
        if let Some(pi) = pivots.iter().position(|&p| p == i) {
            v -= &r[(pi, fj)];
        }
        v
    })
}

/// Coordinates of `x` modulo the span of `v`.
pub fn quotient_coordinates(v: &QMatrix, x: &[Rational]) -> Vec<Rational> {
    let vb = echelon(v);
    quotient_map(&vb, x.len()).vec_mul(x)
}

/// A basis compatible with both flags.
pub fn common_compatible_basis(f: &RFiltration, g: &RFiltration) -> Result<QMatrix> {
    if f.dim != g.dim {
        return Err(Error::DimensionMismatch("filtrations of different spaces".into()));
    }
    let dim = f.dim;
    let mut rows = QMatrix::zeros(0, dim);
    for i in 0..f.flag.len() {
        for j in 0..g.flag.len() {
            let cell = span_intersection(&f.flag[i], &g.flag[j]);
            for v in cell.rows_iter() {
                if rows.nrows() == dim {
                    break;
                }
                if !contains(&rows, v) {
                    rows = rows.vstack(&QMatrix::row_vector(v));
                }
            }
        }
    }
    Ok(rows)
}

/// `λ_{F⊗G}(φ) <= E[F] + E[G]` for an invertible `φ` given as a dim(F) x dim(G) matrix.
pub fn semist_expectation_check(phi: &QMatrix, f: &RFiltration, g: &RFiltration) -> Result<CheckReport> {
    if phi.nrows() != f.dim || phi.ncols() != g.dim {
        return Err(Error::DimensionMismatch("tensor shape differs from the filtrations".into()));
    }
    if !phi.is_square() || phi.det().is_zero() {
        return Err(Error::WrongMapKind("tensor is not an isomorphism".into()));
    }
    let t = f.tensor(g);
    let lhs = t.lambda(phi.entries()).expect("non-zero tensor");
    let rhs = f.expectation() + g.expectation();
    Ok(CheckReport::le(
        "restricted tensor expectation",
        Enclosure::point(ExactReal::from_rational(lhs)),
        Enclosure::point(ExactReal::from_rational(rhs)),
        "",
    ))
}

impl fmt::Display for RFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .flag
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| format!("dim {} @ {}", s.nrows(), fmt_rational(w)))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
