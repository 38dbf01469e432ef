//! Automorphism groups by backtracking over vectors of the diagonal norms.

use super::enumerate::{Enumerator, Which};
use crate::error::{Error, Result};
use crate::exact::{rint, QMatrix};
use crate::lattice::Lattice;

pub const GROUP_CAP: usize = 100_000;

/// Every integral `U` with `U G U^T = G`, rows being the images of the basis vectors.
pub fn automorphism_group(l: &Lattice) -> Result<Vec<QMatrix>> {
    let (_, li) = l.integral_scaling();
    let r = li.rank();
    let en = Enumerator::new(&li);
    let g = li.gram();
    let diag: Vec<_> = (0..r).map(|i| g[(i, i)].clone()).collect();
    let top = diag.iter().max().cloned().expect("rank >= 1");
    let list = en.vectors(&top, Which::AllUpToSign, usize::MAX);
    let gi: Vec<Vec<i128>> = (0..r)
        .map(|i| (0..r).map(|j| en.scaled_form(&unit(r, i), &unit(r, j))).collect())
        .collect();
    let cands: Vec<Vec<Vec<i64>>> = (0..r)
        .map(|i| {
            let mut c = Vec::new();
            for v in list.vectors.iter().filter(|v| v.norm == diag[i]) {
                c.push(v.coords.clone());
                c.push(v.coords.iter().map(|x| -x).collect());
            }
            c
        })
        .collect();
    let mut out = Vec::new();
    let mut images: Vec<&[i64]> = Vec::with_capacity(r);
    backtrack(&en, &gi, &cands, &mut images, &mut out)?;
    Ok(out
        .into_iter()
        .map(|rows: Vec<Vec<i64>>| QMatrix::from_fn(r, r, |i, j| rint(rows[i][j])))
        .collect())
}

fn unit(r: usize, i: usize) -> Vec<i64> {
    (0..r).map(|j| i64::from(i == j)).collect()
}

fn backtrack<'a>(
    en: &Enumerator,
    gi: &[Vec<i128>],
    cands: &'a [Vec<Vec<i64>>],
    images: &mut Vec<&'a [i64]>,
    out: &mut Vec<Vec<Vec<i64>>>,
) -> Result<()> {
    let i = images.len();
    if i == cands.len() {
        out.push(images.iter().map(|v| v.to_vec()).collect());
        if out.len() > GROUP_CAP {
            return Err(Error::Budget(format!(
                "automorphism group exceeds {GROUP_CAP} elements; {} found",
                out.len()
            )));
        }
        return Ok(());
    }
    for w in &cands[i] {
        if (0..i).all(|j| en.scaled_form(w, images[j]) == gi[i][j]) {
            images.push(w);
            backtrack(en, gi, cands, images, out)?;
            images.pop();
        }
    }
    Ok(())
}

/// Dimension over Q of `{X : X U = U X for all U}`.
pub fn commutant_dimension(group: &[QMatrix], rank: usize) -> usize {
    let n = rank * rank;
    let mut eqs = QMatrix::zeros(0, n);
    let mut rk = 0;
    for u in group {
        let mut block = QMatrix::zeros(n, n);
        for a in 0..rank {
            for b in 0..rank {
                let row = a * rank + b;
                for c in 0..rank {
                    block[(row, a * rank + c)] += &u[(c, b)];
                    block[(row, c * rank + b)] -= &u[(a, c)];
                }
            }
        }
        eqs = eqs.vstack(&block).row_space();
        rk = eqs.nrows();
        if rk + 1 == n {
            break;
        }
    }
    n - rk
}

/// Absolutely irreducible iff the commutant consists of scalars.
pub fn is_absolutely_irreducible(group: &[QMatrix], rank: usize) -> bool {
    commutant_dimension(group, rank) == 1
}
