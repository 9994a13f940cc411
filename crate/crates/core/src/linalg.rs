//! Fraction-free exact linear algebra over Z[w^(+/-1)].
//!
//! One-step fraction-free Gauss-Jordan elimination (Bareiss). Every division
//! performed during elimination is exact in the Laurent ring; a failed
//! division is reported as an error rather than coerced. Solutions whose
//! entries are not Laurent (a genuine denominator survives) are returned as
//! flagged fractions: downstream derivations treat those as configuration
//! bugs.

use crate::mat::Mat;
use crate::ring::Laurent;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("singular system: rank {rank} < {need}")]
    Singular { rank: usize, need: usize },
    #[error("fraction-free elimination produced an inexact division")]
    InexactDivision,
}

/// A ratio of Laurent polynomials; `den` is 1 whenever the entry is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct LFrac {
    pub num: Laurent,
    pub den: Laurent,
}

impl LFrac {
    fn reduce(num: Laurent, den: Laurent) -> LFrac {
        if let Some(q) = num.div_exact(&den) {
            LFrac {
                num: q,
                den: Laurent::one(),
            }
        } else {
            LFrac { num, den }
        }
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }
}

/// Result of `solve_fraction_free`.
#[derive(Debug, Clone)]
pub struct Solution {
    pub entries: Vec<Vec<LFrac>>,
}

impl Solution {
    /// All entries as a Laurent matrix, or `None` if any denominator survived.
    pub fn laurent(&self) -> Option<Mat<Laurent>> {
        let rows = self.entries.len();
        let cols = self.entries.first().map_or(0, |r| r.len());
        let mut out = Mat::zero(rows, cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.is_laurent() {
                    return None;
                }
                out.set(i, j, e.num.clone());
            }
        }
        Some(out)
    }
}

struct Rref {
    /// Row-major augmented matrix after elimination.
    data: Vec<Vec<Laurent>>,
    /// (pivot row, pivot column), in elimination order.
    pivots: Vec<(usize, usize)>,
    /// Common value of every pivot entry after the Jordan sweep.
    pivot_value: Laurent,
}

/// Fraction-free Gauss-Jordan on the first `lead_cols` columns; the
/// remaining columns are carried along as an augmented block.
fn bareiss_jordan(
    mut data: Vec<Vec<Laurent>>,
    lead_cols: usize,
) -> Result<Rref, LinalgError> {
    let rows = data.len();
    let cols = data.first().map_or(0, |r| r.len());
    let mut prev = Laurent::one();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; rows];
    for col in 0..lead_cols {
        let Some(pr) = (0..rows).find(|&r| !used[r] && !data[r][col].is_zero()) else {
            continue;
        };
        used[pr] = true;
        let pivot = data[pr][col].clone();
        for r in 0..rows {
            if r == pr {
                continue;
            }
            let factor = data[r][col].clone();
            for c in 0..cols {
                let t = &(&pivot * &data[r][c]) - &(&factor * &data[pr][c]);
                data[r][c] = t.div_exact(&prev).ok_or(LinalgError::InexactDivision)?;
            }
            data[r][col] = Laurent::zero();
        }
        pivots.push((pr, col));
        prev = pivot;
    }
    Ok(Rref {
        data,
        pivots,
        pivot_value: prev,
    })
}

fn mat_to_rows(m: &Mat<Laurent>) -> Vec<Vec<Laurent>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j).clone()).collect())
        .collect()
}

/// Exact solution X of T X = B for square T, via fraction-free elimination
/// on the augmented matrix [T | B].
pub fn solve_fraction_free(t: &Mat<Laurent>, b: &Mat<Laurent>) -> Result<Solution, LinalgError> {
    assert_eq!(t.rows, t.cols, "solve_fraction_free needs a square matrix");
    assert_eq!(t.rows, b.rows);
    let n = t.rows;
    let mut data = mat_to_rows(t);
    let brows = mat_to_rows(b);
    for (row, brow) in data.iter_mut().zip(brows) {
        row.extend(brow);
    }
    let rref = bareiss_jordan(data, n)?;
    if rref.pivots.len() < n {
        return Err(LinalgError::Singular {
            rank: rref.pivots.len(),
            need: n,
        });
    }
    let mut entries = vec![Vec::with_capacity(b.cols); n];
    for &(pr, pc) in &rref.pivots {
        let den = rref.data[pr][pc].clone();
        entries[pc] = (0..b.cols)
            .map(|j| LFrac::reduce(rref.data[pr][n + j].clone(), den.clone()))
            .collect();
    }
    Ok(Solution { entries })
}

/// Rank of a matrix.
pub fn rank(t: &Mat<Laurent>) -> Result<usize, LinalgError> {
    let cols = t.cols;
    Ok(bareiss_jordan(mat_to_rows(t), cols)?.pivots.len())
}

/// Basis of the right kernel of T, as primitive Laurent vectors (content 1,
/// no common w power, first nonzero entry with positive lowest coefficient).
/// Vectors are ordered by their free column.
pub fn kernel(t: &Mat<Laurent>) -> Result<Vec<Vec<Laurent>>, LinalgError> {
    let n = t.cols;
    let rref = bareiss_jordan(mat_to_rows(t), n)?;
    let pivot_cols: Vec<usize> = rref.pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for f in 0..n {
        if pivot_cols.contains(&f) {
            continue;
        }
        let mut v = vec![Laurent::zero(); n];
        v[f] = rref.pivot_value.clone();
        for &(pr, pc) in &rref.pivots {
            v[pc] = -&rref.data[pr][f];
        }
        primitivize(&mut v);
        basis.push(v);
    }
    Ok(basis)
}

/// Divide a vector by the gcd of its entries and a common w power;
/// normalize the sign of the first nonzero entry's lowest coefficient to
/// be positive.
pub fn primitivize(v: &mut [Laurent]) {
    use num_traits::Signed;
    let mut g = Laurent::zero();
    let mut shift: Option<i64> = None;
    for x in v.iter() {
        g = Laurent::gcd(&g, x);
        if let Some(m) = x.min_exp() {
            shift = Some(shift.map_or(m, |s: i64| s.min(m)));
        }
    }
    if g.is_zero() {
        return;
    }
    let mut div = &g * &Laurent::omega(shift.unwrap_or(0));
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        let quot = first.div_exact(&div).expect("gcd divides");
        let lead = quot.terms().next().unwrap().1;
        if lead.is_negative() {
            div = -&div;
        }
    }
    for x in v.iter_mut() {
        *x = x.div_exact(&div).expect("gcd division is exact");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{c_inv_mat, c_mat, Mat};

    #[test]
    fn identity_solve() {
        let t = Mat::identity(3);
        let mut b = Mat::zero(3, 1);
        b.set(0, 0, Laurent::omega(2));
        b.set(1, 0, &Laurent::one() + &Laurent::omega(-1));
        b.set(2, 0, Laurent::int(-7));
        let x = solve_fraction_free(&t, &b).unwrap().laurent().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn kronecker_inverse_solve() {
        // (C (.) C) X = I  =>  X = C^-1 (.) C^-1, checked by multiplication
        let cc = c_mat().kronecker(&c_mat());
        let x = solve_fraction_free(&cc, &Mat::identity(4))
            .unwrap()
            .laurent()
            .unwrap();
        assert_eq!(x, c_inv_mat().kronecker(&c_inv_mat()));
        assert_eq!(cc.mul(&x), Mat::identity(4));
    }

    #[test]
    fn singular_reports_rank() {
        let mut t = Mat::zero(3, 3);
        for j in 0..3 {
            t.set(0, j, Laurent::omega(j as i64));
            t.set(1, j, Laurent::omega(j as i64)); // duplicate row
            t.set(2, j, Laurent::int(1));
        }
        match solve_fraction_free(&t, &Mat::identity(3)) {
            Err(LinalgError::Singular { rank, need }) => {
                assert_eq!(rank, 2);
                assert_eq!(need, 3);
            }
            other => panic!("expected singular, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn kernel_of_duplicate_rows() {
        // x + w y = 0 has kernel spanned by (w, -1) up to normalization
        let mut t = Mat::zero(1, 2);
        t.set(0, 0, Laurent::one());
        t.set(0, 1, Laurent::omega(1));
        let k = kernel(&t).unwrap();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // T v = 0
        let img = &v[0] + &(&Laurent::omega(1) * &v[1]);
        assert!(img.is_zero());
        // primitive: no common content or w power
        assert_eq!(v[0], Laurent::omega(1));
        assert_eq!(v[1], -&Laurent::one());
    }

    #[test]
    fn mixed_laurent_system() {
        // T = [[1, w],[w^-1, w + 1]] (det = 1), B = I
        let mut t = Mat::zero(2, 2);
        t.set(0, 0, Laurent::one());
        t.set(0, 1, Laurent::omega(1));
        t.set(1, 0, Laurent::omega(-1));
        t.set(1, 1, &Laurent::omega(1) + &Laurent::one());
        let x = solve_fraction_free(&t, &Mat::identity(2))
            .unwrap()
            .laurent()
            .unwrap();
        assert_eq!(t.mul(&x), Mat::identity(2));
    }
}
