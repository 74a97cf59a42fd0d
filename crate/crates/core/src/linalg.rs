//! Exact Gaussian elimination over `ℚ[√−1]`.
//!
//! Vectors are dense `Vec<GaussRational>` of a common length. Pivots are the
//! first nonzero entry in the column; over an exact field no other choice is
//! needed.

use crate::scalars::GaussRational;

/// Row echelon basis of the span of `rows`.
#[derive(Debug, Clone)]
pub struct Echelon {
    width: usize,
    /// Reduced rows, each normalized so that its pivot entry is 1.
    rows: Vec<Vec<GaussRational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Self { width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<GaussRational>>>(width: usize, rows: I) -> Self {
        let mut e = Self::new(width);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduces `v` against the current basis; returns the remainder.
    pub fn reduce(&self, mut v: Vec<GaussRational>) -> Vec<GaussRational> {
        assert_eq!(v.len(), self.width, "vector length mismatch");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (dst, src) in v.iter_mut().zip(row).skip(p) {
                if !src.is_zero() {
                    *dst -= &(&f * src);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: Vec<GaussRational>) -> bool {
        self.reduce(v).iter().all(GaussRational::is_zero)
    }

    /// Adds `v` to the spanning set. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: Vec<GaussRational>) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inverse().expect("pivot is nonzero");
        for x in r.iter_mut().skip(p) {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        // keep existing rows reduced in the new pivot column
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (dst, src) in row.iter_mut().zip(&r).skip(p) {
                if !src.is_zero() {
                    *dst -= &(&f * src);
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}

pub fn rank(width: usize, rows: impl IntoIterator<Item = Vec<GaussRational>>) -> usize {
    Echelon::from_rows(width, rows).rank()
}

/// `dim(span A ∩ span B) = rank A + rank B − rank(A ∪ B)`.
pub fn intersection_dim(width: usize, a: &[Vec<GaussRational>], b: &[Vec<GaussRational>]) -> usize {
    let ra = rank(width, a.iter().cloned());
    let rb = rank(width, b.iter().cloned());
    let rab = rank(width, a.iter().chain(b).cloned());
    ra + rb - rab
}

/// Solves `Σ_j x_j · columns[j] = target`. Returns `None` when the system is
/// inconsistent; when it is underdetermined, free variables are set to zero.
pub fn solve(columns: &[Vec<GaussRational>], target: &[GaussRational]) -> Option<Vec<GaussRational>> {
    let m = target.len();
    let k = columns.len();
    // augmented matrix, one row per coordinate
    let mut a: Vec<Vec<GaussRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<GaussRational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inverse().expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (dst, src) in row.iter_mut().zip(&pivot_row) {
                if !src.is_zero() {
                    *dst -= &(&f * src);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![GaussRational::zero(); k];
    for (row, &c) in a.iter().zip(&pivots) {
        x[c] = row[k].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<GaussRational> {
        xs.iter().map(|&x| GaussRational::from_int(x)).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(3, [v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])]), 2);
        assert_eq!(rank(3, [v(&[0, 0, 0])]), 0);
        assert_eq!(rank(2, [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]), 2);
    }

    #[test]
    fn complex_rank() {
        // (1, i) and (i, -1) are proportional over ℚ[i]
        let i = GaussRational::i();
        let one = GaussRational::one();
        let r1 = vec![one.clone(), i.clone()];
        let r2 = vec![i.clone(), -one];
        assert_eq!(rank(2, [r1, r2]), 1);
    }

    #[test]
    fn intersection() {
        let a = [v(&[1, 0, 0]), v(&[0, 1, 0])];
        let b = [v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert_eq!(intersection_dim(3, &a, &b), 1);
        let b = [v(&[0, 0, 1])];
        assert_eq!(intersection_dim(3, &a, &b), 0);
    }

    #[test]
    fn solve_consistent_and_not() {
        let cols = [v(&[1, 0, 1]), v(&[0, 1, 1])];
        let x = solve(&cols, &v(&[2, 3, 5])).unwrap();
        assert_eq!(x, v(&[2, 3]));
        assert!(solve(&cols, &v(&[2, 3, 4])).is_none());
    }

    #[test]
    fn membership() {
        let e = Echelon::from_rows(3, [v(&[1, 1, 0]), v(&[0, 1, 1])]);
        assert!(e.contains(v(&[1, 2, 1])));
        assert!(!e.contains(v(&[1, 0, 0])));
    }
}
