//! Dense matrices over `F_p` and Gauss-Jordan elimination.

use serde::Serialize;

use super::field::{Fe, Field};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldMatrix {
    #[serde(skip)]
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Fe>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: FieldMatrix,
    pub pivots: Vec<usize>,
}

impl FieldMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> FieldMatrix {
        FieldMatrix { field, rows, cols, entries: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> FieldMatrix {
        let mut m = FieldMatrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<Fe>]) -> FieldMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            entries.extend_from_slice(r);
        }
        FieldMatrix { field, rows: rows.len(), cols, entries }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Fe) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[Fe]) {
        assert_eq!(row.len(), self.cols);
        self.entries.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows);
        let f = self.field;
        let mut out = FieldMatrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let x = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, x);
                }
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss-Jordan elimination to the reduced row echelon form.
    pub fn echelon(&self) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let x = f.mul(m.get(r, j), inv);
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let x = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Row space in reduced echelon form (nonzero rows only).
    pub fn row_space(&self) -> Vec<Vec<Fe>> {
        let e = self.echelon();
        (0..e.pivots.len()).map(|i| e.reduced.row(i).to_vec()).collect()
    }
}

/// Rank and a kernel basis of `m`.
///
/// One kernel vector per free column `c`: it has a 1 in position `c`, zeros in
/// the other free positions, and the negated reduced entries in the pivot
/// positions. The basis therefore depends only on the row space of `m`.
pub fn rank_and_kernel(m: &FieldMatrix) -> (usize, Vec<Vec<Fe>>) {
    let f = m.field();
    let e = m.echelon();
    let rank = e.pivots.len();
    let mut is_pivot = vec![false; m.cols()];
    for &c in &e.pivots {
        is_pivot[c] = true;
    }
    let mut kernel = Vec::with_capacity(m.cols() - rank);
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Fe::ZERO; m.cols()];
        v[free] = Fe::ONE;
        for (r, &pc) in e.pivots.iter().enumerate() {
            v[pc] = f.neg(e.reduced.get(r, free));
        }
        kernel.push(v);
    }
    (rank, kernel)
}

/// Rank of the matrix whose rows are the given vectors.
pub fn rank_of_rows(field: Field, rows: &[Vec<Fe>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    FieldMatrix::from_rows(field, rows[0].len(), rows).rank()
}

/// Two vectors are projectively equal when they are nonzero and proportional.
pub fn proportional(field: Field, a: &[Fe], b: &[Fe]) -> bool {
    let nonzero = |v: &[Fe]| v.iter().any(|x| !x.is_zero());
    nonzero(a) && nonzero(b) && rank_of_rows(field, &[a.to_vec(), b.to_vec()]) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rng::SeededRng;

    fn f() -> Field {
        Field::default_primes()[0]
    }

    #[test]
    fn identity_has_full_rank() {
        let (rank, ker) = rank_and_kernel(&FieldMatrix::identity(f(), 2));
        assert_eq!(rank, 2);
        assert!(ker.is_empty());
    }

    #[test]
    fn zero_row_has_full_kernel() {
        let m = FieldMatrix::zero(f(), 1, 3);
        let (rank, ker) = rank_and_kernel(&m);
        assert_eq!(rank, 0);
        assert_eq!(ker.len(), 3);
        let empty = FieldMatrix::zero(f(), 0, 4);
        let (rank, ker) = rank_and_kernel(&empty);
        assert_eq!((rank, ker.len()), (0, 4));
        assert_eq!(ker[2][2], Fe::ONE);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let field = f();
        let mut rng = SeededRng::new(11);
        let rows: Vec<Vec<Fe>> = (0..5)
            .map(|_| (0..9).map(|_| rng.element(&field)).collect())
            .collect();
        let m = FieldMatrix::from_rows(field, 9, &rows);
        let (rank, ker) = rank_and_kernel(&m);
        assert_eq!(rank + ker.len(), 9);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(rank_of_rows(field, &ker), ker.len());
    }

    #[test]
    fn proportionality() {
        let field = f();
        let a = vec![field.elem(1), field.elem(2)];
        let b = vec![field.elem(3), field.elem(6)];
        let c = vec![field.elem(3), field.elem(5)];
        assert!(proportional(field, &a, &b));
        assert!(!proportional(field, &a, &c));
        assert!(!proportional(field, &a, &[Fe::ZERO, Fe::ZERO]));
    }
}
