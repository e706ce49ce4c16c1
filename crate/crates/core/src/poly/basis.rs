use serde::{Deserialize, Serialize};

use crate::exact::{Fe, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisKind {
    /// Plane curves of degree `degree`, written in the affine chart `z = 1`.
    Plane { degree: usize },
    /// Forms of bidegree `(a, b)` on `P^1 x P^1`: degree `a` in `u`, `b` in `v`.
    Biform { a: usize, b: usize },
}

/// An ordered list of monomials `u^i v^j`.
///
/// Ordering is graded: total degree `i + j` ascending, and within one total
/// degree the `u`-exponent descending (`1, u, v, u^2, uv, v^2, ...`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialBasis {
    kind: BasisKind,
    exponents: Vec<(usize, usize)>,
}

impl MonomialBasis {
    pub fn plane(degree: usize) -> MonomialBasis {
        let mut exponents = Vec::with_capacity((degree + 1) * (degree + 2) / 2);
        for d in 0..=degree {
            for i in (0..=d).rev() {
                exponents.push((i, d - i));
            }
        }
        MonomialBasis { kind: BasisKind::Plane { degree }, exponents }
    }

    pub fn biform(a: usize, b: usize) -> MonomialBasis {
        let mut exponents = Vec::with_capacity((a + 1) * (b + 1));
        for d in 0..=a + b {
            for i in (0..=d.min(a)).rev() {
                if d - i <= b {
                    exponents.push((i, d - i));
                }
            }
        }
        MonomialBasis { kind: BasisKind::Biform { a, b }, exponents }
    }

    pub fn from_kind(kind: BasisKind) -> MonomialBasis {
        match kind {
            BasisKind::Plane { degree } => MonomialBasis::plane(degree),
            BasisKind::Biform { a, b } => MonomialBasis::biform(a, b),
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[(usize, usize)] {
        &self.exponents
    }

    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        self.exponents.iter().position(|&e| e == (i, j))
    }

    /// Largest total degree `i + j` of a monomial in the basis.
    pub fn total_degree(&self) -> usize {
        match self.kind {
            BasisKind::Plane { degree } => degree,
            BasisKind::Biform { a, b } => a + b,
        }
    }

    /// Highest `u`- and `v`-exponents.
    pub fn max_exponents(&self) -> (usize, usize) {
        match self.kind {
            BasisKind::Plane { degree } => (degree, degree),
            BasisKind::Biform { a, b } => (a, b),
        }
    }

    /// The basis of products `self * other`.
    pub fn product(&self, other: &MonomialBasis) -> Option<MonomialBasis> {
        match (self.kind, other.kind) {
            (BasisKind::Plane { degree: d1 }, BasisKind::Plane { degree: d2 }) => {
                Some(MonomialBasis::plane(d1 + d2))
            }
            (BasisKind::Biform { a: a1, b: b1 }, BasisKind::Biform { a: a2, b: b2 }) => {
                Some(MonomialBasis::biform(a1 + a2, b1 + b2))
            }
            _ => None,
        }
    }

    /// Taylor-normalized jets of every basis monomial at `(qu, qv)`.
    ///
    /// Returns one row per jet index `(i, j)` with `i + j <= order`, listed by
    /// [`jet_indices`]; entry `k` of a row is `C(a,i) C(b,j) qu^(a-i) qv^(b-j)`
    /// for the `k`-th monomial `u^a v^b`.
    pub fn jet_rows(&self, field: Field, qu: Fe, qv: Fe, order: usize) -> Vec<Vec<Fe>> {
        let (ma, mb) = self.max_exponents();
        let pu = powers(field, qu, ma);
        let pv = powers(field, qv, mb);
        let binom = pascal(field, ma.max(mb));
        jet_indices(order)
            .map(|(i, j)| {
                self.exponents
                    .iter()
                    .map(|&(a, b)| {
                        if i > a || j > b {
                            return Fe::ZERO;
                        }
                        let c = field.mul(binom[a][i], binom[b][j]);
                        field.mul(c, field.mul(pu[a - i], pv[b - j]))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Jet indices `(i, j)` with `i + j <= order`, by total order then `i` descending.
pub fn jet_indices(order: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=order).flat_map(|d| (0..=d).rev().map(move |i| (i, d - i)))
}

pub(crate) fn powers(field: Field, x: Fe, n: usize) -> Vec<Fe> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Fe::ONE;
    for _ in 0..=n {
        out.push(acc);
        acc = field.mul(acc, x);
    }
    out
}

/// Binomial coefficients `C(a, i)` mod p for `a <= n`.
pub(crate) fn pascal(field: Field, n: usize) -> Vec<Vec<Fe>> {
    let mut rows: Vec<Vec<Fe>> = Vec::with_capacity(n + 1);
    for a in 0..=n {
        let mut row = vec![Fe::ONE; a + 1];
        for i in 1..a {
            row[i] = field.add(rows[a - 1][i - 1], rows[a - 1][i]);
        }
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        for n in 0..12 {
            assert_eq!(MonomialBasis::plane(n).len(), (n + 1) * (n + 2) / 2);
        }
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(MonomialBasis::biform(a, b).len(), (a + 1) * (b + 1));
            }
        }
    }

    #[test]
    fn graded_order() {
        let b = MonomialBasis::plane(2);
        assert_eq!(b.exponents(), &[(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
        let bi = MonomialBasis::biform(1, 1);
        assert_eq!(bi.exponents(), &[(0, 0), (1, 0), (0, 1), (1, 1)]);
    }
}
