//! Univariate polynomials over `F_p` and root extraction.

use std::fmt;

use super::field::{Fe, Field};
use crate::error::{Error, Result};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs.iter().map(|c| c.value()).collect::<Vec<_>>())
    }
}

impl UniPoly {
    pub fn new(field: Field, mut coeffs: Vec<Fe>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> UniPoly {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(field: Field, c: Fe) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    /// The monomial `x`.
    pub fn x(field: Field) -> UniPoly {
        UniPoly::new(field, vec![Fe::ZERO, Fe::ONE])
    }

    /// `x - r`.
    pub fn linear_root(field: Field, r: Fe) -> UniPoly {
        UniPoly::new(field, vec![field.neg(r), Fe::ONE])
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(field: Field, roots: &[Fe]) -> UniPoly {
        roots
            .iter()
            .fold(UniPoly::constant(field, Fe::ONE), |acc, &r| acc.mul(&UniPoly::linear_root(field, r)))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = self.field;
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: Fe) -> UniPoly {
        let f = self.field;
        UniPoly::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(f);
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(f, out)
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        (0..e).fold(UniPoly::constant(self.field, Fe::ONE), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> UniPoly {
        let f = self.field;
        UniPoly::new(
            f,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, f.elem(i as u64))).collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()))
    }

    /// Euclidean division. Panics if `d` is zero.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let f = self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let Some(dn) = self.degree() else {
            return (UniPoly::zero(f), UniPoly::zero(f));
        };
        if dn < dd {
            return (UniPoly::zero(f), self.clone());
        }
        let inv = f.inv(d.leading());
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Fe::ZERO; dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let c = f.mul(rem[k + dd], inv);
            quo[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, dc));
            }
        }
        rem.truncate(dd);
        (UniPoly::new(f, quo), UniPoly::new(f, rem))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divrem(d).1
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &UniPoly) -> UniPoly {
        let f = self.field;
        let mut base = self.rem(m);
        let mut acc = UniPoly::constant(f, Fe::ONE).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Product of the distinct linear factors of `self` over `F_p`, monic.
    pub fn rational_part(&self) -> Result<UniPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.field;
        let m = self.monic();
        if m.degree() == Some(0) {
            return Ok(m);
        }
        let xp = UniPoly::x(f).pow_mod(f.modulus(), &m);
        Ok(m.gcd(&xp.sub(&UniPoly::x(f))))
    }

    /// Number of distinct roots in `F_p`.
    pub fn count_distinct_roots(&self) -> Result<usize> {
        Ok(self.rational_part()?.degree().unwrap_or(0))
    }

    /// All roots in `F_p` with multiplicity, sorted by residue.
    ///
    /// Distinct roots come from `gcd(x^p - x, f)`; that product of linear
    /// factors is split by `gcd((x + a)^((p-1)/2) - 1, .)` for `a = 0, 1, ...`.
    pub fn roots_in_field(&self) -> Result<Vec<Fe>> {
        let g = self.rational_part()?;
        let mut distinct = Vec::new();
        split_linear_product(&g, &mut distinct);
        distinct.sort();
        let f = self.field;
        let mut roots = Vec::new();
        for r in distinct {
            let lin = UniPoly::linear_root(f, r);
            let mut q = self.clone();
            loop {
                let (quo, rem) = q.divrem(&lin);
                if !rem.is_zero() {
                    break;
                }
                roots.push(r);
                q = quo;
            }
        }
        Ok(roots)
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: Fe) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = UniPoly::linear_root(self.field, r);
        let mut q = self.clone();
        let mut k = 0;
        loop {
            let (quo, rem) = q.divrem(&lin);
            if !rem.is_zero() {
                return k;
            }
            k += 1;
            q = quo;
        }
    }

    /// Squarefree over the algebraic closure.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }
}

/// Splits a monic product of distinct linear factors into its roots.
fn split_linear_product(g: &UniPoly, out: &mut Vec<Fe>) {
    let f = g.field();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(f.neg(g.coeff(0))),
        Some(_) => {
            let half = (f.modulus() - 1) / 2;
            for a in 0..f.modulus() {
                let shift = UniPoly::new(f, vec![f.elem(a), Fe::ONE]);
                let h = shift.pow_mod(half, g).sub(&UniPoly::constant(f, Fe::ONE));
                let d = g.gcd(&h);
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && Some(dd) < g.degree() {
                    let (other, _) = g.divrem(&d);
                    split_linear_product(&d, out);
                    split_linear_product(&other.monic(), out);
                    return;
                }
            }
            unreachable!("a product of distinct linear factors always splits");
        }
    }
}

/// Newton interpolation through `(xs[i], ys[i])` with distinct `xs`.
pub fn interpolate(field: Field, xs: &[Fe], ys: &[Fe]) -> UniPoly {
    assert_eq!(xs.len(), ys.len());
    let f = field;
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = f.sub(coef[i], coef[i - 1]);
            let den = f.sub(xs[i], xs[i - j]);
            coef[i] = f.div(num, den);
        }
    }
    let mut poly = UniPoly::zero(f);
    for i in (0..n).rev() {
        poly = poly.mul(&UniPoly::linear_root(f, xs[i])).add(&UniPoly::constant(f, coef[i]));
    }
    poly
}
