use crate::error::Result;
use crate::exact::{Fe, Field, UniPoly};

/// A homogeneous binary form `sum_i c_i s^i t^(d-i)` of degree `d`.
///
/// As a Taylor component at a point, `s` stands for the `u`-displacement and
/// `t` for the `v`-displacement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    field: Field,
    degree: usize,
    coeffs: Vec<Fe>,
}

impl BinaryForm {
    pub fn new(field: Field, degree: usize, coeffs: Vec<Fe>) -> BinaryForm {
        assert_eq!(coeffs.len(), degree + 1, "binary form length mismatch");
        BinaryForm { field, degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `s^i t^(d-i)`.
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, s: Fe, t: Fe) -> Fe {
        let f = self.field;
        let mut acc = Fe::ZERO;
        let mut sp = Fe::ONE;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let tp = f.pow(t, (self.degree - i) as u64);
            acc = f.add(acc, f.mul(c, f.mul(sp, tp)));
            sp = f.mul(sp, s);
        }
        acc
    }

    /// The dehomogenization `F(s, 1)`.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.clone())
    }

    /// Multiplicity of the root `[1 : 0]`, i.e. the power of `t` dividing `F`.
    fn order_at_infinity(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// Distinct linear factors over the algebraic closure, counted as roots on `P^1`.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.order_at_infinity() >= 2 {
            return false;
        }
        self.dehomogenize().is_squarefree()
    }

    /// `b^2 - 4ac` for `a s^2 + b s t + c t^2`; only defined for degree 2.
    pub fn discriminant(&self) -> Fe {
        assert_eq!(self.degree, 2, "discriminant needs a quadratic form");
        let f = self.field;
        let (c, b, a) = (self.coeffs[0], self.coeffs[1], self.coeffs[2]);
        f.sub(f.mul(b, b), f.mul(f.elem(4), f.mul(a, c)))
    }

    /// Number of distinct `F_p`-rational roots on `P^1`.
    pub fn rational_root_count(&self) -> Result<usize> {
        let inf = usize::from(self.order_at_infinity() > 0);
        let affine = self.dehomogenize();
        let finite = if affine.degree().unwrap_or(0) == 0 { 0 } else { affine.count_distinct_roots()? };
        Ok(finite + inf)
    }

    /// `F(x e1 + e2)` as a polynomial in `x`, where `e1, e2` are `(s, t)` vectors.
    pub fn along_pencil(&self, e1: (Fe, Fe), e2: (Fe, Fe)) -> UniPoly {
        let f = self.field;
        let s = UniPoly::new(f, vec![e2.0, e1.0]);
        let t = UniPoly::new(f, vec![e2.1, e1.1]);
        let mut acc = UniPoly::zero(f);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&s.pow(i).mul(&t.pow(self.degree - i)).scale(c));
        }
        acc
    }
}
