//! Polynomials in `v` whose coefficients are polynomials in `u`, and the
//! resultant eliminating `v`.

use super::field::{Fe, Field};
use super::unipoly::{interpolate, UniPoly};
use crate::error::{Error, Result};

/// `sum_j coeffs[j](u) * v^j`, no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivarPoly {
    field: Field,
    coeffs: Vec<UniPoly>,
}

impl BivarPoly {
    pub fn new(field: Field, mut coeffs: Vec<UniPoly>) -> BivarPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BivarPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> BivarPoly {
        BivarPoly { field, coeffs: Vec::new() }
    }

    /// From `(i, j, c)` triples meaning `c * u^i * v^j`; repeated terms add up.
    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (usize, usize, Fe)>) -> BivarPoly {
        let mut dense: Vec<Vec<Fe>> = Vec::new();
        for (i, j, c) in terms {
            if dense.len() <= j {
                dense.resize(j + 1, Vec::new());
            }
            if dense[j].len() <= i {
                dense[j].resize(i + 1, Fe::ZERO);
            }
            dense[j][i] = field.add(dense[j][i], c);
        }
        BivarPoly::new(field, dense.into_iter().map(|c| UniPoly::new(field, c)).collect())
    }

    /// A polynomial in `v` alone.
    pub fn from_v_poly(p: &UniPoly) -> BivarPoly {
        let f = p.field();
        BivarPoly::new(f, p.coeffs().iter().map(|&c| UniPoly::constant(f, c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree_v(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn degree_u(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.degree()).max()
    }

    /// Coefficient of `u^i v^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Fe {
        self.coeffs.get(j).map_or(Fe::ZERO, |c| c.coeff(i))
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Fe)> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(j, c)| {
            c.coeffs().iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(i, &x)| (i, j, x))
        })
    }

    pub fn eval(&self, u: Fe, v: Fe) -> Fe {
        self.specialize_u(u).eval(v)
    }

    /// `f(u0, v)` as a polynomial in `v`.
    pub fn specialize_u(&self, u0: Fe) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.iter().map(|c| c.eval(u0)).collect())
    }

    /// `f(u, v0)` as a polynomial in `u`.
    pub fn specialize_v(&self, v0: Fe) -> UniPoly {
        let f = self.field;
        let mut acc = UniPoly::zero(f);
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(v0).add(c);
        }
        acc
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = UniPoly::zero(self.field);
        BivarPoly::new(
            self.field,
            (0..n)
                .map(|j| self.coeffs.get(j).unwrap_or(&z).add(other.coeffs.get(j).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn scale(&self, c: Fe) -> BivarPoly {
        BivarPoly::new(self.field, self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn sub(&self, other: &BivarPoly) -> BivarPoly {
        self.add(&other.scale(self.field.neg(Fe::ONE)))
    }

    pub fn mul(&self, other: &BivarPoly) -> BivarPoly {
        if self.is_zero() || other.is_zero() {
            return BivarPoly::zero(self.field);
        }
        let mut out = vec![UniPoly::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BivarPoly::new(self.field, out)
    }

    pub fn pow(&self, e: usize) -> BivarPoly {
        let one = BivarPoly::new(self.field, vec![UniPoly::constant(self.field, Fe::ONE)]);
        (0..e).fold(one, |acc, _| acc.mul(self))
    }

    pub fn deriv_u(&self) -> BivarPoly {
        BivarPoly::new(self.field, self.coeffs.iter().map(|c| c.derivative()).collect())
    }

    pub fn deriv_v(&self) -> BivarPoly {
        let f = self.field;
        BivarPoly::new(
            f,
            self.coeffs.iter().enumerate().skip(1).map(|(j, c)| c.scale(f.elem(j as u64))).collect(),
        )
    }

    /// Swaps the roles of `u` and `v`.
    pub fn swap_variables(&self) -> BivarPoly {
        BivarPoly::from_terms(self.field, self.terms().map(|(i, j, c)| (j, i, c)))
    }

    /// Monic gcd of the `v`-coefficients: a nonconstant content means the
    /// curve contains fibers `u = const`.
    pub fn content_u(&self) -> UniPoly {
        self.coeffs.iter().fold(UniPoly::zero(self.field), |g, c| g.gcd(c))
    }
}

/// Sylvester resultant of `f` and `g` with respect to `v`.
///
/// Computed by evaluation at `u = 0, 1, ..., D` and interpolation, where `D`
/// bounds the `u`-degree of the Sylvester determinant. At each point the
/// specialized resultant uses the formal `v`-degrees of `f` and `g`, so a drop
/// of the leading coefficient is accounted for exactly.
pub fn resultant_v(f: &BivarPoly, g: &BivarPoly) -> Result<UniPoly> {
    let field = f.field();
    let (Some(m), Some(n)) = (f.degree_v(), g.degree_v()) else {
        return Err(Error::DegenerateInput("resultant of the zero polynomial".into()));
    };
    if m == 0 || n == 0 {
        return Err(Error::DegenerateInput("resultant input is constant in v".into()));
    }
    let du = f.degree_u().unwrap_or(0);
    let dg = g.degree_u().unwrap_or(0);
    let bound = n * du + m * dg;
    if bound as u64 + 1 > field.modulus() {
        return Err(Error::FieldTooSmall { modulus: field.modulus(), degree: bound });
    }
    let xs: Vec<Fe> = (0..=bound as u64).map(|i| field.elem(i)).collect();
    let ys: Vec<Fe> = xs
        .iter()
        .map(|&u0| formal_resultant(&f.specialize_u(u0), m, &g.specialize_u(u0), n))
        .collect();
    Ok(interpolate(field, &xs, &ys))
}

fn sign(field: Field, odd: bool, x: Fe) -> Fe {
    if odd {
        field.neg(x)
    } else {
        x
    }
}

/// `Res_{m,n}(a, b)` for polynomials of formal degrees `m >= deg a`, `n >= deg b`.
pub fn formal_resultant(a: &UniPoly, m: usize, b: &UniPoly, n: usize) -> Fe {
    let field = a.field();
    if m == 0 {
        return field.pow(a.coeff(0), n as u64);
    }
    if n == 0 {
        return field.pow(b.coeff(0), m as u64);
    }
    let da = a.degree();
    let db = b.degree();
    let a_full = da == Some(m);
    let b_full = db == Some(n);
    match (a_full, b_full) {
        (false, false) => Fe::ZERO,
        (true, true) => exact_resultant(a, b),
        (false, true) => {
            let Some(da) = da else { return Fe::ZERO };
            let drop = m - da;
            let k = field.pow(b.leading(), drop as u64);
            let r = exact_resultant(a, b);
            sign(field, (drop * n) % 2 == 1, field.mul(k, r))
        }
        (true, false) => {
            let r = formal_resultant(b, n, a, m);
            sign(field, (m * n) % 2 == 1, r)
        }
    }
}

/// Resultant of two polynomials taken at their actual degrees (both >= 0).
fn exact_resultant(a: &UniPoly, b: &UniPoly) -> Fe {
    let field = a.field();
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
        return Fe::ZERO;
    };
    if n == 0 {
        return field.pow(b.leading(), m as u64);
    }
    if m == 0 {
        return field.pow(a.leading(), n as u64);
    }
    if m < n {
        return sign(field, (m * n) % 2 == 1, exact_resultant(b, a));
    }
    let r = a.rem(b);
    let Some(dr) = r.degree() else {
        return Fe::ZERO;
    };
    let k = field.pow(b.leading(), (m - dr) as u64);
    sign(field, (m * n) % 2 == 1, field.mul(k, exact_resultant(b, &r)))
}
