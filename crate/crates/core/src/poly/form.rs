use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exact::{BivarPoly, Fe, Field, UniPoly};

use super::basis::{jet_indices, BasisKind, MonomialBasis};
use super::binary::BinaryForm;
use super::line::{AffinePoint, Line};

/// A polynomial expressed on a [`MonomialBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    field: Field,
    basis: MonomialBasis,
    coeffs: Vec<Fe>,
}

/// Taylor-normalized jets `(1 / i! j!) d^(i+j) f / du^i dv^j` at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jets {
    order: usize,
    values: Vec<Fe>,
}

impl Jets {
    pub(crate) fn from_values(order: usize, values: Vec<Fe>) -> Jets {
        debug_assert_eq!(values.len(), (order + 1) * (order + 2) / 2);
        Jets { order, values }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Jet `(i, j)`; zero beyond the stored order is never implied, so this panics.
    pub fn get(&self, i: usize, j: usize) -> Fe {
        assert!(i + j <= self.order, "jet ({i},{j}) beyond order {}", self.order);
        let d = i + j;
        self.values[d * (d + 1) / 2 + (d - i)]
    }

    /// Whether every jet of total order `< m` vanishes.
    pub fn vanishes_below(&self, m: usize) -> bool {
        let upto = m.min(self.order + 1);
        self.values[..upto * (upto + 1) / 2].iter().all(|x| x.is_zero())
    }

    /// The homogeneous component of total order `d` as a binary form.
    pub fn component(&self, field: Field, d: usize) -> BinaryForm {
        BinaryForm::new(field, d, (0..=d).map(|i| self.get(i, d - i)).collect())
    }
}

impl Form {
    pub fn new(field: Field, basis: MonomialBasis, coeffs: Vec<Fe>) -> Form {
        assert_eq!(basis.len(), coeffs.len(), "coefficient count must match basis size");
        Form { field, basis, coeffs }
    }

    pub fn zero(field: Field, basis: MonomialBasis) -> Form {
        let n = basis.len();
        Form { field, basis, coeffs: vec![Fe::ZERO; n] }
    }

    /// Builds a form from `(i, j, c)` terms meaning `c u^i v^j`.
    pub fn from_terms(field: Field, basis: MonomialBasis, terms: &[(usize, usize, i64)]) -> Result<Form> {
        let mut f = Form::zero(field, basis);
        for &(i, j, c) in terms {
            let k = f.basis.index_of(i, j).ok_or_else(|| {
                Error::DegenerateInput(format!("monomial u^{i} v^{j} outside the basis"))
            })?;
            f.coeffs[k] = field.add(f.coeffs[k], field.from_i64(c));
        }
        Ok(f)
    }

    pub fn from_bivar(basis: MonomialBasis, p: &BivarPoly) -> Result<Form> {
        let field = p.field();
        let mut f = Form::zero(field, basis);
        for (i, j, c) in p.terms() {
            let k = f.basis.index_of(i, j).ok_or_else(|| {
                Error::DegenerateInput(format!("monomial u^{i} v^{j} outside the basis"))
            })?;
            f.coeffs[k] = c;
        }
        Ok(f)
    }

    pub fn to_bivar(&self) -> BivarPoly {
        BivarPoly::from_terms(
            self.field,
            self.basis.exponents().iter().zip(&self.coeffs).map(|(&(i, j), &c)| (i, j, c)),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> Fe {
        self.basis.index_of(i, j).map_or(Fe::ZERO, |k| self.coeffs[k])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, q: AffinePoint) -> Fe {
        let f = self.field;
        let (ma, mb) = self.basis.max_exponents();
        let pu = super::basis::powers(f, q.u, ma);
        let pv = super::basis::powers(f, q.v, mb);
        self.basis
            .exponents()
            .iter()
            .zip(&self.coeffs)
            .fold(Fe::ZERO, |acc, (&(i, j), &c)| f.add(acc, f.mul(c, f.mul(pu[i], pv[j]))))
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(self.basis, other.basis, "adding forms on different bases");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.field.add(a, b)).collect();
        Form { field: self.field, basis: self.basis.clone(), coeffs }
    }

    pub fn scale(&self, c: Fe) -> Form {
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Form { field: self.field, basis: self.basis.clone(), coeffs }
    }

    /// Product of forms; the result lives on the product basis.
    pub fn mul(&self, other: &Form) -> Result<Form> {
        let basis = self
            .basis
            .product(&other.basis)
            .ok_or_else(|| Error::DegenerateInput("product of a plane form and a biform".into()))?;
        Form::from_bivar(basis, &self.to_bivar().mul(&other.to_bivar()))
    }

    /// Taylor-normalized jets up to `order` at `q`.
    pub fn jet_eval(&self, q: AffinePoint, order: usize) -> Result<Jets> {
        let degree = self.basis.total_degree();
        if order > degree {
            return Err(Error::OrderTooLarge { order, degree });
        }
        Ok(self.jets(q, order))
    }

    /// Like [`Form::jet_eval`] without the order guard; higher jets are zero.
    pub(crate) fn jets(&self, q: AffinePoint, order: usize) -> Jets {
        let rows = self.basis.jet_rows(self.field, q.u, q.v, order);
        let values = rows.iter().map(|r| self.field.dot(r, &self.coeffs)).collect();
        Jets::from_values(order, values)
    }

    /// The degree-`d` Taylor component at `q`, which must be the lowest one.
    pub fn taylor_part(&self, q: AffinePoint, d: usize) -> Result<BinaryForm> {
        let jets = self.jets(q, d);
        for k in 0..d {
            if (0..=k).any(|i| !jets.get(i, k - i).is_zero()) {
                return Err(Error::NonvanishingLowerJet { order: k });
            }
        }
        Ok(jets.component(self.field, d))
    }

    /// Multiplicity of the form at `q`: the order of its lowest nonzero jet.
    pub fn multiplicity_at(&self, q: AffinePoint) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let jets = self.jets(q, self.basis.total_degree());
        (0..=jets.order()).find(|&d| (0..=d).any(|i| !jets.get(i, d - i).is_zero()))
    }

    /// `f` composed with the parametrization `t -> L(t)` of the line.
    pub fn restrict_to_line(&self, line: &Line) -> UniPoly {
        let f = self.field;
        let base = line.base_point(f);
        let (du, dv) = line.direction(f);
        let lu = UniPoly::new(f, vec![base.u, du]);
        let lv = UniPoly::new(f, vec![base.v, dv]);
        let (ma, mb) = self.basis.max_exponents();
        let mut pu = vec![UniPoly::constant(f, Fe::ONE)];
        for k in 0..ma {
            pu.push(pu[k].mul(&lu));
        }
        let mut pv = vec![UniPoly::constant(f, Fe::ONE)];
        for k in 0..mb {
            pv.push(pv[k].mul(&lv));
        }
        let mut acc = UniPoly::zero(f);
        for (&(i, j), &c) in self.basis.exponents().iter().zip(&self.coeffs) {
            if !c.is_zero() {
                acc = acc.add(&pu[i].mul(&pv[j]).scale(c));
            }
        }
        acc
    }

    /// Text form: a header line then one decimal coefficient per line, in basis order.
    pub fn to_text(&self) -> String {
        let mut out = match self.basis.kind() {
            BasisKind::Plane { degree } => format!("plane {degree} {}\n", self.field.modulus()),
            BasisKind::Biform { a, b } => format!("biform {a} {b} {}\n", self.field.modulus()),
        };
        for c in &self.coeffs {
            writeln!(out, "{c}").expect("writing to a String");
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Form> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty form text".into()))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let num = |s: &str| s.parse::<u64>().map_err(|_| Error::Parse(format!("bad header field {s:?}")));
        let (kind, modulus) = match words.as_slice() {
            ["plane", n, p] => (BasisKind::Plane { degree: num(n)? as usize }, num(p)?),
            ["biform", a, b, p] => (BasisKind::Biform { a: num(a)? as usize, b: num(b)? as usize }, num(p)?),
            _ => return Err(Error::Parse(format!("bad form header {header:?}"))),
        };
        let field = Field::new(modulus)?;
        let basis = MonomialBasis::from_kind(kind);
        let coeffs = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| field.parse(l.trim()))
            .collect::<Result<Vec<Fe>>>()?;
        if coeffs.len() != basis.len() {
            return Err(Error::Parse(format!("expected {} coefficients, found {}", basis.len(), coeffs.len())));
        }
        Ok(Form::new(field, basis, coeffs))
    }
}

/// Jet values of one form re-read as a flat list in [`jet_indices`] order.
pub fn jet_list(jets: &Jets) -> Vec<((usize, usize), Fe)> {
    jet_indices(jets.order()).map(|(i, j)| ((i, j), jets.get(i, j))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::SeededRng;

    fn big() -> Field {
        Field::default_primes()[0]
    }

    fn random_form(field: Field, basis: MonomialBasis, rng: &mut SeededRng) -> Form {
        let coeffs = (0..basis.len()).map(|_| rng.element(&field)).collect();
        Form::new(field, basis, coeffs)
    }

    #[test]
    fn jets_read_coefficients_at_origin() {
        let f = big();
        let g = Form::from_terms(f, MonomialBasis::plane(2), &[(2, 0, 1), (0, 1, 1)]).unwrap();
        let j = g.jet_eval(AffinePoint::origin(), 1).unwrap();
        assert_eq!((j.get(0, 0), j.get(1, 0), j.get(0, 1)), (Fe::ZERO, Fe::ZERO, f.one()));
    }

    #[test]
    fn triple_root_has_vanishing_2_jet() {
        let f = big();
        let g = Form::from_terms(f, MonomialBasis::plane(3), &[(3, 0, 1), (2, 0, -3), (1, 0, 3), (0, 0, -1)]).unwrap();
        let j = g.jet_eval(AffinePoint::new(f.one(), Fe::ZERO), 2).unwrap();
        assert!(j.vanishes_below(3));
    }

    #[test]
    fn order_beyond_degree_is_an_error() {
        let f = big();
        let g = Form::zero(f, MonomialBasis::plane(2));
        assert_eq!(g.jet_eval(AffinePoint::origin(), 3), Err(Error::OrderTooLarge { order: 3, degree: 2 }));
    }

    /// Oracle: expand `f(u + a, v + b)` term by term and read off coefficients.
    fn shifted_coefficients(g: &Form, q: AffinePoint) -> BivarPoly {
        let f = g.field();
        let su = BivarPoly::from_terms(f, [(1, 0, Fe::ONE), (0, 0, q.u)]);
        let sv = BivarPoly::from_terms(f, [(0, 1, Fe::ONE), (0, 0, q.v)]);
        let mut acc = BivarPoly::zero(f);
        for (i, j, c) in g.to_bivar().terms() {
            acc = acc.add(&su.pow(i).mul(&sv.pow(j)).scale(c));
        }
        acc
    }

    #[test]
    fn jets_match_shift_and_read() {
        let f = big();
        let mut rng = SeededRng::new(17);
        for _ in 0..10 {
            let g = random_form(f, MonomialBasis::plane(6), &mut rng);
            let q = AffinePoint::new(rng.element(&f), rng.element(&f));
            let shifted = shifted_coefficients(&g, q);
            let jets = g.jet_eval(q, 2).unwrap();
            for ((i, j), x) in jet_list(&jets) {
                assert_eq!(x, shifted.coeff(i, j));
            }
        }
    }

    #[test]
    fn taylor_parts() {
        let f = big();
        let g = Form::from_terms(f, MonomialBasis::plane(3), &[(1, 1, 1), (3, 0, 1)]).unwrap();
        let tp = g.taylor_part(AffinePoint::origin(), 2).unwrap();
        assert_eq!(tp.coeffs(), &[Fe::ZERO, f.one(), Fe::ZERO]);
        assert!(tp.is_squarefree());
        let sq = Form::from_terms(f, MonomialBasis::plane(2), &[(2, 0, 1), (1, 1, 2), (0, 2, 1)]).unwrap();
        assert!(!sq.taylor_part(AffinePoint::origin(), 2).unwrap().is_squarefree());
        assert_eq!(g.taylor_part(AffinePoint::new(f.one(), f.one()), 2), Err(Error::NonvanishingLowerJet { order: 0 }));
    }

    #[test]
    fn restriction_examples() {
        let f = big();
        let g = Form::from_terms(f, MonomialBasis::plane(2), &[(2, 0, 1), (0, 1, -1)]).unwrap();
        let axis = Line::new(Fe::ZERO, f.one(), Fe::ZERO).unwrap();
        let r = g.restrict_to_line(&axis);
        assert_eq!(r.degree(), Some(2));
        assert_eq!(r.roots_in_field().unwrap(), vec![Fe::ZERO, Fe::ZERO]);

        let mut rng = SeededRng::new(5);
        let l1 = Line::through_origin(f, rng.nonzero(&f), rng.nonzero(&f)).unwrap();
        let l2 = Line::through_origin(f, rng.nonzero(&f), rng.nonzero(&f)).unwrap();
        let l3 = Line::through_origin(f, rng.nonzero(&f), rng.nonzero(&f)).unwrap();
        let lf = |l: &Line| Form::new(f, MonomialBasis::plane(1), vec![l.c, l.a, l.b]);
        let prod = lf(&l1).mul(&lf(&l2)).unwrap();
        let r = prod.restrict_to_line(&l3);
        let t0 = l3.param_of(f, AffinePoint::origin()).unwrap();
        assert_eq!(r.roots_in_field().unwrap(), vec![t0, t0]);
    }

    #[test]
    fn text_round_trip() {
        let f = big();
        let mut rng = SeededRng::new(9);
        let g = random_form(f, MonomialBasis::biform(2, 3), &mut rng);
        assert_eq!(Form::parse_text(&g.to_text()).unwrap(), g);
        assert!(Form::parse_text("plane 2 101\n1\n2\n").is_err());
        assert!(Form::parse_text("cubic 2 101\n").is_err());
    }
}
