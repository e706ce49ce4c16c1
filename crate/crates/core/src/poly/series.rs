//! Truncated power series along a smooth branch of a plane curve.

use crate::error::{Error, Result};
use crate::exact::{Fe, Field};

use super::form::Jets;

/// A smooth branch through `q`, parametrized by one coordinate.
///
/// With `along_u`, the branch is `(q_u + s, q_v + w(s))`; otherwise
/// `(q_u + w(s), q_v + s)`. `w` has zero constant term and is exact modulo
/// `s^(order+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub along_u: bool,
    pub w: Vec<Fe>,
}

impl Branch {
    pub fn order(&self) -> usize {
        self.w.len() - 1
    }

    /// Tangent direction `(du, dv)` of the branch.
    pub fn tangent(&self) -> (Fe, Fe) {
        let w1 = self.w.get(1).copied().unwrap_or(Fe::ZERO);
        if self.along_u {
            (Fe::ONE, w1)
        } else {
            (w1, Fe::ONE)
        }
    }
}

pub(crate) fn trunc_mul(field: Field, a: &[Fe], b: &[Fe], len: usize) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    out
}

/// Series of a function with Taylor jets `jets` at `q`, restricted to the branch.
///
/// Returns the coefficients of `s^0 .. s^len-1`; requires `jets.order() >= len - 1`.
pub fn compose(field: Field, jets: &Jets, branch: &Branch, len: usize) -> Vec<Fe> {
    assert!(len >= 1 && jets.order() + 1 >= len, "insufficient jet order for composition");
    let mut w = branch.w.clone();
    w.resize(len, Fe::ZERO);
    let mut s = vec![Fe::ZERO; len];
    if len > 1 {
        s[1] = Fe::ONE;
    }
    // powers of the two displacement series, truncated
    let (du, dv) = if branch.along_u { (s, w) } else { (w, s) };
    let mut pu = vec![unit(len)];
    let mut pv = vec![unit(len)];
    for k in 1..len {
        pu.push(trunc_mul(field, &pu[k - 1], &du, len));
        pv.push(trunc_mul(field, &pv[k - 1], &dv, len));
    }
    let mut out = vec![Fe::ZERO; len];
    for d in 0..len {
        for i in 0..=d {
            let c = jets.get(i, d - i);
            if c.is_zero() {
                continue;
            }
            let term = trunc_mul(field, &pu[i], &pv[d - i], len);
            for (o, t) in out.iter_mut().zip(term) {
                *o = field.add(*o, field.mul(c, t));
            }
        }
    }
    out
}

fn unit(len: usize) -> Vec<Fe> {
    let mut v = vec![Fe::ZERO; len];
    v[0] = Fe::ONE;
    v
}

/// Solves for the branch of a curve with jets `curve_jets` at a smooth point.
///
/// Prefers the `u`-parametrization when `dG/dv != 0`.
pub fn smooth_branch(field: Field, curve_jets: &Jets, order: usize) -> Result<Branch> {
    if !curve_jets.get(0, 0).is_zero() {
        return Err(Error::PointNotOnCurve);
    }
    let gu = curve_jets.get(1, 0);
    let gv = curve_jets.get(0, 1);
    let (along_u, pivot) = if !gv.is_zero() {
        (true, gv)
    } else if !gu.is_zero() {
        (false, gu)
    } else {
        return Err(Error::SmoothnessViolation);
    };
    branch_with(field, curve_jets, order, along_u, pivot)
}

/// The branch parametrized by `u`, failing when `dG/dv` vanishes.
pub fn u_branch(field: Field, curve_jets: &Jets, order: usize) -> Result<Branch> {
    if !curve_jets.get(0, 0).is_zero() {
        return Err(Error::PointNotOnCurve);
    }
    let gv = curve_jets.get(0, 1);
    if gv.is_zero() {
        return Err(Error::SingularEvaluationPoint);
    }
    branch_with(field, curve_jets, order, true, gv)
}

fn branch_with(field: Field, jets: &Jets, order: usize, along_u: bool, pivot: Fe) -> Result<Branch> {
    assert!(jets.order() >= order, "curve jets too short for the branch order");
    let len = order + 1;
    let inv = field.inv(pivot);
    let mut branch = Branch { along_u, w: vec![Fe::ZERO; len] };
    // each pass fixes one more coefficient of w
    for _ in 0..order {
        let e = compose(field, jets, &branch, len);
        for k in 1..len {
            branch.w[k] = field.sub(branch.w[k], field.mul(e[k], inv));
        }
    }
    Ok(branch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{AffinePoint, Form, MonomialBasis};

    #[test]
    fn circle_branch() {
        let f = Field::default_primes()[0];
        // u^2 + v^2 - 1 at (0, 1): v = 1 - s^2/2 - s^4/8 + ...
        let g = Form::from_terms(f, MonomialBasis::plane(2), &[(2, 0, 1), (0, 2, 1), (0, 0, -1)]).unwrap();
        let q = AffinePoint::new(Fe::ZERO, f.one());
        let b = smooth_branch(f, &g.jet_eval(q, 2).unwrap(), 2).unwrap();
        assert!(b.along_u);
        assert_eq!(b.w[1], Fe::ZERO);
        assert_eq!(b.w[2], f.neg(f.inv(f.elem(2))));
        let jets = g.jets(q, 5);
        let b5 = smooth_branch(f, &jets, 5).unwrap();
        assert!(compose(f, &jets, &b5, 6).iter().all(|x| x.is_zero()));
        assert_eq!(b5.w[4], f.neg(f.inv(f.elem(8))));
    }

    #[test]
    fn singular_point_rejected() {
        let f = Field::default_primes()[0];
        let g = Form::from_terms(f, MonomialBasis::plane(2), &[(1, 1, 1)]).unwrap();
        let jets = g.jet_eval(AffinePoint::origin(), 2).unwrap();
        assert_eq!(smooth_branch(f, &jets, 2), Err(Error::SmoothnessViolation));
        let line = Form::from_terms(f, MonomialBasis::plane(1), &[(1, 0, 1)]).unwrap();
        let jets = line.jet_eval(AffinePoint::origin(), 1).unwrap();
        assert_eq!(u_branch(f, &jets, 1), Err(Error::SingularEvaluationPoint));
        assert!(!smooth_branch(f, &jets, 1).unwrap().along_u);
    }
}
