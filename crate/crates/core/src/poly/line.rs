use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Fe, Field};

/// A point of the principal affine chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffinePoint {
    pub u: Fe,
    pub v: Fe,
}

impl AffinePoint {
    pub fn new(u: Fe, v: Fe) -> AffinePoint {
        AffinePoint { u, v }
    }

    pub fn origin() -> AffinePoint {
        AffinePoint { u: Fe::ZERO, v: Fe::ZERO }
    }
}

/// The line `a u + b v + c = 0` with `(a, b) != (0, 0)`.
///
/// Its parametrization is `t -> base + t * (-b, a)`, where `base` is
/// `(0, -c/b)` when `b != 0` and `(-c/a, 0)` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Line {
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
}

impl Line {
    pub fn new(a: Fe, b: Fe, c: Fe) -> Result<Line> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::DegenerateLine);
        }
        Ok(Line { a, b, c })
    }

    /// The line through the origin with direction `(du, dv)`.
    pub fn through_origin(field: Field, du: Fe, dv: Fe) -> Result<Line> {
        Line::new(field.neg(dv), du, Fe::ZERO)
    }

    /// The line through two distinct points.
    pub fn through(field: Field, p: AffinePoint, q: AffinePoint) -> Result<Line> {
        let du = field.sub(q.u, p.u);
        let dv = field.sub(q.v, p.v);
        let a = field.neg(dv);
        let b = du;
        let c = field.neg(field.add(field.mul(a, p.u), field.mul(b, p.v)));
        Line::new(a, b, c)
    }

    pub fn eval(&self, field: Field, q: AffinePoint) -> Fe {
        field.add(field.add(field.mul(self.a, q.u), field.mul(self.b, q.v)), self.c)
    }

    pub fn contains(&self, field: Field, q: AffinePoint) -> bool {
        self.eval(field, q).is_zero()
    }

    pub fn direction(&self, field: Field) -> (Fe, Fe) {
        (field.neg(self.b), self.a)
    }

    pub fn base_point(&self, field: Field) -> AffinePoint {
        if !self.b.is_zero() {
            AffinePoint::new(Fe::ZERO, field.neg(field.div(self.c, self.b)))
        } else {
            AffinePoint::new(field.neg(field.div(self.c, self.a)), Fe::ZERO)
        }
    }

    pub fn point_at(&self, field: Field, t: Fe) -> AffinePoint {
        let base = self.base_point(field);
        let (du, dv) = self.direction(field);
        AffinePoint::new(field.add(base.u, field.mul(t, du)), field.add(base.v, field.mul(t, dv)))
    }

    /// Parameter of `q` along the line, or `None` when `q` is off the line.
    pub fn param_of(&self, field: Field, q: AffinePoint) -> Option<Fe> {
        if !self.contains(field, q) {
            return None;
        }
        let base = self.base_point(field);
        let (du, dv) = self.direction(field);
        if !du.is_zero() {
            Some(field.div(field.sub(q.u, base.u), du))
        } else {
            Some(field.div(field.sub(q.v, base.v), dv))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::SeededRng;

    #[test]
    fn degenerate_line_rejected() {
        let f = Field::new(101).unwrap();
        assert_eq!(Line::new(Fe::ZERO, Fe::ZERO, f.one()), Err(Error::DegenerateLine));
    }

    #[test]
    fn parametrization_lies_on_line() {
        let f = Field::default_primes()[0];
        let mut rng = SeededRng::new(3);
        for _ in 0..50 {
            let l = Line::new(rng.element(&f), rng.nonzero(&f), rng.element(&f)).unwrap();
            let t = rng.element(&f);
            let q = l.point_at(f, t);
            assert!(l.contains(f, q));
            assert_eq!(l.param_of(f, q), Some(t));
        }
        let vertical = Line::new(f.one(), Fe::ZERO, f.from_i64(-5)).unwrap();
        let q = vertical.point_at(f, f.elem(7));
        assert_eq!(q.u, f.elem(5));
        assert_eq!(vertical.param_of(f, q), Some(f.elem(7)));
    }

    #[test]
    fn line_through_two_points() {
        let f = Field::new(101).unwrap();
        let p = AffinePoint::new(f.elem(2), f.elem(3));
        let q = AffinePoint::new(f.elem(5), f.elem(11));
        let l = Line::through(f, p, q).unwrap();
        assert!(l.contains(f, p) && l.contains(f, q));
    }
}
