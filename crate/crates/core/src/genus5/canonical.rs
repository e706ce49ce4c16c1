use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{proportional, rank_and_kernel, rank_of_rows, Fe, Field, FieldMatrix, SeededRng};
use crate::linsys::{solve, ConditionSpec, LinearSystem};
use crate::poly::{AffinePoint, Form, MonomialBasis};

use super::square::SquareConfig;

/// Adjoint `(2, 2)`-forms through the four nodes; they cut the canonical series on `C`.
#[derive(Clone, Debug)]
pub struct CanonicalMap {
    pub system: LinearSystem,
}

impl CanonicalMap {
    pub fn dimension(&self) -> usize {
        self.system.vector_dimension
    }

    pub fn evaluate(&self, x: AffinePoint) -> Vec<Fe> {
        self.system.solution_basis.iter().map(|b| b.eval(x)).collect()
    }
}

pub fn canonical_map(cfg: &SquareConfig) -> Result<CanonicalMap> {
    let conds = cfg.nodes().iter().map(|&z| ConditionSpec::through(z)).collect();
    let system = solve(cfg.field, MonomialBasis::biform(2, 2), conds)?;
    if system.vector_dimension != 5 {
        return Err(Error::DimensionAnomaly {
            what: "canonical system".into(),
            expected: 5,
            found: system.vector_dimension,
        });
    }
    Ok(CanonicalMap { system })
}

/// Index pairs `(a, b)`, `a <= b`, of the 15 quadratic monomials in 5 variables.
fn quadratic_monomials() -> Vec<(usize, usize)> {
    (0..5).flat_map(|a| (a..5).map(move |b| (a, b))).collect()
}

fn monomial_values(field: Field, x: &[Fe]) -> Vec<Fe> {
    quadratic_monomials().into_iter().map(|(a, b)| field.mul(x[a], x[b])).collect()
}

/// `q(r + s) - q(r) - q(s)` as a linear form in the 15 coefficients of `q`.
fn polar_row(field: Field, r: &[Fe], s: &[Fe]) -> Vec<Fe> {
    quadratic_monomials()
        .into_iter()
        .map(|(a, b)| {
            if a == b {
                field.mul(field.elem(2), field.mul(r[a], s[a]))
            } else {
                field.add(field.mul(r[a], s[b]), field.mul(r[b], s[a]))
            }
        })
        .collect()
}

/// A quadric in `P^4` through its symmetric Gram matrix; off-diagonal entries
/// are half the monomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricP4 {
    pub field: Field,
    pub gram: [[Fe; 5]; 5],
}

impl Serialize for QuadricP4 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<u64>> = self.gram.iter().map(|r| r.iter().map(|x| x.value()).collect()).collect();
        rows.serialize(s)
    }
}

impl QuadricP4 {
    pub fn from_coefficients(field: Field, c: &[Fe]) -> QuadricP4 {
        assert_eq!(c.len(), 15);
        let half = field.inv(field.elem(2));
        let mut gram = [[Fe::ZERO; 5]; 5];
        for (&(a, b), &x) in quadratic_monomials().iter().zip(c) {
            if a == b {
                gram[a][a] = x;
            } else {
                gram[a][b] = field.mul(half, x);
                gram[b][a] = gram[a][b];
            }
        }
        QuadricP4 { field, gram }
    }

    pub fn coefficients(&self) -> Vec<Fe> {
        let f = self.field;
        quadratic_monomials()
            .into_iter()
            .map(|(a, b)| if a == b { self.gram[a][a] } else { f.add(self.gram[a][b], self.gram[b][a]) })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..5).all(|a| (0..5).all(|b| self.gram[a][b] == self.gram[b][a]))
    }

    pub fn eval(&self, x: &[Fe]) -> Fe {
        self.field.dot(&self.coefficients(), &monomial_values(self.field, x))
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Fe>> = self.gram.iter().map(|r| r.to_vec()).collect();
        rank_of_rows(self.field, &rows)
    }

    pub fn proportional_to(&self, other: &QuadricP4) -> bool {
        proportional(self.field, &self.coefficients(), &other.coefficients())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadricNet {
    pub quadrics: Vec<QuadricP4>,
    pub sample_points: usize,
    pub holdout_points: usize,
    pub holdout_ok: bool,
}

impl QuadricNet {
    /// Whether `q` lies in the span of the net.
    pub fn contains(&self, q: &QuadricP4) -> bool {
        let mut rows: Vec<Vec<Fe>> = self.quadrics.iter().map(QuadricP4::coefficients).collect();
        let before = rank_of_rows(q.field, &rows);
        rows.push(q.coefficients());
        rank_of_rows(q.field, &rows) == before
    }
}

pub const MIN_NET_POINTS: usize = 20;

/// Quadrics through the canonical images `points`, verified on `holdout`.
pub fn quadric_net(field: Field, points: &[Vec<Fe>], holdout: &[Vec<Fe>]) -> Result<QuadricNet> {
    if points.len() < MIN_NET_POINTS {
        return Err(Error::InsufficientPoints { wanted: MIN_NET_POINTS, found: points.len() });
    }
    let rows: Vec<Vec<Fe>> = points.iter().map(|x| monomial_values(field, x)).collect();
    let (_, kernel) = rank_and_kernel(&FieldMatrix::from_rows(field, 15, &rows));
    if kernel.len() != 3 {
        return Err(Error::NetDimensionAnomaly { found: kernel.len() });
    }
    let quadrics: Vec<QuadricP4> = kernel.iter().map(|c| QuadricP4::from_coefficients(field, c)).collect();
    let holdout_ok = quadrics.iter().all(|q| holdout.iter().all(|x| q.eval(x).is_zero()));
    Ok(QuadricNet { quadrics, sample_points: points.len(), holdout_points: holdout.len(), holdout_ok })
}

/// The two projections of `P^1 x P^1`; fibers of ruling `U` are `u = const`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Ruling {
    U,
    V,
}

#[derive(Clone, Debug, Serialize)]
pub struct RulingQuadric {
    pub ruling: Ruling,
    pub fibers: Vec<u64>,
    pub span_ranks: Vec<usize>,
    pub solution_dimension: usize,
    pub quadric: QuadricP4,
    pub rank: usize,
    pub in_net: bool,
}

const FIBER_ATTEMPTS: usize = 4096;

/// Planes in a rank-3 quadric of `P^4` all contain its vertex line, so each
/// new plane imposes 3 conditions mod the line and the residual conic in the
/// base `P^2`; five planes fix that conic, fewer leave a larger family.
pub const RULING_FIBERS: usize = 5;

/// Fibers of `ruling` on which `x` splits into four distinct rational points.
fn split_fibers(x: &Form, cfg: &SquareConfig, ruling: Ruling, rng: &mut SeededRng, count: usize) -> Result<Vec<(Fe, Vec<AffinePoint>)>> {
    let f = x.field();
    let b = x.to_bivar();
    let mut out: Vec<(Fe, Vec<AffinePoint>)> = Vec::with_capacity(count);
    let avoid = match ruling {
        Ruling::U => cfg.u,
        Ruling::V => cfg.v,
    };
    for _ in 0..FIBER_ATTEMPTS {
        let c = rng.element(&f);
        if avoid.contains(&c) || out.iter().any(|(d, _)| *d == c) {
            continue;
        }
        let poly = match ruling {
            Ruling::U => b.specialize_u(c),
            Ruling::V => b.specialize_v(c),
        };
        if poly.degree() != Some(4) {
            continue;
        }
        let mut roots = poly.roots_in_field()?;
        roots.dedup();
        if roots.len() == 4 {
            let pts = roots
                .into_iter()
                .map(|r| match ruling {
                    Ruling::U => AffinePoint::new(c, r),
                    Ruling::V => AffinePoint::new(r, c),
                })
                .collect();
            out.push((c, pts));
            if out.len() == count {
                return Ok(out);
            }
        }
    }
    Err(Error::ResamplingExhausted { attempts: FIBER_ATTEMPTS, what: "split fibers".into() })
}

/// The quadric swept by the planes spanned by the divisors of one ruling's pencil.
pub fn rank3_from_ruling(
    canon: &CanonicalMap,
    x: &Form,
    cfg: &SquareConfig,
    ruling: Ruling,
    net: &QuadricNet,
    rng: &mut SeededRng,
) -> Result<RulingQuadric> {
    let f = x.field();
    let fibers = split_fibers(x, cfg, ruling, rng, RULING_FIBERS)?;
    quadrics_through_planes(canon, &fibers).and_then(|(span_ranks, kernel)| {
        if kernel.len() != 1 {
            return Err(Error::NoQuadric { found: kernel.len() });
        }
        let quadric = QuadricP4::from_coefficients(f, &kernel[0]);
        let rank = quadric.rank();
        if rank != 3 {
            return Err(Error::RankNot3 { rank });
        }
        Ok(RulingQuadric {
            ruling,
            fibers: fibers.iter().map(|(c, _)| c.value()).collect(),
            span_ranks,
            solution_dimension: kernel.len(),
            in_net: net.contains(&quadric),
            quadric,
            rank,
        })
    })
}

/// Span ranks of the fiber divisors and a kernel basis of the quadrics containing their planes.
fn quadrics_through_planes(canon: &CanonicalMap, fibers: &[(Fe, Vec<AffinePoint>)]) -> Result<(Vec<usize>, Vec<Vec<Fe>>)> {
    let f = canon.system.field;
    let mut conditions: Vec<Vec<Fe>> = Vec::with_capacity(6 * fibers.len());
    let mut span_ranks = Vec::with_capacity(fibers.len());
    for (_, pts) in fibers {
        let images: Vec<Vec<Fe>> = pts.iter().map(|&p| canon.evaluate(p)).collect();
        let plane = FieldMatrix::from_rows(f, 5, &images).row_space();
        if plane.len() != 3 {
            return Err(Error::SpanAnomaly { rank: plane.len() });
        }
        span_ranks.push(plane.len());
        for i in 0..3 {
            for j in i..3 {
                conditions.push(polar_row(f, &plane[i], &plane[j]));
            }
        }
    }
    let (_, kernel) = rank_and_kernel(&FieldMatrix::from_rows(f, 15, &conditions));
    Ok((span_ranks, kernel))
}
