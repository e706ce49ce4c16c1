use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{BivarPoly, Fe, Field, SeededRng, UniPoly};
use crate::linsys::{sample_member, solve, ConditionSpec, LinearSystem};
use crate::planeprym::{is_node, singular_gcd_audit, ResultantAudit};
use crate::poly::{AffinePoint, Form, MonomialBasis};

/// Two fibers of each projection of `P^1 x P^1`; their four crossings are the nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SquareConfig {
    #[serde(skip)]
    pub field: Field,
    pub u: [Fe; 2],
    pub v: [Fe; 2],
}

impl SquareConfig {
    pub fn new(field: Field, u1: Fe, u2: Fe, v1: Fe, v2: Fe) -> Result<SquareConfig> {
        if u1 == u2 || v1 == v2 {
            return Err(Error::InvalidConfiguration("square collapses: repeated fiber".into()));
        }
        Ok(SquareConfig { field, u: [u1, u2], v: [v1, v2] })
    }

    pub fn random(field: Field, rng: &mut SeededRng) -> Result<SquareConfig> {
        for _ in 0..16 {
            let (u1, u2, v1, v2) = (rng.element(&field), rng.element(&field), rng.element(&field), rng.element(&field));
            if let Ok(c) = SquareConfig::new(field, u1, u2, v1, v2) {
                return Ok(c);
            }
        }
        Err(Error::ResamplingExhausted { attempts: 16, what: "square configuration".into() })
    }

    /// `z1 = (u1, v1), z2 = (u1, v2), z3 = (u2, v1), z4 = (u2, v2)`.
    pub fn nodes(&self) -> [AffinePoint; 4] {
        let [u1, u2] = self.u;
        let [v1, v2] = self.v;
        [AffinePoint::new(u1, v1), AffinePoint::new(u1, v2), AffinePoint::new(u2, v1), AffinePoint::new(u2, v2)]
    }
}

pub const ARITHMETIC_GENUS: u32 = 9;
pub const NODE_COUNT: u32 = 4;
pub const GEOMETRIC_GENUS: u32 = ARITHMETIC_GENUS - NODE_COUNT;

/// Biforms of bidegree `(4, 4)` singular at the four nodes of the square.
pub fn v_family_system(cfg: &SquareConfig) -> Result<LinearSystem> {
    let conds = cfg.nodes().iter().map(|&z| ConditionSpec::multiplicity(z, 2)).collect();
    let sys = solve(cfg.field, MonomialBasis::biform(4, 4), conds)?;
    if sys.vector_dimension != 13 {
        return Err(Error::DimensionAnomaly { what: "(4,4) system".into(), expected: 13, found: sys.vector_dimension });
    }
    Ok(sys)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveAudit {
    pub nodes: Vec<bool>,
    pub u_fiber_component_free: bool,
    pub v_fiber_component_free: bool,
    pub resultant: ResultantAudit,
    pub arithmetic_genus: u32,
    pub delta: u32,
    pub geometric_genus: u32,
}

impl CurveAudit {
    pub fn passes(&self) -> bool {
        self.nodes.iter().all(|&b| b) && self.u_fiber_component_free && self.v_fiber_component_free && self.resultant.clean
    }
}

/// `Err(FiberComponent)` when `x` contains a fiber `u = const` or `v = const`.
pub fn check_fiber_components(x: &Form) -> Result<()> {
    let b = x.to_bivar();
    if b.content_u().degree().unwrap_or(0) > 0 {
        return Err(Error::FiberComponent { coordinate: 'u' });
    }
    if b.swap_variables().content_u().degree().unwrap_or(0) > 0 {
        return Err(Error::FiberComponent { coordinate: 'v' });
    }
    Ok(())
}

const FRAME_ATTEMPTS: usize = 16;

struct Mobius {
    a: Fe,
    b: Fe,
    c: Fe,
    d: Fe,
}

impl Mobius {
    fn random(field: &Field, rng: &mut SeededRng) -> Option<Mobius> {
        let m = Mobius { a: rng.element(field), b: rng.element(field), c: rng.element(field), d: rng.element(field) };
        let det = field.sub(field.mul(m.a, m.d), field.mul(m.b, m.c));
        (!det.is_zero()).then_some(m)
    }

    /// Preimage of the finite point `x`, if finite.
    fn preimage(&self, field: &Field, x: Fe) -> Option<Fe> {
        let den = field.sub(self.a, field.mul(self.c, x));
        if den.is_zero() {
            return None;
        }
        Some(field.div(field.sub(field.mul(self.d, x), self.b), den))
    }
}

/// `X'(u', v') = prod (c u' + d)^4 (c' v' + d')^4 * X(M(u'), M'(v'))`.
fn in_frame(x: &Form, mu: &Mobius, mv: &Mobius) -> BivarPoly {
    let f = x.field();
    let lin_u = |p: Fe, q: Fe| BivarPoly::from_terms(f, [(0, 0, q), (1, 0, p)]);
    let lin_v = |p: Fe, q: Fe| BivarPoly::from_terms(f, [(0, 0, q), (0, 1, p)]);
    let (nu, du) = (lin_u(mu.a, mu.b), lin_u(mu.c, mu.d));
    let (nv, dv) = (lin_v(mv.a, mv.b), lin_v(mv.c, mv.d));
    let mut out = BivarPoly::zero(f);
    for (&(i, j), &c) in x.basis().exponents().iter().zip(x.coeffs()) {
        if c.is_zero() {
            continue;
        }
        let t = nu.pow(i).mul(&du.pow(4 - i)).mul(&nv.pow(j)).mul(&dv.pow(4 - j));
        out = out.add(&t.scale(c));
    }
    out
}

/// Resultant audit of a `(4, 4)` curve in a random frame of each factor: the
/// singular locus projects into the two node fibers, with total budget 8.
pub fn biform_resultant_audit(x: &Form, cfg: &SquareConfig, rng: &mut SeededRng) -> Result<ResultantAudit> {
    let f = x.field();
    for _ in 0..FRAME_ATTEMPTS {
        let (Some(mu), Some(mv)) = (Mobius::random(&f, rng), Mobius::random(&f, rng)) else {
            continue;
        };
        let (Some(a1), Some(a2)) = (mu.preimage(&f, cfg.u[0]), mu.preimage(&f, cfg.u[1])) else {
            continue;
        };
        if cfg.v.iter().any(|&v| mv.preimage(&f, v).is_none()) {
            continue;
        }
        let g = in_frame(x, &mu, &mv);
        if g.degree_v() != Some(4) {
            continue;
        }
        let frame = [&mu, &mv].iter().flat_map(|m| [m.a, m.b, m.c, m.d]).map(Fe::value).collect();
        return singular_gcd_audit(&g, &[a1, a2], 2 * NODE_COUNT as usize, frame);
    }
    Err(Error::ResamplingExhausted { attempts: FRAME_ATTEMPTS, what: "biform audit frame".into() })
}

pub fn audit_curve(x: &Form, cfg: &SquareConfig, rng: &mut SeededRng) -> Result<CurveAudit> {
    let b = x.to_bivar();
    let constant = |c: UniPoly| c.degree().unwrap_or(0) == 0;
    Ok(CurveAudit {
        nodes: cfg.nodes().iter().map(|&z| is_node(x, z)).collect(),
        u_fiber_component_free: constant(b.content_u()),
        v_fiber_component_free: constant(b.swap_variables().content_u()),
        resultant: biform_resultant_audit(x, cfg, rng)?,
        arithmetic_genus: ARITHMETIC_GENUS,
        delta: NODE_COUNT,
        geometric_genus: GEOMETRIC_GENUS,
    })
}

const CURVE_ATTEMPTS: usize = 16;

/// A member of the family whose audit passes, resampled otherwise.
pub fn sample_x(sys: &LinearSystem, cfg: &SquareConfig, rng: &mut SeededRng) -> Result<(Form, CurveAudit)> {
    for _ in 0..CURVE_ATTEMPTS {
        let x = sample_member(sys, rng, &[], &[])?;
        let audit = audit_curve(&x, cfg, rng)?;
        if audit.passes() {
            return Ok((x, audit));
        }
    }
    Err(Error::ResamplingExhausted { attempts: CURVE_ATTEMPTS, what: "nodal (4,4) curve".into() })
}

/// Smooth `F_p`-points of `x` other than the nodes, drawn fiber by fiber
/// over random `u`; at most `8 * count` fibers are tried.
pub fn sample_points_on_x(x: &Form, cfg: &SquareConfig, rng: &mut SeededRng, count: usize) -> Result<Vec<AffinePoint>> {
    check_fiber_components(x)?;
    let f = x.field();
    let b = x.to_bivar();
    let dv = b.deriv_v();
    let nodes = cfg.nodes();
    let mut out: Vec<AffinePoint> = Vec::with_capacity(count);
    for _ in 0..8 * count.max(1) {
        let u0 = rng.element(&f);
        if let Some(p) = fiber_points(&b, &dv, u0)? {
            for z in p {
                if !nodes.contains(&z) && !out.contains(&z) {
                    out.push(z);
                }
            }
        }
        if out.len() >= count {
            out.truncate(count);
            return Ok(out);
        }
    }
    Err(Error::InsufficientPoints { wanted: count, found: out.len() })
}

/// Rational points of the fiber `u = u0` where `x_v` does not vanish.
fn fiber_points(b: &BivarPoly, dv: &BivarPoly, u0: Fe) -> Result<Option<Vec<AffinePoint>>> {
    let fiber: UniPoly = b.specialize_u(u0);
    if fiber.degree().unwrap_or(0) == 0 {
        return Ok(None);
    }
    let mut roots = fiber.roots_in_field()?;
    roots.dedup();
    Ok(Some(
        roots.into_iter().filter(|&v0| !dv.eval(u0, v0).is_zero()).map(|v0| AffinePoint::new(u0, v0)).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> Field {
        Field::default_primes()[0]
    }

    #[test]
    fn collapsed_square_is_rejected() {
        let f = field();
        let (a, b) = (f.elem(3), f.elem(5));
        assert!(SquareConfig::new(f, a, b, a, a).is_err());
        assert!(SquareConfig::new(f, a, a, a, b).is_err());
        assert!(SquareConfig::new(f, a, b, a, b).is_ok());
    }

    #[test]
    fn family_has_projective_dimension_twelve() {
        for prime in Field::default_primes() {
            for seed in 0..5 {
                let cfg = SquareConfig::random(prime, &mut SeededRng::new(seed)).unwrap();
                let sys = v_family_system(&cfg).unwrap();
                assert_eq!(sys.projective_dimension(), 12);
                assert_eq!(sys.rows, 12);
                assert_eq!(MonomialBasis::biform(4, 4).len() - sys.rows, 13);
            }
        }
        assert_eq!(GEOMETRIC_GENUS, 5);
        assert_eq!(ARITHMETIC_GENUS, (4 - 1) * (4 - 1));
    }

    #[test]
    fn sampled_curves_are_four_nodal() {
        let f = field();
        let mut passed = 0;
        for seed in 0..10 {
            let mut rng = SeededRng::new(seed);
            let cfg = SquareConfig::random(f, &mut rng).unwrap();
            let sys = v_family_system(&cfg).unwrap();
            let (x, audit) = sample_x(&sys, &cfg, &mut rng).unwrap();
            assert!(audit.passes());
            assert_eq!(audit.resultant.gcd_degree, Some(8));
            for z in cfg.nodes() {
                assert_eq!(x.multiplicity_at(z), Some(2));
            }
            passed += 1;
        }
        assert_eq!(passed, 10);
    }

    #[test]
    fn extra_singularity_is_caught() {
        let f = field();
        let mut rng = SeededRng::new(4);
        let cfg = SquareConfig::random(f, &mut rng).unwrap();
        let extra = AffinePoint::new(rng.element(&f), rng.element(&f));
        let mut conds: Vec<ConditionSpec> = cfg.nodes().iter().map(|&z| ConditionSpec::multiplicity(z, 2)).collect();
        conds.push(ConditionSpec::multiplicity(extra, 2));
        let sys = solve(f, MonomialBasis::biform(4, 4), conds).unwrap();
        let x = sample_member(&sys, &mut rng, &[], &[]).unwrap();
        let audit = audit_curve(&x, &cfg, &mut rng).unwrap();
        assert!(audit.nodes.iter().all(|&b| b));
        assert!(!audit.resultant.clean);
    }

    #[test]
    fn points_are_smooth_and_on_the_curve() {
        let f = field();
        let mut rng = SeededRng::new(9);
        let cfg = SquareConfig::random(f, &mut rng).unwrap();
        let (x, _) = sample_x(&v_family_system(&cfg).unwrap(), &cfg, &mut rng).unwrap();
        let pts = sample_points_on_x(&x, &cfg, &mut rng, 40).unwrap();
        assert_eq!(pts.len(), 40);
        let dv = x.to_bivar().deriv_v();
        for p in pts {
            assert!(x.eval(p).is_zero());
            assert!(!dv.eval(p.u, p.v).is_zero());
        }
    }

    #[test]
    fn planted_point_is_returned_from_its_fiber() {
        let f = field();
        let mut rng = SeededRng::new(10);
        let cfg = SquareConfig::random(f, &mut rng).unwrap();
        let planted = AffinePoint::new(f.elem(17), f.elem(23));
        let mut conds: Vec<ConditionSpec> = cfg.nodes().iter().map(|&z| ConditionSpec::multiplicity(z, 2)).collect();
        conds.push(ConditionSpec::through(planted));
        let x = sample_member(&solve(f, MonomialBasis::biform(4, 4), conds).unwrap(), &mut rng, &[], &[]).unwrap();
        let b = x.to_bivar();
        let pts = fiber_points(&b, &b.deriv_v(), planted.u).unwrap().unwrap();
        assert!(pts.contains(&planted));
    }

    #[test]
    fn vertical_component_is_detected() {
        let f = field();
        let mut rng = SeededRng::new(11);
        let cfg = SquareConfig::random(f, &mut rng).unwrap();
        let rest = sample_member(&solve(f, MonomialBasis::biform(3, 4), vec![]).unwrap(), &mut rng, &[], &[]).unwrap();
        let line = Form::from_terms(f, MonomialBasis::biform(1, 0), &[(0, 0, -7), (1, 0, 1)]).unwrap();
        let x = rest.mul(&line).unwrap();
        assert_eq!(
            sample_points_on_x(&x, &cfg, &mut rng, 5).unwrap_err(),
            Error::FiberComponent { coordinate: 'u' }
        );
        let swapped = Form::from_bivar(MonomialBasis::biform(4, 4), &x.to_bivar().swap_variables()).unwrap();
        assert_eq!(check_fiber_components(&swapped).unwrap_err(), Error::FiberComponent { coordinate: 'v' });
    }
}
