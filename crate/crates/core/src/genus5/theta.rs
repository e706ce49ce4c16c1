use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{proportional, rank_of_rows, Fe, Field, SeededRng, UniPoly};
use crate::linsys::{solve, ConditionSpec};
use crate::poly::{AffinePoint, Form, MonomialBasis};

use super::canonical::Ruling;
use super::square::SquareConfig;

/// A `(0, 2)` or `(2, 0)` form whose divisor on `C` is exactly the eight node preimages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaWitness {
    /// The class identified with the canonical class, `2L1` or `2L2`.
    pub class: String,
    pub vanishes_at_nodes: bool,
    /// Along each of its two fibers, `x` restricts to a nonzero multiple of
    /// the squared node polynomial, so the fiber meets `C` only over the nodes.
    pub fiber_restrictions_exact: bool,
    pub sampled: usize,
    pub no_further_zeros: bool,
}

impl ThetaWitness {
    pub fn passes(&self) -> bool {
        self.vanishes_at_nodes && self.fiber_restrictions_exact && self.no_further_zeros
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaChecks {
    pub omega_2l1: ThetaWitness,
    pub omega_2l2: ThetaWitness,
    /// (1,0)-forms through `z1, z3`, the pullback of the fiber `v = v1`.
    pub h0_l1_minus_l2_node_fiber: usize,
    /// (1,0)-forms vanishing on the divisor of a random fiber `v = c`.
    pub h0_l1_minus_l2_random_fiber: usize,
    /// `u - u1` spans the (1,0)-forms through `z1, z2`; its value at `z3` is `u2 - u1`.
    pub through_z1_z2: usize,
    pub u_minus_u1_at_z3: u64,
    /// `omega(eta) = O_C(1, 1)` once `omega = 2L2`.
    pub h0_omega_eta_minus_l1: usize,
    pub h0_omega_eta_minus_2l1: usize,
    /// Restriction `H^0(O(1,0)) -> H^0(O_C(1,0))` is an isomorphism; recorded, not computed.
    pub h0_l1: usize,
    pub eta_nontrivial: bool,
}

fn node_poly(field: Field, roots: [Fe; 2]) -> UniPoly {
    UniPoly::from_roots(field, &roots)
}

fn witness(x: &Form, cfg: &SquareConfig, vary: Ruling, sample: &[AffinePoint]) -> ThetaWitness {
    let f = x.field();
    let b = x.to_bivar();
    // the witness is a product of two fibers of `vary`; it depends on the other coordinate
    let (roots, other, class) = match vary {
        Ruling::V => (cfg.v, cfg.u, "2L1"),
        Ruling::U => (cfg.u, cfg.v, "2L2"),
    };
    let w = node_poly(f, roots);
    let coordinate = |p: AffinePoint| if vary == Ruling::V { p.v } else { p.u };
    let vanishes_at_nodes = cfg.nodes().iter().all(|&z| w.eval(coordinate(z)).is_zero());
    let square = node_poly(f, other).pow(2);
    let fiber_restrictions_exact = roots.iter().all(|&c| {
        let r = if vary == Ruling::V { b.specialize_v(c) } else { b.specialize_u(c) };
        r.degree() == Some(4) && r == square.scale(r.leading())
    });
    let no_further_zeros = sample.iter().all(|&p| !w.eval(coordinate(p)).is_zero());
    ThetaWitness {
        class: class.into(),
        vanishes_at_nodes,
        fiber_restrictions_exact,
        sampled: sample.len(),
        no_further_zeros,
    }
}

/// Dimension of the `basis`-forms vanishing on the fiber divisors `ruling = c`
/// for each `c` in `fibers`, computed by reduction modulo the fiber polynomial.
///
/// Valid for small bidegrees, where forms restrict isomorphically to `C` and
/// the fiber polynomial is squarefree.
fn sections_vanishing_on_fibers(x: &Form, basis: &MonomialBasis, fibers: &[(Ruling, Fe)]) -> usize {
    let f = x.field();
    let b = x.to_bivar();
    let mut rows: Vec<Vec<Fe>> = vec![Vec::new(); basis.len()];
    for &(ruling, c) in fibers {
        let modulus = match ruling {
            Ruling::U => b.specialize_u(c),
            Ruling::V => b.specialize_v(c),
        };
        for (k, &(i, j)) in basis.exponents().iter().enumerate() {
            // u^i v^j on the fiber, as a polynomial in the free coordinate
            let (fixed, free) = if ruling == Ruling::U { (i, j) } else { (j, i) };
            let mut coeffs = vec![Fe::ZERO; free + 1];
            coeffs[free] = f.pow(c, fixed as u64);
            let rem = UniPoly::new(f, coeffs).rem(&modulus);
            let mut padded = vec![Fe::ZERO; 4];
            for (t, &y) in rem.coeffs().iter().enumerate() {
                padded[t] = y;
            }
            rows[k].extend(padded);
        }
    }
    basis.len() - rank_of_rows(f, &rows)
}

fn random_fiber(x: &Form, avoid: [Fe; 2], ruling: Ruling, rng: &mut SeededRng) -> Result<Fe> {
    let f = x.field();
    let b = x.to_bivar();
    for _ in 0..64 {
        let c = rng.element(&f);
        let poly = if ruling == Ruling::U { b.specialize_u(c) } else { b.specialize_v(c) };
        if !avoid.contains(&c) && poly.degree() == Some(4) && poly.is_squarefree() {
            return Ok(c);
        }
    }
    Err(Error::ResamplingExhausted { attempts: 64, what: "squarefree fiber".into() })
}

pub fn theta_and_torsion_checks(
    x: &Form,
    cfg: &SquareConfig,
    sample: &[AffinePoint],
    rng: &mut SeededRng,
) -> Result<ThetaChecks> {
    let f = x.field();
    let [z1, z2, z3, _] = cfg.nodes();
    let omega_2l1 = witness(x, cfg, Ruling::V, sample);
    let omega_2l2 = witness(x, cfg, Ruling::U, sample);
    for w in [&omega_2l1, &omega_2l2] {
        if !w.passes() {
            return Err(Error::WitnessFailure(format!("omega ~ {} witness: {w:?}", w.class)));
        }
    }

    let lin = MonomialBasis::biform(1, 0);
    let dim_through = |pts: &[AffinePoint]| {
        solve(f, lin.clone(), pts.iter().map(|&z| ConditionSpec::through(z)).collect()).map(|s| s.vector_dimension)
    };
    let h0_node = dim_through(&[z1, z3])?;
    let through_z1_z2 = dim_through(&[z1, z2])?;
    let u_minus_u1_at_z3 = f.sub(z3.u, z1.u);
    let cv = random_fiber(x, cfg.v, Ruling::V, rng)?;
    let h0_random = sections_vanishing_on_fibers(x, &lin, &[(Ruling::V, cv)]);

    let bi = MonomialBasis::biform(1, 1);
    let c1 = random_fiber(x, cfg.u, Ruling::U, rng)?;
    let mut c2 = random_fiber(x, cfg.u, Ruling::U, rng)?;
    while c2 == c1 {
        c2 = random_fiber(x, cfg.u, Ruling::U, rng)?;
    }
    let minus_l1 = sections_vanishing_on_fibers(x, &bi, &[(Ruling::U, c1)]);
    let minus_2l1 = sections_vanishing_on_fibers(x, &bi, &[(Ruling::U, c1), (Ruling::U, c2)]);

    let eta_nontrivial = h0_node == 0 && h0_random == 0 && through_z1_z2 == 1 && !u_minus_u1_at_z3.is_zero();
    if !eta_nontrivial || minus_l1 != 2 || minus_2l1 != 0 {
        return Err(Error::WitnessFailure(format!(
            "h0 counts: L1-L2 {h0_node}/{h0_random}, omega(eta)-L1 {minus_l1}, omega(eta)-2L1 {minus_2l1}"
        )));
    }
    Ok(ThetaChecks {
        omega_2l1,
        omega_2l2,
        h0_l1_minus_l2_node_fiber: h0_node,
        h0_l1_minus_l2_random_fiber: h0_random,
        through_z1_z2,
        u_minus_u1_at_z3: u_minus_u1_at_z3.value(),
        h0_omega_eta_minus_l1: minus_l1,
        h0_omega_eta_minus_2l1: minus_2l1,
        h0_l1: 2,
        eta_nontrivial,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegreGluing {
    pub node: usize,
    pub image: Vec<u64>,
    /// Whether the two branches are defined over `F_p`; otherwise they are
    /// conjugate over `F_{p^2}`.
    pub rational_branches: bool,
    pub tangents_distinct: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegreReport {
    pub gluings: Vec<SegreGluing>,
    pub images_distinct: bool,
    /// `(4,4) . (1,1) = 8 = 2g - 2`.
    pub image_degree: u32,
}

impl SegreReport {
    pub fn passes(&self) -> bool {
        self.gluings.len() == 4 && self.images_distinct && self.gluings.iter().all(|g| g.tangents_distinct)
    }
}

fn segre(field: Field, z: AffinePoint) -> Vec<Fe> {
    vec![Fe::ONE, z.u, z.v, field.mul(z.u, z.v)]
}

/// Differential of `[1 : u : v : uv]` at `z` applied to `(du, dv)`.
fn segre_tangent(field: Field, z: AffinePoint, (du, dv): (Fe, Fe)) -> Vec<Fe> {
    vec![Fe::ZERO, du, dv, field.add(field.mul(z.v, du), field.mul(z.u, dv))]
}

/// Branch directions at a node from `a du^2 + b du dv + c dv^2`: two rational
/// directions, or the real and imaginary parts of a conjugate pair over `F_{p^2}`.
/// Either pair spans the same plane of directions over `F_{p^2}`.
fn branch_directions(field: Field, (a, b, c): (Fe, Fe, Fe)) -> Option<(bool, [(Fe, Fe); 2])> {
    let f = field;
    let disc = f.sub(f.mul(b, b), f.mul(f.elem(4), f.mul(a, c)));
    if disc.is_zero() {
        return None;
    }
    if a.is_zero() {
        // dv (b du + c dv), and b != 0 since disc = b^2
        return Some((true, [(Fe::ONE, Fe::ZERO), (c, f.neg(b))]));
    }
    let inv2a = f.inv(f.mul(f.elem(2), a));
    match f.sqrt(disc) {
        Some(r) => Some((
            true,
            [(f.mul(f.sub(r, b), inv2a), Fe::ONE), (f.mul(f.neg(f.add(r, b)), inv2a), Fe::ONE)],
        )),
        None => Some((false, [(f.neg(f.mul(b, inv2a)), Fe::ONE), (inv2a, Fe::ZERO)])),
    }
}

/// The Segre images of the nodes and the independence of their branch tangents.
pub fn segre_prym_gluings(x: &Form, cfg: &SquareConfig) -> Result<SegreReport> {
    let f = x.field();
    let nodes = cfg.nodes();
    let mut gluings = Vec::with_capacity(4);
    for (k, &z) in nodes.iter().enumerate() {
        let q = x.taylor_part(z, 2)?;
        // binary coefficient i multiplies du^i dv^(2-i)
        let Some((rational, dirs)) = branch_directions(f, (q.coeff(2), q.coeff(1), q.coeff(0))) else {
            return Err(Error::TangentCoincidence { node: k });
        };
        let rows = vec![segre(f, z), segre_tangent(f, z, dirs[0]), segre_tangent(f, z, dirs[1])];
        let distinct = rank_of_rows(f, &rows) == 3;
        if !distinct {
            return Err(Error::TangentCoincidence { node: k });
        }
        gluings.push(SegreGluing {
            node: k,
            image: segre(f, z).into_iter().map(Fe::value).collect(),
            rational_branches: rational,
            tangents_distinct: distinct,
        });
    }
    let images: Vec<Vec<Fe>> = nodes.iter().map(|&z| segre(f, z)).collect();
    let images_distinct = (0..4).all(|a| (a + 1..4).all(|b| !proportional(f, &images[a], &images[b])));
    Ok(SegreReport { gluings, images_distinct, image_degree: 8 })
}
