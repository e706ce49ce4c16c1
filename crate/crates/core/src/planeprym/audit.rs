use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{resultant_v, BivarPoly, Fe, Field, SeededRng, UniPoly};
use crate::poly::{AffinePoint, BinaryForm, Form};

use super::config::{q_parameters, PrymConfiguration};
use super::params::PrymParameters;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResultantAudit {
    /// Row-major 3x3 matrix `A` with `(X, Y, Z) = A (u', v', 1)`.
    pub frame: Vec<u64>,
    pub gcd_degree: Option<usize>,
    pub budget: usize,
    /// `F_p`-roots of the gcd that are not `u'`-coordinates of prescribed singular points.
    pub unexpected_roots: Vec<u64>,
    pub clean: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub prime: u64,
    /// Points of the normalization over `F_q`.
    pub count: u64,
    /// `|count - (q + 1)|`.
    pub deviation: u64,
    /// `floor(2 g sqrt(q))`.
    pub window: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityAudit {
    pub multiplicity_at_p: Option<usize>,
    pub ordinary_at_p: bool,
    pub nodes: Vec<bool>,
    /// One flag per `q_ij`, in the order `q11, q12, q21, q22`.
    pub tangency_exact: Vec<bool>,
    /// Restriction to `r_i` has no roots beyond `p` and the two `q_ij`.
    pub line_restrictions_exact: Vec<bool>,
    pub resultant: ResultantAudit,
    pub point_count: Option<PointCount>,
}

impl SingularityAudit {
    pub fn passes(&self) -> bool {
        self.ordinary_at_p
            && self.nodes.iter().all(|&b| b)
            && self.tangency_exact.iter().all(|&b| b)
            && self.line_restrictions_exact.iter().all(|&b| b)
            && self.resultant.clean
            && self.point_count.as_ref().map_or(true, |c| c.pass)
    }
}

/// Whether `gamma` has an ordinary node at `x`.
pub fn is_node(gamma: &Form, x: AffinePoint) -> bool {
    match gamma.taylor_part(x, 2) {
        Ok(q) => !q.discriminant().is_zero(),
        Err(_) => false,
    }
}

pub fn audit_member(
    gamma: &Form,
    cfg: &PrymConfiguration,
    params: &PrymParameters,
    rng: &mut SeededRng,
) -> Result<SingularityAudit> {
    let field = gamma.field();
    let m = params.n() - 4;
    let multiplicity_at_p = gamma.multiplicity_at(cfg.p);
    let ordinary_at_p =
        multiplicity_at_p == Some(m) && gamma.taylor_part(cfg.p, m).map_or(false, |t| t.is_squarefree());
    let nodes = cfg.nodes.iter().map(|&x| is_node(gamma, x)).collect();

    let t = q_parameters(cfg);
    let mut tangency_exact = Vec::with_capacity(4);
    let mut line_restrictions_exact = Vec::with_capacity(2);
    for i in 0..2 {
        let line = &cfg.lines[i];
        let r = gamma.restrict_to_line(line);
        let tp = line.param_of(field, cfg.p).expect("p lies on r_i");
        for j in 0..2 {
            tangency_exact.push(!r.is_zero() && r.root_multiplicity(t[i][j]) == 2);
        }
        let exact = if r.is_zero() {
            false
        } else {
            let mut expected = vec![tp; m];
            expected.extend_from_slice(&[t[i][0], t[i][0], t[i][1], t[i][1]]);
            expected.sort();
            r.degree() == Some(params.n()) && r.roots_in_field()? == expected
        };
        line_restrictions_exact.push(exact);
    }

    let mut prescribed = vec![(cfg.p, m)];
    prescribed.extend(cfg.nodes.iter().map(|&x| (x, 2)));
    let resultant = resultant_audit(gamma, &prescribed, rng)?;
    Ok(SingularityAudit {
        multiplicity_at_p,
        ordinary_at_p,
        nodes,
        tangency_exact,
        line_restrictions_exact,
        resultant,
        point_count: None,
    })
}

type Frame = [[Fe; 3]; 3];

fn det3(f: Field, a: &Frame) -> Fe {
    let m = |x, y| f.mul(x, y);
    let t0 = f.sub(m(a[1][1], a[2][2]), m(a[1][2], a[2][1]));
    let t1 = f.sub(m(a[1][0], a[2][2]), m(a[1][2], a[2][0]));
    let t2 = f.sub(m(a[1][0], a[2][1]), m(a[1][1], a[2][0]));
    f.add(f.sub(m(a[0][0], t0), m(a[0][1], t1)), m(a[0][2], t2))
}

fn inverse3(f: Field, a: &Frame) -> Option<Frame> {
    let d = det3(f, a);
    if d.is_zero() {
        return None;
    }
    let di = f.inv(d);
    let mut out = [[Fe::ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            // cofactor of a[j][i]
            let r: Vec<usize> = (0..3).filter(|&k| k != j).collect();
            let c: Vec<usize> = (0..3).filter(|&k| k != i).collect();
            let minor = f.sub(f.mul(a[r[0]][c[0]], a[r[1]][c[1]]), f.mul(a[r[0]][c[1]], a[r[1]][c[0]]));
            let signed = if (i + j) % 2 == 1 { f.neg(minor) } else { minor };
            *x = f.mul(signed, di);
        }
    }
    Some(out)
}

/// The plane form `F(u, v)` of degree `n` rewritten in the frame `(X, Y, Z) = A (u', v', 1)`.
fn in_frame(gamma: &Form, n: usize, a: &Frame) -> BivarPoly {
    let f = gamma.field();
    let lin = |row: &[Fe; 3]| BivarPoly::from_terms(f, [(1, 0, row[0]), (0, 1, row[1]), (0, 0, row[2])]);
    let (lx, ly, lz) = (lin(&a[0]), lin(&a[1]), lin(&a[2]));
    let pows = |l: &BivarPoly| {
        let mut v = vec![BivarPoly::from_terms(f, [(0, 0, Fe::ONE)])];
        for k in 0..n {
            let next = v[k].mul(l);
            v.push(next);
        }
        v
    };
    let (px, py, pz) = (pows(&lx), pows(&ly), pows(&lz));
    let mut acc = BivarPoly::zero(f);
    for (i, j, c) in gamma.to_bivar().terms() {
        acc = acc.add(&px[i].mul(&py[j]).mul(&pz[n - i - j]).scale(c));
    }
    acc
}

const FRAME_ATTEMPTS: usize = 16;

/// Singular-locus audit by resultants in a random projective frame.
///
/// `prescribed` lists the allowed singular points with their multiplicities;
/// an ordinary `m`-fold point contributes `m(m-1)` to the degree budget of
/// `gcd(Res_v(G, G_u), Res_v(G, G_v))`.
pub fn resultant_audit(gamma: &Form, prescribed: &[(AffinePoint, usize)], rng: &mut SeededRng) -> Result<ResultantAudit> {
    let f = gamma.field();
    let n = gamma.basis().total_degree();
    let budget = prescribed.iter().map(|&(_, m)| m * (m - 1)).sum();
    for _ in 0..FRAME_ATTEMPTS {
        let mut a = [[Fe::ZERO; 3]; 3];
        for row in a.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.element(&f);
            }
        }
        let Some(ainv) = inverse3(f, &a) else { continue };
        let mut us = Vec::with_capacity(prescribed.len());
        let mut finite = true;
        for &(x, _) in prescribed {
            let w = [x.u, x.v, Fe::ONE];
            let img: Vec<Fe> = ainv.iter().map(|row| f.dot(row, &w)).collect();
            if img[2].is_zero() {
                finite = false;
                break;
            }
            us.push(f.div(img[0], img[2]));
        }
        let mut sorted = us.clone();
        sorted.sort();
        sorted.dedup();
        if !finite || sorted.len() != us.len() {
            continue;
        }
        let g = in_frame(gamma, n, &a);
        // monic in v up to a constant: no vertical asymptotes
        if g.degree_v() != Some(n) || g.coeffs()[n].degree() != Some(0) {
            continue;
        }
        let frame = a.iter().flatten().map(|x| x.value()).collect();
        return singular_gcd_audit(&g, &us, budget, frame);
    }
    Err(Error::ResamplingExhausted { attempts: FRAME_ATTEMPTS, what: "audit frame".into() })
}

/// Checks `G = gcd(Res_v(g, g_u), Res_v(g, g_v))`: its `F_p`-roots must lie in
/// `allowed` and its degree must not exceed `budget`.
pub(crate) fn singular_gcd_audit(g: &BivarPoly, allowed: &[Fe], budget: usize, frame: Vec<u64>) -> Result<ResultantAudit> {
    let unclean = |frame| Ok(ResultantAudit { frame, gcd_degree: None, budget, unexpected_roots: vec![], clean: false });
    let (Ok(r1), Ok(r2)) = (resultant_v(g, &g.deriv_u()), resultant_v(g, &g.deriv_v())) else {
        return unclean(frame);
    };
    let gcd = r1.gcd(&r2);
    if gcd.is_zero() {
        return unclean(frame);
    }
    let mut roots = gcd.roots_in_field()?;
    roots.dedup();
    let unexpected: Vec<u64> = roots.iter().filter(|r| !allowed.contains(r)).map(|r| r.value()).collect();
    let degree = gcd.degree().unwrap_or(0);
    Ok(ResultantAudit {
        frame,
        gcd_degree: Some(degree),
        budget,
        clean: unexpected.is_empty() && degree <= budget,
        unexpected_roots: unexpected,
    })
}

/// Counts `F_q`-points of the normalization of `gamma` and tests the Weil bound.
///
/// Assumes the singularities are exactly the ordinary point at `p` and the
/// nodes, and that the curve meets the line at infinity transversally.
pub fn point_count(gamma: &Form, cfg: &PrymConfiguration, params: &PrymParameters) -> Result<PointCount> {
    let f = gamma.field();
    let q = f.modulus();
    let n = params.n();
    let bv = gamma.to_bivar();
    let mut affine: u64 = 0;
    for u0 in 0..q {
        let fiber = bv.specialize_u(f.elem(u0));
        if fiber.is_zero() {
            return Err(Error::FiberComponent { coordinate: 'u' });
        }
        if fiber.degree().unwrap_or(0) > 0 {
            affine += small_prime_distinct_roots(&fiber) as u64;
        }
    }
    let m = n - 4;
    let cone = gamma.taylor_part(cfg.p, m)?;
    let mut branches = cone.rational_root_count()? as u64;
    for &x in &cfg.nodes {
        let d = gamma.taylor_part(x, 2)?.discriminant();
        branches += if f.is_square(d) { 2 } else { 0 };
    }
    let top = BinaryForm::new(f, n, (0..=n).map(|i| gamma.coeff(i, n - i)).collect());
    let transversal = top.is_squarefree();
    let at_infinity = top.rational_root_count()? as u64;
    let singular = 1 + cfg.nodes.len() as u64;
    let count = affine - singular + branches + at_infinity;
    let deviation = count.abs_diff(q + 1);
    let g = params.g as u64;
    let window = ((4 * g * g * q) as f64).sqrt().floor() as u64;
    let pass = transversal && (deviation as u128).pow(2) <= 4 * (g as u128).pow(2) * q as u128;
    Ok(PointCount { prime: q, count, deviation, window, pass })
}

const MAX_FAST_DEGREE: usize = 63;

/// `deg gcd(x^q - x, f)` with allocation-free arithmetic for `q < 2^24`.
fn small_prime_distinct_roots(fiber: &UniPoly) -> usize {
    let field = fiber.field();
    let q = field.modulus();
    let monic = fiber.monic();
    let d = monic.degree().unwrap_or(0);
    if q >= 1 << 24 || d > MAX_FAST_DEGREE {
        return fiber.count_distinct_roots().unwrap_or(0);
    }
    if d == 0 {
        return 0;
    }
    // x^d = -sum_{i<d} m_i x^i. Residues are < 2^24, so products are < 2^48 and
    // at most 2d of them accumulate in one slot before the next `% q`.
    let neg: Vec<u64> = (0..d).map(|i| (q - monic.coeff(i).value()) % q).collect();
    let reduce = |buf: &mut [u64; 2 * MAX_FAST_DEGREE + 2], top: usize| {
        for k in (d..top).rev() {
            let c = buf[k] % q;
            buf[k] = 0;
            if c != 0 {
                for i in 0..d {
                    buf[k - d + i] += c * neg[i];
                }
            }
        }
        for x in buf[..d].iter_mut() {
            *x %= q;
        }
    };
    let mut acc = [0u64; 2 * MAX_FAST_DEGREE + 2];
    acc[0] = 1;
    for bit in (0..64 - q.leading_zeros()).rev() {
        let mut sq = [0u64; 2 * MAX_FAST_DEGREE + 2];
        for i in 0..d {
            if acc[i] == 0 {
                continue;
            }
            for j in 0..d {
                sq[i + j] += acc[i] * acc[j];
            }
        }
        reduce(&mut sq, 2 * d - 1);
        if (q >> bit) & 1 == 1 {
            sq.copy_within(0..d, 1);
            sq[0] = 0;
            reduce(&mut sq, d + 1);
        }
        acc = sq;
    }
    let xq = UniPoly::new(field, acc[..d].iter().map(|&c| field.elem(c)).collect());
    monic.gcd(&xq.sub(&UniPoly::x(field))).degree().unwrap_or(0)
}
