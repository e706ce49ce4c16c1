//! Gluing and separation checks for the Prym-canonical map of a plane model.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{proportional, rank_of_rows, resultant_v, BivarPoly, Fe, Field, SeededRng, UniPoly};
use crate::poly::{compose, u_branch, AffinePoint, BinaryForm, Form};

use super::config::PrymConfiguration;
use super::params::PrymParameters;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluingRecord {
    pub pair: [String; 2],
    pub image_equal: bool,
    pub tangents_distinct: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpotCheck {
    pub pairs: usize,
    pub separated: usize,
    pub immersed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoNodeReport {
    pub gluings: Vec<GluingRecord>,
    pub images_distinct: bool,
    /// Every glued pair of branches found among the points over `p`, the nodes and the `q_ij`.
    pub observed_pairs: Vec<[String; 2]>,
    pub base_point_free: bool,
    pub basis_invariant: bool,
    pub spot: SpotCheck,
}

impl TwoNodeReport {
    pub fn passes(&self) -> bool {
        let expected = [q_label(0, 0), q_label(0, 1), q_label(1, 0), q_label(1, 1)];
        let prescribed = vec![[expected[0].clone(), expected[1].clone()], [expected[2].clone(), expected[3].clone()]];
        self.gluings.iter().all(|g| g.image_equal && g.tangents_distinct)
            && self.images_distinct
            && self.observed_pairs == prescribed
            && self.base_point_free
            && self.basis_invariant
            && self.spot.separated == self.spot.pairs
            && self.spot.immersed == self.spot.pairs
    }
}

fn q_label(i: usize, j: usize) -> String {
    format!("q{}{}", i + 1, j + 1)
}

/// Image point and tangent of the map at a smooth point, from the branch series.
struct BranchImage {
    point: Vec<Fe>,
    tangent: Vec<Fe>,
}

fn branch_image(basis: &[Form], gamma: &Form, q: AffinePoint) -> Result<BranchImage> {
    let f = gamma.field();
    let branch = u_branch(f, &gamma.jets(q, 2), 2)?;
    let mut point = Vec::with_capacity(basis.len());
    let mut tangent = Vec::with_capacity(basis.len());
    for b in basis {
        let s = compose(f, &b.jets(q, 2), &branch, 3);
        point.push(s[1]);
        tangent.push(s[2]);
    }
    Ok(BranchImage { point, tangent })
}

/// Branches over one point of the plane: roots of `roots` parametrize them,
/// `image` evaluates the map on a branch parameter.
struct Cluster {
    label: String,
    roots: UniPoly,
    image: Vec<UniPoly>,
}

fn constant_cluster(field: Field, label: String, image: &[Fe]) -> Cluster {
    Cluster { label, roots: UniPoly::x(field), image: image.iter().map(|&c| UniPoly::constant(field, c)).collect() }
}

/// Branches at a singular point of multiplicity `m`, with tangent directions `x e1 + e2`.
///
/// The forms of `basis` have multiplicity `k` there, so a branch with
/// direction `d` maps to their degree-`k` Taylor parts evaluated at `d`.
fn singular_cluster(
    gamma: &Form,
    basis: &[Form],
    at: AffinePoint,
    (m, k): (usize, usize),
    label: String,
    rng: &mut SeededRng,
) -> Result<Cluster> {
    let f = gamma.field();
    let cone = gamma.taylor_part(at, m)?;
    let (e1, e2) = pencil(f, &cone, rng)?;
    let roots = cone.along_pencil(e1, e2);
    let image = basis
        .iter()
        .map(|b| Ok(b.taylor_part(at, k)?.along_pencil(e1, e2)))
        .collect::<Result<Vec<UniPoly>>>()?;
    Ok(Cluster { label, roots, image })
}

/// Two independent direction vectors with the cone nonzero on `e1`, so every
/// branch has a finite parameter.
fn pencil(f: Field, cone: &BinaryForm, rng: &mut SeededRng) -> Result<((Fe, Fe), (Fe, Fe))> {
    for _ in 0..32 {
        let e1 = (rng.element(&f), rng.element(&f));
        let e2 = (rng.element(&f), rng.element(&f));
        let det = f.sub(f.mul(e1.0, e2.1), f.mul(e1.1, e2.0));
        if !det.is_zero() && !cone.eval(e1.0, e1.1).is_zero() {
            return Ok((e1, e2));
        }
    }
    Err(Error::ResamplingExhausted { attempts: 32, what: "branch pencil".into() })
}

/// `a(s) b(t)` with `s` as the inner variable and `t` as the eliminated one.
fn outer(a: &UniPoly, b: &UniPoly) -> BivarPoly {
    BivarPoly::new(a.field(), b.coeffs().iter().map(|&c| a.scale(c)).collect())
}

fn random_minor_combination(a: &[UniPoly], b: &[UniPoly], rng: &mut SeededRng) -> BivarPoly {
    let f = a[0].field();
    let mut acc = BivarPoly::zero(f);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let lambda = rng.element(&f);
            let minor = outer(&a[i], &b[j]).sub(&outer(&a[j], &b[i]));
            acc = acc.add(&minor.scale(lambda));
        }
    }
    acc
}

/// `p(s, t) / (t - s)`, which must be exact.
fn divide_by_diagonal(p: &BivarPoly) -> BivarPoly {
    let f = p.field();
    let Some(d) = p.degree_v() else { return BivarPoly::zero(f) };
    let s = UniPoly::x(f);
    let mut q = vec![UniPoly::zero(f); d];
    if d == 0 {
        debug_assert!(p.is_zero());
        return BivarPoly::zero(f);
    }
    q[d - 1] = p.coeffs()[d].clone();
    for j in (1..d).rev() {
        q[j - 1] = p.coeffs()[j].add(&s.mul(&q[j]));
    }
    debug_assert!(p.coeffs()[0].add(&s.mul(&q[0])).is_zero());
    BivarPoly::new(f, q)
}

/// `Res_t(r(t), m(s, t))` as a polynomial in `s`, up to a nonzero constant.
fn eliminate(r: &BivarPoly, m: &BivarPoly) -> Result<UniPoly> {
    let f = r.field();
    match m.degree_v() {
        None => Ok(UniPoly::zero(f)),
        Some(0) => Ok(m.coeffs()[0].clone()),
        Some(_) => resultant_v(r, m),
    }
}

fn nontrivial_gcd(a: &UniPoly, b: &UniPoly) -> bool {
    !a.gcd(b).degree().is_some_and(|d| d == 0)
}

const COMBINATIONS: usize = 2;

/// Some branch of `a` and some branch of `b` share an image point.
fn glued_between(a: &Cluster, b: &Cluster, rng: &mut SeededRng) -> Result<bool> {
    let rb = BivarPoly::from_v_poly(&b.roots);
    for _ in 0..COMBINATIONS {
        let m = random_minor_combination(&a.image, &b.image, rng);
        if !nontrivial_gcd(&eliminate(&rb, &m)?, &a.roots) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Two distinct branches of `a` share an image point.
fn glued_within(a: &Cluster, rng: &mut SeededRng) -> Result<bool> {
    if a.roots.degree().unwrap_or(0) < 2 {
        return Ok(false);
    }
    let f = a.roots.field();
    let rt = BivarPoly::from_v_poly(&a.roots);
    let rs = BivarPoly::new(f, vec![a.roots.clone()]);
    let rest = divide_by_diagonal(&rt.sub(&rs));
    for _ in 0..COMBINATIONS {
        let m = divide_by_diagonal(&random_minor_combination(&a.image, &a.image, rng));
        if !nontrivial_gcd(&eliminate(&rest, &m)?, &a.roots) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn base_point_free(c: &Cluster) -> bool {
    let g = c.image.iter().fold(c.roots.clone(), |acc, v| acc.gcd(v));
    g.degree() == Some(0)
}

/// Random smooth `F_p`-points of `gamma` away from `avoid`, from vertical fibers.
pub fn sample_curve_points(
    gamma: &Form,
    rng: &mut SeededRng,
    count: usize,
    avoid: &[AffinePoint],
) -> Result<Vec<AffinePoint>> {
    let f = gamma.field();
    let bv = gamma.to_bivar();
    let dv = bv.deriv_v();
    let mut out = Vec::with_capacity(count);
    let fibers = 32 * count.max(1);
    for _ in 0..fibers {
        let u0 = rng.element(&f);
        let fiber = bv.specialize_u(u0);
        if fiber.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut roots = fiber.roots_in_field()?;
        roots.dedup();
        for v0 in roots {
            let x = AffinePoint::new(u0, v0);
            if !dv.eval(u0, v0).is_zero() && !avoid.contains(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
        if out.len() >= count {
            out.truncate(count);
            return Ok(out);
        }
    }
    Err(Error::InsufficientPoints { wanted: count, found: out.len() })
}

fn evaluate(basis: &[Form], x: AffinePoint) -> Vec<Fe> {
    basis.iter().map(|b| b.eval(x)).collect()
}

/// Derivative of the map along the tangent `(G_v, -G_u)` of the curve at `x`.
fn tangent_derivative(basis: &[Form], gamma: &Form, x: AffinePoint) -> Vec<Fe> {
    let f = gamma.field();
    let gj = gamma.jets(x, 1);
    let (tu, tv) = (gj.get(0, 1), f.neg(gj.get(1, 0)));
    basis
        .iter()
        .map(|b| {
            let j = b.jets(x, 1);
            f.add(f.mul(tu, j.get(1, 0)), f.mul(tv, j.get(0, 1)))
        })
        .collect()
}

/// Which pairs among the four `q_ij` have equal images.
fn q_gluing_pattern(field: Field, images: &[BranchImage]) -> Vec<bool> {
    let mut v = Vec::new();
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            v.push(proportional(field, &images[a].point, &images[b].point));
        }
    }
    v
}

pub fn verify_two_nodes(
    basis: &[Form],
    gamma: &Form,
    cfg: &PrymConfiguration,
    params: &PrymParameters,
    rng: &mut SeededRng,
    spot_samples: usize,
) -> Result<TwoNodeReport> {
    let f = gamma.field();
    let qs = cfg.q_points();
    let images = qs.iter().map(|&q| branch_image(basis, gamma, q)).collect::<Result<Vec<_>>>()?;

    let mut gluings = Vec::with_capacity(2);
    for i in 0..2 {
        let (a, b) = (&images[2 * i], &images[2 * i + 1]);
        let image_equal = proportional(f, &a.point, &b.point);
        let tangents_distinct = rank_of_rows(f, &[a.point.clone(), a.tangent.clone(), b.tangent.clone()]) == 3;
        gluings.push(GluingRecord { pair: [q_label(i, 0), q_label(i, 1)], image_equal, tangents_distinct });
    }
    let images_distinct = !proportional(f, &images[0].point, &images[2].point);

    let mut clusters = vec![singular_cluster(gamma, basis, cfg.p, (params.n() - 4, params.n() - 4), "p".into(), rng)?];
    for (k, &x) in cfg.nodes.iter().enumerate() {
        clusters.push(singular_cluster(gamma, basis, x, (2, 1), format!("p{}", k + 1), rng)?);
    }
    for (k, img) in images.iter().enumerate() {
        clusters.push(constant_cluster(f, q_label(k / 2, k % 2), &img.point));
    }
    let base_point_free = clusters.iter().all(base_point_free);
    let mut observed_pairs = Vec::new();
    for a in 0..clusters.len() {
        if glued_within(&clusters[a], rng)? {
            observed_pairs.push([clusters[a].label.clone(), clusters[a].label.clone()]);
        }
        for b in a + 1..clusters.len() {
            if glued_between(&clusters[a], &clusters[b], rng)? {
                observed_pairs.push([clusters[a].label.clone(), clusters[b].label.clone()]);
            }
        }
    }

    // the projective image, hence the gluing pattern, is independent of the basis
    let k = basis.len();
    let mixed: Vec<Form> = loop {
        let mat: Vec<Vec<Fe>> = (0..k).map(|_| (0..k).map(|_| rng.element(&f)).collect()).collect();
        if rank_of_rows(f, &mat) == k {
            break mat
                .iter()
                .map(|row| {
                    row.iter().zip(basis).fold(Form::zero(f, basis[0].basis().clone()), |acc, (&c, b)| acc.add(&b.scale(c)))
                })
                .collect();
        }
    };
    let mixed_images = qs.iter().map(|&q| branch_image(&mixed, gamma, q)).collect::<Result<Vec<_>>>()?;
    let basis_invariant = q_gluing_pattern(f, &images) == q_gluing_pattern(f, &mixed_images);

    let mut avoid = cfg.distinguished_points();
    avoid.sort();
    let points = sample_curve_points(gamma, rng, 2 * spot_samples, &avoid)?;
    let mut separated = 0;
    let mut immersed = 0;
    for pair in points.chunks(2) {
        let (x, y) = (pair[0], pair[1]);
        let (bx, by) = (evaluate(basis, x), evaluate(basis, y));
        if rank_of_rows(f, &[bx.clone(), by.clone()]) == 2 {
            separated += 1;
        }
        let ok = |p: AffinePoint, bp: Vec<Fe>| rank_of_rows(f, &[bp, tangent_derivative(basis, gamma, p)]) == 2;
        if ok(x, bx) && ok(y, by) {
            immersed += 1;
        }
    }
    Ok(TwoNodeReport {
        gluings,
        images_distinct,
        observed_pairs,
        base_point_free,
        basis_invariant,
        spot: SpotCheck { pairs: points.len() / 2, separated, immersed },
    })
}
