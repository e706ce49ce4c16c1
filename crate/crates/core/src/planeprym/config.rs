use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Fe, Field, SeededRng};
use crate::linsys::{certify_dimension, ConditionSpec, DimensionCertificate};
use crate::poly::{AffinePoint, Line, MonomialBasis};

use super::params::PrymParameters;

/// The point `p = (0, 0)`, the nodes, two lines through `p`, and two points on each line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrymConfiguration {
    #[serde(skip)]
    pub field: Field,
    pub p: AffinePoint,
    pub nodes: Vec<AffinePoint>,
    pub lines: [Line; 2],
    pub q: [[AffinePoint; 2]; 2],
}

fn invalid(msg: &str) -> Error {
    Error::InvalidConfiguration(msg.to_string())
}

impl PrymConfiguration {
    pub fn new(
        field: Field,
        params: &PrymParameters,
        nodes: Vec<AffinePoint>,
        lines: [Line; 2],
        q: [[AffinePoint; 2]; 2],
    ) -> Result<PrymConfiguration> {
        let p = AffinePoint::origin();
        if nodes.len() != params.delta() {
            return Err(invalid("node count differs from delta"));
        }
        for l in &lines {
            if !l.contains(field, p) {
                return Err(invalid("line does not pass through p"));
            }
        }
        if lines[0].param_of(field, lines[1].point_at(field, field.one())).is_some() {
            return Err(invalid("the two lines coincide"));
        }
        for (i, pair) in q.iter().enumerate() {
            if pair[0] == pair[1] {
                return Err(invalid("coincident points on a line"));
            }
            for &x in pair {
                if x == p {
                    return Err(invalid("a tangency point equals p"));
                }
                if !lines[i].contains(field, x) {
                    return Err(invalid("a tangency point is off its line"));
                }
            }
        }
        for (k, &x) in nodes.iter().enumerate() {
            if x == p || nodes[..k].contains(&x) {
                return Err(invalid("coincident nodes"));
            }
            if lines.iter().any(|l| l.contains(field, x)) {
                return Err(invalid("a node lies on one of the lines"));
            }
        }
        Ok(PrymConfiguration { field, p, nodes, lines, q })
    }

    pub fn q_points(&self) -> [AffinePoint; 4] {
        [self.q[0][0], self.q[0][1], self.q[1][0], self.q[1][1]]
    }

    /// `p`, the nodes and the four tangency points.
    pub fn distinguished_points(&self) -> Vec<AffinePoint> {
        let mut v = vec![self.p];
        v.extend_from_slice(&self.nodes);
        v.extend_from_slice(&self.q_points());
        v
    }

    /// Degree `n`, multiplicity `n-4` at `p`, double points at the nodes.
    pub fn base_conditions(&self, params: &PrymParameters) -> Vec<ConditionSpec> {
        let mut c = vec![ConditionSpec::multiplicity(self.p, params.n() - 4)];
        c.extend(self.nodes.iter().map(|&x| ConditionSpec::multiplicity(x, 2)));
        c
    }

    /// Degree `n-2`, multiplicity `n-6` at `p` (omitted when not positive), double points at the nodes.
    pub fn claim31_conditions(&self, params: &PrymParameters) -> Vec<ConditionSpec> {
        let mut c = Vec::new();
        if params.n() > 6 {
            c.push(ConditionSpec::multiplicity(self.p, params.n() - 6));
        }
        c.extend(self.nodes.iter().map(|&x| ConditionSpec::multiplicity(x, 2)));
        c
    }

    /// Base conditions plus tangency to `r_i` at each `q_ij`.
    pub fn claim32_conditions(&self, params: &PrymParameters) -> Vec<ConditionSpec> {
        let mut c = self.base_conditions(params);
        for i in 0..2 {
            for j in 0..2 {
                c.push(ConditionSpec::tangency(self.q[i][j], self.lines[i]));
            }
        }
        c
    }
}

const CONFIG_ATTEMPTS: usize = 64;

/// Slope class of the direction from the origin to `x`, as a point of `P^1`.
fn same_direction(field: Field, a: AffinePoint, b: AffinePoint) -> bool {
    field.sub(field.mul(a.u, b.v), field.mul(a.v, b.u)).is_zero()
}

fn try_sample(field: Field, params: &PrymParameters, rng: &mut SeededRng) -> Option<PrymConfiguration> {
    let mut dir = || (rng.nonzero(&field), rng.nonzero(&field));
    let (d1, d2) = (dir(), dir());
    let l1 = Line::through_origin(field, d1.0, d1.1).ok()?;
    let l2 = Line::through_origin(field, d2.0, d2.1).ok()?;
    let mut q = [[AffinePoint::origin(); 2]; 2];
    for (i, l) in [l1, l2].iter().enumerate() {
        for j in 0..2 {
            q[i][j] = l.point_at(field, rng.nonzero(&field));
        }
    }
    let mut nodes: Vec<AffinePoint> = Vec::with_capacity(params.delta());
    for _ in 0..params.delta() {
        let x = AffinePoint::new(rng.element(&field), rng.element(&field));
        // nodes in general position with respect to p: no two on a line through p
        if x == AffinePoint::origin() || nodes.iter().any(|&y| same_direction(field, x, y)) {
            return None;
        }
        nodes.push(x);
    }
    PrymConfiguration::new(field, params, nodes, [l1, l2], q).ok()
}

pub fn sample_configuration(field: Field, params: &PrymParameters, rng: &mut SeededRng) -> Result<PrymConfiguration> {
    for _ in 0..CONFIG_ATTEMPTS {
        if let Some(c) = try_sample(field, params, rng) {
            return Ok(c);
        }
    }
    Err(Error::ResamplingExhausted { attempts: CONFIG_ATTEMPTS, what: "plane configuration".into() })
}

/// Certificates for the base system and the two claims, each over `trials`
/// fresh configurations per prime.
pub fn verify_claims(
    params: &PrymParameters,
    trials: usize,
    primes: &[Field],
    seed: u64,
) -> Result<[DimensionCertificate; 3]> {
    let n = params.n();
    let g = params.g;
    let base = certify_dimension(
        &format!("g{g}/base"),
        |f, rng| Ok((MonomialBasis::plane(n), sample_configuration(f, params, rng)?.base_conditions(params))),
        params.expected_base(),
        trials,
        primes,
        seed,
    )?;
    let c31 = certify_dimension(
        &format!("g{g}/claim31"),
        |f, rng| Ok((MonomialBasis::plane(n - 2), sample_configuration(f, params, rng)?.claim31_conditions(params))),
        params.expected_claim31(),
        trials,
        primes,
        seed,
    )?;
    let c32 = certify_dimension(
        &format!("g{g}/claim32"),
        |f, rng| Ok((MonomialBasis::plane(n), sample_configuration(f, params, rng)?.claim32_conditions(params))),
        params.expected_claim32(),
        trials,
        primes,
        seed,
    )?;
    Ok([base, c31, c32])
}

/// Parameter values of `q_ij` along `r_i`.
pub fn q_parameters(cfg: &PrymConfiguration) -> [[Fe; 2]; 2] {
    let f = cfg.field;
    let t = |i: usize, j: usize| cfg.lines[i].param_of(f, cfg.q[i][j]).expect("q lies on its line");
    [[t(0, 0), t(0, 1)], [t(1, 0), t(1, 1)]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linsys::{solve, Verdict};
    use crate::planeprym::prym_parameters;

    #[test]
    fn sampled_configurations_are_valid() {
        let f = Field::default_primes()[0];
        for seed in 0..20 {
            let params = prym_parameters(5 + seed as u32 % 6).unwrap();
            let c = sample_configuration(f, &params, &mut SeededRng::new(seed)).unwrap();
            let revalidated = PrymConfiguration::new(f, &params, c.nodes.clone(), c.lines, c.q).unwrap();
            assert_eq!(revalidated, c);
        }
    }

    #[test]
    fn fixed_seed_gives_fixed_configuration() {
        let f = Field::default_primes()[0];
        let params = prym_parameters(5).unwrap();
        let a = sample_configuration(f, &params, &mut SeededRng::new(42)).unwrap();
        let b = sample_configuration(f, &params, &mut SeededRng::new(42)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn tiny_field_exhausts_resampling() {
        let f = Field::new(101).unwrap();
        // 101 nodes need 101 distinct directions through p besides r_1, r_2; P^1(F_101) has 102
        let params = prym_parameters(202).unwrap();
        assert_eq!(params.delta, 101);
        assert!(matches!(
            sample_configuration(f, &params, &mut SeededRng::new(1)),
            Err(Error::ResamplingExhausted { .. })
        ));
    }

    #[test]
    fn coincident_q_rejected() {
        let f = Field::default_primes()[0];
        let params = prym_parameters(5).unwrap();
        let c = sample_configuration(f, &params, &mut SeededRng::new(3)).unwrap();
        let q = [c.q[0], c.q[0]];
        assert!(matches!(
            PrymConfiguration::new(f, &params, c.nodes.clone(), c.lines, q),
            Err(Error::InvalidConfiguration(_))
        ));
        let q = [[c.q[0][0], c.q[0][0]], c.q[1]];
        assert!(PrymConfiguration::new(f, &params, c.nodes.clone(), c.lines, q).is_err());
    }

    #[test]
    fn claim_dimensions_for_small_genera() {
        let f = Field::default_primes()[0];
        let p6 = prym_parameters(6).unwrap();
        let c = sample_configuration(f, &p6, &mut SeededRng::new(8)).unwrap();
        let s = solve(f, MonomialBasis::plane(4), c.claim31_conditions(&p6)).unwrap();
        assert_eq!(s.projective_dimension(), 5);
        let p5 = prym_parameters(5).unwrap();
        let c = sample_configuration(f, &p5, &mut SeededRng::new(8)).unwrap();
        let s = solve(f, MonomialBasis::plane(6), c.claim32_conditions(&p5)).unwrap();
        assert_eq!(s.projective_dimension(), 4);
        let base = solve(f, MonomialBasis::plane(6), c.base_conditions(&p5)).unwrap();
        let bare = solve(f, MonomialBasis::plane(6), vec![ConditionSpec::multiplicity(c.p, 2)]).unwrap();
        assert_eq!(bare.projective_dimension() - base.projective_dimension(), 3 * p5.delta as i64);
    }

    #[test]
    fn claims_pass_for_genus_five_and_seven() {
        let primes = Field::default_primes();
        for g in [5, 7] {
            let params = prym_parameters(g).unwrap();
            let certs = verify_claims(&params, 2, &primes, 1).unwrap();
            assert!(certs.iter().all(|c| c.verdict == Verdict::Pass), "{certs:?}");
            let expected: Vec<i64> = certs.iter().map(|c| c.expected).collect();
            if g == 5 {
                assert_eq!(expected, [12, 2, 4]);
            } else {
                assert_eq!(expected, [14, 4, 6]);
            }
        }
    }
}
