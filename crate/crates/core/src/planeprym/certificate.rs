use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{derive_seed, label_tag, Field, SeededRng, MEDIUM_PRIME};
use crate::linsys::{sample_member, solve, DimensionCertificate, Verdict};
use crate::poly::{Form, MonomialBasis};

use super::audit::{audit_member, point_count, SingularityAudit};
use super::config::{sample_configuration, verify_claims, PrymConfiguration};
use super::nodes::{verify_two_nodes, GluingRecord, SpotCheck, TwoNodeReport};
use super::params::{prym_parameters, PrymParameters};
use super::prym::{eta_nontrivial, prym_system, EtaCheck};

pub const SEMICONTINUITY_NOTE: &str = "two-node property certified on one instance over F_p; \
     transfer to characteristic zero is a semicontinuity heuristic";

pub const PRIME_POLICY: &str = "PASS requires the expected dimension at some trial for each of two distinct primes";

#[derive(Clone, Debug, Serialize)]
pub struct ParamsRecord {
    pub h: u32,
    pub eps: u32,
    pub n: u32,
    pub delta: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub base: i64,
    pub claim31: i64,
    pub claim32: i64,
    /// Vector dimension of the Prym-canonical system.
    pub prym: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrymCertificate {
    pub g: u32,
    pub prime: u64,
    pub seed: u64,
    pub params: ParamsRecord,
    pub dims: Dims,
    pub expected_dims: Dims,
    pub claims: Vec<DimensionCertificate>,
    pub configuration: PrymConfiguration,
    pub member: String,
    pub audit: SingularityAudit,
    pub gluings: Vec<GluingRecord>,
    pub images_distinct: bool,
    pub observed_pairs: Vec<[String; 2]>,
    pub base_point_free: bool,
    pub basis_invariant: bool,
    pub eta: Option<EtaCheck>,
    pub eta_nontrivial: bool,
    pub spot: SpotCheck,
    pub prime_policy: &'static str,
    pub heuristic: &'static str,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct PrymRunOptions {
    pub trials: usize,
    pub primes: Vec<Field>,
    pub spot_samples: usize,
    pub point_count: bool,
}

impl Default for PrymRunOptions {
    fn default() -> PrymRunOptions {
        PrymRunOptions { trials: 3, primes: Field::default_primes().to_vec(), spot_samples: 200, point_count: false }
    }
}

const INSTANCE_ATTEMPTS: usize = 8;

/// A configuration and a member of the tangency system, resampled only when
/// the member is vertical at a tangency point.
fn sample_instance(
    field: Field,
    params: &PrymParameters,
    rng: &mut SeededRng,
) -> Result<(PrymConfiguration, Form)> {
    for _ in 0..INSTANCE_ATTEMPTS {
        let cfg = sample_configuration(field, params, rng)?;
        let sys = solve(field, MonomialBasis::plane(params.n()), cfg.claim32_conditions(params))?;
        let gamma = sample_member(&sys, rng, &[], &cfg.lines)?;
        let bv = gamma.to_bivar().deriv_v();
        if cfg.q_points().iter().all(|q| !bv.eval(q.u, q.v).is_zero()) {
            return Ok((cfg, gamma));
        }
    }
    Err(Error::ResamplingExhausted { attempts: INSTANCE_ATTEMPTS, what: "plane instance".into() })
}

fn instance_dims(cfg: &PrymConfiguration, params: &PrymParameters, prym: usize) -> Result<Dims> {
    let f = cfg.field;
    let n = params.n();
    let dim = |basis, conds| solve(f, basis, conds).map(|s| s.projective_dimension());
    Ok(Dims {
        base: dim(MonomialBasis::plane(n), cfg.base_conditions(params))?,
        claim31: dim(MonomialBasis::plane(n - 2), cfg.claim31_conditions(params))?,
        claim32: dim(MonomialBasis::plane(n), cfg.claim32_conditions(params))?,
        prym,
    })
}

/// Runs the whole plane pipeline for genus `g` at the first prime of `opts`.
pub fn run_prym(g: u32, seed: u64, opts: &PrymRunOptions) -> Result<PrymCertificate> {
    let params = prym_parameters(g)?;
    let field = *opts.primes.first().ok_or_else(|| Error::InvalidConfiguration("no primes given".into()))?;
    let claims = verify_claims(&params, opts.trials, &opts.primes, seed)?;
    let claims_verdict = claims.iter().fold(Verdict::Pass, |v, c| v.join(c.verdict));

    let mut rng = SeededRng::new(derive_seed(seed, &[label_tag("prym-instance"), g as u64, field.modulus()]));
    let (cfg, gamma) = sample_instance(field, &params, &mut rng)?;
    let mut audit = audit_member(&gamma, &cfg, &params, &mut rng.fork(label_tag("audit")))?;
    if opts.point_count {
        let medium = Field::new(MEDIUM_PRIME)?;
        let mut mrng = SeededRng::new(derive_seed(seed, &[label_tag("point-count"), g as u64]));
        let (mcfg, mgamma) = sample_instance(medium, &params, &mut mrng)?;
        let maudit = audit_member(&mgamma, &mcfg, &params, &mut mrng)?;
        let mut pc = point_count(&mgamma, &mcfg, &params)?;
        pc.pass &= maudit.passes();
        audit.point_count = Some(pc);
    }

    let prym = prym_system(&cfg, &params)?;
    let dims = instance_dims(&cfg, &params, prym.vector_dimension)?;
    let expected_dims = Dims {
        base: params.expected_base(),
        claim31: params.expected_claim31(),
        claim32: params.expected_claim32(),
        prym: g as usize - 1,
    };
    let eta = match eta_nontrivial(&cfg, &params) {
        Ok(e) => Some(e),
        Err(Error::AdjointDimensionAnomaly { .. }) => None,
        Err(e) => return Err(e),
    };
    let eta_ok = eta.as_ref().is_some_and(|e| e.nontrivial);

    let nodes = if prym.vector_dimension == g as usize - 1 {
        Some(verify_two_nodes(&prym.solution_basis, &gamma, &cfg, &params, &mut rng.fork(label_tag("nodes")), opts.spot_samples)?)
    } else {
        None
    };
    let nodes_ok = nodes.as_ref().is_some_and(TwoNodeReport::passes);
    let instance_ok = audit.passes() && dims == expected_dims && eta_ok && nodes_ok;
    let verdict = if !instance_ok { Verdict::Fail } else { claims_verdict };
    let nodes = nodes.unwrap_or(TwoNodeReport {
        gluings: Vec::new(),
        images_distinct: false,
        observed_pairs: Vec::new(),
        base_point_free: false,
        basis_invariant: false,
        spot: SpotCheck { pairs: 0, separated: 0, immersed: 0 },
    });
    Ok(PrymCertificate {
        g,
        prime: field.modulus(),
        seed,
        params: ParamsRecord { h: params.h, eps: params.eps, n: params.n, delta: params.delta },
        dims,
        expected_dims,
        claims: claims.to_vec(),
        configuration: cfg,
        member: gamma.to_text(),
        audit,
        gluings: nodes.gluings,
        images_distinct: nodes.images_distinct,
        observed_pairs: nodes.observed_pairs,
        base_point_free: nodes.base_point_free,
        basis_invariant: nodes.basis_invariant,
        eta,
        eta_nontrivial: eta_ok,
        spot: nodes.spot,
        prime_policy: PRIME_POLICY,
        heuristic: SEMICONTINUITY_NOTE,
        verdict,
    })
}
