use serde::Serialize;

use crate::error::Result;
use crate::exact::{derive_seed, label_tag, Fe, Field, SeededRng};
use crate::linsys::Verdict;

use super::canonical::{canonical_map, quadric_net, rank3_from_ruling, QuadricNet, Ruling, RulingQuadric};
use super::square::{sample_points_on_x, sample_x, v_family_system, CurveAudit, SquareConfig};
use super::theta::{segre_prym_gluings, theta_and_torsion_checks, SegreReport, ThetaChecks};

pub const PENCIL_NOTE: &str = "two autoresidual pencils are certified to exist; a third is not excluded";

pub const NET_POINTS: usize = 30;
pub const HOLDOUT_POINTS: usize = 10;
pub const WITNESS_POINTS: usize = 50;

#[derive(Clone, Debug, Serialize)]
pub struct Genus5Certificate {
    pub seed: u64,
    pub prime: u64,
    pub square: SquareConfig,
    pub system_dimension: i64,
    pub member: String,
    pub audit: CurveAudit,
    pub canonical_dimension: usize,
    /// Canonical images of the witness sample are all nonzero.
    pub base_point_free: bool,
    pub net: QuadricNet,
    pub ruling_quadrics: [RulingQuadric; 2],
    pub quadrics_distinct: bool,
    pub theta: ThetaChecks,
    pub segre: SegreReport,
    pub pencil_note: &'static str,
    pub verdict: Verdict,
}

impl Genus5Certificate {
    fn passes(&self) -> bool {
        self.system_dimension == 12
            && self.audit.passes()
            && self.canonical_dimension == 5
            && self.base_point_free
            && self.net.quadrics.len() == 3
            && self.net.holdout_ok
            && self.ruling_quadrics.iter().all(|q| q.rank == 3 && q.in_net)
            && self.quadrics_distinct
            && self.theta.eta_nontrivial
            && self.segre.passes()
    }
}

/// One genus-5 instance at `field`, fully determined by `(seed, prime)`.
pub fn run_genus5(seed: u64, field: Field) -> Result<Genus5Certificate> {
    let mut rng = SeededRng::new(derive_seed(seed, &[label_tag("genus5"), field.modulus()]));
    let square = SquareConfig::random(field, &mut rng)?;
    let sys = v_family_system(&square)?;
    let (x, audit) = sample_x(&sys, &square, &mut rng)?;
    let canon = canonical_map(&square)?;

    let mut prng = rng.fork(label_tag("points"));
    let pts = sample_points_on_x(&x, &square, &mut prng, NET_POINTS + HOLDOUT_POINTS + WITNESS_POINTS)?;
    let images: Vec<Vec<Fe>> = pts.iter().map(|&p| canon.evaluate(p)).collect();
    let (fit, rest) = images.split_at(NET_POINTS);
    let net = quadric_net(field, fit, &rest[..HOLDOUT_POINTS])?;
    let witness_pts = &pts[NET_POINTS + HOLDOUT_POINTS..];
    let base_point_free = images[NET_POINTS + HOLDOUT_POINTS..].iter().all(|c| c.iter().any(|y| !y.is_zero()));

    let mut qrng = rng.fork(label_tag("rulings"));
    let q1 = rank3_from_ruling(&canon, &x, &square, Ruling::U, &net, &mut qrng)?;
    let q2 = rank3_from_ruling(&canon, &x, &square, Ruling::V, &net, &mut qrng)?;
    let quadrics_distinct = !q1.quadric.proportional_to(&q2.quadric);

    let theta = theta_and_torsion_checks(&x, &square, witness_pts, &mut rng.fork(label_tag("theta")))?;
    let segre = segre_prym_gluings(&x, &square)?;

    let mut cert = Genus5Certificate {
        seed,
        prime: field.modulus(),
        square,
        system_dimension: sys.projective_dimension(),
        member: x.to_text(),
        audit,
        canonical_dimension: canon.dimension(),
        base_point_free,
        net,
        ruling_quadrics: [q1, q2],
        quadrics_distinct,
        theta,
        segre,
        pencil_note: PENCIL_NOTE,
        verdict: Verdict::Fail,
    };
    cert.verdict = Verdict::from_flag(cert.passes());
    Ok(cert)
}
