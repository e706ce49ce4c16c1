//! Curves of bidegree `(4, 4)` on `P^1 x P^1` with four nodes at the corners
//! of a square of fibers: genus 5, canonical model in `P^4` on two rank-3
//! quadrics, and the Prym-canonical model through the Segre embedding.

mod canonical;
mod certificate;
mod square;
mod theta;

pub use canonical::{canonical_map, quadric_net, rank3_from_ruling, CanonicalMap, QuadricNet, QuadricP4, Ruling, RulingQuadric, MIN_NET_POINTS};
pub use certificate::{run_genus5, Genus5Certificate, HOLDOUT_POINTS, NET_POINTS, PENCIL_NOTE, WITNESS_POINTS};
pub use square::{
    audit_curve, biform_resultant_audit, check_fiber_components, sample_points_on_x, sample_x, v_family_system,
    CurveAudit, SquareConfig, ARITHMETIC_GENUS, GEOMETRIC_GENUS, NODE_COUNT,
};
pub use theta::{segre_prym_gluings, theta_and_torsion_checks, SegreGluing, SegreReport, ThetaChecks, ThetaWitness};
