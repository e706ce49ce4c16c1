//! Plane models of Prym curves: a degree-`n` curve with an ordinary `(n-4)`-fold
//! point, `delta` nodes and four tangency points on two lines through the
//! multiple point.

mod audit;
mod certificate;
mod config;
mod nodes;
mod params;
mod prym;

pub(crate) use audit::singular_gcd_audit;
pub use audit::{audit_member, is_node, point_count, resultant_audit, PointCount, ResultantAudit, SingularityAudit};
pub use config::{q_parameters, sample_configuration, verify_claims, PrymConfiguration};
pub use params::{prym_parameters, PrymParameters};
pub use nodes::{sample_curve_points, verify_two_nodes, GluingRecord, SpotCheck, TwoNodeReport};
pub use prym::{adjoint_system, eta_nontrivial, prym_system, prym_system_without_q, EtaCheck};
pub use certificate::{run_prym, Dims, ParamsRecord, PrymCertificate, PrymRunOptions, PRIME_POLICY, SEMICONTINUITY_NOTE};
