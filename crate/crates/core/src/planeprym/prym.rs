use serde::Serialize;

use crate::error::{Error, Result};
use crate::linsys::{solve, ConditionSpec, LinearSystem};
use crate::poly::MonomialBasis;

use super::config::PrymConfiguration;
use super::params::PrymParameters;

/// Forms of degree `n-2` with multiplicity `n-4` at `p`, through the nodes and the four `q_ij`.
///
/// On the normalization these cut `K + l - E_p - sum q_ij`, which the line
/// relation `l ~ E_p + 2 q_i1 + 2 q_i2` identifies with `K + q11 + q12 - q21 - q22`.
pub fn prym_system(cfg: &PrymConfiguration, params: &PrymParameters) -> Result<LinearSystem> {
    let mut conds = vec![ConditionSpec::multiplicity(cfg.p, params.n() - 4)];
    conds.extend(cfg.nodes.iter().map(|&x| ConditionSpec::through(x)));
    conds.extend(cfg.q_points().iter().map(|&x| ConditionSpec::through(x)));
    solve(cfg.field, MonomialBasis::plane(params.n() - 2), conds)
}

/// The same system without the four `q` conditions.
pub fn prym_system_without_q(cfg: &PrymConfiguration, params: &PrymParameters) -> Result<LinearSystem> {
    let mut conds = vec![ConditionSpec::multiplicity(cfg.p, params.n() - 4)];
    conds.extend(cfg.nodes.iter().map(|&x| ConditionSpec::through(x)));
    solve(cfg.field, MonomialBasis::plane(params.n() - 2), conds)
}

/// Adjoints of degree `n-3`: multiplicity `n-5` at `p`, through the nodes.
pub fn adjoint_system(cfg: &PrymConfiguration, params: &PrymParameters) -> Result<LinearSystem> {
    let mut conds = vec![ConditionSpec::multiplicity(cfg.p, params.n() - 5)];
    conds.extend(cfg.nodes.iter().map(|&x| ConditionSpec::through(x)));
    solve(cfg.field, MonomialBasis::plane(params.n() - 3), conds)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaCheck {
    pub canonical_dimension: usize,
    pub after_q11_q12: usize,
    pub nontrivial: bool,
}

/// `h^0(K - q11 - q12) = g - 2` gives `h^0(q11 + q12) = 1`, so `q11 + q12` and
/// `q21 + q22` are not linearly equivalent.
pub fn eta_nontrivial(cfg: &PrymConfiguration, params: &PrymParameters) -> Result<EtaCheck> {
    let adj = adjoint_system(cfg, params)?;
    let g = params.g as usize;
    if adj.vector_dimension != g {
        return Err(Error::AdjointDimensionAnomaly { expected: g, found: adj.vector_dimension });
    }
    let mut conds = adj.conditions.clone();
    conds.push(ConditionSpec::through(cfg.q[0][0]));
    conds.push(ConditionSpec::through(cfg.q[0][1]));
    let cut = solve(cfg.field, adj.basis.clone(), conds)?;
    Ok(EtaCheck {
        canonical_dimension: adj.vector_dimension,
        after_q11_q12: cut.vector_dimension,
        nontrivial: cut.vector_dimension + 2 == g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Field, SeededRng};
    use crate::planeprym::{prym_parameters, sample_configuration};
    use crate::poly::{AffinePoint, Line};

    #[test]
    fn prym_dimensions() {
        let f = Field::default_primes()[0];
        for g in 5..=9 {
            let params = prym_parameters(g).unwrap();
            let cfg = sample_configuration(f, &params, &mut SeededRng::new(g as u64)).unwrap();
            let sys = prym_system(&cfg, &params).unwrap();
            assert_eq!(sys.vector_dimension, g as usize - 1);
            let wide = prym_system_without_q(&cfg, &params).unwrap();
            assert_eq!(wide.vector_dimension, g as usize + 3);
        }
        let p5 = prym_parameters(5).unwrap();
        let cfg = sample_configuration(f, &p5, &mut SeededRng::new(1)).unwrap();
        assert_eq!(prym_system(&cfg, &p5).unwrap().rows, 3 + 4 + 4);
    }

    #[test]
    fn eta_dimensions() {
        let f = Field::default_primes()[0];
        for (g, before, after) in [(5, 5, 3), (6, 6, 4)] {
            let params = prym_parameters(g).unwrap();
            let cfg = sample_configuration(f, &params, &mut SeededRng::new(2)).unwrap();
            let e = eta_nontrivial(&cfg, &params).unwrap();
            assert_eq!((e.canonical_dimension, e.after_q11_q12, e.nontrivial), (before, after, true));
        }
    }

    #[test]
    fn nodes_collinear_with_p_break_the_adjoint_count() {
        let f = Field::default_primes()[0];
        let params = prym_parameters(5).unwrap();
        let mut rng = SeededRng::new(5);
        let good = sample_configuration(f, &params, &mut rng).unwrap();
        // four nodes on one line through p, off r_1 and r_2
        let (du, dv) = (rng.nonzero(&f), rng.nonzero(&f));
        let line = Line::through_origin(f, du, dv).unwrap();
        let nodes: Vec<AffinePoint> = (1..=4).map(|k| line.point_at(f, f.elem(k))).collect();
        let cfg = PrymConfiguration::new(f, &params, nodes, good.lines, good.q).unwrap();
        assert_eq!(
            eta_nontrivial(&cfg, &params).unwrap_err(),
            Error::AdjointDimensionAnomaly { expected: 5, found: 6 }
        );
    }
}
