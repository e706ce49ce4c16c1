//! Linear conditions on forms, their solution spaces, and dimension certificates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{derive_seed, label_tag, rank_and_kernel, Fe, Field, FieldMatrix, SeededRng};
use crate::poly::{jet_indices, series, smooth_branch, AffinePoint, Form, Line, MonomialBasis};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionSpec {
    /// All jets of order `< multiplicity` vanish at `point`.
    MultiplicityAtPoint { point: AffinePoint, multiplicity: usize },
    /// Passes through `point` with intersection multiplicity `>= 2` with `line`.
    TangencyOnLine { point: AffinePoint, line: Line },
    /// Restricted to the smooth branch of `curve` through `point`, vanishes to order `>= order`.
    VanishOnCurveJet { point: AffinePoint, curve: Form, order: usize },
}

impl ConditionSpec {
    pub fn multiplicity(point: AffinePoint, multiplicity: usize) -> ConditionSpec {
        ConditionSpec::MultiplicityAtPoint { point, multiplicity }
    }

    pub fn through(point: AffinePoint) -> ConditionSpec {
        ConditionSpec::MultiplicityAtPoint { point, multiplicity: 1 }
    }

    pub fn tangency(point: AffinePoint, line: Line) -> ConditionSpec {
        ConditionSpec::TangencyOnLine { point, line }
    }

    /// Number of scalar rows this condition contributes.
    pub fn row_count(&self) -> usize {
        match self {
            ConditionSpec::MultiplicityAtPoint { multiplicity: m, .. } => m * (m + 1) / 2,
            ConditionSpec::TangencyOnLine { .. } => 2,
            ConditionSpec::VanishOnCurveJet { order, .. } => *order,
        }
    }

    fn rows(&self, field: Field, basis: &MonomialBasis) -> Result<Vec<Vec<Fe>>> {
        match self {
            ConditionSpec::MultiplicityAtPoint { point, multiplicity } => {
                if *multiplicity == 0 {
                    return Ok(Vec::new());
                }
                Ok(basis.jet_rows(field, point.u, point.v, multiplicity - 1))
            }
            ConditionSpec::TangencyOnLine { point, line } => {
                let jr = basis.jet_rows(field, point.u, point.v, 1);
                let (du, dv) = line.direction(field);
                // jet rows are ordered (0,0), (1,0), (0,1)
                let deriv = jr[1].iter().zip(&jr[2]).map(|(&a, &b)| field.add(field.mul(du, a), field.mul(dv, b))).collect();
                Ok(vec![jr[0].clone(), deriv])
            }
            ConditionSpec::VanishOnCurveJet { point, curve, order } => {
                if *order == 0 {
                    return Ok(Vec::new());
                }
                let k = *order;
                let branch = smooth_branch(field, &curve.jets(*point, (k - 1).max(1)), k - 1)?;
                let jr = basis.jet_rows(field, point.u, point.v, k - 1);
                let weights = composition_weights(field, &branch, k);
                let mut rows = vec![vec![Fe::ZERO; basis.len()]; k];
                for (idx, w) in weights.iter().enumerate() {
                    for (n, &c) in w.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (x, &y) in rows[n].iter_mut().zip(&jr[idx]) {
                            *x = field.add(*x, field.mul(c, y));
                        }
                    }
                }
                Ok(rows)
            }
        }
    }

    /// Re-checks the condition on `form` through jets and line restrictions.
    pub fn is_satisfied_by(&self, form: &Form) -> Result<bool> {
        let field = form.field();
        match self {
            ConditionSpec::MultiplicityAtPoint { point, multiplicity } => {
                if *multiplicity == 0 {
                    return Ok(true);
                }
                Ok(form.jets(*point, multiplicity - 1).vanishes_below(*multiplicity))
            }
            ConditionSpec::TangencyOnLine { point, line } => {
                let r = form.restrict_to_line(line);
                let t = line.param_of(field, *point).ok_or(Error::PointNotOnCurve)?;
                Ok(r.is_zero() || r.root_multiplicity(t) >= 2)
            }
            ConditionSpec::VanishOnCurveJet { point, curve, order } => {
                if *order == 0 {
                    return Ok(true);
                }
                let branch = smooth_branch(field, &curve.jets(*point, (order - 1).max(1)), order - 1)?;
                let s = series::compose(field, &form.jets(*point, order - 1), &branch, *order);
                Ok(s.iter().all(|x| x.is_zero()))
            }
        }
    }
}

/// For each jet index `(i, j)` of order `< len`, the series `du^i dv^j` mod `s^len`.
fn composition_weights(field: Field, branch: &series::Branch, len: usize) -> Vec<Vec<Fe>> {
    let mut w = branch.w.clone();
    w.resize(len, Fe::ZERO);
    let mut s = vec![Fe::ZERO; len];
    if len > 1 {
        s[1] = Fe::ONE;
    }
    let (du, dv) = if branch.along_u { (s, w) } else { (w, s) };
    let mut one = vec![Fe::ZERO; len];
    one[0] = Fe::ONE;
    let mut pu = vec![one.clone()];
    let mut pv = vec![one];
    for k in 1..len {
        pu.push(series::trunc_mul(field, &pu[k - 1], &du, len));
        pv.push(series::trunc_mul(field, &pv[k - 1], &dv, len));
    }
    jet_indices(len - 1).map(|(i, j)| series::trunc_mul(field, &pu[i], &pv[j], len)).collect()
}

/// Stacks the rows of every condition, evaluated on each basis monomial.
pub fn assemble(field: Field, basis: &MonomialBasis, conditions: &[ConditionSpec]) -> Result<FieldMatrix> {
    let mut m = FieldMatrix::zero(field, 0, basis.len());
    for c in conditions {
        for r in c.rows(field, basis)? {
            m.push_row(&r);
        }
    }
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub field: Field,
    pub basis: MonomialBasis,
    pub conditions: Vec<ConditionSpec>,
    pub solution_basis: Vec<Form>,
    pub rows: usize,
    pub vector_dimension: usize,
}

impl LinearSystem {
    pub fn projective_dimension(&self) -> i64 {
        self.vector_dimension as i64 - 1
    }

    /// Whether `form` satisfies every condition of the system.
    pub fn contains(&self, form: &Form) -> Result<bool> {
        for c in &self.conditions {
            if !c.is_satisfied_by(form)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The member `sum_k coeffs[k] * solution_basis[k]`.
    pub fn combination(&self, coeffs: &[Fe]) -> Form {
        assert_eq!(coeffs.len(), self.vector_dimension);
        let mut acc = Form::zero(self.field, self.basis.clone());
        for (&c, b) in coeffs.iter().zip(&self.solution_basis) {
            acc = acc.add(&b.scale(c));
        }
        acc
    }
}

pub fn solve(field: Field, basis: MonomialBasis, conditions: Vec<ConditionSpec>) -> Result<LinearSystem> {
    let m = assemble(field, &basis, &conditions)?;
    let (_, kernel) = rank_and_kernel(&m);
    let solution_basis: Vec<Form> = kernel.into_iter().map(|v| Form::new(field, basis.clone(), v)).collect();
    Ok(LinearSystem {
        field,
        vector_dimension: solution_basis.len(),
        rows: m.rows(),
        basis,
        conditions,
        solution_basis,
    })
}

const SAMPLE_ATTEMPTS: usize = 32;

/// A random member avoiding the given points and not containing the given lines.
pub fn sample_member(
    sys: &LinearSystem,
    rng: &mut SeededRng,
    avoid_points: &[AffinePoint],
    avoid_lines: &[Line],
) -> Result<Form> {
    if sys.vector_dimension == 0 {
        return Err(Error::EmptySystem);
    }
    for _ in 0..SAMPLE_ATTEMPTS {
        let coeffs: Vec<Fe> = (0..sys.vector_dimension).map(|_| rng.nonzero(&sys.field)).collect();
        let f = sys.combination(&coeffs);
        let bad_point = avoid_points.iter().any(|&q| f.eval(q).is_zero());
        let bad_line = avoid_lines.iter().any(|l| f.restrict_to_line(l).is_zero());
        if !f.is_zero() && !bad_point && !bad_line {
            return Ok(f);
        }
    }
    Err(Error::ResamplingExhausted { attempts: SAMPLE_ATTEMPTS, what: "system member".into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Commutative join: any FAIL dominates, then any INCONCLUSIVE.
    pub fn join(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }

    pub fn from_flag(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trial {
    pub prime: u64,
    pub seed: u64,
    pub computed: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionCertificate {
    pub claim: String,
    pub expected: i64,
    pub trials: Vec<Trial>,
    pub verdict: Verdict,
}

/// Trials per prime needed before excess dimension counts as a refutation.
pub const FAIL_TRIALS: usize = 5;

/// PASS needs a hit at every prime (at least two primes); FAIL needs excess
/// at every trial with `FAIL_TRIALS` trials at each of at least two primes.
pub fn verdict_for(expected: i64, trials: &[Trial]) -> Verdict {
    let mut primes: Vec<u64> = trials.iter().map(|t| t.prime).collect();
    primes.sort_unstable();
    primes.dedup();
    if primes.len() < 2 {
        return Verdict::Inconclusive;
    }
    let hit_everywhere = primes.iter().all(|&p| trials.iter().any(|t| t.prime == p && t.computed == expected));
    if hit_everywhere {
        return Verdict::Pass;
    }
    let all_excess = trials.iter().all(|t| t.computed > expected);
    let enough = primes.iter().all(|&p| trials.iter().filter(|t| t.prime == p).count() >= FAIL_TRIALS);
    if all_excess && enough {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    }
}

/// Runs `trials` independent instances per prime and certifies the projective dimension.
pub fn certify_dimension<B>(
    claim: &str,
    builder: B,
    expected: i64,
    trials: usize,
    primes: &[Field],
    seed: u64,
) -> Result<DimensionCertificate>
where
    B: Fn(Field, &mut SeededRng) -> Result<(MonomialBasis, Vec<ConditionSpec>)>,
{
    assert!(expected >= -1, "expected projective dimension below -1");
    let mut log = Vec::with_capacity(trials * primes.len());
    for &field in primes {
        for t in 0..trials {
            let trial_seed = derive_seed(seed, &[label_tag(claim), field.modulus(), t as u64]);
            let mut rng = SeededRng::new(trial_seed);
            let (basis, conditions) = builder(field, &mut rng)?;
            let sys = solve(field, basis, conditions)?;
            let computed = sys.projective_dimension();
            if computed < expected {
                return Err(Error::InternalError(format!(
                    "{claim}: computed dimension {computed} below expected {expected}"
                )));
            }
            log.push(Trial { prime: field.modulus(), seed: trial_seed, computed });
        }
    }
    Ok(DimensionCertificate { claim: claim.to_string(), expected, verdict: verdict_for(expected, &log), trials: log })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big() -> Field {
        Field::default_primes()[0]
    }

    fn random_point(field: Field, rng: &mut SeededRng) -> AffinePoint {
        AffinePoint::new(rng.element(&field), rng.element(&field))
    }

    #[test]
    fn double_point_at_origin_selects_low_monomials() {
        let f = big();
        let m = assemble(f, &MonomialBasis::plane(2), &[ConditionSpec::multiplicity(AffinePoint::origin(), 2)]).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 6));
        for r in 0..3 {
            for c in 0..6 {
                assert_eq!(m.get(r, c), if r == c { Fe::ONE } else { Fe::ZERO });
            }
        }
    }

    #[test]
    fn four_double_points_on_quartics() {
        let f = big();
        let mut rng = SeededRng::new(1);
        let conds: Vec<_> = (0..4).map(|_| ConditionSpec::multiplicity(random_point(f, &mut rng), 2)).collect();
        let m = assemble(f, &MonomialBasis::plane(4), &conds).unwrap();
        assert_eq!((m.rows(), m.cols(), m.rank()), (12, 15, 12));
    }

    #[test]
    fn empty_condition_list() {
        let sys = solve(big(), MonomialBasis::plane(5), vec![]).unwrap();
        assert_eq!(sys.vector_dimension, 21);
    }

    #[test]
    fn members_satisfy_conditions() {
        let f = big();
        let mut rng = SeededRng::new(4);
        let q = random_point(f, &mut rng);
        let quad = Form::from_terms(f, MonomialBasis::plane(2), &[(2, 0, 1), (0, 2, 3), (1, 1, 1)]).unwrap();
        let mut coeffs = quad.coeffs().to_vec();
        coeffs[0] = f.neg(quad.eval(q));
        let conic = Form::new(f, MonomialBasis::plane(2), coeffs);
        let line = Line::through(f, random_point(f, &mut rng), random_point(f, &mut rng)).unwrap();
        let on_line = line.point_at(f, rng.element(&f));
        let conds = vec![
            ConditionSpec::multiplicity(random_point(f, &mut rng), 3),
            ConditionSpec::tangency(on_line, line),
            ConditionSpec::VanishOnCurveJet { point: q, curve: conic.clone(), order: 3 },
        ];
        let sys = solve(f, MonomialBasis::plane(5), conds).unwrap();
        assert_eq!(sys.rows, 6 + 2 + 3);
        assert_eq!(sys.vector_dimension, 21 - 11);
        for b in &sys.solution_basis {
            assert!(sys.contains(b).unwrap());
        }
        let m = sample_member(&sys, &mut rng, &[], &[]).unwrap();
        assert!(sys.contains(&m).unwrap());
    }

    #[test]
    fn curve_jet_at_singular_point_is_rejected() {
        let f = big();
        let node = Form::from_terms(f, MonomialBasis::plane(2), &[(1, 1, 1)]).unwrap();
        let conds = vec![ConditionSpec::VanishOnCurveJet { point: AffinePoint::origin(), curve: node, order: 2 }];
        assert_eq!(assemble(f, &MonomialBasis::plane(3), &conds).unwrap_err(), Error::SmoothnessViolation);
    }

    #[test]
    fn sampling() {
        let f = big();
        let mut rng = SeededRng::new(2);
        let lines = solve(f, MonomialBasis::plane(1), vec![]).unwrap();
        let m = sample_member(&lines, &mut rng, &[AffinePoint::origin()], &[]).unwrap();
        assert!(!m.coeff(0, 0).is_zero());

        let q = random_point(f, &mut rng);
        let one = solve(f, MonomialBasis::plane(1), vec![
            ConditionSpec::through(q),
            ConditionSpec::through(random_point(f, &mut rng)),
        ])
        .unwrap();
        assert_eq!(one.vector_dimension, 1);
        let m = sample_member(&one, &mut rng, &[], &[]).unwrap();
        assert!(crate::exact::proportional(f, m.coeffs(), one.solution_basis[0].coeffs()));
        assert!(matches!(sample_member(&one, &mut rng, &[q], &[]), Err(Error::ResamplingExhausted { .. })));

        let empty = solve(f, MonomialBasis::plane(0), vec![ConditionSpec::through(q)]).unwrap();
        assert_eq!(sample_member(&empty, &mut rng, &[], &[]).unwrap_err(), Error::EmptySystem);
    }

    #[test]
    fn verdict_policy() {
        let t = |prime, computed| Trial { prime, seed: 0, computed };
        assert_eq!(verdict_for(3, &[t(1, 3), t(2, 4), t(2, 3)]), Verdict::Pass);
        assert_eq!(verdict_for(3, &[t(1, 3), t(1, 3)]), Verdict::Inconclusive);
        assert_eq!(verdict_for(3, &[t(1, 4), t(2, 3)]), Verdict::Inconclusive);
        let excess: Vec<Trial> = (0..5).flat_map(|_| [t(1, 5), t(2, 5)]).collect();
        assert_eq!(verdict_for(3, &excess), Verdict::Fail);
        assert_eq!(verdict_for(3, &excess[..8]), Verdict::Inconclusive);
    }

    #[test]
    fn collapsed_configuration_is_not_pass() {
        let primes = Field::default_primes();
        let builder = |field: Field, rng: &mut SeededRng| {
            let q = random_point(field, rng);
            Ok((MonomialBasis::plane(4), vec![ConditionSpec::multiplicity(q, 2); 4]))
        };
        let cert = certify_dimension("collapsed", builder, 2, 5, &primes, 1).unwrap();
        assert!(cert.trials.iter().all(|t| t.computed == 11));
        assert_eq!(cert.verdict, Verdict::Fail);
        let short = certify_dimension("collapsed", builder, 2, 3, &primes, 1).unwrap();
        assert_eq!(short.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn dimension_below_expected_is_internal_error() {
        let primes = Field::default_primes();
        let builder = |_: Field, _: &mut SeededRng| Ok((MonomialBasis::plane(1), vec![]));
        assert!(matches!(certify_dimension("bad", builder, 5, 1, &primes, 1), Err(Error::InternalError(_))));
    }
}
