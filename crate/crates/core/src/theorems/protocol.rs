//! Success probability of a one-way protocol computed in the original space
//! with imperfect measurements and in measurement space with rank-1
//! projectors.

use rand::Rng;

use crate::error::{Error, Result};
use crate::measurement::{map_to_measurement_space, MeasurementSet};
use crate::numerics::{
    gram, haar_state, haar_unitary, norm_sqr, random::haar_isometry_blocks, tensor, ComplexMatrix, PureState,
};

/// Tolerance for the protocol invariants (completeness, unitarity).
pub const PROTOCOL_TOL: f64 = 1e-10;
/// Largest admissible |original − measurement space| success gap.
pub const EQUIVALENCE_TOL: f64 = 1e-10;
const NEGATIVE_PROBABILITY_TOL: f64 = 1e-12;

/// Bob's success/failure verification operators for one Alice outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationPair {
    pub success: ComplexMatrix,
    pub failure: ComplexMatrix,
}

impl VerificationPair {
    pub fn new(success: ComplexMatrix, failure: ComplexMatrix) -> Self {
        Self { success, failure }
    }

    /// M_y = I, M_n = 0.
    pub fn always_succeed(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim), ComplexMatrix::zeros(dim, dim))
    }

    /// M_y = |k⟩⟨k|, M_n = I − |k⟩⟨k|.
    pub fn basis_check(dim: usize, k: usize) -> Self {
        let mut yes = vec![0.0; dim];
        yes[k] = 1.0;
        let no: Vec<f64> = yes.iter().map(|x| 1.0 - x).collect();
        Self::new(ComplexMatrix::from_real_diagonal(&yes), ComplexMatrix::from_real_diagonal(&no))
    }

    fn completeness_deviation(&self, dim: usize) -> f64 {
        gram(&[self.success.clone(), self.failure.clone()], dim).max_abs_diff(&ComplexMatrix::identity(dim))
    }
}

/// Resource state, Alice's measurement, Bob's conditional unitaries and
/// verification pairs.
#[derive(Debug, Clone)]
pub struct ProtocolSpec {
    state: PureState,
    alice: MeasurementSet,
    bob_unitaries: Vec<ComplexMatrix>,
    verify: Vec<VerificationPair>,
}

impl ProtocolSpec {
    pub fn new(
        state: PureState,
        alice: MeasurementSet,
        bob_unitaries: Vec<ComplexMatrix>,
        verify: Vec<VerificationPair>,
    ) -> Result<Self> {
        alice.ensure_complete()?;
        let n = alice.len();
        for found in [bob_unitaries.len(), verify.len()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        let d_a = alice.dim();
        let d_b = bob_unitaries[0].rows();
        if state.dim() != d_a * d_b {
            return Err(Error::DimensionMismatch { expected: d_a * d_b, found: state.dim() });
        }
        for u in &bob_unitaries {
            if !u.is_square() || u.rows() != d_b {
                return Err(Error::DimensionMismatch { expected: d_b, found: u.rows() });
            }
            let deviation = u.unitary_deviation();
            if deviation > PROTOCOL_TOL {
                return Err(Error::NotUnitary { deviation });
            }
        }
        for pair in &verify {
            for m in [&pair.success, &pair.failure] {
                if !m.is_square() || m.rows() != d_b {
                    return Err(Error::DimensionMismatch { expected: d_b, found: m.rows() });
                }
            }
            let deviation = pair.completeness_deviation(d_b);
            if deviation > PROTOCOL_TOL {
                return Err(Error::Incomplete { deviation, tolerance: PROTOCOL_TOL });
            }
        }
        Ok(Self { state, alice, bob_unitaries, verify })
    }

    /// Every verification succeeds regardless of the outcome.
    pub fn always_succeed(state: PureState, alice: MeasurementSet) -> Result<Self> {
        let d_b = state.dim() / alice.dim().max(1);
        let n = alice.len();
        Self::new(state, alice, vec![ComplexMatrix::identity(d_b); n], vec![VerificationPair::always_succeed(d_b); n])
    }

    /// Bob has no correction and checks that his qubit matches Alice's
    /// outcome label k in the computational basis.
    pub fn correlated_check(state: PureState, alice: MeasurementSet) -> Result<Self> {
        let d_b = state.dim() / alice.dim().max(1);
        let n = alice.len();
        if n > d_b {
            return Err(Error::InvalidParameter(format!("{n} outcomes cannot be checked on a {d_b}-level system")));
        }
        Self::new(
            state,
            alice,
            vec![ComplexMatrix::identity(d_b); n],
            (0..n).map(|k| VerificationPair::basis_check(d_b, k)).collect(),
        )
    }

    /// Haar state, random complete Alice set, Haar unitaries and random
    /// two-outcome verification pairs.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, d_a: usize, d_b: usize, outcomes: usize) -> Result<Self> {
        let state = haar_state(rng, &[d_a, d_b])?;
        let alice = MeasurementSet::random(rng, d_a, outcomes)?;
        let mut unitaries = Vec::with_capacity(outcomes);
        let mut verify = Vec::with_capacity(outcomes);
        for _ in 0..outcomes {
            unitaries.push(haar_unitary(rng, d_b));
            let mut pair = haar_isometry_blocks(rng, d_b, 2);
            let failure = pair.pop().expect("two blocks");
            let success = pair.pop().expect("two blocks");
            verify.push(VerificationPair::new(success, failure));
        }
        Self::new(state, alice, unitaries, verify)
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn alice(&self) -> &MeasurementSet {
        &self.alice
    }

    pub fn bob_unitaries(&self) -> &[ComplexMatrix] {
        &self.bob_unitaries
    }

    pub fn verify(&self) -> &[VerificationPair] {
        &self.verify
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.alice.dim(), self.bob_unitaries[0].rows())
    }

    pub fn outcomes(&self) -> usize {
        self.alice.len()
    }

    /// (M_{y,k}U_k, M_{n,k}U_k): Bob's unitary folded into verification.
    pub fn effective_verification(&self, k: usize) -> (ComplexMatrix, ComplexMatrix) {
        let u = &self.bob_unitaries[k];
        let pair = &self.verify[k];
        (&pair.success * u, &pair.failure * u)
    }

    /// {M_k ⊗ M_{y,k}U_k, M_k ⊗ M_{n,k}U_k} labelled "(k,y)", "(k,n)".
    pub fn joint_measurement_set(&self) -> Result<MeasurementSet> {
        let mut ops = Vec::with_capacity(2 * self.outcomes());
        for (k, (label, m)) in self.alice.labels().iter().zip(self.alice.operators()).enumerate() {
            let (yes, no) = self.effective_verification(k);
            ops.push((format!("({label},y)"), tensor(m, &yes)));
            ops.push((format!("({label},n)"), tensor(m, &no)));
        }
        let tol = self.alice.tolerance().max(PROTOCOL_TOL);
        Ok(MeasurementSet::new(self.state.dim(), ops)?.with_tolerance(tol))
    }
}

/// p_{k,y} and p_{k,n} per Alice outcome k.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable {
    pub success: Vec<f64>,
    pub failure: Vec<f64>,
}

impl OutcomeTable {
    pub fn total(&self) -> f64 {
        self.success.iter().chain(&self.failure).sum()
    }

    pub fn alice_marginals(&self) -> Vec<f64> {
        self.success.iter().zip(&self.failure).map(|(y, n)| y + n).collect()
    }
}

fn clamp_probability(p: f64) -> Result<f64> {
    if p < -NEGATIVE_PROBABILITY_TOL {
        return Err(Error::OutOfRange { value: p, min: 0.0, max: 1.0 });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// p_{k,y} = ⟨ψ| M_k†M_k ⊗ (M_{y,k}U_k)†(M_{y,k}U_k) |ψ⟩, likewise for n.
pub fn outcome_table(spec: &ProtocolSpec) -> Result<OutcomeTable> {
    let psi = spec.state.amplitudes();
    let mut success = Vec::with_capacity(spec.outcomes());
    let mut failure = Vec::with_capacity(spec.outcomes());
    for (k, m) in spec.alice.operators().iter().enumerate() {
        let (yes, no) = spec.effective_verification(k);
        success.push(clamp_probability(norm_sqr(&tensor(m, &yes).apply(psi)?))?);
        failure.push(clamp_probability(norm_sqr(&tensor(m, &no).apply(psi)?))?);
    }
    let table = OutcomeTable { success, failure };
    let deviation = (table.total() - 1.0).abs();
    if deviation > PROTOCOL_TOL {
        return Err(Error::NotNormalized { deviation, tolerance: PROTOCOL_TOL });
    }
    Ok(table)
}

/// Σ_k p_{k,y} with the original state and imperfect measurements.
pub fn success_probability_original(spec: &ProtocolSpec) -> Result<f64> {
    Ok(outcome_table(spec)?.success.iter().sum::<f64>().clamp(0.0, 1.0))
}

/// Σ_m p(y|m) p(m) evaluated on m_S(ψ) with rank-1 projectors
/// |k⟩⟩⟨⟨k| ⊗ |y,k⟩⟩⟨⟨y,k|.
pub fn success_probability_mspace(spec: &ProtocolSpec) -> Result<f64> {
    let image = map_to_measurement_space(&spec.state, &spec.joint_measurement_set()?)?;
    let amps = image.amplitudes();
    let mut total = 0.0;
    for k in 0..spec.outcomes() {
        let (yes, no) = (2 * k, 2 * k + 1);
        // ⟨⟨ψ| (|k⟩⟩⟨⟨k| ⊗ 1) |ψ⟩⟩ sums the two basis vectors carrying label k
        let p_m = amps[yes] * amps[yes] + amps[no] * amps[no];
        let p_y_and_m = amps[yes] * amps[yes];
        if p_m > 0.0 {
            total += (p_y_and_m / p_m) * p_m;
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceCheck {
    pub original: f64,
    pub mspace: f64,
    pub deviation: f64,
    pub pass: bool,
}

pub fn check_protocol_equivalence(spec: &ProtocolSpec) -> Result<EquivalenceCheck> {
    let original = success_probability_original(spec)?;
    let mspace = success_probability_mspace(spec)?;
    let deviation = (original - mspace).abs();
    Ok(EquivalenceCheck { original, mspace, deviation, pass: deviation < EQUIVALENCE_TOL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::rng_from_seed;

    #[test]
    fn perfect_correlated_protocol() {
        let spec = ProtocolSpec::correlated_check(PureState::bell(), MeasurementSet::computational_basis(2)).unwrap();
        let t = outcome_table(&spec).unwrap();
        for k in 0..2 {
            assert!((t.success[k] - 0.5).abs() < 1e-15);
            assert!(t.failure[k].abs() < 1e-15);
        }
        assert!((success_probability_original(&spec).unwrap() - 1.0).abs() < 1e-15);
        assert!((success_probability_mspace(&spec).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn noisy_alice_protocol() {
        let spec = ProtocolSpec::correlated_check(PureState::bell(), MeasurementSet::noisy_pair(0.9).unwrap()).unwrap();
        let t = outcome_table(&spec).unwrap();
        for k in 0..2 {
            assert!((t.success[k] - 0.45).abs() < 1e-15);
            assert!((t.failure[k] - 0.05).abs() < 1e-15);
        }
        assert!((success_probability_original(&spec).unwrap() - 0.9).abs() < 1e-14);
        assert!((success_probability_mspace(&spec).unwrap() - 0.9).abs() < 1e-14);
    }

    #[test]
    fn always_succeed_protocol() {
        let alice = MeasurementSet::noisy_pair(0.8).unwrap();
        let spec = ProtocolSpec::always_succeed(PureState::bell(), alice.clone()).unwrap();
        let t = outcome_table(&spec).unwrap();
        assert!(t.failure.iter().all(|&p| p == 0.0));
        let marg = crate::measurement::outcome_probabilities(&PureState::bell(), &{
            let n = crate::measurement::LocalMeasurementSet::new(alice, MeasurementSet::trivial(2));
            n.joint().unwrap()
        })
        .unwrap();
        for (a, b) in t.alice_marginals().iter().zip(&marg) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((success_probability_original(&spec).unwrap() - 1.0).abs() < 1e-14);
        assert!((success_probability_mspace(&spec).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn invariants_enforced() {
        let alice = MeasurementSet::computational_basis(2);
        let id = ComplexMatrix::identity(2);
        let not_unitary = ComplexMatrix::from_real_diagonal(&[1.0, 0.5]);
        assert!(matches!(
            ProtocolSpec::new(
                PureState::bell(),
                alice.clone(),
                vec![id.clone(), not_unitary],
                vec![VerificationPair::always_succeed(2); 2]
            ),
            Err(Error::NotUnitary { .. })
        ));
        let half = VerificationPair::new(ComplexMatrix::from_real_diagonal(&[1.0, 0.0]), ComplexMatrix::zeros(2, 2));
        assert!(matches!(
            ProtocolSpec::new(PureState::bell(), alice.clone(), vec![id.clone(); 2], vec![half.clone(), half]),
            Err(Error::Incomplete { .. })
        ));
        assert!(matches!(
            ProtocolSpec::new(PureState::bell(), alice, vec![id], vec![VerificationPair::always_succeed(2)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_specs_agree() {
        let mut rng = rng_from_seed(3);
        for _ in 0..25 {
            let spec = ProtocolSpec::random(&mut rng, 3, 2, 3).unwrap();
            let c = check_protocol_equivalence(&spec).unwrap();
            assert!(c.pass, "{c:?}");
        }
    }
}
