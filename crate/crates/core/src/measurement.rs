//! Generalized measurement sets and the map into measurement space.
//!
//! A state |ψ⟩ and a complete set {M_m} determine the measurement-space state
//! Σ_m √⟨ψ|M_m†M_m|ψ⟩ |m⟩⟩ with one orthonormal basis vector per outcome.

use std::collections::HashSet;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::random::haar_isometry_blocks;
use crate::numerics::{gram, norm_sqr, tensor, ComplexMatrix, PureState};

/// Default completeness tolerance on Σ M†M = I.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Tolerance on Σ p_m = 1 and on the measurement-space norm.
pub const PROBABILITY_SUM_TOL: f64 = 1e-10;
const NEGATIVE_PROBABILITY_TOL: f64 = 1e-12;

/// Result of checking Σ M†M = I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletenessReport {
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// max-norm of Σ M†M − I over a list of `dim × dim` operators.
pub fn validate_completeness(dim: usize, operators: &[ComplexMatrix], tol: f64) -> CompletenessReport {
    let max_deviation = if operators.iter().any(|m| m.rows() != dim || m.cols() != dim) {
        f64::INFINITY
    } else {
        gram(operators, dim).max_abs_diff(&ComplexMatrix::identity(dim))
    };
    CompletenessReport { max_deviation, tolerance: tol, pass: max_deviation <= tol }
}

/// Ordered, labelled list of measurement operators on one space.
///
/// Construction checks shapes and label uniqueness and records the
/// completeness deviation; operations that consume the set reject it when
/// that deviation exceeds the set's tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    dim: usize,
    labels: Vec<String>,
    operators: Vec<ComplexMatrix>,
    completeness_deviation: f64,
    tolerance: f64,
    structure: Option<(usize, usize)>,
}

impl MeasurementSet {
    pub fn new(dim: usize, operators: Vec<(String, ComplexMatrix)>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::Empty("measurement set".into()));
        }
        let mut seen = HashSet::new();
        let mut labels = Vec::with_capacity(operators.len());
        let mut ops = Vec::with_capacity(operators.len());
        for (label, op) in operators {
            if op.rows() != dim || op.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: if op.rows() != dim { op.rows() } else { op.cols() },
                });
            }
            if !seen.insert(label.clone()) {
                return Err(Error::DuplicateLabel(label));
            }
            labels.push(label);
            ops.push(op);
        }
        let completeness_deviation = validate_completeness(dim, &ops, COMPLETENESS_TOL).max_deviation;
        Ok(Self { dim, labels, operators: ops, completeness_deviation, tolerance: COMPLETENESS_TOL, structure: None })
    }

    /// Labels "0", "1", … in order.
    pub fn from_operators(dim: usize, operators: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(dim, operators.into_iter().enumerate().map(|(i, m)| (i.to_string(), m)).collect())
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    /// {I}: one outcome that always fires.
    pub fn trivial(dim: usize) -> Self {
        Self::new(dim, vec![("I".into(), ComplexMatrix::identity(dim))]).expect("identity is complete")
    }

    /// Rank-1 projectors onto the computational basis.
    pub fn computational_basis(dim: usize) -> Self {
        let ops = (0..dim)
            .map(|k| {
                let mut diag = vec![0.0; dim];
                diag[k] = 1.0;
                (k.to_string(), ComplexMatrix::from_real_diagonal(&diag))
            })
            .collect();
        Self::new(dim, ops).expect("basis projectors are complete")
    }

    /// Qubit detector pair of efficiency η:
    /// M₀ = √η|0⟩⟨0| + √(1−η)|1⟩⟨1|, M₁ = √(1−η)|0⟩⟨0| + √η|1⟩⟨1|.
    pub fn noisy_pair(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::OutOfRange { value: eta, min: 0.0, max: 1.0 });
        }
        let (a, b) = (eta.sqrt(), (1.0 - eta).sqrt());
        Self::new(
            2,
            vec![
                ("0".into(), ComplexMatrix::from_real_diagonal(&[a, b])),
                ("1".into(), ComplexMatrix::from_real_diagonal(&[b, a])),
            ],
        )
    }

    /// Random complete set: the first `dim` columns of a Haar unitary on
    /// `outcomes·dim` dimensions, cut into `outcomes` square blocks.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> Result<Self> {
        if outcomes == 0 || dim == 0 {
            return Err(Error::Empty("random measurement set".into()));
        }
        Self::from_operators(dim, haar_isometry_blocks(rng, dim, outcomes))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn completeness_deviation(&self) -> f64 {
        self.completeness_deviation
    }

    /// (n_A, n_B) when the set is a product of two local sets.
    pub fn structure(&self) -> Option<(usize, usize)> {
        self.structure
    }

    pub fn validate_completeness(&self, tol: f64) -> CompletenessReport {
        CompletenessReport {
            max_deviation: self.completeness_deviation,
            tolerance: tol,
            pass: self.completeness_deviation <= tol,
        }
    }

    pub(crate) fn ensure_complete(&self) -> Result<()> {
        if self.completeness_deviation <= self.tolerance {
            Ok(())
        } else {
            Err(Error::Incomplete { deviation: self.completeness_deviation, tolerance: self.tolerance })
        }
    }
}

/// Independent measurement sets for Alice and Bob.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMeasurementSet {
    pub alice: MeasurementSet,
    pub bob: MeasurementSet,
}

impl LocalMeasurementSet {
    pub fn new(alice: MeasurementSet, bob: MeasurementSet) -> Self {
        Self { alice, bob }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.alice.dim, self.bob.dim)
    }

    pub fn outcome_shape(&self) -> (usize, usize) {
        (self.alice.len(), self.bob.len())
    }

    pub fn validate(&self) -> Result<()> {
        self.alice.ensure_complete()?;
        self.bob.ensure_complete()
    }

    /// Product set {M_a ⊗ M_b} labelled "(a,b)" in row-major order.
    pub fn joint(&self) -> Result<MeasurementSet> {
        self.validate()?;
        let mut ops = Vec::with_capacity(self.alice.len() * self.bob.len());
        for (la, ma) in self.alice.labels.iter().zip(&self.alice.operators) {
            for (lb, mb) in self.bob.labels.iter().zip(&self.bob.operators) {
                ops.push((format!("({la},{lb})"), tensor(ma, mb)));
            }
        }
        let tol = self.alice.tolerance.max(self.bob.tolerance);
        let mut set = MeasurementSet::new(self.alice.dim * self.bob.dim, ops)?.with_tolerance(tol);
        set.structure = Some(self.outcome_shape());
        Ok(set)
    }
}

/// Image of a pure state in measurement space.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSpaceState {
    labels: Vec<String>,
    amplitudes: Vec<f64>,
    structure: Option<(usize, usize)>,
}

impl MeasurementSpaceState {
    pub fn new(labels: Vec<String>, amplitudes: Vec<f64>, structure: Option<(usize, usize)>) -> Result<Self> {
        if labels.len() != amplitudes.len() {
            return Err(Error::DimensionMismatch { expected: labels.len(), found: amplitudes.len() });
        }
        if amplitudes.is_empty() {
            return Err(Error::Empty("measurement-space state".into()));
        }
        if let Some(&a) = amplitudes.iter().find(|a| !(**a >= 0.0)) {
            return Err(Error::OutOfRange { value: a, min: 0.0, max: 1.0 });
        }
        let deviation = (amplitudes.iter().map(|a| a * a).sum::<f64>() - 1.0).abs();
        if deviation > PROBABILITY_SUM_TOL {
            return Err(Error::NotNormalized { deviation, tolerance: PROBABILITY_SUM_TOL });
        }
        if let Some((na, nb)) = structure {
            if na * nb != amplitudes.len() {
                return Err(Error::DimensionMismatch { expected: amplitudes.len(), found: na * nb });
            }
        }
        Ok(Self { labels, amplitudes, structure })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }

    pub fn structure(&self) -> Option<(usize, usize)> {
        self.structure
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    fn to_complex(&self) -> Vec<Complex64> {
        self.amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect()
    }

    /// Bipartite pure state on (n_A, n_B) from the attached structure.
    pub fn to_bipartite_state(&self) -> Result<PureState> {
        let (na, nb) = self.structure.ok_or(Error::NoBipartiteStructure)?;
        self.factorized(na, nb)
    }

    /// Bipartite pure state for an explicit factorization n = n_A · n_B.
    pub fn factorized(&self, na: usize, nb: usize) -> Result<PureState> {
        if na * nb != self.len() {
            return Err(Error::InvalidSplit(format!("{na} x {nb} does not factor {} outcomes", self.len())));
        }
        PureState::new(vec![na, nb], self.to_complex())
    }

    /// Single-system pure state of dimension n.
    pub fn to_state(&self) -> PureState {
        PureState::new(vec![self.len()], self.to_complex()).expect("normalized on construction")
    }
}

/// p_m = ⟨ψ|M_m†M_m|ψ⟩ in set order.
pub fn outcome_probabilities(psi: &PureState, set: &MeasurementSet) -> Result<Vec<f64>> {
    if psi.dim() != set.dim {
        return Err(Error::DimensionMismatch { expected: set.dim, found: psi.dim() });
    }
    set.ensure_complete()?;
    let mut probs = Vec::with_capacity(set.len());
    for op in &set.operators {
        // ‖M ψ‖² = ⟨ψ|M†M|ψ⟩
        let p = norm_sqr(&op.apply(psi.amplitudes())?);
        if p < -NEGATIVE_PROBABILITY_TOL {
            return Err(Error::OutOfRange { value: p, min: 0.0, max: 1.0 });
        }
        probs.push(p.clamp(0.0, 1.0));
    }
    Ok(probs)
}

/// m_S(ψ): amplitudes √p_m in the set's label order, zero-probability
/// outcomes kept.
pub fn map_to_measurement_space(psi: &PureState, set: &MeasurementSet) -> Result<MeasurementSpaceState> {
    let probs = outcome_probabilities(psi, set)?;
    let total: f64 = probs.iter().sum();
    // only reachable when the caller loosened the completeness tolerance
    let rescale = if (total - 1.0).abs() > PROBABILITY_SUM_TOL { total } else { 1.0 };
    let amplitudes = probs.iter().map(|p| (p / rescale).sqrt()).collect();
    MeasurementSpaceState::new(set.labels.clone(), amplitudes, set.structure)
}

/// m_S(ψ) for Alice/Bob product measurements, carrying (n_A, n_B) structure.
pub fn map_local(psi: &PureState, local: &LocalMeasurementSet) -> Result<MeasurementSpaceState> {
    map_to_measurement_space(psi, &local.joint()?)
}
