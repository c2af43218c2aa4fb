//! Entanglement measures for bipartite pure states, two-qubit mixed states and
//! measurement-space images. Entropies are in bits.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measurement::{map_local, LocalMeasurementSet, MeasurementSpaceState};
use crate::numerics::{eig_hermitian, schmidt, svd, ComplexMatrix, DensityMatrix, PureState};

/// Eigenvalues of ρ at or below this are treated as numerical zeros when
/// building the eigen-ensemble for the mixed-state concurrence.
const ENSEMBLE_FLOOR: f64 = 1e-14;
const RANGE_SLACK: f64 = 1e-12;

/// Cut of a composite system into two groups of subsystem indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteSplit {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl BipartiteSplit {
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Self {
        Self { left, right }
    }

    /// Subsystem 0 against subsystem 1.
    pub fn pair() -> Self {
        Self::new(vec![0], vec![1])
    }

    /// The natural A|B cut of a two-subsystem state.
    pub fn for_state(psi: &PureState) -> Result<Self> {
        if psi.dims().len() == 2 {
            Ok(Self::pair())
        } else {
            Err(Error::InvalidSplit(format!(
                "state has {} subsystems; an explicit split is required",
                psi.dims().len()
            )))
        }
    }

    /// (d_left, d_right) for `psi`.
    pub fn dims_for(&self, psi: &PureState) -> Result<(usize, usize)> {
        let m = psi.amplitude_matrix(&self.left, &self.right)?;
        Ok((m.rows(), m.cols()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntanglementMeasure {
    Entropy,
    Concurrence,
    Eof,
}

impl EntanglementMeasure {
    pub fn name(self) -> &'static str {
        match self {
            Self::Entropy => "entropy",
            Self::Concurrence => "concurrence",
            Self::Eof => "eof",
        }
    }
}

impl fmt::Display for EntanglementMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntanglementMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entropy" => Ok(Self::Entropy),
            "concurrence" => Ok(Self::Concurrence),
            "eof" => Ok(Self::Eof),
            other => Err(Error::InvalidParameter(format!("unknown entanglement measure {other:?}"))),
        }
    }
}

/// One evaluated entanglement value.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub measure: EntanglementMeasure,
    pub value: f64,
    pub split: (usize, usize),
    pub input: String,
}

/// −Σ p log₂ p with 0·log 0 = 0.
pub fn shannon_entropy_bits(probs: &[f64]) -> f64 {
    let h: f64 = probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum();
    h.max(0.0)
}

pub fn binary_entropy(x: f64) -> f64 {
    shannon_entropy_bits(&[x, 1.0 - x])
}

pub fn entropy_of_entanglement(psi: &PureState, split: &BipartiteSplit) -> Result<f64> {
    let s = schmidt(psi, &split.left, &split.right)?;
    Ok(shannon_entropy_bits(&s.weights()))
}

fn require_two_qubits(dims: &[usize]) -> Result<()> {
    if dims == [2, 2] {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("expected two-qubit dims [2, 2], found {dims:?}")))
    }
}

/// C = 2|a₀₀a₁₁ − a₀₁a₁₀|.
pub fn concurrence_pure(psi: &PureState) -> Result<f64> {
    require_two_qubits(psi.dims())?;
    let a = psi.amplitudes();
    Ok((2.0 * (a[0] * a[3] - a[1] * a[2]).norm()).min(1.0))
}

/// √(2(1 − Σ w²)) over the Schmidt weights w. Reduces to
/// [`concurrence_pure`] on two qubits and is defined for any split.
pub fn generalized_concurrence(psi: &PureState, split: &BipartiteSplit) -> Result<f64> {
    let s = schmidt(psi, &split.left, &split.right)?;
    let purity: f64 = s.weights().iter().map(|w| w * w).sum();
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// Y ⊗ Y in the computational basis.
fn sigma_y_sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[0.0, 0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[-1.0, 0.0, 0.0, 0.0],
    ])
    .expect("4x4")
}

/// Wootters concurrence max(0, λ₁ − λ₂ − λ₃ − λ₄).
///
/// The λᵢ (square roots of the eigenvalues of ρ(Y⊗Y)ρ*(Y⊗Y)) are computed as
/// the singular values of τ_ij = w_iᵀ (Y⊗Y) w_j over the subnormalized
/// eigen-ensemble w_i = √p_i v_i of ρ, which avoids square roots of
/// near-zero eigenvalues.
pub fn concurrence_mixed(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho.dims())?;
    rho.validate(crate::numerics::DENSITY_TOL)?;
    let eig = eig_hermitian(rho.matrix())?;
    let ensemble: Vec<Vec<Complex64>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > ENSEMBLE_FLOOR)
        .map(|(k, &p)| eig.vector(k).into_iter().map(|z| z * p.sqrt()).collect())
        .collect();
    if ensemble.is_empty() {
        return Ok(0.0);
    }
    let yy = sigma_y_sigma_y();
    let n = ensemble.len();
    let tau = ComplexMatrix::from_fn(n, n, |i, j| {
        let yw = yy.apply(&ensemble[j]).expect("4-vector");
        ensemble[i].iter().zip(&yw).map(|(a, b)| a * b).sum()
    });
    let mut lambdas = svd(&tau).values;
    lambdas.resize(4, 0.0);
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Two-qubit entanglement of formation h((1 + √(1 − c²))/2) in bits.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&c) {
        return Err(Error::OutOfRange { value: c, min: 0.0, max: 1.0 });
    }
    let c = c.clamp(0.0, 1.0);
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

fn grouped_two_qubit(psi: &PureState, split: &BipartiteSplit) -> Result<PureState> {
    let m = psi.amplitude_matrix(&split.left, &split.right)?;
    if (m.rows(), m.cols()) != (2, 2) {
        return Err(Error::InvalidParameter(format!(
            "concurrence needs a 2 x 2 split, found {} x {}",
            m.rows(),
            m.cols()
        )));
    }
    PureState::new(vec![2, 2], m.into_data())
}

/// Evaluates `measure` on a pure state across `split`.
pub fn entanglement(psi: &PureState, split: &BipartiteSplit, measure: EntanglementMeasure) -> Result<f64> {
    match measure {
        EntanglementMeasure::Entropy => entropy_of_entanglement(psi, split),
        EntanglementMeasure::Concurrence => concurrence_pure(&grouped_two_qubit(psi, split)?),
        EntanglementMeasure::Eof => eof_from_concurrence(concurrence_pure(&grouped_two_qubit(psi, split)?)?),
    }
}

/// Entanglement of a measurement-space state.
///
/// Uses the bipartite structure attached by a local measurement set, or an
/// explicit `(n_A, n_B)` factorization when the caller supplies one.
pub fn measurement_space_entanglement(
    state: &MeasurementSpaceState,
    measure: EntanglementMeasure,
    factorization: Option<(usize, usize)>,
) -> Result<f64> {
    let psi = match factorization {
        Some((na, nb)) => state.factorized(na, nb)?,
        None => state.to_bipartite_state()?,
    };
    entanglement(&psi, &BipartiteSplit::pair(), measure)
}

/// E_m(ψ) = E(m_S(ψ)) for local measurements, split n_A | n_B.
pub fn operational_entanglement(
    psi: &PureState,
    local: &LocalMeasurementSet,
    measure: EntanglementMeasure,
) -> Result<EntanglementReport> {
    let image = map_local(psi, local)?;
    let shape = image.structure().ok_or(Error::NoBipartiteStructure)?;
    let value = measurement_space_entanglement(&image, measure, None)?;
    Ok(EntanglementReport {
        measure,
        value,
        split: shape,
        input: format!("m_S(psi) over {} x {} local outcomes", shape.0, shape.1),
    })
}
