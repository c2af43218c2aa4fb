//! Explicit LOCC construction taking |ψ⟩ to its measurement-space image.
//!
//! Each party dilates its measurement onto an ancilla, measures its system in
//! the Fourier transform of the eigenbasis of the conditional block in front
//! of every ancilla label, then rotates the post-measurement system vector to
//! |0⟩ with a unitary controlled by the ancilla. Alice acts first; Bob's blocks
//! are taken from the post-Alice state.
//!
//! Amplitudes of the working state are indexed `(sys_A, sys_B, anc_A, anc_B)`
//! in row-major order.

use num_complex::Complex64;

use crate::entanglement::{concurrence_mixed, entropy_of_entanglement, BipartiteSplit};
use crate::error::{Error, Result};
use crate::measurement::{map_local, LocalMeasurementSet, MeasurementSpaceState};
use crate::numerics::{
    eig_hermitian, fourier_matrix, inner, norm_sqr, unitary_with_first_column, ComplexMatrix, DensityMatrix,
    EigenDecomposition, PureState,
};

/// Tolerance on the 1/n uniformity of the Fourier-step outcomes.
pub const UNIFORMITY_TOL: f64 = 1e-10;
/// Tolerance on ancilla-diagonal bookkeeping against m_S(ψ)².
pub const DIAGONAL_TOL: f64 = 1e-9;
/// Slack allowed when comparing entanglement before and after the map.
pub const MONOTONICITY_TOL: f64 = 1e-9;
/// Blocks with trace at or below this carry no weight; their branch unitary
/// is the identity.
pub const ZERO_BRANCH_TOL: f64 = 1e-14;
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
}

/// Shape of a dilated state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Layout {
    d_a: usize,
    d_b: usize,
    n_a: usize,
    n_b: usize,
}

impl Layout {
    fn from_dims(dims: &[usize]) -> Result<Self> {
        match *dims {
            [d_a, d_b, n_a, n_b] => Ok(Self { d_a, d_b, n_a, n_b }),
            _ => Err(Error::InvalidParameter(format!("expected dilated dims [d_A, d_B, n_A, n_B], found {dims:?}"))),
        }
    }

    fn dims(&self) -> Vec<usize> {
        vec![self.d_a, self.d_b, self.n_a, self.n_b]
    }

    fn index(&self, i: usize, j: usize, a: usize, b: usize) -> usize {
        ((i * self.d_b + j) * self.n_a + a) * self.n_b + b
    }

    fn system_dim(&self, party: Party) -> usize {
        match party {
            Party::Alice => self.d_a,
            Party::Bob => self.d_b,
        }
    }

    fn labels(&self, party: Party) -> usize {
        match party {
            Party::Alice => self.n_a,
            Party::Bob => self.n_b,
        }
    }

    /// Amplitude index for (party system level, party ancilla label, spectator
    /// multi-index) where the spectator enumerates the other party's system
    /// and ancilla.
    fn party_index(&self, party: Party, level: usize, label: usize, spectator: usize) -> usize {
        match party {
            Party::Alice => {
                let (j, b) = (spectator / self.n_b, spectator % self.n_b);
                self.index(level, j, label, b)
            }
            Party::Bob => {
                let (i, a) = (spectator / self.n_a, spectator % self.n_a);
                self.index(i, level, a, label)
            }
        }
    }

    fn spectators(&self, party: Party) -> usize {
        match party {
            Party::Alice => self.d_b * self.n_b,
            Party::Bob => self.d_a * self.n_a,
        }
    }
}

/// U|ψ⟩|0⟩|0⟩ = Σ M_a ⊗ M_b |ψ⟩|a⟩|b⟩ on (sys_A, sys_B, anc_A, anc_B).
pub fn build_dilation(psi: &PureState, local: &LocalMeasurementSet) -> Result<PureState> {
    local.validate()?;
    let (d_a, d_b) = local.dims();
    if psi.dim() != d_a * d_b {
        return Err(Error::DimensionMismatch { expected: d_a * d_b, found: psi.dim() });
    }
    let (n_a, n_b) = local.outcome_shape();
    let layout = Layout { d_a, d_b, n_a, n_b };
    let psi_m = ComplexMatrix::new(d_a, d_b, psi.amplitudes().to_vec())?;
    let mut amps = vec![Complex64::new(0.0, 0.0); d_a * d_b * n_a * n_b];
    for (a, ma) in local.alice.operators().iter().enumerate() {
        let left = ma * &psi_m;
        for (b, mb) in local.bob.operators().iter().enumerate() {
            // (M_a ⊗ M_b)ψ reshaped to d_A × d_B is M_a Ψ M_bᵀ
            let out = &left * &mb.transpose();
            for i in 0..d_a {
                for j in 0..d_b {
                    amps[layout.index(i, j, a, b)] = out[(i, j)];
                }
            }
        }
    }
    PureState::new(layout.dims(), amps)
}

/// Unnormalized conditional block of `party` in front of each of its ancilla
/// labels m: Σ over the other party of the traced, m-diagonal part.
pub fn conditional_blocks(dilated: &PureState, party: Party) -> Result<Vec<ComplexMatrix>> {
    let layout = Layout::from_dims(dilated.dims())?;
    Ok(blocks_of(&layout, dilated.amplitudes(), party))
}

fn blocks_of(layout: &Layout, amps: &[Complex64], party: Party) -> Vec<ComplexMatrix> {
    let d = layout.system_dim(party);
    let spectators = layout.spectators(party);
    (0..layout.labels(party))
        .map(|m| {
            ComplexMatrix::from_fn(d, d, |r, c| {
                (0..spectators)
                    .map(|s| amps[layout.party_index(party, r, m, s)] * amps[layout.party_index(party, c, m, s)].conj())
                    .sum()
            })
        })
        .collect()
}

/// Fourier-rotated eigenbases of the conditional blocks and the total
/// probability of each outcome j.
#[derive(Debug, Clone)]
pub struct FourierStep {
    pub eigen: Vec<EigenDecomposition>,
    /// `vectors[m][j]` is ω_m^j.
    pub vectors: Vec<Vec<Vec<Complex64>>>,
    pub outcome_probabilities: Vec<f64>,
    /// 1/n for the n-level system.
    pub expected: f64,
    pub max_deviation: f64,
    pub uniform: bool,
    pub block_traces: Vec<f64>,
    pub degenerate: Vec<bool>,
}

impl FourierStep {
    pub fn projector(&self, m: usize, j: usize) -> ComplexMatrix {
        ComplexMatrix::projector(&self.vectors[m][j])
    }

    pub fn any_degenerate(&self) -> bool {
        self.degenerate.iter().any(|&d| d)
    }
}

/// ω_m^j = (1/√n) Σ_k e^{2πijk/n} φ_m^k over each block's eigenvectors φ_m^k.
///
/// A deviation from uniform outcome probabilities is reported in the result,
/// not raised.
pub fn fourier_step(blocks: &[ComplexMatrix]) -> Result<FourierStep> {
    let first = blocks.first().ok_or_else(|| Error::Empty("conditional blocks".into()))?;
    let n = first.rows();
    let f = fourier_matrix(n);
    let mut eigen = Vec::with_capacity(blocks.len());
    let mut vectors = Vec::with_capacity(blocks.len());
    let mut probs = vec![0.0; n];
    let mut traces = Vec::with_capacity(blocks.len());
    let mut degenerate = Vec::with_capacity(blocks.len());
    for block in blocks {
        if block.rows() != n || !block.is_square() {
            return Err(Error::DimensionMismatch { expected: n, found: block.rows() });
        }
        let e = eig_hermitian(block)?;
        let omegas: Vec<Vec<Complex64>> = (0..n)
            .map(|j| {
                let mut w = vec![Complex64::new(0.0, 0.0); n];
                for k in 0..n {
                    let coeff = f[(j, k)];
                    for (wr, vr) in w.iter_mut().zip(e.vector(k)) {
                        *wr += coeff * vr;
                    }
                }
                w
            })
            .collect();
        for (j, w) in omegas.iter().enumerate() {
            probs[j] += inner(w, &block.apply(w)?).re;
        }
        traces.push(block.trace().re);
        degenerate.push(e.has_degeneracy(DEGENERACY_TOL));
        eigen.push(e);
        vectors.push(omegas);
    }
    let total: f64 = traces.iter().sum();
    let expected = total / n as f64;
    let max_deviation = probs.iter().map(|p| (p - expected).abs()).fold(0.0, f64::max);
    Ok(FourierStep {
        eigen,
        vectors,
        outcome_probabilities: probs,
        expected,
        max_deviation,
        uniform: max_deviation <= UNIFORMITY_TOL,
        block_traces: traces,
        degenerate,
    })
}

/// Record of one party's measure-and-rotate step.
#[derive(Debug, Clone)]
pub struct PartyStep {
    pub party: Party,
    pub blocks: Vec<ComplexMatrix>,
    pub fourier: FourierStep,
    pub outcome: usize,
    /// Probability of `outcome` conditioned on earlier steps.
    pub outcome_probability: f64,
    /// U_m with U_m ω_m^j = |0⟩; identity on zero-weight labels.
    pub conditional_unitaries: Vec<ComplexMatrix>,
    pub skipped_labels: Vec<usize>,
}

/// Applies `op_for(m)` to the party's system index for every ancilla label m.
fn apply_controlled(
    layout: &Layout,
    amps: &mut [Complex64],
    party: Party,
    op_for: impl Fn(usize) -> ComplexMatrix,
) -> Result<()> {
    let d = layout.system_dim(party);
    for m in 0..layout.labels(party) {
        let op = op_for(m);
        for s in 0..layout.spectators(party) {
            let idx: Vec<usize> = (0..d).map(|lvl| layout.party_index(party, lvl, m, s)).collect();
            let v: Vec<Complex64> = idx.iter().map(|&i| amps[i]).collect();
            for (&i, z) in idx.iter().zip(op.apply(&v)?) {
                amps[i] = z;
            }
        }
    }
    Ok(())
}

fn party_step(layout: &Layout, amps: &mut [Complex64], party: Party, outcome: usize) -> Result<PartyStep> {
    let d = layout.system_dim(party);
    if outcome >= d {
        return Err(Error::IndexOutOfRange { index: outcome, count: d });
    }
    let blocks = blocks_of(layout, amps, party);
    let fourier = fourier_step(&blocks)?;

    // P = Σ_m |ω_m^j⟩⟨ω_m^j| ⊗ |m⟩⟨m|
    apply_controlled(layout, amps, party, |m| fourier.projector(m, outcome))?;
    let p = norm_sqr(amps);
    if !(p > ZERO_BRANCH_TOL) {
        return Err(Error::InvalidParameter(format!("outcome {outcome} has zero probability")));
    }
    let scale = 1.0 / p.sqrt();
    amps.iter_mut().for_each(|z| *z *= scale);

    let mut skipped = Vec::new();
    let mut unitaries = Vec::with_capacity(blocks.len());
    for (m, tr) in fourier.block_traces.iter().enumerate() {
        if *tr <= ZERO_BRANCH_TOL {
            skipped.push(m);
            unitaries.push(ComplexMatrix::identity(d));
        } else {
            unitaries.push(unitary_with_first_column(&fourier.vectors[m][outcome])?.adjoint());
        }
    }
    apply_controlled(layout, amps, party, |m| unitaries[m].clone())?;

    Ok(PartyStep {
        party,
        blocks,
        fourier,
        outcome,
        outcome_probability: p,
        conditional_unitaries: unitaries,
        skipped_labels: skipped,
    })
}

/// One outcome branch (j_A, j_B) of the construction.
#[derive(Debug, Clone)]
pub struct LoccTrace {
    pub dilated: PureState,
    pub alice: PartyStep,
    pub bob: PartyStep,
    pub final_state: PureState,
    /// Weight left outside sys_A = sys_B = |0⟩ (zero up to rounding).
    pub system_residual: f64,
    /// Ancilla state of this branch on (n_A, n_B).
    pub ancilla: PureState,
    pub ancilla_density: DensityMatrix,
    pub ancilla_diagonal: Vec<f64>,
    /// m_S(ψ) for the same local set.
    pub target: MeasurementSpaceState,
    /// max |diag − m_S(ψ)²| for this branch alone.
    pub branch_diagonal_deviation: f64,
    /// |⟨⟨m_S(ψ)|ancilla⟩⟩|².
    pub fidelity: f64,
    /// P(j_A) · P(j_B | j_A).
    pub branch_probability: f64,
    pub degenerate: bool,
}

/// Runs the construction for Alice outcome `j_a` and Bob outcome `j_b`.
pub fn run_locc_construction(
    psi: &PureState,
    local: &LocalMeasurementSet,
    j_a: usize,
    j_b: usize,
) -> Result<LoccTrace> {
    let dilated = build_dilation(psi, local)?;
    let target = map_local(psi, local)?;
    run_from_dilation(dilated, &target, j_a, j_b)
}

fn run_from_dilation(dilated: PureState, target: &MeasurementSpaceState, j_a: usize, j_b: usize) -> Result<LoccTrace> {
    let layout = Layout::from_dims(dilated.dims())?;
    let mut amps = dilated.amplitudes().to_vec();
    let alice = party_step(&layout, &mut amps, Party::Alice, j_a)?;
    let bob = party_step(&layout, &mut amps, Party::Bob, j_b)?;

    let mut ancilla_amps = Vec::with_capacity(layout.n_a * layout.n_b);
    for a in 0..layout.n_a {
        for b in 0..layout.n_b {
            ancilla_amps.push(amps[layout.index(0, 0, a, b)]);
        }
    }
    let kept = norm_sqr(&ancilla_amps);
    let system_residual = (1.0 - kept).max(0.0);
    let final_state = PureState::normalized(layout.dims(), amps)?;
    let ancilla = PureState::normalized(vec![layout.n_a, layout.n_b], ancilla_amps)?;
    let ancilla_density = ancilla.density();
    let ancilla_diagonal = ancilla_density.diagonal();
    let target_probs = target.probabilities();
    let branch_diagonal_deviation = max_deviation(&ancilla_diagonal, &target_probs);
    let target_vec: Vec<Complex64> = target.amplitudes().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let fidelity = inner(&target_vec, ancilla.amplitudes()).norm_sqr();
    let branch_probability = alice.outcome_probability * bob.outcome_probability;
    let degenerate = alice.fourier.any_degenerate() || bob.fourier.any_degenerate();
    Ok(LoccTrace {
        dilated,
        alice,
        bob,
        final_state,
        system_residual,
        ancilla,
        ancilla_density,
        ancilla_diagonal,
        target: target.clone(),
        branch_diagonal_deviation,
        fidelity,
        branch_probability,
        degenerate,
    })
}

fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// All outcome branches and the ancilla state they leave on average.
#[derive(Debug, Clone)]
pub struct LoccEnsemble {
    pub branches: Vec<LoccTrace>,
    /// Σ_branches P(branch) |anc⟩⟨anc|: the ancilla after the LOCC map with
    /// the classical outcome record discarded.
    pub ancilla_density: DensityMatrix,
    pub ancilla_diagonal: Vec<f64>,
    pub target: MeasurementSpaceState,
    /// max |diag(ρ_anc) − m_S(ψ)²|.
    pub diagonal_deviation: f64,
    /// ⟨⟨m_S(ψ)| ρ_anc |m_S(ψ)⟩⟩.
    pub fidelity: f64,
    pub max_branch_diagonal_deviation: f64,
    pub max_uniformity_deviation: f64,
    pub total_probability: f64,
    pub degenerate: bool,
}

impl LoccEnsemble {
    /// Wootters concurrence of ρ_anc when both ancillas are qubits.
    pub fn ancilla_concurrence(&self) -> Result<Option<f64>> {
        if self.ancilla_density.dims() == [2, 2] {
            concurrence_mixed(&self.ancilla_density).map(Some)
        } else {
            Ok(None)
        }
    }

    /// Σ P(branch) E(anc_branch) in bits.
    pub fn mean_branch_entropy(&self) -> Result<f64> {
        let split = BipartiteSplit::pair();
        self.branches
            .iter()
            .try_fold(0.0, |acc, b| Ok(acc + b.branch_probability * entropy_of_entanglement(&b.ancilla, &split)?))
    }

    pub fn min_fidelity(&self) -> f64 {
        self.branches.iter().map(|b| b.fidelity).fold(f64::INFINITY, f64::min)
    }
}

/// Runs every (j_A, j_B) branch and assembles the outcome-averaged ancilla.
pub fn run_locc_all_outcomes(psi: &PureState, local: &LocalMeasurementSet) -> Result<LoccEnsemble> {
    let dilated = build_dilation(psi, local)?;
    let target = map_local(psi, local)?;
    let (d_a, d_b) = local.dims();
    let mut branches = Vec::with_capacity(d_a * d_b);
    for j_a in 0..d_a {
        for j_b in 0..d_b {
            branches.push(run_from_dilation(dilated.clone(), &target, j_a, j_b)?);
        }
    }
    let total_probability: f64 = branches.iter().map(|b| b.branch_probability).sum();
    let weighted: Vec<(f64, &DensityMatrix)> =
        branches.iter().map(|b| (b.branch_probability / total_probability, &b.ancilla_density)).collect();
    let ancilla_density = DensityMatrix::mixture(&weighted)?;
    let ancilla_diagonal = ancilla_density.diagonal();
    let diagonal_deviation = max_deviation(&ancilla_diagonal, &target.probabilities());
    let target_vec: Vec<Complex64> = target.amplitudes().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let fidelity = ancilla_density.expectation(&target_vec)?;
    let max_branch_diagonal_deviation = branches.iter().map(|b| b.branch_diagonal_deviation).fold(0.0, f64::max);
    let max_uniformity_deviation =
        branches.iter().flat_map(|b| [b.alice.fourier.max_deviation, b.bob.fourier.max_deviation]).fold(0.0, f64::max);
    let degenerate = branches.iter().any(|b| b.degenerate);
    Ok(LoccEnsemble {
        branches,
        ancilla_density,
        ancilla_diagonal,
        target,
        diagonal_deviation,
        fidelity,
        max_branch_diagonal_deviation,
        max_uniformity_deviation,
        total_probability,
        degenerate,
    })
}
