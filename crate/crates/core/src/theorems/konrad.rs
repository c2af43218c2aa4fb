//! Evolution of two-qubit concurrence under local channels.
//!
//! For a one-sided channel L the concurrence factorizes,
//! C((L⊗1)ψ) = C((L⊗1)φ⁺) · C(ψ). With channels on both sides the product
//! of the two one-sided factors is an upper bound.

use rand::Rng;

use crate::entanglement::{concurrence_mixed, concurrence_pure};
use crate::error::{Error, Result};
use crate::numerics::random::haar_isometry_blocks;
use crate::numerics::{gram, Complex64, ComplexMatrix, DensityMatrix, PureState};

pub const KRAUS_TOL: f64 = 1e-10;
pub const KONRAD_TOL: f64 = 1e-8;

/// Completely positive trace-preserving map given by Kraus operators.
#[derive(Debug, Clone)]
pub struct Channel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl Channel {
    pub fn new(dim: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Empty("Kraus operators".into()));
        }
        for k in &kraus {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: k.rows().max(k.cols()) });
            }
        }
        let deviation = gram(&kraus, dim).max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > KRAUS_TOL {
            return Err(Error::Incomplete { deviation, tolerance: KRAUS_TOL });
        }
        Ok(Self { dim, kraus })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, kraus: vec![ComplexMatrix::identity(dim)] }
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let dim = u.rows();
        Self::new(dim, vec![u])
    }

    /// ρ ↦ I/2 on a qubit, Kraus set {I, X, Y, Z}/2.
    pub fn fully_depolarizing_qubit() -> Self {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let paulis = [[one, zero, zero, one], [zero, one, one, zero], [zero, -i, i, zero], [one, zero, zero, -one]];
        let kraus = paulis.iter().map(|p| ComplexMatrix::new(2, 2, p.to_vec()).expect("2x2").scale_real(0.5)).collect();
        Self { dim: 2, kraus }
    }

    /// Amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::OutOfRange { value: gamma, min: 0.0, max: 1.0 });
        }
        let k0 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - gamma).sqrt()]])?;
        let k1 = ComplexMatrix::from_real_rows(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]])?;
        Self::new(2, vec![k0, k1])
    }

    /// Random channel from slicing a Haar isometry into `n_kraus` blocks.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize, n_kraus: usize) -> Result<Self> {
        if n_kraus == 0 {
            return Err(Error::Empty("Kraus operators".into()));
        }
        Self::new(dim, haar_isometry_blocks(rng, dim, n_kraus))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Applies the channel to subsystem `subsystem` of `rho`.
    pub fn apply_on(&self, rho: &DensityMatrix, subsystem: usize) -> Result<DensityMatrix> {
        let dims = rho.dims();
        let Some(&d) = dims.get(subsystem) else {
            return Err(Error::IndexOutOfRange { index: subsystem, count: dims.len() });
        };
        if d != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: d });
        }
        let before: usize = dims[..subsystem].iter().product();
        let after: usize = dims[subsystem + 1..].iter().product();
        let (left, right) = (ComplexMatrix::identity(before), ComplexMatrix::identity(after));
        let mut out = ComplexMatrix::zeros(rho.dim(), rho.dim());
        for k in &self.kraus {
            let full = left.kron(k).kron(&right);
            out = &out + &(&(&full * rho.matrix()) * &full.adjoint());
        }
        DensityMatrix::new(dims.to_vec(), out)
    }
}

fn check_two_qubit(psi: &PureState) -> Result<()> {
    if psi.dims() != [2, 2] {
        return Err(Error::InvalidParameter(format!("two-qubit state required, found dims {:?}", psi.dims())));
    }
    Ok(())
}

fn check_qubit_channel(ch: &Channel) -> Result<()> {
    if ch.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: ch.dim() });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleSidedCheck {
    /// C((L⊗1)ψ).
    pub lhs: f64,
    pub channel_factor: f64,
    pub input_concurrence: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

/// Compares C((L⊗1)ψ) with C((L⊗1)φ⁺)·C(ψ).
pub fn konrad_single_sided_check(psi: &PureState, channel: &Channel) -> Result<SingleSidedCheck> {
    check_two_qubit(psi)?;
    check_qubit_channel(channel)?;
    let lhs = concurrence_mixed(&channel.apply_on(&psi.density(), 0)?)?;
    let channel_factor = concurrence_mixed(&channel.apply_on(&PureState::bell().density(), 0)?)?;
    let input_concurrence = concurrence_pure(psi)?;
    let rhs = channel_factor * input_concurrence;
    let residual = (lhs - rhs).abs();
    Ok(SingleSidedCheck { lhs, channel_factor, input_concurrence, rhs, residual, pass: residual < KONRAD_TOL })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSidedCheck {
    /// C((L_A⊗L_B)ψ).
    pub lhs: f64,
    /// C((L_A⊗1)φ⁺)·C((1⊗L_B)φ⁺)·C(ψ).
    pub rhs: f64,
    /// rhs − lhs; negative beyond the tolerance is a violation.
    pub slack: f64,
    pub holds: bool,
}

/// Checks C((L_A⊗L_B)ψ) ≤ C((L_A⊗1)φ⁺)·C((1⊗L_B)φ⁺)·C(ψ).
pub fn konrad_two_sided_check(psi: &PureState, alice: &Channel, bob: &Channel) -> Result<TwoSidedCheck> {
    check_two_qubit(psi)?;
    check_qubit_channel(alice)?;
    check_qubit_channel(bob)?;
    let out = bob.apply_on(&alice.apply_on(&psi.density(), 0)?, 1)?;
    let lhs = concurrence_mixed(&out)?;
    let bell = PureState::bell().density();
    let ca = concurrence_mixed(&alice.apply_on(&bell, 0)?)?;
    let cb = concurrence_mixed(&bob.apply_on(&bell, 1)?)?;
    let rhs = ca * cb * concurrence_pure(psi)?;
    let slack = rhs - lhs;
    Ok(TwoSidedCheck { lhs, rhs, slack, holds: slack >= -KONRAD_TOL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::haar_state;
    use crate::numerics::random::rng_from_seed;

    #[test]
    fn identity_channel_keeps_concurrence() {
        let psi = PureState::from_real(vec![2, 2], &[0.6, 0.0, 0.0, 0.8]).unwrap();
        let c = konrad_single_sided_check(&psi, &Channel::identity(2)).unwrap();
        assert!((c.channel_factor - 1.0).abs() < 1e-9);
        assert!((c.lhs - 0.96).abs() < 1e-9);
        assert!(c.pass);
    }

    #[test]
    fn depolarizing_kills_entanglement() {
        let c = konrad_single_sided_check(&PureState::bell(), &Channel::fully_depolarizing_qubit()).unwrap();
        assert!(c.lhs.abs() < 1e-9);
        assert!(c.rhs.abs() < 1e-9);
    }

    #[test]
    fn amplitude_damping_factor() {
        // (L⊗1)φ⁺ for damping γ has concurrence √(1−γ)
        let ch = Channel::amplitude_damping(0.36).unwrap();
        let c = konrad_single_sided_check(&PureState::bell(), &ch).unwrap();
        assert!((c.channel_factor - 0.8).abs() < 1e-9);
    }

    #[test]
    fn random_channels_satisfy_relations() {
        let mut rng = rng_from_seed(21);
        for _ in 0..20 {
            let psi = haar_state(&mut rng, &[2, 2]).unwrap();
            let la = Channel::random(&mut rng, 2, 2).unwrap();
            let lb = Channel::random(&mut rng, 2, 3).unwrap();
            assert!(konrad_single_sided_check(&psi, &la).unwrap().pass);
            assert!(konrad_two_sided_check(&psi, &la, &lb).unwrap().holds);
        }
    }

    #[test]
    fn rejects_incomplete_kraus() {
        let k = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(Channel::new(2, vec![k]), Err(Error::Incomplete { .. })));
    }

    #[test]
    fn rejects_qutrit_state() {
        let psi = PureState::basis(vec![3, 2], 0).unwrap();
        assert!(konrad_single_sided_check(&psi, &Channel::identity(2)).is_err());
    }
}
