//! Pure states, density matrices and partial traces over composite systems.
//!
//! Composite indices are row-major with subsystem 0 as the most significant
//! factor, matching [`tensor`](super::tensor).

use num_complex::Complex64;

use super::matrix::{norm_sqr, tensor, tensor_vec, ComplexMatrix};
use crate::error::{Error, Result};

/// Norm tolerance for [`PureState`].
pub const STATE_NORM_TOL: f64 = 1e-10;
/// Hermiticity, trace and positivity tolerance for [`DensityMatrix`].
pub const DENSITY_TOL: f64 = 1e-10;

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::Empty("subsystem dimension list".into()));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidParameter("subsystem dimension 0".into()));
    }
    dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).ok_or(Error::Overflow("total dimension"))
}

/// Row-major strides for `dims`.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// For each composite value over `subset` (in the listed order), the offset it
/// contributes to a full composite index over `dims`.
fn subset_offsets(dims: &[usize], subset: &[usize]) -> Vec<usize> {
    let full = strides(dims);
    let mut offsets = vec![0usize];
    for &s in subset {
        let mut next = Vec::with_capacity(offsets.len() * dims[s]);
        for &o in &offsets {
            for digit in 0..dims[s] {
                next.push(o + digit * full[s]);
            }
        }
        offsets = next;
    }
    offsets
}

fn validate_subset(dims: &[usize], subset: &[usize]) -> Result<()> {
    let mut seen = vec![false; dims.len()];
    for &i in subset {
        if i >= dims.len() {
            return Err(Error::IndexOutOfRange { index: i, count: dims.len() });
        }
        if seen[i] {
            return Err(Error::InvalidParameter(format!("subsystem {i} listed twice")));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Normalized state vector on a composite system.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(dims, amplitudes, STATE_NORM_TOL)
    }

    /// Accepts the vector when `| ‖ψ‖ − 1 | ≤ tol`.
    pub fn with_tolerance(dims: Vec<usize>, amplitudes: Vec<Complex64>, tol: f64) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch { expected: total, found: amplitudes.len() });
        }
        let deviation = (norm_sqr(&amplitudes).sqrt() - 1.0).abs();
        if !(deviation <= tol) {
            return Err(Error::NotNormalized { deviation, tolerance: tol });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(dims: Vec<usize>, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch { expected: total, found: amplitudes.len() });
        }
        let n = norm_sqr(&amplitudes).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized { deviation: 1.0, tolerance: STATE_NORM_TOL });
        }
        for a in &mut amplitudes {
            *a /= n;
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn from_real(dims: Vec<usize>, amplitudes: &[f64]) -> Result<Self> {
        Self::new(dims, amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let total = check_dims(&dims)?;
        if index >= total {
            return Err(Error::IndexOutOfRange { index, count: total });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); total];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { dims, amplitudes: amps })
    }

    /// (|00⟩ + |11⟩)/√2
    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real(vec![2, 2], &[h, 0.0, 0.0, h]).expect("bell state is normalized")
    }

    /// (|0⟩ + |1⟩)/√2
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real(vec![2], &[h, h]).expect("plus state is normalized")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amplitudes).sqrt()
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState { dims, amplitudes: tensor_vec(&self.amplitudes, &other.amplitudes) }
    }

    pub fn with_global_phase(&self, theta: f64) -> PureState {
        let ph = Complex64::from_polar(1.0, theta);
        PureState { dims: self.dims.clone(), amplitudes: self.amplitudes.iter().map(|a| a * ph).collect() }
    }

    /// Reinterprets the amplitude vector with a new subsystem list of equal
    /// total dimension.
    pub fn reshape(&self, dims: Vec<usize>) -> Result<PureState> {
        let total = check_dims(&dims)?;
        if total != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: total });
        }
        Ok(PureState { dims, amplitudes: self.amplitudes.clone() })
    }

    /// Amplitude matrix with rows indexed by the `left` subsystems and columns
    /// by the `right` subsystems, each composite in the listed order.
    pub fn amplitude_matrix(&self, left: &[usize], right: &[usize]) -> Result<ComplexMatrix> {
        validate_partition(&self.dims, left, right)?;
        let lo = subset_offsets(&self.dims, left);
        let ro = subset_offsets(&self.dims, right);
        Ok(ComplexMatrix::from_fn(lo.len(), ro.len(), |r, c| self.amplitudes[lo[r] + ro[c]]))
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix { dims: self.dims.clone(), matrix: ComplexMatrix::projector(&self.amplitudes) }
    }

    pub fn into_parts(self) -> (Vec<usize>, Vec<Complex64>) {
        (self.dims, self.amplitudes)
    }
}

pub(crate) fn validate_partition(dims: &[usize], left: &[usize], right: &[usize]) -> Result<()> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::InvalidSplit("both sides must be nonempty".into()));
    }
    let mut all: Vec<usize> = left.iter().chain(right).copied().collect();
    validate_subset(dims, &all).map_err(|e| Error::InvalidSplit(e.to_string()))?;
    all.sort_unstable();
    if all.len() != dims.len() {
        return Err(Error::InvalidSplit(format!("split covers {} of {} subsystems", all.len(), dims.len())));
    }
    Ok(())
}

/// Unit-trace positive semidefinite operator on a composite system.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::from_parts_unchecked(dims, matrix)?;
        rho.validate(DENSITY_TOL)?;
        Ok(rho)
    }

    /// Shape checks only; used for intermediate operators whose trace is not 1.
    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let total = check_dims(&dims)?;
        if !matrix.is_square() || matrix.rows() != total {
            return Err(Error::DimensionMismatch { expected: total, found: matrix.rows() });
        }
        Ok(Self { dims, matrix })
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let herm = self.matrix.hermitian_deviation();
        if herm > tol {
            return Err(Error::InvalidDensityMatrix(format!("hermiticity deviation {herm:e}")));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensityMatrix(format!("trace {} + {}i", tr.re, tr.im)));
        }
        let eig = super::linalg::eig_hermitian_with_tol(&self.matrix, tol.max(1e-8))?;
        if let Some(&min) = eig.values.last() {
            if min < -tol {
                return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(())
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let total = check_dims(&dims)?;
        let m = ComplexMatrix::identity(total).scale_real(1.0 / total as f64);
        Ok(Self { dims, matrix: m })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Probability weights on the computational basis.
    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix { dims, matrix: tensor(&self.matrix, &other.matrix) }
    }

    /// Convex combination Σ w_i ρ_i.
    pub fn mixture(items: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let (_, first) = items.first().ok_or_else(|| Error::Empty("mixture".into()))?;
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in items {
            if rho.dims != first.dims {
                return Err(Error::DimensionMismatch { expected: first.dim(), found: rho.dim() });
            }
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        Self::new(first.dims.clone(), acc)
    }

    /// ⟨ψ|ρ|ψ⟩ for a pure state of matching dimension.
    pub fn expectation(&self, psi: &[Complex64]) -> Result<f64> {
        let v = self.matrix.apply(psi)?;
        Ok(super::matrix::inner(psi, &v).re)
    }
}

/// Reduced operator over the `keep` subsystems, ordered ascending.
///
/// Works on any square operator whose size matches `dims`; the trace is
/// preserved.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total = check_dims(dims)?;
    if !m.is_square() || m.rows() != total {
        return Err(Error::DimensionMismatch { expected: total, found: m.rows() });
    }
    if keep.is_empty() {
        return Err(Error::Empty("partial trace keep set".into()));
    }
    validate_subset(dims, keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let ko = subset_offsets(dims, &kept);
    let to = subset_offsets(dims, &traced);
    let n = ko.len();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| to.iter().map(|&t| m[(ko[r] + t, ko[c] + t)]).sum()))
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let reduced = partial_trace_matrix(&rho.matrix, &rho.dims, keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let dims = kept.iter().map(|&i| rho.dims[i]).collect();
    Ok(DensityMatrix { dims, matrix: reduced })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bell_reduces_to_maximally_mixed() {
        let rho = PureState::bell().density();
        let red = partial_trace(&rho, &[0]).unwrap();
        assert!(red.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5])) < 1e-15);
        assert_eq!(red.dims(), &[2]);
    }

    #[test]
    fn product_state_reduces_to_factor() {
        let u = PureState::normalized(vec![2], vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let v = PureState::normalized(vec![3], vec![c(1.0, 1.0), c(0.5, 0.0), c(0.0, -2.0)]).unwrap();
        let rho = u.tensor(&v).density();
        let red = partial_trace(&rho, &[0]).unwrap();
        assert!(red.matrix().max_abs_diff(u.density().matrix()) < 1e-14);
        let red_b = partial_trace(&rho, &[1]).unwrap();
        assert!(red_b.matrix().max_abs_diff(v.density().matrix()) < 1e-14);
    }

    #[test]
    fn keep_all_is_identity() {
        let psi = PureState::normalized(vec![2, 3], (0..6).map(|k| c(k as f64, 1.0 - k as f64)).collect()).unwrap();
        let rho = psi.density();
        let same = partial_trace(&rho, &[1, 0]).unwrap();
        assert_eq!(same.matrix(), rho.matrix());
    }

    #[test]
    fn out_of_range_keep() {
        let rho = PureState::bell().density();
        assert!(matches!(partial_trace(&rho, &[2]), Err(Error::IndexOutOfRange { index: 2, count: 2 })));
        assert!(partial_trace(&rho, &[]).is_err());
    }

    #[test]
    fn state_norm_is_checked() {
        assert!(matches!(PureState::from_real(vec![2], &[1.0, 1.0]), Err(Error::NotNormalized { .. })));
        assert!(PureState::from_real(vec![2, 2], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn amplitude_matrix_reorders_subsystems() {
        // |ψ⟩ = |0⟩|1⟩|0⟩ on (2,2,2): index 2. Grouped as (1 | 0,2) -> row 1, col 0.
        let psi = PureState::basis(vec![2, 2, 2], 2).unwrap();
        let m = psi.amplitude_matrix(&[1], &[0, 2]).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 4));
        assert_eq!(m[(1, 0)], c(1.0, 0.0));
        assert!(psi.amplitude_matrix(&[0], &[1]).is_err());
        assert!(psi.amplitude_matrix(&[0, 1], &[1, 2]).is_err());
    }

    #[test]
    fn density_validation() {
        let bad = ComplexMatrix::from_real_diagonal(&[1.2, -0.2]);
        assert!(DensityMatrix::new(vec![2], bad).is_err());
        let half = ComplexMatrix::from_real_diagonal(&[0.5, 0.25]);
        assert!(DensityMatrix::new(vec![2], half).is_err());
        assert!(DensityMatrix::maximally_mixed(vec![2, 2]).unwrap().validate(1e-12).is_ok());
    }
}
