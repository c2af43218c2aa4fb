//! Hermitian eigendecomposition, Schmidt decomposition and the discrete
//! Fourier matrix.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::matrix::{inner, norm_sqr, ComplexMatrix};
use super::state::PureState;
use crate::error::{Error, Result};

/// Default hermiticity tolerance accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Eigenpairs of a Hermitian matrix, eigenvalues descending.
///
/// Column `k` of `vectors` belongs to `values[k]`. Each column is scaled so
/// its largest-modulus component (first one on ties) is real and positive.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// Σ λ_k v_k v_k†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.rows();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (k, &l) in self.values.iter().enumerate() {
            let v = self.vector(k);
            acc = &acc + &ComplexMatrix::projector(&v).scale_real(l);
        }
        acc
    }

    /// True when two eigenvalues lie within `tol` of each other.
    pub fn has_degeneracy(&self, tol: f64) -> bool {
        self.values.windows(2).any(|w| (w[0] - w[1]).abs() <= tol)
    }
}

pub fn eig_hermitian(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    eig_hermitian_with_tol(h, HERMITIAN_TOL)
}

pub fn eig_hermitian_with_tol(h: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let deviation = h.hermitian_deviation();
    if !(deviation <= tol) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows();
    // symmetrize so the solver sees an exactly Hermitian input
    let sym = ComplexMatrix::from_fn(n, n, |r, c| (h[(r, c)] + h[(c, r)].conj()) * 0.5);
    let eig = sym.to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut v: Vec<Complex64> = (0..n).map(|r| eig.eigenvectors[(r, k)]).collect();
        fix_phase(&mut v);
        for (r, z) in v.into_iter().enumerate() {
            vectors[(r, col)] = z;
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Rotates `v` so its largest-modulus entry is real and positive.
pub(crate) fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag + 1e-12 {
            best = i;
            best_mag = m;
        }
    }
    if best_mag > 0.0 {
        let ph = v[best].conj() / best_mag;
        for z in v.iter_mut() {
            *z *= ph;
        }
        v[best] = Complex64::new(v[best].re, 0.0);
    }
}

/// Singular values descending with left vectors (columns of `u`) and right
/// vectors (rows of `v_adjoint`) so that `m = u · diag(s) · v_adjoint`.
pub(crate) struct Svd {
    pub values: Vec<f64>,
    pub left: Vec<Vec<Complex64>>,
    pub right: Vec<Vec<Complex64>>,
}

pub(crate) fn svd(m: &ComplexMatrix) -> Svd {
    let nm = m.to_nalgebra();
    let svd = nm.svd(true, true);
    let u = svd.u.expect("requested u");
    let vt = svd.v_t.expect("requested v_t");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    Svd {
        values: order.iter().map(|&i| svd.singular_values[i]).collect(),
        left: order.iter().map(|&i| (0..u.nrows()).map(|r| u[(r, i)]).collect()).collect(),
        right: order.iter().map(|&i| (0..vt.ncols()).map(|c| vt[(i, c)]).collect()).collect(),
    }
}

/// ψ = Σ_k c_k |L_k⟩ ⊗ |R_k⟩ across a bipartition of subsystems.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<Vec<Complex64>>,
    pub right: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    /// Schmidt probabilities c_k².
    pub fn weights(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c * c).collect()
    }
}

/// Schmidt decomposition with the left factor spanning `left` subsystems and
/// the right factor spanning `right`, composites in the listed order.
pub fn schmidt(psi: &PureState, left: &[usize], right: &[usize]) -> Result<SchmidtDecomposition> {
    let m = psi.amplitude_matrix(left, right)?;
    let s = svd(&m);
    Ok(SchmidtDecomposition { coefficients: s.values, left: s.left, right: s.right })
}

/// F_{jk} = exp(2πi·jk/n)/√n.
pub fn fourier_matrix(n: usize) -> ComplexMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |j, k| {
        // reduce jk mod n first so large products keep their phase accuracy
        let e = ((j * k) % n) as f64;
        Complex64::from_polar(scale, 2.0 * PI * e / n as f64)
    })
}

/// Unitary whose first column is the unit vector `v`.
///
/// Remaining columns come from Gram–Schmidt over the computational basis, so
/// the result is a deterministic function of `v`.
pub fn unitary_with_first_column(v: &[Complex64]) -> Result<ComplexMatrix> {
    let n = v.len();
    let nv = norm_sqr(v).sqrt();
    if !(nv > 0.0) {
        return Err(Error::InvalidParameter("zero vector cannot seed a unitary".into()));
    }
    let mut basis: Vec<Vec<Complex64>> = vec![v.iter().map(|z| z / nv).collect()];
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        w[e] = Complex64::new(1.0, 0.0);
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for b in &basis {
                let proj = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let nw = norm_sqr(&w).sqrt();
        if nw > 1e-6 {
            basis.push(w.into_iter().map(|z| z / nw).collect());
        }
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, c| basis[c][r]))
}
