use approx::assert_abs_diff_eq;
use mspace_core::numerics::random::{derive_seed, rng_from_seed};
use mspace_core::numerics::{
    eig_hermitian, haar_state, haar_unitary, partial_trace, schmidt, tensor, Complex64, ComplexMatrix, DensityMatrix,
    PureState,
};
use proptest::prelude::*;

fn random_hermitian(seed: u64, n: usize) -> ComplexMatrix {
    let u = haar_unitary(&mut rng_from_seed(seed), n);
    let v = haar_unitary(&mut rng_from_seed(seed ^ 0x5555), n);
    let a = &u + &v.scale_real(0.5);
    &a + &a.adjoint()
}

fn residual(h: &ComplexMatrix, lambda: f64, v: &[Complex64]) -> f64 {
    let hv = h.apply(v).unwrap();
    hv.iter().zip(v).map(|(x, y)| (x - y * lambda).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigenpairs_satisfy_definition(seed in any::<u64>(), n in 1usize..=32) {
        let h = random_hermitian(seed, n);
        let e = eig_hermitian(&h).unwrap();
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        for k in 0..n {
            prop_assert!(residual(&h, e.values[k], &e.vector(k)) < 1e-10 * (1.0 + h.max_abs() * n as f64));
        }
        prop_assert!(e.vectors.is_unitary(1e-10));
        let trace: f64 = e.values.iter().sum();
        prop_assert!((trace - h.trace().re).abs() < 1e-9 * n as f64);
    }

    #[test]
    fn tensor_is_associative(seed in any::<u64>(), a in 1usize..=3, b in 1usize..=3, c in 1usize..=3) {
        let mut rng = rng_from_seed(seed);
        let (x, y, z) = (haar_unitary(&mut rng, a), haar_unitary(&mut rng, b), haar_unitary(&mut rng, c));
        let left = tensor(&tensor(&x, &y), &z);
        let right = tensor(&x, &tensor(&y, &z));
        prop_assert!(left.max_abs_diff(&right) < 1e-14);
    }

    #[test]
    fn schmidt_weights_are_reduced_spectrum(seed in any::<u64>(), a in 1usize..=4, b in 1usize..=4) {
        let psi = haar_state(&mut rng_from_seed(seed), &[a, b]).unwrap();
        let s = schmidt(&psi, &[0], &[1]).unwrap();
        let reduced = partial_trace(&psi.density(), &[0]).unwrap();
        let spectrum = eig_hermitian(reduced.matrix()).unwrap().values;
        let weights = s.weights();
        for (k, lambda) in spectrum.iter().enumerate() {
            let w = weights.get(k).copied().unwrap_or(0.0);
            prop_assert!((w - lambda).abs() < 1e-12);
        }
    }
}

/// Partial trace by explicit multi-index summation.
fn naive_partial_trace(rho: &DensityMatrix, keep: &[usize]) -> ComplexMatrix {
    let dims = rho.dims();
    let digits = |mut idx: usize| -> Vec<usize> {
        let mut out = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            out[k] = idx % dims[k];
            idx /= dims[k];
        }
        out
    };
    let kept_index = |d: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for r in 0..rho.dim() {
        for c in 0..rho.dim() {
            let (dr, dc) = (digits(r), digits(c));
            let traced_equal = (0..dims.len()).filter(|k| !keep.contains(k)).all(|k| dr[k] == dc[k]);
            if traced_equal {
                out[(kept_index(&dr), kept_index(&dc))] += rho.matrix()[(r, c)];
            }
        }
    }
    out
}

#[test]
fn partial_trace_matches_summation() {
    let dims = [2, 3, 2];
    for seed in 0..10 {
        let mut rng = rng_from_seed(seed);
        let a = haar_state(&mut rng, &dims).unwrap().density();
        let b = haar_state(&mut rng, &dims).unwrap().density();
        let rho = DensityMatrix::mixture(&[(0.3, &a), (0.7, &b)]).unwrap();
        for keep in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]] {
            let fast = partial_trace(&rho, &keep).unwrap();
            let slow = naive_partial_trace(&rho, &keep);
            assert!(fast.matrix().max_abs_diff(&slow) < 1e-14, "keep {keep:?}");
        }
    }
}

#[test]
fn global_phase_leaves_density_unchanged() {
    let psi = haar_state(&mut rng_from_seed(3), &[3, 2]).unwrap();
    for theta in [0.1, 1.0, 2.5, -3.0] {
        let rotated = psi.with_global_phase(theta);
        assert!(rotated.density().matrix().max_abs_diff(psi.density().matrix()) < 1e-15);
    }
}

#[test]
fn haar_first_component_mean() {
    // E|ψ_0|² = 1/d, Var = (d−1)/(d²(d+1)) for Haar states
    let samples = 20_000;
    for d in [2usize, 3, 5] {
        let mean = (0..samples)
            .map(|i| {
                let psi = haar_state(&mut rng_from_seed(derive_seed(99, i)), &[d]).unwrap();
                psi.amplitudes()[0].norm_sqr()
            })
            .sum::<f64>()
            / samples as f64;
        let df = d as f64;
        let sigma = ((df - 1.0) / (df * df * (df + 1.0)) / samples as f64).sqrt();
        assert!((mean - 1.0 / df).abs() < 3.0 * sigma, "d={d} mean={mean} sigma={sigma}");
    }
}

#[test]
fn haar_unitaries_are_unitary() {
    for n in 1..=12 {
        let u = haar_unitary(&mut rng_from_seed(n as u64), n);
        assert_abs_diff_eq!(u.unitary_deviation(), 0.0, epsilon = 1e-12);
    }
}

#[test]
fn product_state_tensor_reduces() {
    let mut rng = rng_from_seed(5);
    let a = haar_state(&mut rng, &[3]).unwrap();
    let b = haar_state(&mut rng, &[2]).unwrap();
    let ab: PureState = a.tensor(&b);
    let ra = partial_trace(&ab.density(), &[0]).unwrap();
    assert!(ra.matrix().max_abs_diff(a.density().matrix()) < 1e-14);
}
