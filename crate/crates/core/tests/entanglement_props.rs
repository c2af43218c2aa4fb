use approx::assert_abs_diff_eq;
use mspace_core::entanglement::{
    concurrence_pure, entropy_of_entanglement, eof_from_concurrence, operational_entanglement, BipartiteSplit,
    EntanglementMeasure,
};
use mspace_core::measurement::outcome_probabilities;
use mspace_core::numerics::random::{derive_seed, rng_from_seed};
use mspace_core::numerics::{haar_state, haar_unitary, tensor, ComplexMatrix, PureState};
use mspace_core::{map_local, LocalMeasurementSet, MeasurementSet};
use proptest::prelude::*;
use rand::Rng;

fn random_local(seed: u64, d_a: usize, d_b: usize) -> LocalMeasurementSet {
    let mut rng = rng_from_seed(seed);
    let (n_a, n_b) = (rng.random_range(2..=4), rng.random_range(2..=4));
    LocalMeasurementSet::new(
        MeasurementSet::random(&mut rng, d_a, n_a).unwrap(),
        MeasurementSet::random(&mut rng, d_b, n_b).unwrap(),
    )
}

fn apply(u: &ComplexMatrix, psi: &PureState) -> PureState {
    PureState::new(psi.dims().to_vec(), u.apply(psi.amplitudes()).unwrap()).unwrap()
}

#[test]
fn probabilities_sum_to_one() {
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let seed = derive_seed(2024, i);
        let mut rng = rng_from_seed(seed);
        let d = rng.random_range(2..=6);
        let outcomes = rng.random_range(1..=5);
        let psi = haar_state(&mut rng, &[d]).unwrap();
        let set = MeasurementSet::random(&mut rng, d, outcomes).unwrap();
        let sum: f64 = outcome_probabilities(&psi, &set).unwrap().iter().sum();
        worst = worst.max((sum - 1.0).abs());
    }
    assert!(worst < 1e-10, "worst deviation {worst:e}");
}

#[test]
fn local_unitaries_preserve_entanglement() {
    let split = BipartiteSplit::pair();
    for seed in 0..50 {
        let mut rng = rng_from_seed(seed);
        let psi = haar_state(&mut rng, &[3, 2]).unwrap();
        let u = tensor(&haar_unitary(&mut rng, 3), &haar_unitary(&mut rng, 2));
        let before = entropy_of_entanglement(&psi, &split).unwrap();
        let after = entropy_of_entanglement(&apply(&u, &psi), &split).unwrap();
        assert_abs_diff_eq!(before, after, epsilon = 1e-12);
    }
}

#[test]
fn two_qubit_eof_is_entropy() {
    for seed in 0..200 {
        let psi = haar_state(&mut rng_from_seed(seed), &[2, 2]).unwrap();
        let entropy = entropy_of_entanglement(&psi, &BipartiteSplit::pair()).unwrap();
        let eof = eof_from_concurrence(concurrence_pure(&psi).unwrap()).unwrap();
        assert_abs_diff_eq!(entropy, eof, epsilon = 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn image_never_gains_entropy(seed in any::<u64>(), d_a in 2usize..=3, d_b in 2usize..=3) {
        let psi = haar_state(&mut rng_from_seed(seed), &[d_a, d_b]).unwrap();
        let local = random_local(seed.wrapping_add(1), d_a, d_b);
        let e = entropy_of_entanglement(&psi, &BipartiteSplit::pair()).unwrap();
        let e_m = operational_entanglement(&psi, &local, EntanglementMeasure::Entropy).unwrap().value;
        prop_assert!(e_m <= e + 1e-9, "E_m {} > E {}", e_m, e);
    }

    #[test]
    fn product_states_have_no_operational_entanglement(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let a = haar_state(&mut rng, &[2]).unwrap();
        let b = haar_state(&mut rng, &[3]).unwrap();
        let psi = a.tensor(&b);
        let local = random_local(seed ^ 7, 2, 3);
        let e_m = operational_entanglement(&psi, &local, EntanglementMeasure::Entropy).unwrap().value;
        prop_assert!(e_m.abs() < 1e-10);
    }

    #[test]
    fn image_is_invariant_under_global_phase(seed in any::<u64>(), theta in -3.0f64..3.0) {
        let psi = haar_state(&mut rng_from_seed(seed), &[2, 2]).unwrap();
        let local = random_local(seed ^ 11, 2, 2);
        let a = map_local(&psi, &local).unwrap();
        let b = map_local(&psi.with_global_phase(theta), &local).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}
