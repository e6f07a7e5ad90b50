use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swssb_core::exact::{
    all_correlators, random_density_matrix, random_pure_state, random_rank_deficient, renyi1,
    trace_distance_corr, DensityMatrix,
};
use swssb_core::fermion::{build_majorana_model, r1_tfim, Sector, ThermalPropagator};
use swssb_core::ising::{Lattice, SyndromeTable};
use swssb_core::linalg::{pfaffian, AntisymmetricMatrix};
use swssb_core::{Letter, PauliString, C64};

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(0..4usize, n).prop_map(move |v| {
        let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
        let sites: Vec<(usize, Letter)> = v.iter().enumerate().map(|(q, &k)| (q, letters[k])).collect();
        PauliString::from_sites(n, &sites)
    })
}

fn state(n: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match seed % 3 {
        0 => random_density_matrix(n, &mut rng),
        1 => random_pure_state(n, &mut rng),
        _ => {
            let rank = rng.random_range(1..=(1usize << n));
            random_rank_deficient(n, rank, &mut rng)
        }
    }
    .unwrap()
}

fn antisymmetric(n: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pfaffian_squares_to_determinant(half in 0..7usize, seed in any::<u64>()) {
        let m = antisymmetric(2 * half, seed);
        let det = m.clone().determinant();
        let pf = pfaffian(&AntisymmetricMatrix::new(m).unwrap());
        prop_assert!((pf * pf - det).norm() <= 1e-10 * det.norm().max(1.0), "{} vs {}", pf * pf, det);
    }

    #[test]
    fn odd_dimension_rejected(half in 0..6usize, seed in any::<u64>()) {
        prop_assert!(AntisymmetricMatrix::new(antisymmetric(2 * half + 1, seed)).is_err());
    }

    #[test]
    fn pauli_product_matches_dense((a, b) in (1..5usize).prop_flat_map(|n| (pauli(n), pauli(n)))) {
        let dense = a.to_dense() * b.to_dense();
        let gap = (a.mul(&b).to_dense() - &dense).norm();
        prop_assert!(gap < 1e-12);
        let flipped = b.to_dense() * a.to_dense();
        let sign = if a.commutes_with(&b) { 1.0 } else { -1.0 };
        prop_assert!((flipped * C64::from(sign) - dense).norm() < 1e-12);
    }

    #[test]
    fn renyi1_sandwiched_by_fidelity(
        (seed, ox, oy) in (1..4usize).prop_flat_map(|n| (any::<u64>(), pauli(n), pauli(n))),
    ) {
        let rho = state(ox.n_qubits(), seed);
        let c = all_correlators(&rho, &ox, &oy).unwrap();
        prop_assert!(c.f * c.f <= c.r1 + 1e-9 && c.r1 <= c.f + 1e-9, "F = {}, R1 = {}", c.f, c.r1);
    }

    #[test]
    fn trace_distance_within_fuchs_van_de_graaf(
        (seed, ox, oy) in (1..4usize).prop_flat_map(|n| (any::<u64>(), pauli(n), pauli(n))),
    ) {
        let rho = state(ox.n_qubits(), seed);
        let r1 = renyi1(&rho, &ox, &oy).unwrap();
        let d1 = trace_distance_corr(&rho, &ox, &oy).unwrap();
        prop_assert!(1.0 - r1 <= d1 + 1e-9, "R1 = {r1}, D1 = {d1}");
        prop_assert!(d1 <= (1.0 - r1 * r1).max(0.0).sqrt() + 1e-9, "R1 = {r1}, D1 = {d1}");
    }

    #[test]
    fn tfim_r1_is_a_fidelity(
        l in 2..10usize,
        g in 0.0..4.0f64,
        beta in 0.05..6.0f64,
        frac in 0.0..1.0f64,
    ) {
        let y = 1 + ((l - 1) as f64 * frac) as usize % (l - 1);
        let v = r1_tfim(l, 1.0, g, beta, 0, y).unwrap();
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&v), "{v}");
    }

    #[test]
    fn ring_r1_is_a_fidelity(n in 2..10usize, p in 0.0..1.0f64, frac in 0.0..1.0f64) {
        let y = 1 + ((n - 1) as f64 * frac) as usize % (n - 1);
        let table = SyndromeTable::enumerate(&Lattice::chain(n).unwrap(), p).unwrap();
        let (r1, r2) = (table.r1(0, y), table.r2(0, y));
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&r1), "{r1}");
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&r2), "{r2}");
        let total: f64 = table.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn propagator_anticommutator_and_kms(
        l in 2..8usize,
        g in 0.0..3.0f64,
        beta in 0.1..5.0f64,
        s in 0.0..1.0f64,
    ) {
        let prop = ThermalPropagator::new(build_majorana_model(l, 1.0, g, Sector::Antiperiodic).unwrap()).unwrap();
        let tau = s * beta;
        for i in 0..2 * l {
            for j in 0..2 * l {
                // Equal times: {γ_i, γ_j} = 2δ_ij.
                let sum = prop.propagator(beta, i, 0.5 * beta, j, 0.5 * beta).unwrap()
                    + prop.propagator(beta, j, 0.5 * beta, i, 0.5 * beta).unwrap();
                let want = if i == j { 2.0 } else { 0.0 };
                prop_assert!((sum - C64::from(want)).norm() < 1e-10);
                // ⟨γ_i(τ) γ_j(0)⟩ = ⟨γ_j(β) γ_i(τ)⟩
                let a = prop.propagator(beta, i, tau, j, 0.0).unwrap();
                let b = prop.propagator(beta, j, beta, i, tau).unwrap();
                prop_assert!((a - b).norm() < 1e-10, "{a} vs {b}");
            }
        }
    }
}
