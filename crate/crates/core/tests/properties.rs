use proptest::prelude::*;

use dimwitness::estimator::{run_estimator, EstimatorConfig};
use dimwitness::numerics::{
    default_cluster_tol, haar_orthogonal, haar_unitary, orthonormal_basis_of_span, spectral_decomposition, CVector,
    SeedStream, UnitaryMatrix, C64,
};
use dimwitness::simulate::{MeasurementProcess, OutcomeString};
use dimwitness::witness::{
    alpha_trace, exact_sum_complex, exact_sum_real, iterate_fixed, Tolerances,
};
use dimwitness::Execution;

fn haar(d: usize, seed: u64) -> UnitaryMatrix {
    haar_unitary(d, &SeedStream::new(seed, 0)).unwrap()
}

fn e1(d: usize) -> CVector {
    CVector::basis(d, 0).unwrap()
}

/// `V diag(λ) V*` with the phases drawn from `pool`, so eigenvalues repeat.
fn degenerate(d: usize, seed: u64, pool: &[f64]) -> UnitaryMatrix {
    let v = haar(d, seed);
    let phases: Vec<C64> = (0..d).map(|k| C64::from_polar(1.0, pool[(k * 7 + seed as usize) % pool.len()])).collect();
    let diag = UnitaryMatrix::diagonal(&phases).unwrap();
    UnitaryMatrix::new(v.matrix() * diag.matrix() * v.matrix().adjoint()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn telescoping(d in 2usize..=8, seed in any::<u64>()) {
        let u = haar(d, seed);
        let z = e1(d);
        let terms = iterate_fixed(&u, &z, 31).unwrap().norms_sq;
        let mut prev = alpha_trace(&u, &z, 0).unwrap();
        prop_assert!((prev - d as f64).abs() < 1e-12);
        for (n, term) in terms.iter().enumerate().take(30) {
            let next = alpha_trace(&u, &z, n + 1).unwrap();
            prop_assert!((prev - next - term).abs() < 1e-10);
            prev = next;
        }
    }

    #[test]
    fn terms_decrease_and_sums_stay_below_exact(d in 2usize..=8, seed in any::<u64>(), degen in any::<bool>()) {
        let u = if degen { degenerate(d, seed, &[0.4, 2.0, -1.0]) } else { haar(d, seed) };
        let z = e1(d);
        let s = iterate_fixed(&u, &z, 400).unwrap();
        for w in s.norms_sq.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        for w in s.partial_sums.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        let exact = exact_sum_complex(&u, &z, &Tolerances::default()).unwrap().exact_sum;
        prop_assert!(s.sum() <= exact as f64 + 1e-9);
    }

    #[test]
    fn gram_schmidt_is_orthonormal_and_spanning(
        d in 1usize..=8,
        raw in proptest::collection::vec(proptest::collection::vec(-1.0f64..1.0, 16), 1..10),
    ) {
        let vectors: Vec<CVector> = raw
            .iter()
            .map(|v| CVector::from_slice(&(0..d).map(|k| C64::new(v[2 * k], v[2 * k + 1])).collect::<Vec<_>>()).unwrap())
            .collect();
        let basis = orthonormal_basis_of_span(&vectors, 1e-9);
        prop_assert!(basis.len() <= d.min(vectors.len()));
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let g = a.dotc(b);
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g - C64::new(want, 0.0)).norm() < 1e-10);
            }
        }
        for v in &vectors {
            let mut r = (**v).clone();
            for b in &basis {
                let c = b.dotc(&r);
                r -= &**b * c;
            }
            prop_assert!(r.norm() < 1e-8 * (1.0 + v.norm()));
        }
    }

    #[test]
    fn spectral_reconstruction(d in 1usize..=16, seed in any::<u64>(), degen in any::<bool>()) {
        let u = if degen { degenerate(d, seed, &[0.0, 1.5, 3.1]) } else { haar(d, seed) };
        let dec = spectral_decomposition(&u, default_cluster_tol(d)).unwrap();
        prop_assert_eq!(dec.dim(), d);
        let err = (dec.reconstruct() - u.matrix()).iter().map(|x| x.norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-8, "reconstruction error {}", err);
    }

    #[test]
    fn real_and_complex_agree(d in 1usize..=8, seed in any::<u64>(), k in 0usize..8) {
        let r = haar_orthogonal(d, &SeedStream::new(seed, 1)).unwrap();
        let z = CVector::basis(d, k % d).unwrap();
        let tol = Tolerances::default();
        let real = exact_sum_real(&r, &z, &tol).unwrap();
        let cplx = exact_sum_complex(&r.complexify(), &z, &tol).unwrap();
        prop_assert_eq!(real.exact_sum, cplx.exact_sum);
        prop_assert!((real.contraction_radius - cplx.contraction_radius).abs() < 1e-9);
    }

    #[test]
    fn string_probabilities_normalize(d in 2usize..=6, seed in any::<u64>(), n in 1usize..=7) {
        let q = MeasurementProcess::from_first_basis(haar(d, seed)).unwrap();
        let total: f64 = OutcomeString::all_of_length(n).map(|s| q.string_probability(&s)).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn first_return_probabilities(d in 2usize..=6, seed in any::<u64>()) {
        let q = MeasurementProcess::from_first_basis(haar(d, seed)).unwrap();
        let mut total = 0.0;
        for n in 0..60 {
            let b = q.first_return_probability(n);
            prop_assert!(b >= 0.0);
            prop_assert!((b - (q.all_ones_probability(n) - q.all_ones_probability(n + 1))).abs() < 1e-12);
            total += b;
            prop_assert!(total <= 1.0 + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn estimator_is_independent_of_execution(d in 2usize..=6, m in 1usize..=30, seed in any::<u64>()) {
        let seq = EstimatorConfig {
            ensemble_size: m,
            dimension: d,
            master_seed: seed,
            execution: Execution::Sequential,
            ..Default::default()
        };
        let par = EstimatorConfig { execution: Execution::Parallel, ..seq.clone() };
        let a = run_estimator(&seq).unwrap();
        prop_assert_eq!(&a, &run_estimator(&par).unwrap());
        prop_assert!(a.d_tilde <= d);
        for h in &a.histories {
            prop_assert!(h.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
