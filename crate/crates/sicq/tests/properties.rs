//! Property tests for the algebraic invariants.

use proptest::prelude::*;

use sicq::{
    hs_inner, projector_from_vector, quasi_priors, random_density, validate_density,
    ComplexMatrix, ProbabilityVector, StateVector, Tolerances, C64,
};

fn complex_matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |entries| {
        ComplexMatrix::from_data(
            dim,
            dim,
            entries.into_iter().map(|(re, im)| C64::new(re, im)).collect(),
        )
        .unwrap()
    })
}

fn state_vector(dim: usize) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
        .prop_filter("nonzero", |v| {
            v.iter().map(|(re, im)| re * re + im * im).sum::<f64>() > 1e-3
        })
        .prop_map(|v| {
            StateVector::normalized(v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
                .unwrap()
        })
}

proptest! {
    #[test]
    fn hs_inner_is_conjugate_symmetric(
        a in complex_matrix(3),
        b in complex_matrix(3),
    ) {
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12);
    }

    #[test]
    fn hs_inner_with_self_is_real_nonnegative(a in complex_matrix(4)) {
        let aa = hs_inner(&a, &a).unwrap();
        prop_assert!(aa.im.abs() < 1e-12);
        prop_assert!(aa.re >= 0.0);
    }

    #[test]
    fn projectors_are_idempotent_with_unit_trace(v in state_vector(4)) {
        let p = projector_from_vector(&v);
        let p2 = p.matmul(&p).unwrap();
        prop_assert!(p2.max_abs_diff(&p).unwrap() <= 1e-12);
        prop_assert!((p.trace() - C64::new(1.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn random_densities_validate(d in 1usize..=8, seed in 0u64..1000) {
        let rho = random_density(d, seed).unwrap();
        let report = validate_density(rho.matrix(), &Tolerances::default()).unwrap();
        prop_assert!(report.pass);
    }

    #[test]
    fn quasi_priors_always_sum_to_one(
        d in 2usize..=5,
        raw in proptest::collection::vec(1e-6..1.0f64, 36),
    ) {
        let n = d * d;
        let mut values: Vec<f64> = raw[..n].to_vec();
        let sum: f64 = values.iter().sum();
        values.iter_mut().for_each(|x| *x /= sum);
        let p = ProbabilityVector::new(values, &Tolerances::default()).unwrap();
        let q = quasi_priors(&p, d).unwrap();
        let total: f64 = q.values().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }
}
