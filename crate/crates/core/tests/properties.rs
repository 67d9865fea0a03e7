use num_complex::Complex64;
use proptest::prelude::*;

use qconcave::bounds::{full_report, BoundReport};
use qconcave::entropies::{max_relative, relative_entropy, renyi, sandwiched};
use qconcave::hermitian::{eig_hermitian, trace_norm, HermitianMatrix};
use qconcave::states::{
    random_density, random_unitary, DensityMatrix, MixtureProblem, SamplerConfig,
};

fn hermitian(dim: usize, entries: &[f64]) -> HermitianMatrix {
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut k = 0;
    for i in 0..dim {
        for j in i..dim {
            let z = if i == j {
                Complex64::new(entries[k], 0.0)
            } else {
                Complex64::new(entries[k], entries[k + 1])
            };
            k += 2;
            data[i * dim + j] = z;
            data[j * dim + i] = z.conj();
        }
    }
    HermitianMatrix::new(dim, data).unwrap()
}

fn hermitian_strategy() -> impl Strategy<Value = HermitianMatrix> {
    (2usize..=6).prop_flat_map(|dim| {
        prop::collection::vec(-2.0f64..2.0, dim * (dim + 1)).prop_map(move |e| hermitian(dim, &e))
    })
}

fn state(dim: usize, rank: usize, seed: u64) -> DensityMatrix {
    random_density(SamplerConfig::new(dim, rank, seed).unwrap())
}

fn problem_strategy() -> impl Strategy<Value = MixtureProblem> {
    (2usize..=5, any::<u64>(), any::<u64>(), 0.01f64..0.99).prop_map(|(dim, s1, s2, x)| {
        MixtureProblem::new(x, state(dim, dim, s1), state(dim, dim, s2)).unwrap()
    })
}

fn bound_values(r: &BoundReport) -> Vec<(&'static str, f64)> {
    vec![
        ("gap", r.gap),
        ("pinsker", r.lower.pinsker),
        ("carlen_lieb", r.lower.carlen_lieb),
        ("block_pinsker", r.lower.block_pinsker),
        ("binary_entropy", r.upper.binary_entropy),
        ("rfz_bures", r.upper.rfz_bures),
        ("rfz_trace", r.upper.rfz_trace),
        ("audenaert", r.upper.audenaert),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigendecomposition_reconstructs(h in hermitian_strategy()) {
        let e = eig_hermitian(&h);
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-12 * (1.0 + h.frobenius_norm()));
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = e.eigenvalues.iter().sum();
        prop_assert!((trace - h.trace()).abs() < 1e-12 * (1.0 + h.frobenius_norm()));
    }

    #[test]
    fn trace_norm_is_unitarily_invariant(h in hermitian_strategy(), seed in any::<u64>()) {
        let u = random_unitary(h.dim(), seed);
        let rotated = h.conjugate_by(&u);
        prop_assert!((trace_norm(&h) - trace_norm(&rotated)).abs() < 1e-10);
    }

    #[test]
    fn trace_norm_triangle_inequality(
        (a, b) in (2usize..=5).prop_flat_map(|d| {
            let n = d * (d + 1);
            (prop::collection::vec(-2.0f64..2.0, n), prop::collection::vec(-2.0f64..2.0, n))
                .prop_map(move |(x, y)| (hermitian(d, &x), hermitian(d, &y)))
        })
    ) {
        prop_assert!(trace_norm(&(&a + &b)) <= trace_norm(&a) + trace_norm(&b) + 1e-10);
    }

    #[test]
    fn sqrt_squares_back(dim in 2usize..=6, seed in any::<u64>()) {
        let rho = state(dim, dim, seed);
        let root = rho.sqrt();
        prop_assert!(root.sandwich(&HermitianMatrix::identity(dim)).max_abs_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn random_density_is_valid(dim in 2usize..=8, rank_seed in 0usize..8, seed in any::<u64>()) {
        let rank = 1 + rank_seed % dim;
        let rho = state(dim, rank, seed);
        prop_assert!((rho.matrix().trace() - 1.0).abs() < 1e-12);
        prop_assert!(rho.eigenvalues().iter().all(|&l| l >= 0.0));
        prop_assert_eq!(rho.rank(1e-10), rank);
        let again = state(dim, rank, seed);
        prop_assert_eq!(again.matrix().as_slice(), rho.matrix().as_slice());
    }

    #[test]
    fn report_is_swap_invariant(p in problem_strategy()) {
        let a = full_report(&p);
        let b = full_report(&p.swapped());
        for ((name, u), (_, v)) in bound_values(&a).into_iter().zip(bound_values(&b)) {
            prop_assert!((u - v).abs() < 1e-10, "{}: {} vs {}", name, u, v);
        }
        match (a.lower.kim, b.lower.kim) {
            (Some(u), Some(v)) => prop_assert!((u.value() - v.value()).abs() < 1e-9 * u.value().max(1.0)),
            (None, None) => {}
            _ => prop_assert!(false, "kim applicability differs"),
        }
    }

    #[test]
    fn bounds_are_jointly_unitarily_invariant(p in problem_strategy(), seed in any::<u64>()) {
        let u = random_unitary(p.dim(), seed);
        let a = full_report(&p);
        let b = full_report(&p.conjugate_by(&u));
        for ((name, u), (_, v)) in bound_values(&a).into_iter().zip(bound_values(&b)) {
            prop_assert!((u - v).abs() < 1e-9, "{}: {} vs {}", name, u, v);
        }
    }

    #[test]
    fn renyi_orders_near_one_approach_relative_entropy(dim in 2usize..=5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let (r, g) = (state(dim, dim, s1), state(dim, dim, s2));
        let h = relative_entropy(&r, &g).value();
        for a in [1.0 - 1e-4, 1.0 + 1e-4] {
            prop_assert!((renyi(a, &r, &g).unwrap().value() - h).abs() < 1e-3);
            prop_assert!((sandwiched(a, &r, &g).unwrap().value() - h).abs() < 1e-3);
        }
    }

    #[test]
    fn sandwiched_below_max_relative(dim in 2usize..=5, rank in 1usize..=5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let r = state(dim, rank.min(dim), s1);
        let g = state(dim, dim, s2);
        let cap = max_relative(&r, &g).value();
        for a in [0.5, 0.7, 0.9, 1.1, 1.5, 2.0, 3.0, 5.0, 32.0] {
            prop_assert!(sandwiched(a, &r, &g).unwrap().value() <= cap + 1e-9);
        }
    }
}
