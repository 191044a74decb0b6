//! Property-based invariants of the simulation primitives.

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use wonham::filter::{integrate_filter, tv_distance, IntegratorScheme};
use wonham::markov::{GeneratorMatrix, ProbabilitySimplex, SignalPath};
use wonham::observation::{drift_integral, synthesize_observations, ObservationModel};

fn generator_strategy(d: usize) -> impl Strategy<Value = GeneratorMatrix> {
    prop::collection::vec(0.1f64..3.0, d * d).prop_map(move |v| {
        GeneratorMatrix::from_rates(DMatrix::from_row_slice(d, d, &v)).unwrap()
    })
}

fn simplex_strategy(d: usize) -> impl Strategy<Value = ProbabilitySimplex> {
    prop::collection::vec(0.01f64..1.0, d)
        .prop_map(|v| ProbabilitySimplex::from_slice(&v).unwrap())
}

proptest! {
    #[test]
    fn transition_semigroup_property(
        g in generator_strategy(3),
        s in 0.0f64..2.0,
        t in 0.0f64..2.0,
    ) {
        let joint = g.transition_matrix(s + t).unwrap();
        let split = g.transition_matrix(s).unwrap() * g.transition_matrix(t).unwrap();
        prop_assert!((joint - split).amax() < 1e-9);
    }

    #[test]
    fn theoretical_rate_is_permutation_invariant(
        g in generator_strategy(4),
        perm_seed in any::<u64>(),
    ) {
        let d = g.dim();
        let mut order: Vec<usize> = (0..d).collect();
        // Fisher-Yates from the seed
        let mut rng = ChaCha12Rng::seed_from_u64(perm_seed);
        for i in (1..d).rev() {
            let j = rand::Rng::gen_range(&mut rng, 0..=i);
            order.swap(i, j);
        }
        let mut raw = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    raw[(i, j)] = g.rate(order[i], order[j]);
                }
            }
        }
        let permuted = GeneratorMatrix::from_rates(raw).unwrap();
        let a = g.theoretical_rate().lambda_star;
        let b = permuted.theoretical_rate().lambda_star;
        prop_assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn tv_distance_is_a_metric(
        p in simplex_strategy(4),
        q in simplex_strategy(4),
        r in simplex_strategy(4),
    ) {
        let pq = tv_distance(&p, &q).unwrap();
        let qp = tv_distance(&q, &p).unwrap();
        prop_assert_eq!(pq, qp);
        prop_assert!(pq >= 0.0 && pq <= 2.0);
        let pr = tv_distance(&p, &r).unwrap();
        let rq = tv_distance(&r, &q).unwrap();
        prop_assert!(pq <= pr + rq + 1e-15);
    }

    #[test]
    fn likelihood_ratio_constant_dominates_d_squared(
        beta in simplex_strategy(3),
        nu in simplex_strategy(3),
    ) {
        let c = wonham::filter::likelihood_ratio_constant(&beta, &nu).unwrap();
        prop_assert!(c >= 9.0 - 1e-12);
    }

    #[test]
    fn drift_integral_is_additive(
        splits in prop::collection::vec(0.1f64..0.9, 0..4),
        h in prop::collection::vec(-2.0f64..2.0, 2),
        a in 0.0f64..1.0,
        b in 0.0f64..1.0,
        c in 0.0f64..1.0,
    ) {
        let horizon = 1.0;
        let mut jumps: Vec<f64> = splits;
        jumps.sort_by(|x, y| x.partial_cmp(y).unwrap());
        jumps.dedup_by(|x, y| (*x - *y).abs() < 1e-6);
        let jump_list: Vec<(f64, usize)> = jumps
            .iter()
            .enumerate()
            .map(|(k, &t)| (t, (k + 1) % 2))
            .collect();
        let path = SignalPath::from_jumps(horizon, 0, &jump_list).unwrap();
        let hv = nalgebra::DVector::from_row_slice(&h);
        let mut pts = [a, b, c];
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let whole = drift_integral(&path, &hv, pts[0], pts[2]).unwrap();
        let left = drift_integral(&path, &hv, pts[0], pts[1]).unwrap();
        let right = drift_integral(&path, &hv, pts[1], pts[2]).unwrap();
        prop_assert!((whole - (left + right)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sampled_states_stay_in_range_and_filters_stay_on_the_simplex(
        g in generator_strategy(3),
        nu in simplex_strategy(3),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let path = g.sample_path(&nu, 1.0, &mut rng).unwrap();
        for (_, _, s) in path.segments() {
            prop_assert!(s < 3);
        }
        let model = ObservationModel::from_slice(&[0.0, 1.0, 2.0], 0.5).unwrap();
        let obs = synthesize_observations(&path, &model, 1e-2, false, &mut rng).unwrap();
        for scheme in [IntegratorScheme::SplitBayes, IntegratorScheme::EulerProjected] {
            let traj = integrate_filter(&g, &model, &nu, &obs, scheme).unwrap();
            for k in 0..traj.len() {
                let v = traj.value(k);
                prop_assert!((v.weights().sum() - 1.0).abs() < 1e-10);
                prop_assert!(v.weights().iter().all(|&x| x >= 0.0));
                if k >= 1 {
                    prop_assert!(v.is_strictly_positive());
                }
            }
        }
    }
}
