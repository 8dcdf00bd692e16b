//! Comparator behavior against dense oracles: constraint satisfaction
//! of every emitted weight spec, antisymmetry, verdict quality against
//! power-method truth, and the higher-order path.

mod common;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use tworank_core::comparator::{
    build_weights_higher, compare, phi_higher, phi_m2, HigherWeights, Verdict, DEFAULT_EPSILON,
};
use tworank_core::gen::{gen_erdos_renyi, gen_preferential_attachment};
use tworank_core::googlemat::{GoogleParams, RankContext};
use tworank_core::oracle::{pairwise_correct_rate, power_method};

#[test]
fn emitted_weight_specs_satisfy_constraints_densely() {
    // Every spec produced over random pairs reconstructs a w with
    // w >= 0, w_i = w_j, and (Aw)_i = (Aw)_j against dense A.
    let params = GoogleParams::default_params();
    for seed in [3u64, 11] {
        let g = gen_erdos_renyi(100, 0.08, seed, true).unwrap();
        let ctx = RankContext::build(&g, params.clone()).unwrap();
        let a = common::dense_a(&g, &params);
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xbeef);
        let mut specs = 0;
        for _ in 0..500 {
            let i = rng.random_range(0..100u32);
            let j = rng.random_range(0..100u32);
            if i == j {
                continue;
            }
            let out = compare(&ctx, i, j, &mut rng);
            let Some(spec) = out.weight_spec(DEFAULT_EPSILON) else {
                continue;
            };
            specs += 1;
            let w = spec.materialize(100);
            assert!(w.iter().all(|&x| x >= 0.0), "negative weight at ({i},{j})");
            assert!(w[spec.h as usize] >= DEFAULT_EPSILON);
            assert_eq!(w[i as usize], w[j as usize]);
            let aw = common::matvec(&a, &w);
            let resid = (aw[i as usize] - aw[j as usize]).abs();
            assert!(resid < 1e-9, "constraint residual {resid} at ({i},{j})");
        }
        assert!(specs > 300, "only {specs} specs emitted");
    }
}

#[test]
fn phi_matches_dense_two_hop_difference() {
    let params = GoogleParams::default_params();
    let g = gen_erdos_renyi(80, 0.12, 7, true).unwrap();
    let ctx = RankContext::build(&g, params.clone()).unwrap();
    let a = common::dense_a(&g, &params);
    let b = common::matmul(&a, &a);
    let mut rng = ChaCha12Rng::seed_from_u64(99);
    let mut checked = 0;
    for _ in 0..300 {
        let i = rng.random_range(0..80u32);
        let j = rng.random_range(0..80u32);
        if i == j {
            continue;
        }
        let out = compare(&ctx, i, j, &mut rng);
        let (Some(phi), Some(spec)) = (out.phi, out.weight_spec(DEFAULT_EPSILON)) else {
            continue;
        };
        checked += 1;
        let w = spec.materialize(80);
        let bw = common::matvec(&b, &w);
        let dense_phi = bw[i as usize] - bw[j as usize];
        let scale = phi.abs().max(dense_phi.abs()).max(1e-12);
        assert!(
            (phi - dense_phi).abs() / scale < 1e-8,
            "phi {phi} vs dense {dense_phi} at ({i},{j})"
        );
    }
    assert!(checked > 150);
}

#[test]
fn phi_antisymmetry_with_shared_spec() {
    let g = gen_erdos_renyi(60, 0.15, 21, true).unwrap();
    let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let mut checked = 0;
    for _ in 0..300 {
        let i = rng.random_range(0..60u32);
        let j = rng.random_range(0..60u32);
        if i == j {
            continue;
        }
        let out = compare(&ctx, i, j, &mut rng);
        let Some(mut spec) = out.weight_spec(DEFAULT_EPSILON) else {
            continue;
        };
        checked += 1;
        let phi_ij = phi_m2(&ctx, i, j, &spec);
        // Same (J, h): z and q are swap-invariant, so the mirrored call
        // reuses the spec as-is.
        spec.jset.swap(0, 1);
        let phi_ji = phi_m2(&ctx, j, i, &spec);
        assert!(
            (phi_ij + phi_ji).abs() <= 1e-12 * phi_ij.abs().max(1.0),
            "phi({i},{j}) = {phi_ij}, phi({j},{i}) = {phi_ji}"
        );
    }
    assert!(checked > 150);
}

#[test]
fn mean_h_draws_stay_small_on_er() {
    let g = gen_erdos_renyi(1000, 0.1, 2, false).unwrap();
    let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(8);
    let mut total = 0u64;
    let trials = 10_000u64;
    for _ in 0..trials {
        let i = rng.random_range(0..1000u32);
        let j = rng.random_range(0..1000u32);
        if i == j {
            continue;
        }
        total += compare(&ctx, i, j, &mut rng).samples_used as u64;
    }
    let mean = total as f64 / trials as f64;
    assert!(mean < 16.0, "mean draws {mean}");
}

#[test]
fn star_graph_order_matches_power_method() {
    let n = 40u32;
    let arcs: Vec<(u32, u32, f64)> = (1..n).map(|k| (k, 0, 1.0)).collect();
    let g = tworank_core::graph::Graph::from_arcs(n, true, 0, &arcs).unwrap();
    let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
    let truth = power_method(&ctx, 1e-10, 100_000).unwrap();
    assert!(truth.r[0] > truth.r[1]);
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    for leaf in [1u32, 7, 39] {
        let out = compare(&ctx, 0, leaf, &mut rng);
        assert_eq!(out.verdict.favors_i(), Some(true));
        let rev = compare(&ctx, leaf, 0, &mut rng);
        assert_eq!(rev.verdict.favors_i(), Some(false));
    }
}

#[test]
fn correct_rate_small_er_beats_090() {
    let g = gen_erdos_renyi(400, 0.1, 31, false).unwrap();
    let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
    let truth = power_method(&ctx, 1e-10, 100_000).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(4);
    let rate = pairwise_correct_rate(&ctx, &truth, 20_000, &mut rng);
    assert!(rate.rate >= 0.90, "rate {}", rate.rate);
}

#[test]
fn higher_order_weights_meet_constraints() {
    let params = GoogleParams::default_params();
    let g = gen_erdos_renyi(100, 0.1, 13, true).unwrap();
    let ctx = RankContext::build(&g, params.clone()).unwrap();
    let a = common::dense_a(&g, &params);
    let mut rng = ChaCha12Rng::seed_from_u64(6);
    for m in [2u32, 3] {
        for trial in 0..20u32 {
            let i = trial % 100;
            let j = (trial * 13 + 7) % 100;
            if i == j {
                continue;
            }
            let HigherWeights::Feasible(w) = build_weights_higher(&ctx, &[i, j], m, &mut rng).unwrap()
            else {
                panic!("infeasible at m={m} trial {trial}");
            };
            assert!(w.iter().all(|&x| x >= 0.0));
            assert!((w[i as usize] - w[j as usize]).abs() < 1e-12);
            let mut y = w.clone();
            for _ in 0..m - 1 {
                y = common::matvec(&a, &y);
                let resid = (y[i as usize] - y[j as usize]).abs();
                assert!(resid < 1e-8, "m={m} residual {resid}");
            }
        }
    }
}

#[test]
fn higher_order_m2_agrees_with_fast_path() {
    // Two independent valid weight vectors usually mirror the same
    // sign; cross-validate the O(n) and O(1) routes at m = 2.
    let g = gen_erdos_renyi(100, 0.1, 17, false).unwrap();
    let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(14);
    let mut agree = 0;
    let mut total = 0;
    for _ in 0..300 {
        let i = rng.random_range(0..100u32);
        let j = rng.random_range(0..100u32);
        if i == j {
            continue;
        }
        let fast = compare(&ctx, i, j, &mut rng);
        let Some(fast_favors) = fast.verdict.favors_i() else {
            continue;
        };
        let HigherWeights::Feasible(w) = build_weights_higher(&ctx, &[i, j], 2, &mut rng).unwrap()
        else {
            continue;
        };
        let phi = phi_higher(&ctx, i, j, &w, 2);
        if phi == 0.0 {
            continue;
        }
        total += 1;
        if (phi > 0.0) == fast_favors {
            agree += 1;
        }
    }
    assert!(total > 200);
    let rate = agree as f64 / total as f64;
    assert!(rate >= 0.95, "agreement {rate} over {total} pairs");
}

#[test]
fn multi_pair_weights_resolve_all_pairs() {
    let params = GoogleParams::default_params();
    let g = gen_preferential_attachment(120, 4, 9).unwrap();
    let ctx = RankContext::build(&g, params.clone()).unwrap();
    let a = common::dense_a(&g, &params);
    let mut rng = ChaCha12Rng::seed_from_u64(77);
    let set = [3u32, 17, 42];
    let HigherWeights::Feasible(w) = build_weights_higher(&ctx, &set, 2, &mut rng).unwrap() else {
        panic!("infeasible multi-pair weights");
    };
    let aw = common::matvec(&a, &w);
    for p in 0..set.len() {
        for q in p + 1..set.len() {
            assert!((w[set[p] as usize] - w[set[q] as usize]).abs() < 1e-12);
            let resid = (aw[set[p] as usize] - aw[set[q] as usize]).abs();
            assert!(resid < 1e-8, "pair ({p},{q}) residual {resid}");
        }
    }
}

#[test]
fn tie_then_exceptional_consistency() {
    // A pair with identical columns elsewhere plus asymmetric direct
    // links: structural evidence should favor the better-endorsed node.
    let n = 30u32;
    let mut arcs: Vec<(u32, u32, f64)> = Vec::new();
    // Everyone endorses node 1; node 2 gets a strict subset.
    for k in 3..n {
        arcs.push((k, 1, 1.0));
        if k % 2 == 0 {
            arcs.push((k, 2, 1.0));
        }
        arcs.push((k, (k + 1) % n, 1.0));
    }
    let g = tworank_core::graph::Graph::from_arcs(n, true, 0, &arcs).unwrap();
    let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
    let truth = power_method(&ctx, 1e-10, 100_000).unwrap();
    assert!(truth.r[1] > truth.r[2]);
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let out = compare(&ctx, 1, 2, &mut rng);
    assert_eq!(out.verdict.favors_i(), Some(true), "verdict {:?}", out.verdict);
}

#[test]
fn verdict_consistency_fixed_choice() {
    // Decision consistency: with phi produced, the verdict is its sign.
    let g = gen_preferential_attachment(300, 3, 21).unwrap();
    let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(10);
    for _ in 0..500 {
        let i = rng.random_range(0..300u32);
        let j = rng.random_range(0..300u32);
        if i == j {
            continue;
        }
        let out = compare(&ctx, i, j, &mut rng);
        match (out.verdict, out.phi) {
            (Verdict::IHigher, Some(phi)) => assert!(phi > 0.0),
            (Verdict::JHigher, Some(phi)) => assert!(phi < 0.0),
            (Verdict::Tie, Some(phi)) => assert_eq!(phi, 0.0),
            (_, None) => {}
            (v, p) => panic!("inconsistent verdict {v:?} with phi {p:?}"),
        }
    }
}
