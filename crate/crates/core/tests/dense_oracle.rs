//! The implicit context against brute-force dense materialization of
//! `G - I` and `(G - I)^2`.

mod common;

use tworank_core::gen::{gen_erdos_renyi, gen_preferential_attachment};
use tworank_core::googlemat::{GoogleParams, RankContext};
use tworank_core::graph::Graph;

fn er_ctx(n: u32, density: f64, seed: u64) -> (Graph, RankContext) {
    let g = gen_erdos_renyi(n, density, seed, true).unwrap();
    let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
    (g, ctx)
}

#[test]
fn entries_and_rowsums_match_dense_at_n200() {
    let (g, ctx) = er_ctx(200, 0.05, 17);
    let params = GoogleParams::default_params();
    let a = common::dense_a(&g, &params);
    let b = common::matmul(&a, &a);
    let rs_a = common::row_sums(&a);
    let rs_b = common::row_sums(&b);

    for i in (0..200u32).step_by(7) {
        assert!((ctx.row_sum_a(i) - rs_a[i as usize]).abs() < 1e-10);
        assert!((ctx.row_sum_b(i) - rs_b[i as usize]).abs() < 1e-10);
        for h in (0..200u32).step_by(11) {
            let ea = ctx.entry_a(i, h);
            let eb = ctx.entry_b(i, h);
            assert!(
                (ea - a[i as usize][h as usize]).abs() < 1e-10,
                "A[{i}][{h}]: {ea} vs {}",
                a[i as usize][h as usize]
            );
            assert!(
                (eb - b[i as usize][h as usize]).abs() < 1e-10,
                "B[{i}][{h}]: {eb} vs {}",
                b[i as usize][h as usize]
            );
        }
    }
}

#[test]
fn diffs_match_dense_on_random_triples() {
    let (g, ctx) = er_ctx(100, 0.1, 29);
    let params = GoogleParams::default_params();
    let a = common::dense_a(&g, &params);
    let b = common::matmul(&a, &a);
    let mut t = 1u64;
    for _ in 0..2000 {
        // Cheap deterministic triple stream.
        t = t.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let i = ((t >> 33) % 100) as u32;
        let j = ((t >> 13) % 100) as u32;
        let h = ((t >> 3) % 100) as u32;
        if i == j {
            continue;
        }
        let da = ctx.diff_a(i, j, h);
        let db = ctx.diff_b(i, j, h);
        let wa = a[i as usize][h as usize] - a[j as usize][h as usize];
        let wb = b[i as usize][h as usize] - b[j as usize][h as usize];
        assert!((da - wa).abs() < 1e-12, "diff_a({i},{j},{h})");
        assert!((db - wb).abs() < 1e-12, "diff_b({i},{j},{h})");
    }
}

#[test]
fn b_entry_identity_at_n50() {
    // B = G^2 - 2G + I, checked entrywise against the dense product.
    let (g, ctx) = er_ctx(50, 0.15, 5);
    let params = GoogleParams::default_params();
    let a = common::dense_a(&g, &params);
    let b = common::matmul(&a, &a);
    let mut worst = 0.0f64;
    for i in 0..50u32 {
        for h in 0..50u32 {
            worst = worst.max((ctx.entry_b(i, h) - b[i as usize][h as usize]).abs());
        }
    }
    assert!(worst < 1e-10, "max abs error {worst}");
}

#[test]
fn dense_checks_hold_with_explicit_uv_and_dangling() {
    // PA graphs have no dangling nodes from attachment, so wire some in
    // manually together with non-uniform teleport vectors.
    let base = gen_preferential_attachment(60, 3, 3).unwrap();
    let mut arcs: Vec<(u32, u32, f64)> = base.arcs().collect();
    // Make nodes 0 and 7 dangling by removing their out-arcs.
    arcs.retain(|&(s, _, _)| s != 0 && s != 7);
    let g = Graph::from_arcs(60, true, 0, &arcs).unwrap();

    let mut u = vec![0.0; 60];
    let mut v = vec![0.0; 60];
    for k in 0..60 {
        u[k] = (k as f64 + 1.0) / (60.0 * 61.0 / 2.0);
        v[k] = (60.0 - k as f64) / (60.0 * 61.0 / 2.0);
    }
    let params = GoogleParams::new(0.9)
        .unwrap()
        .with_dangling_vector(u)
        .with_personalization(v);
    let ctx = RankContext::build(&g, params.clone()).unwrap();
    assert!(ctx.dangling_count() >= 2);

    let a = common::dense_a(&g, &params);
    let b = common::matmul(&a, &a);
    let rs_a = common::row_sums(&a);
    let rs_b = common::row_sums(&b);
    for i in 0..60u32 {
        assert!((ctx.row_sum_a(i) - rs_a[i as usize]).abs() < 1e-10);
        assert!((ctx.row_sum_b(i) - rs_b[i as usize]).abs() < 1e-10);
        for h in 0..60u32 {
            assert!((ctx.entry_a(i, h) - a[i as usize][h as usize]).abs() < 1e-10);
            assert!((ctx.entry_b(i, h) - b[i as usize][h as usize]).abs() < 1e-10);
        }
    }
}

#[test]
fn implicit_matvec_matches_dense() {
    let (g, ctx) = er_ctx(150, 0.08, 41);
    let params = GoogleParams::default_params();
    let gd = common::dense_g(&g, &params);
    let x: Vec<f64> = (0..150).map(|k| ((k * 37) % 19) as f64 / 19.0).collect();
    let want = common::matvec(&gd, &x);
    let got = ctx.matvec_g(&x);
    for (a, b) in got.iter().zip(&want) {
        assert!((a - b).abs() < 1e-12);
    }
    // Transpose route too.
    let gt: common::Mat = (0..150)
        .map(|j| (0..150).map(|i| gd[i][j] - if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let want_t = common::matvec(&gt, &x);
    let got_t = ctx.matvec_a_transpose(&x);
    for (a, b) in got_t.iter().zip(&want_t) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn column_stochasticity_all_columns_small_n() {
    let (_, ctx) = er_ctx(120, 0.1, 53);
    for j in 0..120u32 {
        let s: f64 = (0..120u32).map(|i| ctx.entry_a(i, j)).sum();
        assert!(s.abs() < 1e-12, "column {j} of A sums to {s}");
    }
}

#[test]
fn ghat2_budget_failure_is_loud() {
    let g = gen_erdos_renyi(100, 0.3, 1, true).unwrap();
    match RankContext::build_with_budget(&g, GoogleParams::default_params(), 100) {
        Err(tworank_core::Error::CapacityExceeded { .. }) => {}
        other => panic!("expected capacity error, got {other:?}"),
    }
}
