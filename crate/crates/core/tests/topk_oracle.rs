//! Top-k extraction against the power-method oracle and the cost
//! analysis.

mod common;

use tworank_core::gen::gen_preferential_attachment;
use tworank_core::googlemat::{GoogleParams, RankContext};
use tworank_core::oracle::{power_method, topk_precision};
use tworank_core::topk::{extract_topk, ContextComparator, ScoreComparator, TopKParams};

#[test]
fn comparison_count_tracks_cost_formula() {
    // Expected count: k n (sqrt(m2^2 - m2/k) + m2 - 1/(2k)). For
    // k = 20, n = 10^4, m2 = 1.15 that is about 4.5e5; measured counts
    // must sit within x1.5.
    let n = 10_000u32;
    let k = 20u32;
    let m2 = 1.15f64;
    let expected =
        (k as f64) * (n as f64) * ((m2 * m2 - m2 / k as f64).sqrt() + m2 - 1.0 / (2.0 * k as f64));
    let scores: Vec<f64> = (0..n).map(|x| ((x as u64 * 2654435761) % 999983) as f64).collect();
    let cmp = ScoreComparator::new(&scores);
    let params = TopKParams::with_multipliers(k, m2, 2.3, 7).unwrap();
    let got = extract_topk(&cmp, n, &params).unwrap();
    let ratio = got.comparisons_used as f64 / expected;
    assert!(
        (1.0 / 1.5..=1.5).contains(&ratio),
        "comparisons {} vs expected {expected:.0} (ratio {ratio:.3})",
        got.comparisons_used
    );
}

#[test]
fn comparisons_scale_linearly_in_n() {
    let k = 10u32;
    let mut per_node: Vec<f64> = Vec::new();
    for n in [2_000u32, 10_000, 50_000] {
        let scores: Vec<f64> = (0..n).map(|x| ((x as u64 * 48271) % 999983) as f64).collect();
        let cmp = ScoreComparator::new(&scores);
        let params = TopKParams::new(k, 3).unwrap();
        let got = extract_topk(&cmp, n, &params).unwrap();
        per_node.push(got.comparisons_used as f64 / n as f64);
    }
    let lo = per_node.iter().copied().fold(f64::MAX, f64::min);
    let hi = per_node.iter().copied().fold(0.0f64, f64::max);
    assert!(hi / lo < 1.3, "per-node comparisons {per_node:?}");
}

#[test]
fn real_comparator_extraction_beats_oracle_floor() {
    // Desk-scale version of the extraction quality check: PA graph,
    // default multipliers, precision against the power-method truth.
    let g = gen_preferential_attachment(3_000, 5, 11).unwrap();
    let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
    let truth = power_method(&ctx, 1e-10, 100_000).unwrap();
    assert!(truth.converged);
    let cmp = ContextComparator::new(&ctx);
    let params = TopKParams::new(10, 23).unwrap();
    let got = extract_topk(&cmp, 3_000, &params).unwrap();
    let precision = topk_precision(&got.ranked, &truth, 10);
    assert!(precision >= 0.8, "precision {precision}");
    assert!(got.comparisons_used <= (3.0 * 1.15 * 10.0 * 3_000.0) as u64);
}

#[test]
fn oracle_comparator_extraction_is_exact() {
    // With a perfect comparator and m2 > 1 the extracted set equals the
    // true top-k set.
    for seed in 0..5u64 {
        let n = 2_000u32;
        let scores: Vec<f64> = (0..n)
            .map(|x| (((x as u64).wrapping_mul(seed * 2 + 3) * 40503) % 65521) as f64)
            .collect();
        let cmp = ScoreComparator::new(&scores);
        let params = TopKParams::new(10, seed).unwrap();
        let got = extract_topk(&cmp, n, &params).unwrap();
        let mut want: Vec<u32> = (0..n).collect();
        want.sort_by(|&a, &b| {
            scores[b as usize]
                .partial_cmp(&scores[a as usize])
                .unwrap()
                .then(a.cmp(&b))
        });
        // Guard against boundary ties in the synthetic scores.
        let boundary = scores[want[9] as usize];
        let tied = scores.iter().filter(|&&s| s == boundary).count();
        if tied > 1 {
            continue;
        }
        let mut got_sorted = got.ranked.clone();
        got_sorted.sort_unstable();
        let mut want_sorted = want[..10].to_vec();
        want_sorted.sort_unstable();
        assert_eq!(got_sorted, want_sorted, "seed {seed}");
    }
}

#[test]
fn rounds_cap_errors_on_stall() {
    // An all-ties comparator cannot prune; the round cap must fire as
    // an explicit error rather than a hang.
    let scores = vec![1.0; 4000];
    let cmp = ScoreComparator::new(&scores);
    let params = TopKParams::new(5, 1).unwrap();
    match extract_topk(&cmp, 4000, &params) {
        Err(tworank_core::Error::IterationCap { .. }) => {}
        other => panic!("expected iteration-cap error, got {other:?}"),
    }
}
