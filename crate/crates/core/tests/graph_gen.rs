//! Generator statistics against independent oracles: binomial bands
//! for edge counts and a reference simulation for the attachment
//! model's heavy tail.

mod common;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use tworank_core::gen::{gen_erdos_renyi, gen_preferential_attachment, gen_small_world};

#[test]
fn er_mean_edge_count_within_binomial_band() {
    // Undirected G(1000, 0.1): 499500 candidate pairs, mean 49950,
    // per-seed sigma = sqrt(N p (1-p)) = 212.03. Over 200 seeds the
    // sample mean must land within 3 sigma / sqrt(200) = 44.98.
    let n_pairs: f64 = 1000.0 * 999.0 / 2.0;
    let mean = 0.1 * n_pairs;
    let sigma = (n_pairs * 0.1 * 0.9).sqrt();
    let seeds = 200;
    let mut counts = Vec::with_capacity(seeds);
    for seed in 0..seeds as u64 {
        let g = gen_erdos_renyi(1000, 0.1, seed, false).unwrap();
        counts.push(g.arc_count() as f64 / 2.0);
    }
    let (sample_mean, _) = common::mean_std(&counts);
    let band = 3.0 * sigma / (seeds as f64).sqrt();
    assert!(
        (sample_mean - mean).abs() <= band,
        "mean {sample_mean} outside {mean} +- {band}"
    );
}

#[test]
fn sm_mean_shortcut_count_within_binomial_band() {
    // Shortcuts are Bernoulli(0.2) per node; total weight minus the 2n
    // ring weight counts them exactly even after duplicate merging.
    let n = 1000u32;
    let p = 0.2;
    let seeds = 100;
    let mut counts = Vec::with_capacity(seeds);
    for seed in 0..seeds as u64 {
        let g = gen_small_world(n, p, seed).unwrap();
        counts.push(g.total_weight() - 2.0 * n as f64);
    }
    let (sample_mean, _) = common::mean_std(&counts);
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    let band = 3.0 * sigma / (seeds as f64).sqrt();
    assert!(
        (sample_mean - 200.0).abs() <= band,
        "mean {sample_mean} outside 200 +- {band}"
    );
}

/// Reference preferential-attachment simulation: explicit in-degree
/// array and linear-walk weighted sampling, sharing no code with the
/// production generator.
fn reference_pa_max_over_mean(n: u32, d: u32, seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut in_deg = vec![0u32; n as usize];
    let mut edges = 0u64;
    for t in d..n {
        let mut chosen: Vec<u32> = Vec::with_capacity(d as usize);
        while chosen.len() < d as usize {
            let total: u64 = (0..t).map(|k| in_deg[k as usize] as u64 + 1).sum();
            let mut x = rng.random_range(0..total);
            let mut pick = 0u32;
            for k in 0..t {
                let w = in_deg[k as usize] as u64 + 1;
                if x < w {
                    pick = k;
                    break;
                }
                x -= w;
            }
            if !chosen.contains(&pick) {
                chosen.push(pick);
            }
        }
        for &c in &chosen {
            in_deg[c as usize] += 1;
            edges += 1;
        }
    }
    let mean = edges as f64 / n as f64;
    *in_deg.iter().max().unwrap() as f64 / mean
}

#[test]
fn pa_in_degree_heavy_tail() {
    // Max in-degree exceeds 10x the mean in at least 90% of runs, for
    // both the production generator and the reference simulation.
    let runs = 20;
    let mut ours = 0;
    let mut reference = 0;
    for seed in 0..runs as u64 {
        let g = gen_preferential_attachment(2000, 2, seed).unwrap();
        let mean = g.arc_count() as f64 / 2000.0;
        let max = (0..2000u32).map(|i| g.in_degree(i)).max().unwrap() as f64;
        if max > 10.0 * mean {
            ours += 1;
        }
        if reference_pa_max_over_mean(2000, 2, seed) > 10.0 {
            reference += 1;
        }
    }
    assert!(ours * 10 >= runs * 9, "heavy tail in {ours}/{runs} runs");
    assert!(
        reference * 10 >= runs * 9,
        "reference heavy tail in {reference}/{runs} runs"
    );
}

#[test]
fn generator_determinism_across_models() {
    assert_eq!(
        gen_preferential_attachment(500, 3, 9).unwrap(),
        gen_preferential_attachment(500, 3, 9).unwrap()
    );
    assert_eq!(
        gen_small_world(500, 0.3, 9).unwrap(),
        gen_small_world(500, 0.3, 9).unwrap()
    );
    assert_eq!(
        gen_erdos_renyi(500, 0.05, 9, false).unwrap(),
        gen_erdos_renyi(500, 0.05, 9, false).unwrap()
    );
}

#[test]
fn er_directed_edge_count_band_small() {
    // Directed G(200, 0.05): mean = 200*199*0.05 = 1990 per seed.
    let mut counts = Vec::new();
    for seed in 0..100u64 {
        let g = gen_erdos_renyi(200, 0.05, seed, true).unwrap();
        counts.push(g.arc_count() as f64);
    }
    let n_pairs: f64 = 200.0 * 199.0;
    let mean = 0.05 * n_pairs;
    let sigma = (n_pairs * 0.05 * 0.95).sqrt();
    let (sample_mean, _) = common::mean_std(&counts);
    let band = 3.0 * sigma / 10.0;
    assert!((sample_mean - mean).abs() <= band);
}
