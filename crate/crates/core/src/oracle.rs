//! Ground-truth machinery: power-method PageRank, the pairwise
//! correct-rate harness, and the top-k precision metric.
//!
//! The power method only ever touches the implicit factored form of the
//! Google matrix (`G r = alpha Ghat r + alpha (d.r) u + (1-alpha) v`),
//! so it scales to every graph the context itself can hold.

use alloc::vec::Vec;

use rand::Rng;

use crate::comparator::{compare_with, CompareConfig};
use crate::error::Error;
use crate::googlemat::RankContext;

/// Converged PageRank vector with iteration diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PageRankVector {
    /// Nonnegative scores, unit 1-norm.
    pub r: Vec<f64>,
    pub iterations: u32,
    /// Final `||G r - r||_1`.
    pub residual: f64,
    pub converged: bool,
}

/// Power iteration from a uniform start with 1-norm renormalization.
///
/// Returns after the residual drops below `tol`; a run that exhausts
/// `max_iter` comes back flagged rather than failing, so callers can
/// decide whether the partial vector is still useful.
pub fn power_method(ctx: &RankContext, tol: f64, max_iter: u32) -> Result<PageRankVector, Error> {
    if !(tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    let n = ctx.n() as usize;
    let mut r = alloc::vec![1.0 / n as f64; n];
    let mut iterations = 0;
    let mut residual = f64::MAX;
    while iterations < max_iter {
        let next = ctx.matvec_g(&r);
        let norm: f64 = next.iter().map(|x| x.abs()).sum();
        residual = next.iter().zip(&r).map(|(a, b)| (a - b).abs()).sum();
        r = next;
        if norm != 0.0 {
            for x in r.iter_mut() {
                *x /= norm;
            }
        }
        iterations += 1;
        if residual < tol {
            return Ok(PageRankVector {
                r,
                iterations,
                residual,
                converged: true,
            });
        }
    }
    Ok(PageRankVector {
        r,
        iterations,
        residual,
        converged: false,
    })
}

/// Outcome of a correct-rate measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectRate {
    /// Fraction of evaluated comparisons agreeing with the truth order.
    pub rate: f64,
    pub evaluated: u64,
    /// Pairs skipped because the truth scores coincide.
    pub skipped: u64,
}

/// Samples `pairs` uniform random ordered pairs, runs the O(1)
/// comparator on each, and scores it against the sign of the truth
/// difference. Pairs the truth cannot rank (score gap below 1e-12) are
/// skipped.
pub fn pairwise_correct_rate<R: Rng + ?Sized>(
    ctx: &RankContext,
    truth: &PageRankVector,
    pairs: u64,
    rng: &mut R,
) -> CorrectRate {
    pairwise_correct_rate_with(ctx, &CompareConfig::default(), truth, pairs, rng)
}

pub fn pairwise_correct_rate_with<R: Rng + ?Sized>(
    ctx: &RankContext,
    config: &CompareConfig,
    truth: &PageRankVector,
    pairs: u64,
    rng: &mut R,
) -> CorrectRate {
    let n = ctx.n();
    let mut correct = 0u64;
    let mut evaluated = 0u64;
    let mut skipped = 0u64;
    for _ in 0..pairs {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            skipped += 1;
            continue;
        }
        let gap = truth.r[i as usize] - truth.r[j as usize];
        if gap.abs() < 1e-12 {
            skipped += 1;
            continue;
        }
        evaluated += 1;
        let verdict = compare_with(ctx, config, i, j, rng).verdict;
        if verdict.favors_i() == Some(gap > 0.0) {
            correct += 1;
        }
    }
    CorrectRate {
        rate: if evaluated == 0 {
            0.0
        } else {
            correct as f64 / evaluated as f64
        },
        evaluated,
        skipped,
    }
}

/// Set precision of a computed top-k list against the truth vector.
///
/// The truth set is the top k by score with every node tied at the
/// boundary value included, so a computed list can earn full credit on
/// any resolution of a truth tie.
pub fn topk_precision(computed: &[u32], truth: &PageRankVector, k: usize) -> f64 {
    assert!(k > 0 && computed.len() == k, "need exactly k computed nodes");
    let mut order: Vec<u32> = (0..truth.r.len() as u32).collect();
    order.sort_by(|&a, &b| {
        truth.r[b as usize]
            .partial_cmp(&truth.r[a as usize])
            .unwrap()
            .then(a.cmp(&b))
    });
    let cut = k.min(order.len());
    let mut truth_set: Vec<u32> = order[..cut].to_vec();
    if cut > 0 {
        let boundary = truth.r[order[cut - 1] as usize];
        for &node in &order[cut..] {
            if truth.r[node as usize] == boundary {
                truth_set.push(node);
            } else {
                break;
            }
        }
    }
    truth_set.sort_unstable();
    let hits = computed
        .iter()
        .filter(|&&x| truth_set.binary_search(&x).is_ok())
        .count();
    hits as f64 / k as f64
}
