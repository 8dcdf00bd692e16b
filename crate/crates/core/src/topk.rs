//! Top-k extraction by iterative subgroup pruning.
//!
//! Nodes are shuffled into subgroups of about `m1 * k`, every subgroup
//! is fully ranked by round-robin pairwise scoring (one point to the
//! winner of each pair, half a point each on ties), and only the top
//! `m2 * k` of each subgroup survive to the next round. The loop ends
//! with one final ranking of the last subgroup. With `m1` near `2 m2`
//! the total comparison count is about `2 m2 k n`, which keeps the whole
//! extraction linear in `n` for fixed `k`.

use alloc::vec::Vec;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::comparator::{compare_with, CompareConfig, Verdict};
use crate::error::Error;
use crate::googlemat::RankContext;

/// A pairwise decision source for ranking.
///
/// The production implementation wraps a [`RankContext`]; tests inject
/// perfect comparators backed by known scores.
pub trait NodeComparator {
    fn compare_nodes(&self, i: u32, j: u32, rng: &mut dyn RngCore) -> Verdict;
}

/// The real O(1) comparator over a rank context.
pub struct ContextComparator<'a> {
    ctx: &'a RankContext,
    config: CompareConfig,
}

impl<'a> ContextComparator<'a> {
    pub fn new(ctx: &'a RankContext) -> Self {
        ContextComparator {
            ctx,
            config: CompareConfig::default(),
        }
    }

    pub fn with_config(ctx: &'a RankContext, config: CompareConfig) -> Self {
        ContextComparator { ctx, config }
    }
}

impl NodeComparator for ContextComparator<'_> {
    fn compare_nodes(&self, i: u32, j: u32, rng: &mut dyn RngCore) -> Verdict {
        compare_with(self.ctx, &self.config, i, j, &mut *rng).verdict
    }
}

/// A perfect comparator backed by explicit scores; equal scores tie.
pub struct ScoreComparator<'a> {
    scores: &'a [f64],
}

impl<'a> ScoreComparator<'a> {
    pub fn new(scores: &'a [f64]) -> Self {
        ScoreComparator { scores }
    }
}

impl NodeComparator for ScoreComparator<'_> {
    fn compare_nodes(&self, i: u32, j: u32, _rng: &mut dyn RngCore) -> Verdict {
        let (a, b) = (self.scores[i as usize], self.scores[j as usize]);
        if a > b {
            Verdict::IHigher
        } else if a < b {
            Verdict::JHigher
        } else {
            Verdict::Tie
        }
    }
}

/// Parameters of the extraction loop.
#[derive(Debug, Clone)]
pub struct TopKParams {
    pub k: u32,
    /// Survivor multiplier: `ceil(m2 k)` nodes survive each subgroup.
    pub m2: f64,
    /// Subgroup multiplier: subgroups hold about `ceil(m1 k)` nodes.
    pub m1: f64,
    pub seed: u64,
    /// Safety cap on pruning rounds.
    pub max_rounds: u32,
}

impl TopKParams {
    /// Defaults from the cost analysis: `m2 = 1.15` (one over the
    /// typical pairwise correct rate) and `m1 = 2 m2`, the minimizer of
    /// the total comparison count.
    pub fn new(k: u32, seed: u64) -> Result<Self, Error> {
        Self::with_multipliers(k, 1.15, 2.3, seed)
    }

    pub fn with_multipliers(k: u32, m2: f64, m1: f64, seed: u64) -> Result<Self, Error> {
        let params = TopKParams {
            k,
            m2,
            m1,
            seed,
            max_rounds: 64,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.k == 0 {
            return Err(Error::param("k", "must be positive"));
        }
        if !(self.m2 > 1.0) {
            return Err(Error::param("m2", "must exceed 1"));
        }
        if !(self.m1 > self.m2) {
            return Err(Error::param("m1", "must exceed m2"));
        }
        if self.group_size() < 2 {
            return Err(Error::param("m1", "ceil(m1 k) must be at least 2"));
        }
        Ok(())
    }

    pub fn group_size(&self) -> usize {
        libm::ceil(self.m1 * self.k as f64) as usize
    }

    pub fn keep_size(&self) -> usize {
        libm::ceil(self.m2 * self.k as f64) as usize
    }
}

/// Result of one full subgroup ranking.
#[derive(Debug, Clone)]
pub struct SraOutcome {
    /// Nodes sorted by score descending, node id ascending on equal
    /// scores.
    pub ranked: Vec<u32>,
    /// Scores aligned with `ranked`.
    pub scores: Vec<f64>,
    pub comparisons: u64,
}

impl SraOutcome {
    /// Maximal runs of equal-score nodes with at least two members.
    pub fn tie_chunks(&self) -> Vec<Vec<u32>> {
        let mut chunks = Vec::new();
        let mut start = 0;
        for end in 1..=self.ranked.len() {
            if end == self.ranked.len() || self.scores[end] != self.scores[start] {
                if end - start > 1 {
                    chunks.push(self.ranked[start..end].to_vec());
                }
                start = end;
            }
        }
        chunks
    }
}

/// Round-robin subgroup ranking: every pair is compared once, the
/// winner takes one point (half each on a tie), and the list is sorted
/// by score.
pub fn sra_rank<C: NodeComparator + ?Sized, R: Rng>(
    cmp: &C,
    nodes: &[u32],
    rng: &mut R,
) -> SraOutcome {
    assert!(nodes.len() >= 2, "subgroup ranking needs at least 2 nodes");
    let mut f = alloc::vec![0.0f64; nodes.len()];
    let mut comparisons = 0u64;
    for p in 0..nodes.len() {
        for q in p + 1..nodes.len() {
            comparisons += 1;
            match cmp.compare_nodes(nodes[p], nodes[q], rng) {
                Verdict::IHigher | Verdict::ExceptionalIHigher => f[p] += 1.0,
                Verdict::JHigher | Verdict::ExceptionalJHigher => f[q] += 1.0,
                Verdict::Tie => {
                    f[p] += 0.5;
                    f[q] += 0.5;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| {
        f[b].partial_cmp(&f[a])
            .unwrap()
            .then(nodes[a].cmp(&nodes[b]))
    });
    SraOutcome {
        ranked: order.iter().map(|&p| nodes[p]).collect(),
        scores: order.iter().map(|&p| f[p]).collect(),
        comparisons,
    }
}

/// Extraction result.
#[derive(Debug, Clone)]
pub struct TopKResult {
    /// The extracted list, best first (`k` nodes; fewer only in
    /// degenerate mode).
    pub ranked: Vec<u32>,
    /// Final subgroup-ranking scores aligned with `ranked`.
    pub scores: Vec<f64>,
    /// Equal-score groups inside the final ranking.
    pub tie_chunks: Vec<Vec<u32>>,
    pub comparisons_used: u64,
    pub rounds: u32,
    /// Set when `k >= n` forced a single full ranking.
    pub degenerate: bool,
}

fn subgroup_rng(seed: u64, round: u32, group: u64) -> ChaCha12Rng {
    // splitmix-style mixing keeps per-subgroup streams decoupled.
    let mut x = seed
        ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(round as u64 + 1))
        ^ (0xbf58_476d_1ce4_e5b9u64.wrapping_mul(group.wrapping_add(1)));
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    Ok::<u64, ()>(x).map(ChaCha12Rng::seed_from_u64).unwrap()
}

/// Extracts the top-k list over all `n` nodes of the comparator's
/// graph.
///
/// Each round shuffles the survivors, splits them into subgroups of
/// `ceil(m1 k)` (a short remainder merges into the previous subgroup),
/// ranks every subgroup, and keeps the top `ceil(m2 k)` of each; a tie
/// chunk straddling the cutoff is kept whole. When no more than one
/// subgroup remains, a final ranking yields the list.
///
/// With `k >= n` the whole graph is ranked in one pass and the result
/// is flagged degenerate.
pub fn extract_topk<C: NodeComparator + ?Sized>(
    cmp: &C,
    n: u32,
    params: &TopKParams,
) -> Result<TopKResult, Error> {
    params.validate()?;
    let k = params.k as usize;
    let mut comparisons = 0u64;

    if params.k >= n {
        if n < 2 {
            return Err(Error::param("k", "need at least 2 nodes to rank"));
        }
        let nodes: Vec<u32> = (0..n).collect();
        let mut rng = subgroup_rng(params.seed, 0, 0);
        let sra = sra_rank(cmp, &nodes, &mut rng);
        return Ok(TopKResult {
            tie_chunks: sra.tie_chunks(),
            ranked: sra.ranked,
            scores: sra.scores,
            comparisons_used: sra.comparisons,
            rounds: 1,
            degenerate: true,
        });
    }

    let group_size = params.group_size();
    let keep_size = params.keep_size();
    let mut remaining: Vec<u32> = (0..n).collect();
    let mut rounds = 0u32;

    while remaining.len() > group_size {
        if rounds >= params.max_rounds {
            return Err(Error::IterationCap {
                what: "extract_topk",
                reason: alloc::format!(
                    "{} nodes still remain after {} rounds",
                    remaining.len(),
                    rounds
                ),
            });
        }
        rounds += 1;
        let mut shuffle_rng = subgroup_rng(params.seed, rounds, u64::MAX);
        fisher_yates(&mut remaining, &mut shuffle_rng);

        // Partition into subgroups; a too-small tail joins the previous
        // group so no subgroup falls below the survivor size.
        let mut bounds: Vec<(usize, usize)> = Vec::new();
        let mut at = 0;
        while at < remaining.len() {
            let end = (at + group_size).min(remaining.len());
            bounds.push((at, end));
            at = end;
        }
        if bounds.len() > 1 {
            let (last_start, last_end) = *bounds.last().unwrap();
            if last_end - last_start < keep_size {
                bounds.pop();
                bounds.last_mut().unwrap().1 = last_end;
            }
        }

        let mut survivors: Vec<u32> = Vec::with_capacity(bounds.len() * (keep_size + 4));
        for (gidx, &(start, end)) in bounds.iter().enumerate() {
            let mut rng = subgroup_rng(params.seed, rounds, gidx as u64);
            let sra = sra_rank(cmp, &remaining[start..end], &mut rng);
            comparisons += sra.comparisons;
            let mut cut = keep_size.min(sra.ranked.len());
            // Keep a straddling tie chunk whole.
            while cut > 0 && cut < sra.ranked.len() && sra.scores[cut] == sra.scores[cut - 1] {
                cut += 1;
            }
            survivors.extend_from_slice(&sra.ranked[..cut]);
        }
        if survivors.len() >= remaining.len() {
            return Err(Error::IterationCap {
                what: "extract_topk",
                reason: alloc::format!(
                    "pruning stalled at {} nodes (massive tie chunks)",
                    survivors.len()
                ),
            });
        }
        remaining = survivors;
    }

    rounds += 1;
    let mut rng = subgroup_rng(params.seed, rounds, 0);
    let sra = sra_rank(cmp, &remaining, &mut rng);
    comparisons += sra.comparisons;
    let take = k.min(sra.ranked.len());
    Ok(TopKResult {
        tie_chunks: sra.tie_chunks(),
        ranked: sra.ranked[..take].to_vec(),
        scores: sra.scores[..take].to_vec(),
        comparisons_used: comparisons,
        rounds,
        degenerate: false,
    })
}

fn fisher_yates<R: Rng + ?Sized>(nodes: &mut [u32], rng: &mut R) {
    for i in (1..nodes.len()).rev() {
        let j = rng.random_range(0..=i);
        nodes.swap(i, j);
    }
}
