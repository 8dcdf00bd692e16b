//! The O(1) pairwise comparator.
//!
//! For a node pair `(i, j)` the comparator builds a nonnegative weight
//! vector `w` with `w_i = w_j` and `(Aw)_i = (Aw)_j`, then reads the sign
//! of `phi = (A^2 w)_i - (A^2 w)_j`. A positive sign predicts
//! `r_i > r_j` and a negative sign the reverse. With the row sums and
//! entry differences of `A` and `B = A^2` precomputed in a
//! [`RankContext`], a single comparison touches a bounded number of
//! context entries regardless of graph size.
//!
//! The weight vector is never materialized on the query path: it is `1`
//! everywhere except on a small index set `J ∋ i, j` (value `z`) and one
//! auxiliary index `h` (value `q`), chosen so the constraints hold with
//! `z, q >= 0`. `z` is derived directly from the constraint
//! `(Aw)_i = (Aw)_j`; that derivation also reproduces the
//! computation-friendly closed form of `phi` over row sums.
//!
//! An O(n) higher-order variant sharpens the verdict by enforcing
//! `(A^k w)_i = (A^k w)_j` for `k < m` and reading the sign at order `m`,
//! and a multi-pair variant resolves all pairs inside a small set with a
//! single weight vector.

use alloc::vec::Vec;
use arrayvec::ArrayVec;
use rand::Rng;

use crate::dense::{DenseMatrix, LuFactors};
use crate::error::Error;
use crate::googlemat::RankContext;

/// Weight floor for the auxiliary coordinate.
pub const DEFAULT_EPSILON: f64 = 1e-5;

/// Maximum size of the index set `J`: the pair plus up to eight
/// enlargement indices for degenerate pairs.
pub const MAX_JSET: usize = 10;

/// Inline index-set storage for the query path.
pub type JSet = ArrayVec<u32, MAX_JSET>;

/// Tuning knobs for [`compare_with`].
#[derive(Debug, Clone)]
pub struct CompareConfig {
    /// Weight floor `epsilon` in the auxiliary coordinate.
    pub epsilon: f64,
    /// Maximum random enlargement attempts for degenerate pairs.
    pub max_enlarge: u32,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            epsilon: DEFAULT_EPSILON,
            max_enlarge: 8,
        }
    }
}

/// Ordering verdict of one comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `phi > 0`: node `i` ranks higher.
    IHigher,
    /// `phi < 0`: node `j` ranks higher.
    JHigher,
    /// Structurally indistinguishable pair (or `phi == 0`).
    Tie,
    /// No admissible `h`; every entry difference favors `i`.
    ExceptionalIHigher,
    /// No admissible `h`; every entry difference favors `j`.
    ExceptionalJHigher,
}

impl Verdict {
    /// `Some(true)` when the verdict favors `i`, `Some(false)` when it
    /// favors `j`, `None` for a tie.
    pub fn favors_i(self) -> Option<bool> {
        match self {
            Verdict::IHigher | Verdict::ExceptionalIHigher => Some(true),
            Verdict::JHigher | Verdict::ExceptionalJHigher => Some(false),
            Verdict::Tie => None,
        }
    }
}

/// Result of one pairwise query.
#[derive(Debug, Clone)]
pub struct ComparisonOutcome {
    pub verdict: Verdict,
    /// Sign-mirror value; absent for structural ties and exceptional
    /// verdicts.
    pub phi: Option<f64>,
    /// Chosen auxiliary index.
    pub h: Option<u32>,
    /// Weight on the index set `J`.
    pub z: Option<f64>,
    /// Weight on the auxiliary index.
    pub q: Option<f64>,
    /// The index set `J` used (contains `i` and `j`).
    pub jset: JSet,
    /// Number of `h` candidates examined (random draws plus decisive
    /// scan evaluations).
    pub samples_used: u32,
}

impl ComparisonOutcome {
    fn structural(verdict: Verdict, jset: JSet, samples_used: u32) -> Self {
        ComparisonOutcome {
            verdict,
            phi: None,
            h: None,
            z: None,
            q: None,
            jset,
            samples_used,
        }
    }

    /// Reconstructs the weight spec, when the outcome produced one.
    pub fn weight_spec(&self, epsilon: f64) -> Option<WeightSpec> {
        Some(WeightSpec {
            jset: self.jset.clone(),
            h: self.h?,
            z: self.z?,
            q: self.q?,
            epsilon,
        })
    }
}

/// Compressed description of the weight vector: `z` on `jset`, `q` at
/// `h`, and `1` everywhere else.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    pub jset: JSet,
    pub h: u32,
    pub z: f64,
    pub q: f64,
    pub epsilon: f64,
}

impl WeightSpec {
    /// Expands to a dense length-`n` weight vector (diagnostics and
    /// constraint checks only; the query path never does this).
    pub fn materialize(&self, n: u32) -> Vec<f64> {
        let mut w = alloc::vec![1.0; n as usize];
        for &k in &self.jset {
            w[k as usize] = self.z;
        }
        w[self.h as usize] = self.q;
        w
    }
}

/// Sign profile of `a_ik - a_jk` over all `k` outside `{i, j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignSummary {
    AllZero,
    /// No negative difference and at least one positive.
    AllNonNegative,
    /// No positive difference and at least one negative.
    AllNonPositive,
}

/// Result of the auxiliary-index search.
#[derive(Debug, Clone, Copy)]
pub enum HSearch {
    Found {
        h: u32,
        /// `a_ih - a_jh`, kept so callers need not re-read it.
        diff: f64,
        samples: u32,
    },
    /// No index with the required sign exists; the summary classifies
    /// the remaining differences.
    NoneExists { summary: SignSummary, samples: u32 },
}

struct SignTally {
    pos: u64,
    neg: u64,
}

impl SignTally {
    fn new() -> Self {
        SignTally { pos: 0, neg: 0 }
    }

    fn record(&mut self, diff: f64) {
        self.record_many(diff, 1);
    }

    fn record_many(&mut self, diff: f64, count: u64) {
        if diff > 0.0 {
            self.pos += count;
        } else if diff < 0.0 {
            self.neg += count;
        }
    }

    fn summary(&self) -> SignSummary {
        match (self.pos, self.neg) {
            (0, 0) => SignSummary::AllZero,
            (_, 0) => SignSummary::AllNonNegative,
            (0, _) => SignSummary::AllNonPositive,
            // Unreachable when no admissible h exists: a difference of
            // either sign would oppose the J-sum.
            _ => SignSummary::AllZero,
        }
    }
}

fn contains(set: &[u32], x: u32) -> bool {
    set.iter().any(|&k| k == x)
}

/// Difference `a_ih - a_jh` for an index outside both in-neighborhoods:
/// only the rank-one terms survive, and they depend on `h` solely
/// through its dangling status.
fn outside_class_diff(ctx: &RankContext, i: u32, j: u32, dangling: bool) -> f64 {
    let n = ctx.n();
    let p = ctx.params();
    let du = p.u_at(i, n) - p.u_at(j, n);
    let dv = p.v_at(i, n) - p.v_at(j, n);
    let d = if dangling { 1.0 } else { 0.0 };
    ctx.alpha() * du * d + (1.0 - ctx.alpha()) * dv
}

/// Searches for `h ∉ jset` whose difference opposes the sign of the
/// `jset` sum `s_a`.
///
/// Strategy: sample the in-neighborhoods of `i` and `j` first (all
/// differences vanish elsewhere under uniform teleport), fall back to
/// uniform rejection sampling when teleport vectors are explicit, then
/// decide exactly by scanning the union in-neighborhood plus the two
/// constant difference classes outside it.
fn search_h<R: Rng + ?Sized>(
    ctx: &RankContext,
    i: u32,
    j: u32,
    jset: &JSet,
    s_a: f64,
    rng: &mut R,
) -> HSearch {
    debug_assert!(s_a != 0.0);
    let n = ctx.n();
    let sup_i = ctx.in_support(i);
    let sup_j = ctx.in_support(j);
    let pool = sup_i.len() + sup_j.len();
    let mut samples: u32 = 0;

    let admissible = |diff: f64| diff * s_a < 0.0;

    // Phase 1: random draws from the in-neighborhood multiset.
    if pool > 0 {
        let tries = 2 * pool + 32;
        for _ in 0..tries {
            let pick = rng.random_range(0..pool);
            let h = if pick < sup_i.len() {
                sup_i[pick]
            } else {
                sup_j[pick - sup_i.len()]
            };
            if contains(jset, h) {
                continue;
            }
            samples += 1;
            let diff = ctx.diff_a(i, j, h);
            if admissible(diff) {
                return HSearch::Found { h, diff, samples };
            }
        }
    }

    // Phase 2: uniform rejection sampling over all nodes. Skipped under
    // uniform teleport, where every difference outside the union
    // neighborhood is exactly zero.
    if !ctx.uniform_teleport() {
        for _ in 0..2 * pool + 32 {
            let h = rng.random_range(0..n);
            if contains(jset, h) {
                continue;
            }
            samples += 1;
            let diff = ctx.diff_a(i, j, h);
            if admissible(diff) {
                return HSearch::Found { h, diff, samples };
            }
        }
    }

    // Phase 3: decisive scan. Walk the union in-neighborhood once; the
    // first admissible difference wins. Scan evaluations count as
    // samples for the read-accounting bound. Along the way, tally signs
    // for the exceptional-case summary over all k outside {i, j}.
    let mut tally = SignTally::new();
    for &k in jset.iter() {
        if k == i || k == j {
            continue;
        }
        samples += 1;
        tally.record(ctx.diff_a(i, j, k));
    }
    let mut union_len: u32 = 0;
    let mut union_dangling: u32 = 0;
    let (mut a, mut b) = (0usize, 0usize);
    loop {
        let h = match (sup_i.get(a), sup_j.get(b)) {
            (Some(&x), Some(&y)) => {
                if x < y {
                    a += 1;
                    x
                } else if y < x {
                    b += 1;
                    y
                } else {
                    a += 1;
                    b += 1;
                    x
                }
            }
            (Some(&x), None) => {
                a += 1;
                x
            }
            (None, Some(&y)) => {
                b += 1;
                y
            }
            (None, None) => break,
        };
        if h == i || h == j {
            continue;
        }
        union_len += 1;
        if ctx.is_dangling(h) {
            union_dangling += 1;
        }
        if contains(jset, h) {
            continue;
        }
        samples += 1;
        let diff = ctx.diff_a(i, j, h);
        if admissible(diff) {
            return HSearch::Found { h, diff, samples };
        }
        tally.record(diff);
    }

    // Outside classes: everything not in {i, j} or the union splits
    // into dangling and non-dangling nodes with one constant difference
    // each.
    let in_union = |x: u32| {
        sup_i.binary_search(&x).is_ok() || sup_j.binary_search(&x).is_ok()
    };
    let mut outside_total = (n - 2 - union_len) as u64;
    let mut outside_dangling = (ctx.dangling_count() - union_dangling) as u64;
    for x in [i, j] {
        if ctx.is_dangling(x) {
            outside_dangling -= 1;
        }
    }
    // Enlargement indices that live outside the union were tallied
    // above and must not be re-counted in the outside classes.
    for &k in jset.iter() {
        if k == i || k == j || in_union(k) {
            continue;
        }
        outside_total -= 1;
        if ctx.is_dangling(k) {
            outside_dangling -= 1;
        }
    }
    let outside_nondangling = outside_total - outside_dangling;

    for (count, dangling) in [(outside_nondangling, false), (outside_dangling, true)] {
        if count == 0 {
            continue;
        }
        let diff = outside_class_diff(ctx, i, j, dangling);
        if diff == 0.0 {
            continue;
        }
        if admissible(diff) {
            // A member of this class is admissible; find one. Random
            // probing first, then a linear fallback. Reachable only
            // with explicit teleport vectors, so it never sits on the
            // O(1) path.
            for _ in 0..64 {
                let h = rng.random_range(0..n);
                if h == i || h == j || contains(jset, h) || in_union(h) {
                    continue;
                }
                if ctx.is_dangling(h) == dangling {
                    samples += 1;
                    return HSearch::Found { h, diff, samples };
                }
            }
            for h in 0..n {
                if h == i || h == j || contains(jset, h) || in_union(h) {
                    continue;
                }
                if ctx.is_dangling(h) == dangling {
                    samples += 1;
                    return HSearch::Found { h, diff, samples };
                }
            }
        }
        tally.record_many(diff, count);
    }

    HSearch::NoneExists {
        summary: tally.summary(),
        samples,
    }
}

/// Searches an auxiliary index for the pair `(i, j)` with `J = {i, j}`.
///
/// Errors when the pair is degenerate (`a_ii + a_ij = a_ji + a_jj`), in
/// which case the opposite-sign condition is undefined; [`compare`]
/// handles that case by enlarging `J`.
pub fn choose_h<R: Rng + ?Sized>(
    ctx: &RankContext,
    i: u32,
    j: u32,
    rng: &mut R,
) -> Result<HSearch, Error> {
    let mut jset = JSet::new();
    jset.push(i);
    jset.push(j);
    let s_a = ctx.diff_a(i, j, i) + ctx.diff_a(i, j, j);
    if s_a == 0.0 {
        return Err(Error::Precondition {
            what: "choose_h",
            reason: alloc::format!(
                "pair ({i}, {j}) is degenerate: the {{i, j}} difference sum is zero"
            ),
        });
    }
    Ok(search_h(ctx, i, j, &jset, s_a, rng))
}

/// Weight construction for `J = {i, j}` and a chosen admissible `h`.
pub fn build_weights_m2(ctx: &RankContext, i: u32, j: u32, h: u32) -> Result<WeightSpec, Error> {
    build_weights_m2_with(ctx, i, j, h, DEFAULT_EPSILON)
}

pub fn build_weights_m2_with(
    ctx: &RankContext,
    i: u32,
    j: u32,
    h: u32,
    epsilon: f64,
) -> Result<WeightSpec, Error> {
    let mut jset = JSet::new();
    jset.push(i);
    jset.push(j);
    let s_a = ctx.diff_a(i, j, i) + ctx.diff_a(i, j, j);
    if s_a == 0.0 {
        return Err(Error::Precondition {
            what: "build_weights_m2",
            reason: alloc::string::String::from("zero denominator: degenerate pair, enlarge J"),
        });
    }
    let dh = ctx.diff_a(i, j, h);
    if dh == 0.0 {
        return Err(Error::Precondition {
            what: "build_weights_m2",
            reason: alloc::string::String::from("h is not admissible: a_ih - a_jh = 0"),
        });
    }
    let (z, q) = solve_weights(ctx, i, j, s_a, dh, epsilon);
    Ok(WeightSpec {
        jset,
        h,
        z,
        q,
        epsilon,
    })
}

/// Solves the constraint `(Aw)_i = (Aw)_j` for `(z, q)` given the J-sum
/// `s_a` and the difference `d_h` at the auxiliary index:
///
/// - `zeta = sum_j(A) - sum_i(A) + s_a + d_h` collects the differences
///   outside `J ∪ {h}`, where `w = 1`
/// - `q = epsilon + max(0, zeta / d_h)`
/// - `z = (zeta - q d_h) / s_a`
///
/// Because `h` opposes the sign of `s_a`, both values come out
/// nonnegative.
fn solve_weights(
    ctx: &RankContext,
    i: u32,
    j: u32,
    s_a: f64,
    dh: f64,
    epsilon: f64,
) -> (f64, f64) {
    let zeta = ctx.row_sum_a(j) - ctx.row_sum_a(i) + s_a + dh;
    let ratio = zeta / dh;
    let q = epsilon + if ratio > 0.0 { ratio } else { 0.0 };
    let z = (zeta - q * dh) / s_a;
    (z, q)
}

/// Sign-mirror value `phi = (A^2 w)_i - (A^2 w)_j` in O(1) from row
/// sums of `B` and a handful of entry differences.
pub fn phi_m2(ctx: &RankContext, i: u32, j: u32, spec: &WeightSpec) -> f64 {
    if i == j {
        return 0.0;
    }
    let s_b: f64 = spec.jset.iter().map(|&k| ctx.diff_b(i, j, k)).sum();
    let db_h = ctx.diff_b(i, j, spec.h);
    ctx.row_sum_b(i) - ctx.row_sum_b(j) + (spec.z - 1.0) * s_b + (spec.q - 1.0) * db_h
}

/// Compares the PageRank order of nodes `i` and `j` with default
/// configuration. See [`compare_with`].
pub fn compare<R: Rng + ?Sized>(
    ctx: &RankContext,
    i: u32,
    j: u32,
    rng: &mut R,
) -> ComparisonOutcome {
    compare_with(ctx, &CompareConfig::default(), i, j, rng)
}

/// Full comparison flow:
///
/// 1. `J = {i, j}`. If the `J` difference sum is zero (common on sparse
///    graphs when neither node links the other), enlarge `J` with
///    indices drawn from the union in-neighborhood until the sum is
///    nonzero; only indices with nonzero differences can change it, and
///    under uniform teleport those all lie in the union.
/// 2. Search an `h ∉ J` whose difference opposes the `J` sum. If none
///    exists the verdict is exceptional: whichever side every remaining
///    difference favors, or a tie when they all vanish.
/// 3. Build `(z, q)`, evaluate `phi`, and map its sign to the verdict.
pub fn compare_with<R: Rng + ?Sized>(
    ctx: &RankContext,
    config: &CompareConfig,
    i: u32,
    j: u32,
    rng: &mut R,
) -> ComparisonOutcome {
    let n = ctx.n();
    assert!(i < n && j < n, "node out of range");
    if i == j {
        return ComparisonOutcome::structural(Verdict::Tie, JSet::new(), 0);
    }

    let mut jset = JSet::new();
    jset.push(i);
    jset.push(j);
    let mut s_a = ctx.diff_a(i, j, i) + ctx.diff_a(i, j, j);
    let mut samples: u32 = 0;

    if s_a == 0.0 {
        let sup_i = ctx.in_support(i);
        let sup_j = ctx.in_support(j);
        let pool = sup_i.len() + sup_j.len();
        if pool > 0 {
            for _ in 0..config.max_enlarge {
                let pick = rng.random_range(0..pool);
                let k = if pick < sup_i.len() {
                    sup_i[pick]
                } else {
                    sup_j[pick - sup_i.len()]
                };
                if contains(&jset, k) {
                    continue;
                }
                samples += 1;
                let dk = ctx.diff_a(i, j, k);
                if dk != 0.0 {
                    jset.push(k);
                    s_a += dk;
                    break;
                }
            }
            if s_a == 0.0 {
                // Random attempts failed; take the first union index
                // with a nonzero difference, if any.
                for &k in sup_i.iter().chain(sup_j) {
                    if contains(&jset, k) {
                        continue;
                    }
                    samples += 1;
                    let dk = ctx.diff_a(i, j, k);
                    if dk != 0.0 {
                        jset.push(k);
                        s_a += dk;
                        break;
                    }
                }
            }
        }
        if s_a == 0.0 && !ctx.uniform_teleport() {
            // The rank-one terms may still separate the pair through a
            // constant per-class difference.
            for dangling in [false, true] {
                let diff = outside_class_diff(ctx, i, j, dangling);
                if diff == 0.0 {
                    continue;
                }
                let found = (0..n).find(|&k| {
                    k != i
                        && k != j
                        && !contains(&jset, k)
                        && ctx.is_dangling(k) == dangling
                        && sup_i.binary_search(&k).is_err()
                        && sup_j.binary_search(&k).is_err()
                });
                if let Some(k) = found {
                    jset.push(k);
                    s_a += diff;
                    samples += 1;
                    break;
                }
            }
        }
        if s_a == 0.0 {
            // No index set separates the pair.
            return ComparisonOutcome::structural(Verdict::Tie, jset, samples);
        }
    }

    match search_h(ctx, i, j, &jset, s_a, rng) {
        HSearch::NoneExists {
            summary,
            samples: s,
        } => {
            let verdict = match summary {
                SignSummary::AllZero => Verdict::Tie,
                SignSummary::AllNonNegative => Verdict::ExceptionalIHigher,
                SignSummary::AllNonPositive => Verdict::ExceptionalJHigher,
            };
            ComparisonOutcome::structural(verdict, jset, samples + s)
        }
        HSearch::Found {
            h,
            diff,
            samples: s,
        } => {
            samples += s;
            let (z, q) = solve_weights(ctx, i, j, s_a, diff, config.epsilon);
            let spec = WeightSpec {
                jset: jset.clone(),
                h,
                z,
                q,
                epsilon: config.epsilon,
            };
            let phi = phi_m2(ctx, i, j, &spec);
            let verdict = if phi > 0.0 {
                Verdict::IHigher
            } else if phi < 0.0 {
                Verdict::JHigher
            } else {
                Verdict::Tie
            };
            ComparisonOutcome {
                verdict,
                phi: Some(phi),
                h: Some(h),
                z: Some(z),
                q: Some(q),
                jset,
                samples_used: samples,
            }
        }
    }
}

/// Outcome of the higher-order weight construction.
#[derive(Debug, Clone)]
pub enum HigherWeights {
    Feasible(Vec<f64>),
    /// No nonnegative solution within the retry cap; callers fall back
    /// to the order-2 path.
    Infeasible { attempts: u32 },
}

const HIGHER_RETRY_CAP: u32 = 32;
const HIGHER_SLACK: usize = 4;

/// Builds a dense weight vector for the order-`m` sign-mirror function
/// over a node set `S`: all coordinates of `S` share one value,
/// `(A^k w)` agrees across `S` for `k = 1..m-1`, and `w >= 0`.
///
/// This path is O(n), not O(1): the constraint rows are rows of `A^k`,
/// obtained by `m - 1` transposed mat-vec products per member of `S`.
/// Free coordinates are drawn at random, every other coordinate is
/// pinned to 1, and the small linear system is solved for the
/// minimum-norm correction; fresh coordinates are drawn until the
/// solution is nonnegative.
///
/// Sets larger than a pair are supported for `m = 2` (one weight vector
/// resolves all pairwise orders inside `S`) with `|S| <= 32`.
pub fn build_weights_higher<R: Rng + ?Sized>(
    ctx: &RankContext,
    s: &[u32],
    m: u32,
    rng: &mut R,
) -> Result<HigherWeights, Error> {
    let n = ctx.n() as usize;
    if !(2..=4).contains(&m) {
        return Err(Error::param("m", "order must lie in 2..=4"));
    }
    let mut set: Vec<u32> = s.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.len() < 2 || set.len() != s.len() {
        return Err(Error::param("S", "need at least two distinct nodes"));
    }
    if set.len() > 32 {
        return Err(Error::param("S", "multi-pair sets are capped at 32 nodes"));
    }
    if set.len() > 2 && m != 2 {
        return Err(Error::param(
            "m",
            "multi-pair weights are implemented for m = 2 only",
        ));
    }
    if set.iter().any(|&x| x as usize >= n) {
        return Err(Error::param("S", "node out of range"));
    }
    let orders = (m - 1) as usize;
    let eqs = (set.len() - 1) * orders;
    let free_count = set.len() * orders + HIGHER_SLACK;
    if n < set.len() + free_count {
        return Err(Error::param("S", "graph too small for the requested order"));
    }

    // Rows of A^k for each member of S: row_s(A^k) = (A^T)^k e_s.
    let mut rows: Vec<Vec<Vec<f64>>> = Vec::with_capacity(set.len());
    for &node in &set {
        let mut per_order = Vec::with_capacity(orders);
        let mut x = alloc::vec![0.0; n];
        x[node as usize] = 1.0;
        for _ in 0..orders {
            x = ctx.matvec_a_transpose(&x);
            per_order.push(x.clone());
        }
        rows.push(per_order);
    }

    // Difference rows (s0 vs s_t) with aggregates, reused across
    // retries since only the free-coordinate choice changes.
    struct EqRow {
        diff: Vec<f64>,
        total: f64,
        on_s: f64,
    }
    let mut eq_rows: Vec<EqRow> = Vec::with_capacity(eqs);
    for t in 1..set.len() {
        for k in 0..orders {
            let diff: Vec<f64> = rows[0][k]
                .iter()
                .zip(&rows[t][k])
                .map(|(a, b)| a - b)
                .collect();
            let total: f64 = diff.iter().sum();
            let on_s: f64 = set.iter().map(|&u| diff[u as usize]).sum();
            eq_rows.push(EqRow { diff, total, on_s });
        }
    }

    let in_set = |x: u32| set.binary_search(&x).is_ok();

    // Random free coordinates only help when their constraint
    // coefficients are nonzero, and under uniform teleport the order-1
    // row differences vanish outside the union in-neighborhood. Draw
    // most free coordinates from the combined support of the constraint
    // rows, leaving a couple of unconstrained slots as slack for
    // nonnegativity.
    let support: Vec<u32> = (0..n as u32)
        .filter(|&f| {
            !in_set(f) && eq_rows.iter().any(|row| row.diff[f as usize] != 0.0)
        })
        .collect();

    for _ in 0..HIGHER_RETRY_CAP {
        let mut free: Vec<u32> = Vec::with_capacity(free_count + 3 * set.len());
        // Levers for every member first: a low-in-degree node can only
        // be balanced through its own few in-coordinates, so each
        // member contributes some of its in-support.
        for &s_node in &set {
            let sup = ctx.in_support(s_node);
            if sup.is_empty() {
                continue;
            }
            let want = (orders + 2).min(sup.len());
            let mut got = 0;
            for _ in 0..16 * want {
                if got >= want {
                    break;
                }
                let c = sup[rng.random_range(0..sup.len())];
                if !in_set(c) && !free.contains(&c) {
                    free.push(c);
                    got += 1;
                }
            }
        }
        let mut guard = 0;
        while free.len() < free_count && !support.is_empty() && guard < 64 * free_count {
            guard += 1;
            let c = support[rng.random_range(0..support.len())];
            if !free.contains(&c) {
                free.push(c);
            }
        }
        // A couple of unconstrained slack slots.
        guard = 0;
        let slack_target = free.len() + 2;
        while free.len() < slack_target && guard < 64 * free_count {
            guard += 1;
            let c = rng.random_range(0..ctx.n());
            if in_set(c) || free.contains(&c) {
                continue;
            }
            free.push(c);
        }
        if free.len() < eqs {
            continue;
        }

        // Unknowns: the shared S value, then one value per free
        // coordinate; target is the all-ones point.
        let unknowns = 1 + free.len();
        let mut c_mat = DenseMatrix::zeros(eqs, unknowns);
        let mut rhs = alloc::vec![0.0; eqs];
        for (r, row) in eq_rows.iter().enumerate() {
            c_mat.set(r, 0, row.on_s);
            let mut on_free = 0.0;
            for (f, &coord) in free.iter().enumerate() {
                let v = row.diff[coord as usize];
                c_mat.set(r, 1 + f, v);
                on_free += v;
            }
            rhs[r] = -(row.total - row.on_s - on_free);
        }

        // Nonnegative solve by active-set elimination: project the
        // all-ones point onto the equality constraints over the active
        // unknowns (x = 1 + C^T lambda, (C C^T) lambda = rhs - C 1);
        // any coordinate that comes out negative is fixed at zero, its
        // column leaves the system, and the projection repeats.
        let mut active: Vec<bool> = alloc::vec![true; unknowns];
        let mut solution: Option<Vec<f64>> = None;
        loop {
            let live: Vec<usize> = (0..unknowns).filter(|&k| active[k]).collect();
            if live.len() < eqs {
                break;
            }
            let mut gram = DenseMatrix::zeros(eqs, eqs);
            for r in 0..eqs {
                for c in r..eqs {
                    let dot: f64 = live
                        .iter()
                        .map(|&k| c_mat.get(r, k) * c_mat.get(c, k))
                        .sum();
                    gram.set(r, c, dot);
                    gram.set(c, r, dot);
                }
            }
            let mut resid = rhs.clone();
            for (r, item) in resid.iter_mut().enumerate() {
                let c1: f64 = live.iter().map(|&k| c_mat.get(r, k)).sum();
                *item -= c1;
            }
            let lambda = match LuFactors::factor(&gram) {
                Ok(lu) => lu.solve(&resid),
                Err(_) => {
                    // Singular with vanishing residual: the current
                    // point already satisfies the constraints
                    // (structurally identical nodes). Otherwise give
                    // up on this coordinate draw.
                    if resid.iter().all(|x| x.abs() < 1e-12) {
                        alloc::vec![0.0; eqs]
                    } else {
                        break;
                    }
                }
            };
            let mut x = alloc::vec![0.0; unknowns];
            let mut worst = 0.0f64;
            let mut finite = true;
            for &k in &live {
                let corr: f64 = (0..eqs).map(|r| c_mat.get(r, k) * lambda[r]).sum();
                x[k] = 1.0 + corr;
                finite &= x[k].is_finite();
                worst = worst.min(x[k]);
            }
            if !finite {
                break;
            }
            // Near-duplicate columns can slip past the LU pivot check
            // with a denormal pivot and a solution that satisfies
            // nothing; verify the solve before trusting it.
            let xmax = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
            let mut defect = 0.0f64;
            for r in 0..eqs {
                let lhs: f64 = live.iter().map(|&k| c_mat.get(r, k) * x[k]).sum();
                defect = defect.max((lhs - rhs[r]).abs());
            }
            if defect > 1e-9 * (1.0 + xmax) {
                break;
            }
            if worst >= -1e-12 {
                for v in x.iter_mut() {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
                solution = Some(x);
                break;
            }
            for &k in &live {
                if x[k] < -1e-12 {
                    active[k] = false;
                }
            }
        }
        let Some(x) = solution else {
            continue;
        };

        let mut w = alloc::vec![1.0; n];
        for &node in &set {
            w[node as usize] = x[0];
        }
        for (f, &coord) in free.iter().enumerate() {
            w[coord as usize] = x[1 + f];
        }
        return Ok(HigherWeights::Feasible(w));
    }
    Ok(HigherWeights::Infeasible {
        attempts: HIGHER_RETRY_CAP,
    })
}

/// `phi = (A^m w)_i - (A^m w)_j` by `m` implicit mat-vec products.
pub fn phi_higher(ctx: &RankContext, i: u32, j: u32, w: &[f64], m: u32) -> f64 {
    let mut y = w.to_vec();
    for _ in 0..m {
        y = ctx.matvec_a(&y);
    }
    y[i as usize] - y[j as usize]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_erdos_renyi;
    use crate::googlemat::GoogleParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn ctx_er(n: u32, density: f64, seed: u64) -> RankContext {
        let g = gen_erdos_renyi(n, density, seed, true).unwrap();
        RankContext::build(&g, GoogleParams::default_params()).unwrap()
    }

    #[test]
    fn compare_self_is_tie() {
        let ctx = ctx_er(20, 0.3, 1);
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let out = compare(&ctx, 5, 5, &mut rng);
        assert_eq!(out.verdict, Verdict::Tie);
        assert_eq!(out.samples_used, 0);
    }

    #[test]
    fn verdict_matches_phi_sign() {
        let ctx = ctx_er(60, 0.2, 3);
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for pair in 0..60u32 {
            let i = pair % 60;
            let j = (pair * 7 + 13) % 60;
            if i == j {
                continue;
            }
            let out = compare(&ctx, i, j, &mut rng);
            if let Some(phi) = out.phi {
                match out.verdict {
                    Verdict::IHigher => assert!(phi > 0.0),
                    Verdict::JHigher => assert!(phi < 0.0),
                    Verdict::Tie => assert_eq!(phi, 0.0),
                    _ => panic!("exceptional verdict with phi"),
                }
            }
        }
    }

    #[test]
    fn q_floor_when_ratio_nonpositive() {
        let ctx = ctx_er(50, 0.2, 11);
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let mut seen_floor = false;
        for t in 0..200u32 {
            let (i, j) = (t % 50, (t * 3 + 1) % 50);
            if i == j {
                continue;
            }
            let out = compare(&ctx, i, j, &mut rng);
            if let Some(q) = out.q {
                if q == DEFAULT_EPSILON {
                    seen_floor = true;
                }
                assert!(q >= DEFAULT_EPSILON);
            }
        }
        assert!(seen_floor, "expected at least one epsilon-floored q");
    }

    #[test]
    fn weights_are_nonnegative() {
        let ctx = ctx_er(50, 0.15, 5);
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for t in 0..300u32 {
            let (i, j) = (t % 50, (t * 11 + 3) % 50);
            if i == j {
                continue;
            }
            let out = compare(&ctx, i, j, &mut rng);
            if let (Some(z), Some(q)) = (out.z, out.q) {
                assert!(z >= 0.0, "z = {z} at pair ({i}, {j})");
                assert!(q >= DEFAULT_EPSILON);
            }
        }
    }

    #[test]
    fn identical_in_structure_is_tie() {
        // Nodes 1 and 2 both receive only from node 0 with equal weight
        // and have identical self and cross entries.
        let g = crate::graph::Graph::from_arcs(
            4,
            true,
            0,
            &[(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let out = compare(&ctx, 1, 2, &mut rng);
        assert_eq!(out.verdict, Verdict::Tie);
    }

    #[test]
    fn star_center_wins() {
        // Every leaf points to the hub, which receives everything; no
        // admissible h exists and the exceptional rule fires.
        let n = 12u32;
        let arcs: Vec<(u32, u32, f64)> = (1..n).map(|k| (k, 0, 1.0)).collect();
        let g = crate::graph::Graph::from_arcs(n, true, 0, &arcs).unwrap();
        let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let out = compare(&ctx, 0, 5, &mut rng);
        assert_eq!(out.verdict.favors_i(), Some(true), "verdict {:?}", out.verdict);
    }

    #[test]
    fn choose_h_errors_on_degenerate_pair() {
        let g = crate::graph::Graph::from_arcs(4, true, 0, &[(0, 3, 1.0), (1, 3, 1.0)]).unwrap();
        let ctx = RankContext::build(&g, GoogleParams::default_params()).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        // Nodes 0 and 1 have no in-arcs and identical structure.
        assert!(choose_h(&ctx, 0, 1, &mut rng).is_err());
    }

    #[test]
    fn phi_uniform_weights_identity() {
        // With w = all-ones, phi at order m equals the row-sum
        // difference of A^m.
        let ctx = ctx_er(40, 0.25, 13);
        let w = alloc::vec![1.0; 40];
        for (i, j) in [(0u32, 1u32), (5, 17), (30, 2)] {
            let phi2 = phi_higher(&ctx, i, j, &w, 2);
            let direct = ctx.row_sum_b(i) - ctx.row_sum_b(j);
            assert!((phi2 - direct).abs() < 1e-12);
        }
    }
}
