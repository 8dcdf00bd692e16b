//! Seeded random-graph generators.
//!
//! Every generator is deterministic for a fixed `(params, seed)` pair:
//! the same call yields a byte-identical [`Graph`]. Randomness comes from
//! a ChaCha stream seeded with the caller's value.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::Error;
use crate::graph::Graph;

fn rng_for(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Erdős–Rényi G(n, p): each ordered pair (unordered when undirected) is
/// an arc independently with probability `density`.
///
/// Uses geometric skipping over the pair index space, so the cost is
/// O(edges) rather than O(n^2).
pub fn gen_erdos_renyi(n: u32, density: f64, seed: u64, directed: bool) -> Result<Graph, Error> {
    if n < 2 {
        return Err(Error::param("n", "need at least 2 nodes"));
    }
    if !(0.0..=1.0).contains(&density) || density.is_nan() {
        return Err(Error::param("density", "must lie in [0, 1]"));
    }
    let mut rng = rng_for(seed);
    let mut arcs: Vec<(u32, u32, f64)> = Vec::new();

    let total_pairs: u64 = if directed {
        (n as u64) * (n as u64 - 1)
    } else {
        (n as u64) * (n as u64 - 1) / 2
    };

    if density >= 1.0 {
        for idx in 0..total_pairs {
            arcs.push(pair_at(idx, n, directed));
        }
    } else if density > 0.0 {
        // Skip ~Geometric(p) positions between successive hits.
        let log1mp = libm::log1p(-density);
        let mut idx: u64 = 0;
        loop {
            let u: f64 = rng.random();
            let skip = libm::floor(libm::log1p(-u) / log1mp);
            if !skip.is_finite() || skip >= (total_pairs - idx) as f64 {
                break;
            }
            idx += skip as u64;
            arcs.push(pair_at(idx, n, directed));
            idx += 1;
            if idx >= total_pairs {
                break;
            }
        }
    }

    Graph::from_arcs(n, directed, 0, &arcs)
}

/// Decodes a linear pair index into an arc (lexicographic order).
fn pair_at(idx: u64, n: u32, directed: bool) -> (u32, u32, f64) {
    let n = n as u64;
    if directed {
        let row = idx / (n - 1);
        let mut col = idx % (n - 1);
        if col >= row {
            col += 1;
        }
        (row as u32, col as u32, 1.0)
    } else {
        // Row i owns (n - 1 - i) pairs (i, i+1..n).
        let mut i = 0u64;
        let mut rem = idx;
        let mut row_len = n - 1;
        while rem >= row_len {
            rem -= row_len;
            i += 1;
            row_len -= 1;
        }
        (i as u32, (i + 1 + rem) as u32, 1.0)
    }
}

/// Directed preferential attachment with mean attachment degree `d`.
///
/// The first `d` nodes start isolated; every later node adds `d` arcs to
/// distinct existing targets chosen with probability proportional to
/// current in-degree plus one. The smoothing term keeps zero-in-degree
/// targets reachable in the directed model. Arc count is exactly
/// `(n - d) * d`.
pub fn gen_preferential_attachment(n: u32, d: u32, seed: u64) -> Result<Graph, Error> {
    if d < 1 {
        return Err(Error::param("d", "mean degree must be at least 1"));
    }
    if n <= d {
        return Err(Error::param("d", alloc::format!("need n > d, got n = {n}, d = {d}")));
    }
    let mut rng = rng_for(seed);
    let mut arcs: Vec<(u32, u32, f64)> = Vec::with_capacity(((n - d) * d) as usize);

    // Urn sampling: each node appears once for the +1 smoothing plus once
    // per received arc, so a uniform draw from the urn is a draw
    // proportional to (in-degree + 1).
    let mut urn: Vec<u32> = (0..d).collect();
    let mut chosen: Vec<u32> = Vec::with_capacity(d as usize);
    for t in d..n {
        chosen.clear();
        while chosen.len() < d as usize {
            let pick = urn[rng.random_range(0..urn.len())];
            if !chosen.contains(&pick) {
                chosen.push(pick);
            }
        }
        for &target in &chosen {
            arcs.push((t, target, 1.0));
            urn.push(target);
        }
        urn.push(t);
    }
    Graph::from_arcs(n, true, 0, &arcs)
}

/// Directed small-world graph: a ring lattice (arcs to both nearest ring
/// neighbors) plus, per node, one uniformly random shortcut arc added
/// with probability `p_shortcut`. Shortcut targets exclude the source;
/// duplicates merge by weight summation.
pub fn gen_small_world(n: u32, p_shortcut: f64, seed: u64) -> Result<Graph, Error> {
    if n < 4 {
        return Err(Error::param("n", "need at least 4 nodes"));
    }
    if !(0.0..=1.0).contains(&p_shortcut) || p_shortcut.is_nan() {
        return Err(Error::param("p_shortcut", "must lie in [0, 1]"));
    }
    let mut rng = rng_for(seed);
    let mut arcs: Vec<(u32, u32, f64)> = Vec::with_capacity(2 * n as usize);
    for i in 0..n {
        arcs.push((i, (i + 1) % n, 1.0));
        arcs.push((i, (i + n - 1) % n, 1.0));
    }
    for i in 0..n {
        if rng.random_bool(p_shortcut) {
            let mut t = rng.random_range(0..n - 1);
            if t >= i {
                t += 1;
            }
            arcs.push((i, t, 1.0));
        }
    }
    Graph::from_arcs(n, true, 0, &arcs)
}
