//! Directed weighted graphs in compressed sparse form.
//!
//! A [`Graph`] is immutable after construction. Both out-neighborhoods and
//! in-neighborhoods are indexed, so either lookup costs time proportional
//! to the neighborhood size. Duplicate arcs are merged at construction by
//! summing weights; undirected inputs are stored as two directed arcs.

use alloc::vec::Vec;

use crate::error::Error;

/// Immutable directed weighted graph.
///
/// Nodes are `0..n`. At most one stored arc exists per `(src, dst)` pair
/// and all weights are strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: u32,
    directed: bool,
    node_index_base: u32,
    out_ptr: Vec<usize>,
    out_dst: Vec<u32>,
    out_w: Vec<f64>,
    in_ptr: Vec<usize>,
    in_src: Vec<u32>,
    in_w: Vec<f64>,
}

impl Graph {
    /// Builds a graph from an arc list.
    ///
    /// Arcs are `(src, dst, weight)` with `weight > 0`. Duplicate
    /// `(src, dst)` pairs are merged by weight summation. When
    /// `directed` is false every arc is mirrored (self-loops are not
    /// doubled), and the mirrored multiset is then merged the same way.
    ///
    /// `node_index_base` records the indexing convention of the original
    /// source (0- or 1-based) so writers can round-trip it; node ids in
    /// `arcs` are always 0-based here.
    pub fn from_arcs(
        n: u32,
        directed: bool,
        node_index_base: u32,
        arcs: &[(u32, u32, f64)],
    ) -> Result<Self, Error> {
        if node_index_base > 1 {
            return Err(Error::param("node_index_base", "must be 0 or 1"));
        }
        let mut list: Vec<(u32, u32, f64)> = Vec::with_capacity(if directed {
            arcs.len()
        } else {
            arcs.len() * 2
        });
        for &(s, d, w) in arcs {
            if s >= n || d >= n {
                return Err(Error::param("arcs", alloc::format!("node id out of range: ({s}, {d}) with n = {n}")));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::param("arcs", alloc::format!("non-positive weight {w} on arc ({s}, {d})")));
            }
            list.push((s, d, w));
            if !directed && s != d {
                list.push((d, s, w));
            }
        }
        list.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        // Merge duplicates by summing weights.
        let mut merged: Vec<(u32, u32, f64)> = Vec::with_capacity(list.len());
        for (s, d, w) in list {
            match merged.last_mut() {
                Some(last) if last.0 == s && last.1 == d => last.2 += w,
                _ => merged.push((s, d, w)),
            }
        }

        let nu = n as usize;
        let mut out_ptr = alloc::vec![0usize; nu + 1];
        for &(s, _, _) in &merged {
            out_ptr[s as usize + 1] += 1;
        }
        for k in 0..nu {
            out_ptr[k + 1] += out_ptr[k];
        }
        let out_dst: Vec<u32> = merged.iter().map(|a| a.1).collect();
        let out_w: Vec<f64> = merged.iter().map(|a| a.2).collect();

        // In-adjacency: same arcs grouped by destination, sources sorted.
        let mut in_ptr = alloc::vec![0usize; nu + 1];
        for &(_, d, _) in &merged {
            in_ptr[d as usize + 1] += 1;
        }
        for k in 0..nu {
            in_ptr[k + 1] += in_ptr[k];
        }
        let mut cursor = in_ptr.clone();
        let mut in_src = alloc::vec![0u32; merged.len()];
        let mut in_w = alloc::vec![0f64; merged.len()];
        for &(s, d, w) in &merged {
            let at = cursor[d as usize];
            in_src[at] = s;
            in_w[at] = w;
            cursor[d as usize] += 1;
        }

        Ok(Graph {
            n,
            directed,
            node_index_base,
            out_ptr,
            out_dst,
            out_w,
            in_ptr,
            in_src,
            in_w,
        })
    }

    /// Number of nodes.
    pub fn node_count(&self) -> u32 {
        self.n
    }

    /// Number of stored directed arcs (an undirected edge counts twice).
    pub fn arc_count(&self) -> usize {
        self.out_dst.len()
    }

    /// Whether the graph was declared directed at construction.
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Original indexing convention (0 or 1) recorded for round-tripping.
    pub fn node_index_base(&self) -> u32 {
        self.node_index_base
    }

    /// Out-neighborhood of `src` as parallel `(dst, weight)` slices,
    /// sorted by destination.
    pub fn out_edges(&self, src: u32) -> (&[u32], &[f64]) {
        let (a, b) = (self.out_ptr[src as usize], self.out_ptr[src as usize + 1]);
        (&self.out_dst[a..b], &self.out_w[a..b])
    }

    /// In-neighborhood of `dst` as parallel `(src, weight)` slices,
    /// sorted by source.
    pub fn in_edges(&self, dst: u32) -> (&[u32], &[f64]) {
        let (a, b) = (self.in_ptr[dst as usize], self.in_ptr[dst as usize + 1]);
        (&self.in_src[a..b], &self.in_w[a..b])
    }

    /// Total outgoing weight of `src`; zero for dangling nodes.
    pub fn out_weight(&self, src: u32) -> f64 {
        self.out_edges(src).1.iter().sum()
    }

    /// In-degree of `dst` (number of distinct in-arcs).
    pub fn in_degree(&self, dst: u32) -> usize {
        self.in_ptr[dst as usize + 1] - self.in_ptr[dst as usize]
    }

    /// Iterates all stored arcs as `(src, dst, weight)` in `(src, dst)`
    /// order.
    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        (0..self.n).flat_map(move |s| {
            let (dst, w) = self.out_edges(s);
            dst.iter().zip(w.iter()).map(move |(&d, &w)| (s, d, w))
        })
    }

    /// Sum of all stored arc weights.
    pub fn total_weight(&self) -> f64 {
        self.out_w.iter().sum()
    }
}
