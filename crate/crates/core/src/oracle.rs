//! Brute-force reference counter.
//!
//! Sums the edge-weight product over every injective assignment of pattern
//! vertices to graph vertices, by depth-first backtracking. Partial
//! products that hit an exactly-zero weight are pruned — this cannot
//! change the sum, only skip terms that are identically zero. Cost is
//! O(n^m), so sizes are capped.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::pattern::PatternMultigraph;

/// Size caps for the brute-force counter.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub max_n: usize,
    pub max_m: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { max_n: 12, max_m: 6 }
    }
}

/// Labeled count by exhaustive enumeration of injective tuples.
pub fn brute_force_count(
    pattern: &PatternMultigraph,
    g: &WeightedGraph,
    config: OracleConfig,
) -> Result<f64> {
    let n = g.n();
    let m = pattern.m();
    if n > config.max_n || m > config.max_m {
        return Err(Error::TooLarge {
            n,
            max_n: config.max_n,
            m,
            max_m: config.max_m,
        });
    }
    // Edges grouped by the later endpoint so each partial product is
    // extended as soon as both endpoints are placed.
    let mut edges_at: Vec<Vec<(usize, u32)>> = vec![Vec::new(); m];
    for &(u, v, c) in pattern.edges() {
        let (a, b) = (u as usize - 1, v as usize - 1);
        edges_at[a.max(b)].push((a.min(b), c));
    }
    let mut assignment = vec![usize::MAX; m];
    let mut used = vec![false; n];
    let mut total = 0.0;
    descend(
        g,
        &edges_at,
        &mut assignment,
        &mut used,
        0,
        1.0,
        &mut total,
    );
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    g: &WeightedGraph,
    edges_at: &[Vec<(usize, u32)>],
    assignment: &mut [usize],
    used: &mut [bool],
    depth: usize,
    partial: f64,
    total: &mut f64,
) {
    if depth == edges_at.len() {
        *total += partial;
        return;
    }
    for v in 0..used.len() {
        if used[v] {
            continue;
        }
        let mut p = partial;
        for &(earlier, mult) in &edges_at[depth] {
            let w = g.weight(assignment[earlier], v);
            p *= w.powi(mult as i32);
            if p == 0.0 {
                break;
            }
        }
        if p == 0.0 {
            continue;
        }
        assignment[depth] = v;
        used[v] = true;
        descend(g, edges_at, assignment, used, depth + 1, p, total);
        used[v] = false;
    }
}
