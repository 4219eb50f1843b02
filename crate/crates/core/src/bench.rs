//! Timing harness comparing the evaluation methods on seeded random
//! graphs.
//!
//! Graphs are generated deterministically from a seed (ChaCha8; upper
//! triangle i.i.d. uniform on [0, 1), mirrored, zero diagonal) so runs are
//! reproducible. Each measurement does one untimed warm-up evaluation,
//! then `reps` timed repetitions and reports the mean.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::catalog::entry;
use crate::closed_forms::eval_closed_form;
use crate::engine;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::pattern::PatternMultigraph;

/// Which evaluation route a measurement timed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Engine,
    /// Honest nested-loop sum over all injective tuples, no pruning.
    NaiveLoop,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Engine => "engine",
            Method::NaiveLoop => "naive_loop",
        }
    }
}

/// Caps on the naive baseline; beyond these it would take hours.
pub const NAIVE_MAX_N: usize = 50;
pub const NAIVE_MAX_M: usize = 5;

/// Size caps for the timed methods: 4-way slice formulas are O(n^4) or
/// worse, everything else is at most a few matrix products.
pub const TENSOR4_MAX_N: usize = 300;
pub const MAX_N: usize = 2000;

/// Fewer repetitions than this gives meaningless means.
pub const MIN_REPS: usize = 3;

#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub pattern_id: String,
    pub method: Method,
    pub n: usize,
    pub reps: usize,
    pub mean_seconds: f64,
    pub result_value: f64,
}

/// Deterministic benchmark graph for a given size and seed.
pub fn seeded_graph(n: usize, seed: u64) -> WeightedGraph {
    // Mix n into the stream so different sizes decorrelate even with the
    // same seed, while a (n, seed) pair always gives the same graph.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
    let mut w = ndarray::Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let x: f64 = rng.gen();
            w[[i, j]] = x;
            w[[j, i]] = x;
        }
    }
    WeightedGraph::from_matrix(w).expect("generated matrix is valid")
}

/// The honest baseline: m nested loops over vertices, a distinctness
/// check, and the full edge product, with no algebraic shortcuts and no
/// zero pruning.
pub fn naive_loop_count(pattern: &PatternMultigraph, g: &WeightedGraph) -> f64 {
    let m = pattern.m();
    let n = g.n();
    let edges: Vec<(usize, usize, u32)> = pattern
        .edges()
        .iter()
        .map(|&(u, v, c)| (u as usize - 1, v as usize - 1, c))
        .collect();
    let mut tuple = vec![0usize; m];
    let mut total = 0.0;
    loop {
        let distinct = (0..m).all(|a| (a + 1..m).all(|b| tuple[a] != tuple[b]));
        if distinct {
            let mut prod = 1.0;
            for &(u, v, c) in &edges {
                prod *= g.weight(tuple[u], tuple[v]).powi(c as i32);
            }
            total += prod;
        }
        let mut d = 0;
        loop {
            tuple[d] += 1;
            if tuple[d] < n {
                break;
            }
            tuple[d] = 0;
            d += 1;
            if d == m {
                return total;
            }
        }
    }
}

fn evaluate(method: Method, id: &str, pattern: &PatternMultigraph, g: &WeightedGraph) -> Result<f64> {
    match method {
        Method::ClosedForm => eval_closed_form(id, g),
        Method::Engine => Ok(engine::count(pattern, g)?.labeled),
        Method::NaiveLoop => Ok(naive_loop_count(pattern, g)),
    }
}

/// Times one `(pattern, method, n)` cell.
pub fn measure(
    id: &str,
    method: Method,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<BenchRecord> {
    if reps < MIN_REPS {
        return Err(Error::ConfigError(format!("reps must be >= {MIN_REPS}")));
    }
    let e = entry(id).ok_or_else(|| Error::UnknownPattern(id.to_string()))?;
    if method == Method::NaiveLoop && (n > NAIVE_MAX_N || e.pattern.m() > NAIVE_MAX_M) {
        return Err(Error::ConfigError(format!(
            "naive_loop capped at n <= {NAIVE_MAX_N}, m <= {NAIVE_MAX_M} (asked n = {n})"
        )));
    }
    let cap = if e.class == crate::catalog::ArityClass::Tensor4 {
        TENSOR4_MAX_N
    } else {
        MAX_N
    };
    if n > cap {
        return Err(Error::ConfigError(format!(
            "{id} capped at n <= {cap} (asked n = {n})"
        )));
    }
    let g = seeded_graph(n, seed);
    // Warm-up, untimed.
    let value = evaluate(method, id, &e.pattern, &g)?;
    let start = Instant::now();
    for _ in 0..reps {
        let v = evaluate(method, id, &e.pattern, &g)?;
        // Keep the optimizer honest.
        std::hint::black_box(v);
    }
    let mean_seconds = start.elapsed().as_secs_f64() / reps as f64;
    Ok(BenchRecord {
        pattern_id: id.to_string(),
        method,
        n,
        reps,
        mean_seconds,
        result_value: value,
    })
}

/// Runs the grid of measurements in deterministic order.
pub fn run_bench(
    ids: &[&str],
    methods: &[Method],
    sizes: &[usize],
    reps: usize,
    seed: u64,
) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for &id in ids {
        for &n in sizes {
            for &method in methods {
                out.push(measure(id, method, n, reps, seed)?);
            }
        }
    }
    Ok(out)
}

/// CSV rendering, with a comment line pinning the generator.
pub fn render_csv(records: &[BenchRecord], seed: u64) -> String {
    let mut out = format!("# generator: chacha8 seed={seed}\n");
    out.push_str("pattern_id,method,n,reps,mean_seconds,result_value\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{:.9e},{:.17e}\n",
            r.pattern_id,
            r.method.name(),
            r.n,
            r.reps,
            r.mean_seconds,
            r.result_value
        ));
    }
    out
}

/// JSON-lines rendering (one object per record).
pub fn render_jsonl(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&format!(
            "{{\"pattern_id\":\"{}\",\"method\":\"{}\",\"n\":{},\"reps\":{},\"mean_seconds\":{:e},\"result_value\":{:e}}}\n",
            r.pattern_id,
            r.method.name(),
            r.n,
            r.reps,
            r.mean_seconds,
            r.result_value
        ));
    }
    out
}
