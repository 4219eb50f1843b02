//! General counting engine for arbitrary small pattern multigraphs.
//!
//! The labeled count ranges over *injective* vertex tuples. Dropping
//! injectivity gives, for each way of merging pattern vertices (a set
//! partition), an unrestricted "collapsed" sum that factors through the
//! quotient multigraph. Inclusion–exclusion over the partition lattice
//! recovers the injective count:
//!
//! ```text
//!   L = sum over partitions p of mu(p) * G(p),
//!   mu(p) = (-1)^(m - k) * prod over blocks B of (|B| - 1)!
//! ```
//!
//! where `k` is the number of blocks and `G(p)` is the unrestricted sum
//! for the quotient. Because the weight matrix has a zero diagonal, any
//! partition that places two adjacent pattern vertices in one block
//! contributes exactly zero and is dropped from the plan.
//!
//! Each surviving `G(p)` is evaluated by variable elimination on the
//! quotient's factor network: isolated and degree-1/2 block variables are
//! folded away with vector/matrix products; higher-degree blocks are
//! handled by conditioning on one block's value and recursing.

use ndarray::{Array1, Array2};

use crate::catalog::entry;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::kernels::hadamard_power;
use crate::pattern::{automorphism_count, PatternMultigraph};

/// A set partition of `{0, .., m-1}` in restricted-growth form:
/// `rgs[i]` is the block index of element `i`, blocks numbered by first
/// appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    rgs: Vec<u8>,
    blocks: usize,
}

impl Partition {
    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.blocks];
        for &b in &self.rgs {
            sizes[b as usize] += 1;
        }
        sizes
    }

    /// Block notation with 1-based elements, e.g. `{1,3}{2}`.
    pub fn signature(&self) -> String {
        let mut out = String::new();
        for b in 0..self.blocks {
            out.push('{');
            let mut first = true;
            for (i, &bi) in self.rgs.iter().enumerate() {
                if bi as usize == b {
                    if !first {
                        out.push(',');
                    }
                    out.push_str(&(i + 1).to_string());
                    first = false;
                }
            }
            out.push('}');
        }
        out
    }
}

/// All partitions of an `m`-element set, in restricted-growth-string
/// lexicographic order (the finest partition comes first).
pub fn enumerate_partitions(m: usize) -> Vec<Partition> {
    assert!(m >= 1);
    let mut out = Vec::new();
    let mut rgs = vec![0u8; m];
    loop {
        let blocks = rgs.iter().map(|&b| b as usize + 1).max().unwrap();
        out.push(Partition {
            rgs: rgs.clone(),
            blocks,
        });
        // Next RGS: increment the rightmost position that can grow.
        let mut i = m;
        loop {
            if i == 1 {
                // Sort so the finest partition (all blocks distinct) is
                // first: we generated starting from all-zero (coarsest
                // grouping string); reverse at the end instead.
                out.reverse();
                return out;
            }
            i -= 1;
            let cap = rgs[..i].iter().copied().max().unwrap() + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// The inclusion–exclusion coefficient of a partition:
/// `(-1)^(m - k) * prod (|B| - 1)!`.
pub fn mobius_coefficient(p: &Partition) -> i64 {
    let m = p.rgs.len();
    let k = p.blocks;
    let sign = if (m - k) % 2 == 0 { 1i64 } else { -1i64 };
    let mut prod = 1i64;
    for s in p.block_sizes() {
        prod *= (1..s as i64).product::<i64>().max(1);
    }
    sign * prod
}

/// The quotient of a pattern by a partition: a multigraph on the blocks.
#[derive(Debug, Clone)]
pub struct ContractedPattern {
    /// Number of blocks.
    pub k: usize,
    /// Edges between distinct blocks, `(u, v, multiplicity)` with `u < v`,
    /// 0-based block indices, sorted.
    pub edges: Vec<(usize, usize, u32)>,
}

/// Quotients `pattern` by `partition`; `None` if some edge joins two
/// vertices of one block (the collapsed sum is then identically zero).
pub fn contract_pattern(
    pattern: &PatternMultigraph,
    partition: &Partition,
) -> Option<ContractedPattern> {
    assert_eq!(partition.rgs.len(), pattern.m());
    let mut acc: std::collections::BTreeMap<(usize, usize), u32> = Default::default();
    for &(u, v, c) in pattern.edges() {
        let bu = partition.rgs[u as usize - 1] as usize;
        let bv = partition.rgs[v as usize - 1] as usize;
        if bu == bv {
            return None;
        }
        *acc.entry((bu.min(bv), bu.max(bv))).or_insert(0) += c;
    }
    Some(ContractedPattern {
        k: partition.blocks,
        edges: acc.into_iter().map(|((u, v), c)| (u, v, c)).collect(),
    })
}

/// One surviving term of an inclusion–exclusion plan.
#[derive(Debug, Clone)]
pub struct PlanTerm {
    pub coefficient: i64,
    pub partition: Partition,
    pub contracted: ContractedPattern,
}

/// The full inclusion–exclusion plan for a pattern.
#[derive(Debug, Clone)]
pub struct EvaluationPlan {
    pub m: usize,
    pub terms: Vec<PlanTerm>,
}

impl EvaluationPlan {
    /// One line per term: `coeff<TAB>partition<TAB>edges`, edges rendered
    /// `u-v` (or `u-v^mult`) over 1-based block indices, `-` if none.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            let edges = if t.contracted.edges.is_empty() {
                "-".to_string()
            } else {
                t.contracted
                    .edges
                    .iter()
                    .map(|&(u, v, c)| {
                        if c == 1 {
                            format!("{}-{}", u + 1, v + 1)
                        } else {
                            format!("{}-{}^{}", u + 1, v + 1, c)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(",")
            };
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                t.coefficient,
                t.partition.signature(),
                edges
            ));
        }
        out
    }
}

/// Builds the plan: every partition whose quotient keeps all edges between
/// distinct blocks, with its coefficient, in partition enumeration order.
pub fn build_plan(pattern: &PatternMultigraph) -> EvaluationPlan {
    let m = pattern.m();
    let mut terms = Vec::new();
    for p in enumerate_partitions(m) {
        if let Some(contracted) = contract_pattern(pattern, &p) {
            terms.push(PlanTerm {
                coefficient: mobius_coefficient(&p),
                partition: p,
                contracted,
            });
        }
    }
    EvaluationPlan { m, terms }
}

// ---- collapsed-sum evaluation by variable elimination ----

struct FactorNetwork {
    n: usize,
    /// Unary potential per live variable (`None` = eliminated).
    unary: Vec<Option<Array1<f64>>>,
    /// Pair factors between live variables.
    factors: Vec<(usize, usize, Array2<f64>)>,
}

impl FactorNetwork {
    fn degree(&self, x: usize) -> usize {
        self.factors
            .iter()
            .filter(|&&(u, v, _)| u == x || v == x)
            .count()
    }

    fn live(&self) -> impl Iterator<Item = usize> + '_ {
        self.unary
            .iter()
            .enumerate()
            .filter_map(|(i, u)| u.as_ref().map(|_| i))
    }
}

fn eliminate(net: &mut FactorNetwork) -> f64 {
    let mut scalar = 1.0;
    loop {
        let live: Vec<usize> = net.live().collect();
        if live.is_empty() {
            return scalar;
        }
        // Lowest degree first, ties by variable index, for determinism.
        let (&x, deg) = live
            .iter()
            .map(|x| (x, net.degree(*x)))
            .min_by_key(|&(x, d)| (d, *x))
            .unwrap();
        match deg {
            0 => {
                scalar *= net.unary[x].as_ref().unwrap().sum();
                net.unary[x] = None;
            }
            1 => {
                let pos = net
                    .factors
                    .iter()
                    .position(|&(u, v, _)| u == x || v == x)
                    .unwrap();
                let (u, v, mat) = net.factors.swap_remove(pos);
                let other = if u == x { v } else { u };
                let ux = net.unary[x].take().unwrap();
                // Fold: unary_other[j] *= sum_i mat(x->other)[i][j] * ux[i].
                let folded = if u == x { mat.t().dot(&ux) } else { mat.dot(&ux) };
                let uo = net.unary[other].as_mut().unwrap();
                *uo = &*uo * &folded;
            }
            2 => {
                let idx: Vec<usize> = net
                    .factors
                    .iter()
                    .enumerate()
                    .filter(|&(_, &(u, v, _))| u == x || v == x)
                    .map(|(i, _)| i)
                    .collect();
                let (i1, i2) = (idx[0], idx[1]);
                // Remove the later index first so the earlier stays valid.
                let (u2, v2, m2) = net.factors.swap_remove(i2);
                let (u1, v1, m1) = net.factors.swap_remove(i1);
                let ux = net.unary[x].take().unwrap();
                let o1 = if u1 == x { v1 } else { u1 };
                let o2 = if u2 == x { v2 } else { u2 };
                // Orient both factors as (other, x).
                let m1 = if u1 == x { m1.t().to_owned() } else { m1 };
                let m2 = if u2 == x { m2.t().to_owned() } else { m2 };
                if o1 == o2 {
                    // Both ends at the same neighbor: collapses to a unary.
                    let folded = (&m1 * &m2).dot(&ux);
                    let uo = net.unary[o1].as_mut().unwrap();
                    *uo = &*uo * &folded;
                } else {
                    // New pair factor T[i][j] = sum_t m1[i][t] ux[t] m2[j][t].
                    let mut scaled = m2.t().to_owned();
                    for (t, mut row) in scaled.rows_mut().into_iter().enumerate() {
                        row *= ux[t];
                    }
                    net.factors.push((o1, o2, m1.dot(&scaled)));
                }
            }
            _ => {
                // Condition on the highest-degree variable and recurse.
                let pivot = live
                    .iter()
                    .copied()
                    .max_by_key(|&x| (net.degree(x), usize::MAX - x))
                    .unwrap();
                return scalar * condition_on(net, pivot);
            }
        }
    }
}

fn condition_on(net: &mut FactorNetwork, pivot: usize) -> f64 {
    let upivot = net.unary[pivot].take().unwrap();
    let incident: Vec<(usize, usize, Array2<f64>)> = {
        let mut kept = Vec::new();
        let mut inc = Vec::new();
        for f in net.factors.drain(..) {
            if f.0 == pivot || f.1 == pivot {
                inc.push(f);
            } else {
                kept.push(f);
            }
        }
        net.factors = kept;
        inc
    };
    let mut total = 0.0;
    for val in 0..net.n {
        let weight = upivot[val];
        if weight == 0.0 {
            continue;
        }
        let mut sub = FactorNetwork {
            n: net.n,
            unary: net.unary.clone(),
            factors: net.factors.clone(),
        };
        for (u, v, mat) in &incident {
            let (other, col) = if *u == pivot {
                (*v, mat.row(val).to_owned())
            } else {
                (*u, mat.column(val).to_owned())
            };
            let uo = sub.unary[other].as_mut().unwrap();
            *uo = &*uo * &col;
        }
        total += weight * eliminate(&mut sub);
    }
    total
}

/// Evaluates the collapsed (unrestricted) sum for a quotient multigraph:
/// all block-to-vertex assignments, repeats allowed, product of
/// `w(b_u, b_v)^mult` over quotient edges.
pub fn evaluate_collapsed(contracted: &ContractedPattern, g: &WeightedGraph) -> f64 {
    let n = g.n();
    let mut net = FactorNetwork {
        n,
        unary: (0..contracted.k).map(|_| Some(Array1::ones(n))).collect(),
        factors: contracted
            .edges
            .iter()
            .map(|&(u, v, c)| (u, v, hadamard_power(g.weights(), c)))
            .collect(),
    };
    eliminate(&mut net)
}

/// The result of an engine count.
#[derive(Debug, Clone)]
pub struct CountResult {
    /// Sum over injective labeled tuples.
    pub labeled: f64,
    /// `labeled / automorphisms`.
    pub unlabeled: f64,
    pub automorphisms: u64,
    /// Per-term `(coefficient, partition signature, collapsed sum)`.
    pub breakdown: Vec<(i64, String, f64)>,
}

/// Counts weighted occurrences of `pattern` in `g` via the
/// inclusion–exclusion plan.
pub fn count(pattern: &PatternMultigraph, g: &WeightedGraph) -> Result<CountResult> {
    let plan = build_plan(pattern);
    count_with_plan(&plan, pattern, g)
}

/// As [`count`], reusing a prebuilt plan.
pub fn count_with_plan(
    plan: &EvaluationPlan,
    pattern: &PatternMultigraph,
    g: &WeightedGraph,
) -> Result<CountResult> {
    if plan.m != pattern.m() {
        return Err(Error::ShapeError(format!(
            "plan is for m = {}, pattern has m = {}",
            plan.m,
            pattern.m()
        )));
    }
    let mut labeled = 0.0;
    let mut breakdown = Vec::with_capacity(plan.terms.len());
    for t in &plan.terms {
        let value = evaluate_collapsed(&t.contracted, g);
        labeled += t.coefficient as f64 * value;
        breakdown.push((t.coefficient, t.partition.signature(), value));
    }
    let automorphisms = automorphism_count(pattern);
    Ok(CountResult {
        labeled,
        unlabeled: labeled / automorphisms as f64,
        automorphisms,
        breakdown,
    })
}

/// Counts a catalog pattern by id through the engine (convenience used by
/// the CLI and tests).
pub fn count_catalog(id: &str, g: &WeightedGraph) -> Result<CountResult> {
    let e = entry(id).ok_or_else(|| Error::UnknownPattern(id.to_string()))?;
    count(&e.pattern, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_literal;

    fn bell(m: usize) -> usize {
        enumerate_partitions(m).len()
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        assert_eq!(bell(1), 1);
        assert_eq!(bell(2), 2);
        assert_eq!(bell(3), 5);
        assert_eq!(bell(4), 15);
        assert_eq!(bell(5), 52);
        assert_eq!(bell(6), 203);
    }

    #[test]
    fn finest_partition_first() {
        let ps = enumerate_partitions(3);
        assert_eq!(ps[0].rgs(), &[0, 1, 2]);
        assert_eq!(ps[0].signature(), "{1}{2}{3}");
        assert_eq!(mobius_coefficient(&ps[0]), 1);
        // Coarsest last.
        assert_eq!(ps.last().unwrap().rgs(), &[0, 0, 0]);
        assert_eq!(mobius_coefficient(ps.last().unwrap()), 2);
    }

    #[test]
    fn coefficient_signs() {
        for p in enumerate_partitions(4) {
            let c = mobius_coefficient(&p);
            let expected_sign = if (4 - p.block_count()) % 2 == 0 { 1 } else { -1 };
            assert_eq!(c.signum(), expected_sign);
        }
    }

    #[test]
    fn falling_factorial_identity() {
        // sum over partitions of mu * x^blocks = x (x-1) ... (x-m+1).
        for m in 2..=6 {
            for x in 1i64..=10 {
                let lhs: i64 = enumerate_partitions(m)
                    .iter()
                    .map(|p| mobius_coefficient(p) * x.pow(p.block_count() as u32))
                    .sum();
                let rhs: i64 = (0..m as i64).map(|j| x - j).product();
                assert_eq!(lhs, rhs, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn contraction_drops_internal_edges() {
        let p = parse_literal("3: 1-2, 2-3").unwrap();
        let parts = enumerate_partitions(3);
        // Merging 1 and 2 kills the 1-2 edge.
        let merged12 = parts.iter().find(|q| q.rgs() == [0, 0, 1]).unwrap();
        assert!(contract_pattern(&p, merged12).is_none());
        // Merging 1 and 3 survives: path becomes a doubled edge.
        let merged13 = parts.iter().find(|q| q.rgs() == [0, 1, 0]).unwrap();
        let c = contract_pattern(&p, merged13).unwrap();
        assert_eq!(c.k, 2);
        assert_eq!(c.edges, vec![(0, 1, 2)]);
    }

    #[test]
    fn plan_render_shape() {
        let p = parse_literal("3: 1-2, 2-3").unwrap();
        let plan = build_plan(&p);
        let text = plan.render();
        assert_eq!(text.lines().count(), plan.terms.len());
        assert!(text.starts_with("1\t{1}{2}{3}\t1-2,2-3\n"));
        assert!(text.contains("-1\t{1,3}{2}\t1-2^2\n"));
    }

    #[test]
    fn collapsed_sum_matches_direct_enumeration() {
        // G(p) over all (repeats allowed) assignments, checked by looping.
        let g = crate::graph::parse_edge_list("0 1 2.0\n0 2 0.5\n1 2 1.5\n1 3 0.25").unwrap();
        let p = parse_literal("4: 1-2, 2-3, 3-4").unwrap();
        for term in &build_plan(&p).terms {
            let got = evaluate_collapsed(&term.contracted, &g);
            let k = term.contracted.k;
            let n = g.n();
            let mut want = 0.0;
            let mut idx = vec![0usize; k];
            loop {
                let mut prod = 1.0;
                for &(u, v, c) in &term.contracted.edges {
                    prod *= g.weight(idx[u], idx[v]).powi(c as i32);
                }
                want += prod;
                let mut d = 0;
                loop {
                    idx[d] += 1;
                    if idx[d] < n {
                        break;
                    }
                    idx[d] = 0;
                    d += 1;
                    if d == k {
                        break;
                    }
                }
                if d == k {
                    break;
                }
            }
            assert!(
                (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                "partition {} got {got} want {want}",
                term.partition.signature()
            );
        }
    }

    #[test]
    fn engine_matches_oracle_on_random_patterns() {
        use crate::oracle::{brute_force_count, OracleConfig};
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = rng.gen_range(2..=5);
            let mut pairs = Vec::new();
            for u in 1..=m as u8 {
                for v in (u + 1)..=m as u8 {
                    for _ in 0..rng.gen_range(0..=2) {
                        pairs.push((u, v));
                    }
                }
            }
            let pattern = PatternMultigraph::new(m, &pairs).unwrap();
            let n = rng.gen_range(2..=7);
            let mut w = ndarray::Array2::zeros((n, n));
            for i in 0..n {
                for j in (i + 1)..n {
                    // Mix zeros in so pruning paths are exercised.
                    let x: f64 = if rng.gen_bool(0.3) { 0.0 } else { rng.gen() };
                    w[[i, j]] = x;
                    w[[j, i]] = x;
                }
            }
            let g = WeightedGraph::from_matrix(w).unwrap();
            let got = count(&pattern, &g).unwrap().labeled;
            let want = brute_force_count(&pattern, &g, OracleConfig::default()).unwrap();
            assert!(
                (got - want).abs() <= 1e-9 * want.abs().max(1e-3),
                "pattern {} on n={n}: got {got} want {want}",
                pattern.render()
            );
        }
    }

    #[test]
    fn high_degree_pivot_path() {
        // K5 forces conditioning (every block has degree 4).
        let k5_pattern = crate::catalog::entry("f5_u").unwrap().pattern.clone();
        let g = WeightedGraph::complete(6);
        let r = count(&k5_pattern, &g).unwrap();
        assert!((r.labeled - 720.0).abs() < 1e-6); // 6*5*4*3*2
        assert_eq!(r.automorphisms, 120);
        assert!((r.unlabeled - 6.0).abs() < 1e-9);
    }
}
