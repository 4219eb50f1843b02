//! Pattern multigraphs: the small template graphs whose weighted
//! occurrences are counted.
//!
//! Vertices are labeled `1..=m` (matching the usual i, j, k, l, q reading
//! order); edges are unordered pairs carrying a positive multiplicity.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Maximum pattern size accepted by the general engine.
pub const MAX_PATTERN_SIZE: usize = 8;

/// A small multigraph on vertices `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternMultigraph {
    m: usize,
    /// Sorted `(u, v, multiplicity)` with `u < v`, one entry per pair.
    edges: Vec<(u8, u8, u32)>,
}

impl PatternMultigraph {
    /// Builds a pattern from `(u, v)` pairs; repeated pairs accumulate
    /// multiplicity. Vertex labels are 1-based and must lie in `1..=m`.
    pub fn new(m: usize, pairs: &[(u8, u8)]) -> Result<Self> {
        if !(2..=MAX_PATTERN_SIZE).contains(&m) {
            return Err(Error::UnsupportedSize(m));
        }
        let mut mult: BTreeMap<(u8, u8), u32> = BTreeMap::new();
        for &(a, b) in pairs {
            if a == b {
                return Err(Error::SelfLoop { vertex: a as usize });
            }
            if a == 0 || b == 0 || a as usize > m || b as usize > m {
                return Err(Error::Malformed {
                    line: 0,
                    msg: format!("vertex pair {a}-{b} out of range 1..={m}"),
                });
            }
            *mult.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        let edges = mult.into_iter().map(|((u, v), c)| (u, v, c)).collect();
        Ok(Self { m, edges })
    }

    /// As [`new`](Self::new) but with explicit multiplicities.
    pub fn with_multiplicities(m: usize, edges: &[(u8, u8, u32)]) -> Result<Self> {
        let mut pairs = Vec::new();
        for &(u, v, c) in edges {
            if c == 0 {
                return Err(Error::Malformed {
                    line: 0,
                    msg: format!("edge {u}-{v} has zero multiplicity"),
                });
            }
            for _ in 0..c {
                pairs.push((u, v));
            }
        }
        Self::new(m, &pairs)
    }

    /// Pattern on `m` vertices with no edges (counts injective tuples).
    pub fn empty(m: usize) -> Result<Self> {
        Self::new(m, &[])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `(u, v, multiplicity)` triples, `u < v`, sorted.
    pub fn edges(&self) -> &[(u8, u8, u32)] {
        &self.edges
    }

    /// Total edge count including multiplicity (the degree of homogeneity
    /// of the count in the weights).
    pub fn total_multiplicity(&self) -> u32 {
        self.edges.iter().map(|&(_, _, c)| c).sum()
    }

    /// True if the simple pair `{u, v}` (1-based) is an edge.
    pub fn has_pair(&self, u: u8, v: u8) -> bool {
        let (a, b) = (u.min(v), u.max(v));
        self.edges.iter().any(|&(x, y, _)| (x, y) == (a, b))
    }

    /// Applies a relabeling `perm` (`perm[i]` is the new 1-based label of
    /// vertex `i + 1`) and returns the canonical result.
    pub fn relabeled(&self, perm: &[u8]) -> Self {
        assert_eq!(perm.len(), self.m);
        let mut pairs = Vec::new();
        for &(u, v, c) in &self.edges {
            pairs.push((perm[u as usize - 1], perm[v as usize - 1], c));
        }
        Self::with_multiplicities(self.m, &pairs).expect("relabeling preserves validity")
    }

    /// Renders the literal text form, e.g. `"3: 1-2, 2-3, 1-3"`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for &(u, v, c) in &self.edges {
            for _ in 0..c {
                parts.push(format!("{u}-{v}"));
            }
        }
        format!("{}: {}", self.m, parts.join(", "))
    }
}

/// Parses the literal pattern syntax `"m: a-b, c-d, ..."`. Repeated pairs
/// raise multiplicity. Catalog ids are resolved by the caller (see
/// [`crate::catalog::parse_pattern`]).
pub fn parse_literal(spec: &str) -> Result<PatternMultigraph> {
    let (head, tail) = spec.split_once(':').ok_or_else(|| Error::Malformed {
        line: 0,
        msg: format!("expected 'm: a-b, ...', got {spec:?}"),
    })?;
    let m: usize = head.trim().parse().map_err(|_| Error::Malformed {
        line: 0,
        msg: format!("invalid vertex count {:?}", head.trim()),
    })?;
    let mut pairs = Vec::new();
    for part in tail.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (a, b) = part.split_once('-').ok_or_else(|| Error::Malformed {
            line: 0,
            msg: format!("expected 'a-b', got {part:?}"),
        })?;
        let u: u8 = a.trim().parse().map_err(|_| Error::Malformed {
            line: 0,
            msg: format!("invalid vertex {:?}", a.trim()),
        })?;
        let v: u8 = b.trim().parse().map_err(|_| Error::Malformed {
            line: 0,
            msg: format!("invalid vertex {:?}", b.trim()),
        })?;
        pairs.push((u, v));
    }
    PatternMultigraph::new(m, &pairs)
}

/// Number of permutations of `1..=m` mapping the edge multiset to itself,
/// by exhaustive search (m <= 8, so at most 40320 permutations).
pub fn automorphism_count(p: &PatternMultigraph) -> u64 {
    let m = p.m();
    let mut perm: Vec<u8> = (1..=m as u8).collect();
    let mut count = 0u64;
    // Heap's algorithm.
    let mut c = vec![0usize; m];
    if preserves(p, &perm) {
        count += 1;
    }
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if preserves(p, &perm) {
                count += 1;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

fn preserves(p: &PatternMultigraph, perm: &[u8]) -> bool {
    p.relabeled(perm) == *p
}
