//! The catalog of connected 3-, 4- and 5-vertex patterns with dedicated
//! closed-form evaluators.
//!
//! Ids follow a fixed scheme: `t3_*` and `t4_*` for the 3- and 4-vertex
//! patterns, `f5_*` for the five-vertex ones. Each entry records the
//! pattern, its automorphism count, and the evaluation class of its
//! closed form (plain matrix algebra, 3-way slices, or 4-way slices).

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::pattern::{automorphism_count, parse_literal, PatternMultigraph};

/// How a catalog entry's closed form is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArityClass {
    /// Traces, Hadamard products and quadratic forms only.
    MatrixOnly,
    /// Needs a 3-way slice contraction (one trailing index).
    Tensor3,
    /// Needs a 4-way slice contraction (two trailing indices).
    Tensor4,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub pattern: PatternMultigraph,
    pub class: ArityClass,
    /// |Aut|, computed once from the pattern.
    pub automorphisms: u64,
}

const SPECS: &[(&str, usize, &[(u8, u8)], ArityClass)] = &[
    ("t3_a", 3, &[(1, 2), (2, 3), (3, 1)], ArityClass::MatrixOnly),
    ("t3_b", 3, &[(1, 2), (1, 3)], ArityClass::MatrixOnly),
    ("t4_a", 4, &[(1, 2), (2, 3), (3, 4)], ArityClass::MatrixOnly),
    (
        "t4_b",
        4,
        &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)],
        ArityClass::MatrixOnly,
    ),
    (
        "t4_c",
        4,
        &[(1, 2), (2, 3), (3, 4), (4, 1)],
        ArityClass::MatrixOnly,
    ),
    ("t4_d", 4, &[(1, 2), (1, 3), (1, 4)], ArityClass::MatrixOnly),
    (
        "t4_e",
        4,
        &[(1, 2), (2, 3), (3, 1), (1, 4)],
        ArityClass::MatrixOnly,
    ),
    (
        "t4_f",
        4,
        &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 3), (2, 4)],
        ArityClass::Tensor3,
    ),
    (
        "f5_a",
        5,
        &[(1, 2), (2, 3), (3, 4), (4, 5)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_b",
        5,
        &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_c",
        5,
        &[(1, 2), (2, 3), (1, 4), (1, 5)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_d",
        5,
        &[(1, 2), (2, 3), (2, 5), (3, 4), (4, 5)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_e",
        5,
        &[(1, 2), (2, 3), (2, 4), (3, 5), (4, 5), (5, 1)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_f",
        5,
        &[(1, 2), (2, 3), (2, 5), (3, 4), (5, 1)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_g",
        5,
        &[(1, 2), (2, 3), (2, 5), (4, 5), (5, 1)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_h",
        5,
        &[(1, 2), (2, 3), (2, 5), (3, 4), (4, 5), (5, 1)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_i",
        5,
        &[(2, 3), (2, 4), (2, 5), (3, 4), (4, 5), (5, 1)],
        ArityClass::Tensor3,
    ),
    (
        "f5_j",
        5,
        &[(1, 2), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5), (5, 1)],
        ArityClass::Tensor3,
    ),
    (
        "f5_k",
        5,
        &[(1, 2), (1, 3), (1, 4), (1, 5)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_l",
        5,
        &[(1, 2), (1, 3), (2, 3), (1, 4), (1, 5)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_m",
        5,
        &[(1, 2), (1, 3), (2, 3), (1, 4), (4, 5), (5, 1)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_n",
        5,
        &[(1, 2), (2, 3), (2, 4), (2, 5), (3, 5), (4, 5)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_o",
        5,
        &[(1, 2), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5), (5, 1)],
        ArityClass::Tensor3,
    ),
    (
        "f5_p",
        5,
        &[
            (1, 2),
            (2, 3),
            (2, 4),
            (3, 1),
            (3, 5),
            (4, 5),
            (4, 1),
            (5, 1),
        ],
        ArityClass::Tensor4,
    ),
    (
        "f5_q",
        5,
        &[(1, 2), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)],
        ArityClass::Tensor3,
    ),
    (
        "f5_r",
        5,
        &[(1, 2), (2, 3), (2, 4), (2, 5), (3, 5), (4, 5), (5, 1)],
        ArityClass::MatrixOnly,
    ),
    (
        "f5_s",
        5,
        &[
            (1, 2),
            (2, 3),
            (2, 4),
            (2, 5),
            (3, 4),
            (3, 5),
            (4, 5),
            (5, 1),
        ],
        ArityClass::Tensor3,
    ),
    (
        "f5_t",
        5,
        &[
            (1, 2),
            (1, 3),
            (1, 4),
            (1, 5),
            (2, 3),
            (2, 4),
            (2, 5),
            (3, 5),
            (4, 5),
        ],
        ArityClass::Tensor4,
    ),
    (
        "f5_u",
        5,
        &[
            (1, 2),
            (1, 3),
            (1, 4),
            (1, 5),
            (2, 3),
            (2, 4),
            (2, 5),
            (3, 4),
            (3, 5),
            (4, 5),
        ],
        ArityClass::Tensor4,
    ),
];

/// All 29 catalog entries, in catalog order.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        SPECS
            .iter()
            .map(|&(id, m, pairs, class)| {
                let pattern =
                    PatternMultigraph::new(m, pairs).expect("catalog patterns are valid");
                let automorphisms = automorphism_count(&pattern);
                CatalogEntry {
                    id,
                    pattern,
                    class,
                    automorphisms,
                }
            })
            .collect()
    })
}

/// Looks up a catalog entry by id.
pub fn entry(id: &str) -> Option<&'static CatalogEntry> {
    catalog().iter().find(|e| e.id == id)
}

/// Descriptive aliases for the most commonly requested entries.
const ALIASES: &[(&str, &str)] = &[
    ("t3_triangle", "t3_a"),
    ("t4_cycle", "t4_c"),
    ("t4_star", "t4_d"),
    ("t4_clique", "t4_f"),
    ("f5_cycle", "f5_b"),
    ("f5_star", "f5_k"),
    ("f5_clique", "f5_u"),
];

/// Resolves a pattern argument: a catalog id (or alias), or the literal
/// syntax `"m: a-b, c-d, ..."`.
pub fn parse_pattern(spec: &str) -> Result<PatternMultigraph> {
    let spec_trimmed = spec.trim();
    let resolved = ALIASES
        .iter()
        .find(|&&(alias, _)| alias == spec_trimmed)
        .map_or(spec_trimmed, |&(_, id)| id);
    if let Some(e) = entry(resolved) {
        return Ok(e.pattern.clone());
    }
    if spec.contains(':') {
        return parse_literal(spec);
    }
    Err(Error::UnknownPattern(spec.to_string()))
}

/// One line per catalog entry: `id<TAB>m<TAB>edges<TAB>aut`.
pub fn list_patterns() -> String {
    let mut out = String::new();
    for e in catalog() {
        let edges: Vec<String> = e
            .pattern
            .edges()
            .iter()
            .flat_map(|&(u, v, c)| std::iter::repeat(format!("{u}-{v}")).take(c as usize))
            .collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            e.id,
            e.pattern.m(),
            edges.join(","),
            e.automorphisms
        ));
    }
    out
}
