//! Closed-form evaluators for the 29 catalog patterns.
//!
//! Each evaluator computes the labeled weighted count of its pattern as an
//! explicit expression in powers, Hadamard products and slice contractions
//! of the weight matrix. All evaluators use O(n^2) working memory; the
//! tensor-class ones go through [`crate::kernels::slice_inner_3`] /
//! [`crate::kernels::slice_inner_4`] instead of materializing tensors.
//!
//! The identities here were cross-checked against a brute-force oracle
//! before being frozen; two transcription issues found during that check
//! are documented in `docs/FORMULA_ERRATA.md`.

use ndarray::Array1;

use crate::catalog::entry;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::kernels::{
    hadamard_power, slice_inner_3, slice_inner_4, trace, Matrix, Slice3Factor, Slice4Factor,
    Vector,
};

/// Shared powers of the weight matrix, computed once per evaluation.
pub struct EvalCache {
    /// The weight matrix A.
    pub a: Matrix,
    /// A^2 (matrix square).
    pub a2: Matrix,
    /// A^3 (matrix cube).
    pub a3: Matrix,
    /// Entrywise square of A.
    pub ah2: Matrix,
    /// Entrywise cube of A.
    pub ah3: Matrix,
    /// Row sums A 1.
    pub r: Vector,
}

impl EvalCache {
    pub fn new(g: &WeightedGraph) -> Self {
        let a = g.weights().clone();
        let a2 = a.dot(&a);
        let a3 = a2.dot(&a);
        let ah2 = hadamard_power(&a, 2);
        let ah3 = hadamard_power(&a, 3);
        let r = g.row_sums();
        Self {
            a,
            a2,
            a3,
            ah2,
            ah3,
            r,
        }
    }
}

fn sum(m: &Matrix) -> f64 {
    m.sum()
}

fn dvec(m: &Matrix) -> Vector {
    m.diag().to_owned()
}

fn scale_rows(base: &Matrix, d: &Vector) -> Matrix {
    let mut out = base.clone();
    for (i, mut row) in out.rows_mut().into_iter().enumerate() {
        row *= d[i];
    }
    out
}

/// `X diag(v) Y` without forming the diagonal matrix.
fn x_diag_y(x: &Matrix, v: &Vector, y: &Matrix) -> Matrix {
    x.dot(&scale_rows(y, v))
}

/// Evaluates the closed form for catalog pattern `id`, returning the
/// labeled count.
pub fn eval_closed_form(id: &str, g: &WeightedGraph) -> Result<f64> {
    if entry(id).is_none() {
        return Err(Error::UnknownPattern(id.to_string()));
    }
    let c = EvalCache::new(g);
    Ok(eval_with_cache(id, &c))
}

/// Evaluates every catalog closed form on one graph, sharing the cached
/// matrix powers across all 29 evaluators. Returns `(id, labeled count)`
/// pairs in catalog order.
pub fn eval_all(g: &WeightedGraph) -> Vec<(&'static str, f64)> {
    let c = EvalCache::new(g);
    crate::catalog::catalog()
        .iter()
        .map(|e| (e.id, eval_with_cache(e.id, &c)))
        .collect()
}

fn eval_with_cache(id: &str, c: &EvalCache) -> f64 {
    match id {
        "t3_a" => t3_a(c),
        "t3_b" => t3_b(c),
        "t4_a" => t4_a(c),
        "t4_b" => t4_b(c),
        "t4_c" => t4_c(c),
        "t4_d" => t4_d(c),
        "t4_e" => t4_e(c),
        "t4_f" => t4_f(c),
        "f5_a" => f5_a(c),
        "f5_b" => f5_b(c),
        "f5_c" => f5_c(c),
        "f5_d" => f5_d(c),
        "f5_e" => f5_e(c),
        "f5_f" => f5_f(c),
        "f5_g" => f5_g(c),
        "f5_h" => f5_h(c),
        "f5_i" => f5_i(c),
        "f5_j" => f5_j(c),
        "f5_k" => f5_k(c),
        "f5_l" => f5_l(c),
        "f5_m" => f5_m(c),
        "f5_n" => f5_n(c),
        "f5_o" => f5_o(c),
        "f5_p" => f5_p(c),
        "f5_q" => f5_q(c),
        "f5_r" => f5_r(c),
        "f5_s" => f5_s(c),
        "f5_t" => f5_t(c),
        "f5_u" => f5_u(c),
        _ => unreachable!("catalog membership checked by caller"),
    }
}

// -------- three vertices --------

fn t3_a(c: &EvalCache) -> f64 {
    trace(&c.a3)
}

fn t3_b(c: &EvalCache) -> f64 {
    sum(&(&c.a2 - &c.ah2))
}

// -------- four vertices --------

fn t4_a(c: &EvalCache) -> f64 {
    sum(&(&c.a3 - &(2.0 * c.a.dot(&c.ah2)) + &c.ah3)) - trace(&c.a3)
}

fn t4_b(c: &EvalCache) -> f64 {
    let a2h2 = hadamard_power(&c.a2, 2);
    sum(&(&(&a2h2 * &c.a) - &(&c.ah2.dot(&c.ah2) * &c.a)))
}

fn t4_c(c: &EvalCache) -> f64 {
    trace(&c.a2.dot(&c.a2)) + sum(&(&hadamard_power(&c.a, 4) - &(2.0 * c.ah2.dot(&c.ah2))))
}

fn t4_d(c: &EvalCache) -> f64 {
    c.r.mapv(|v| v.powi(3)).sum() + sum(&(&(2.0 * &c.ah3) - &(3.0 * c.ah2.dot(&c.a))))
}

fn t4_e(c: &EvalCache) -> f64 {
    dvec(&c.a3).dot(&c.r) - 2.0 * trace(&c.ah2.dot(&c.a2))
}

fn t4_f(c: &EvalCache) -> f64 {
    // K4 = sum_k tr(S(k)^3) with S(k) = A scaled by the k-th column of A.
    let f = Slice3Factor::scaled(c.a.clone(), c.a.clone());
    slice_inner_3(&[f.clone(), f.clone(), f]).expect("non-empty plan")
}

// -------- five vertices --------

fn f5_a(c: &EvalCache) -> f64 {
    let ah2_rs = c.ah2.dot(&Array1::ones(c.a.nrows()));
    let m = &c.a2.dot(&c.a2) - &(2.0 * c.a2.dot(&c.ah2)) - &x_diag_y(&c.a, &ah2_rs, &c.a)
        + &(3.0 * c.ah2.dot(&c.ah2))
        + &(2.0 * c.ah3.dot(&c.a))
        - &(2.0 * hadamard_power(&c.a, 4));
    sum(&m) - 2.0 * dvec(&c.a3).dot(&c.r) - trace(&c.a2.dot(&c.a2))
        + 3.0 * trace(&c.ah2.dot(&c.a2))
}

fn f5_b(c: &EvalCache) -> f64 {
    trace(&c.a2.dot(&c.a3)) - 5.0 * c.ah2.dot(&dvec(&c.a3)).sum()
        + 5.0 * trace(&c.ah3.dot(&c.a2))
}

fn f5_c(c: &EvalCache) -> f64 {
    let a2_rs = &c.a2.dot(&Array1::ones(c.a.nrows()));
    let ah2_rs = c.ah2.dot(&Array1::ones(c.a.nrows()));
    let m = &x_diag_y(&c.a, a2_rs, &c.a) - &x_diag_y(&c.a, &ah2_rs, &c.a)
        - &(2.0 * c.a.dot(&c.ah2).dot(&c.a))
        - &c.ah2.dot(&c.a2)
        + &(4.0 * c.ah3.dot(&c.a))
        + &c.ah2.dot(&c.ah2)
        - &(2.0 * hadamard_power(&c.a, 4));
    sum(&m) - 2.0 * dvec(&c.a3).dot(&c.r) + 4.0 * trace(&c.ah2.dot(&c.a2))
}

fn f5_d(c: &EvalCache) -> f64 {
    let ah2_rs = c.ah2.dot(&Array1::ones(c.a.nrows()));
    let m = &(4.0 * c.ah3.dot(&c.ah2)) + &hadamard_power(&c.a, 4).dot(&c.a)
        - &(&hadamard_power(&c.a2, 2) * &c.a)
        - &x_diag_y(&c.a, &ah2_rs, &c.ah2)
        - &c.a.dot(&c.ah2.dot(&c.ah2))
        - &(2.0 * hadamard_power(&c.a, 5));
    dvec(&c.a2.dot(&c.a2)).dot(&c.r) + sum(&m) + trace(&c.a.dot(&c.ah2).dot(&c.ah2))
        - 2.0 * trace(&c.ah2.dot(&c.a3))
}

fn f5_e(c: &EvalCache) -> f64 {
    let m = &hadamard_power(&c.a2, 3) + &(3.0 * hadamard_power(&c.a, 4).dot(&c.ah2))
        + &(2.0 * c.ah3.dot(&c.ah3))
        - &(2.0 * hadamard_power(&c.a, 6));
    let ah2_rs = c.ah2.dot(&Array1::ones(c.a.nrows()));
    sum(&m) - ah2_rs.mapv(|v| v.powi(3)).sum() - 3.0 * trace(&c.ah2.dot(&c.ah2).dot(&c.a2))
}

fn f5_f(c: &EvalCache) -> f64 {
    let a2_rs = c.a2.dot(&Array1::ones(c.a.nrows()));
    let ah2_rs = c.ah2.dot(&Array1::ones(c.a.nrows()));
    dvec(&c.a3).dot(&a2_rs) - 2.0 * dvec(&c.ah2.dot(&c.a2)).dot(&c.r)
        - dvec(&c.a3).dot(&ah2_rs)
        - 2.0 * sum(&(&hadamard_power(&c.a2, 2) * &c.a))
        + 2.0 * trace(&c.ah3.dot(&c.a2))
        + 2.0 * trace(&c.ah2.dot(&c.ah2).dot(&c.a))
}

fn f5_g(c: &EvalCache) -> f64 {
    let m = &c.a.dot(&(&c.a2 * &c.a)).dot(&c.a) - &(&hadamard_power(&c.a2, 2) * &c.a);
    sum(&m) - 2.0 * dvec(&c.a.dot(&c.ah2).dot(&c.a)).dot(&c.r)
        - 2.0 * dvec(&c.ah2.dot(&c.a2)).dot(&c.r)
        + 4.0 * trace(&c.ah2.dot(&c.ah2).dot(&c.a))
        + trace(&c.ah3.dot(&c.a2))
}

fn f5_h(c: &EvalCache) -> f64 {
    let ah2_rs = c.ah2.dot(&Array1::ones(c.a.nrows()));
    let m = &(&(&c.a * &c.a2) * &c.a3) - &(2.0 * (&(&c.a * &c.a2) * &c.ah2.dot(&c.a)));
    sum(&m) + 2.0 * trace(&c.a.dot(&c.ah2).dot(&c.ah3))
        + trace(&hadamard_power(&c.a, 4).dot(&c.a2))
        - 2.0 * dvec(&c.ah2.dot(&c.a2)).dot(&ah2_rs)
}

fn f5_i(c: &EvalCache) -> f64 {
    let aa = Slice3Factor::scaled(c.a.clone(), c.a.clone());
    let t = slice_inner_3(&[aa.clone(), aa.clone(), aa]).expect("non-empty plan");
    dvec(&c.a.dot(&(&c.a * &c.a2)).dot(&c.a)).dot(&c.r)
        - dvec(&c.ah2.dot(&c.a).dot(&c.ah2)).dot(&c.r)
        - 2.0 * trace(&c.a.dot(&c.ah2).dot(&(&c.a * &c.a2)))
        + 2.0 * trace(&c.a.dot(&c.ah2).dot(&c.ah3))
        - t
}

fn f5_j(c: &EvalCache) -> f64 {
    let aa = Slice3Factor::scaled(c.a.clone(), c.a.clone());
    let ba = Slice3Factor::scaled(c.a.clone(), c.a2.clone());
    let t = slice_inner_3(&[aa.clone(), aa, ba]).expect("non-empty plan");
    let ah2_rs = c.ah2.dot(&Array1::ones(c.a.nrows()));
    t - 2.0 * trace(&(&c.ah2.dot(&c.a) * &c.a).dot(&c.a).dot(&c.ah2))
        - dvec(&c.ah2.dot(&c.a).dot(&c.ah2)).dot(&ah2_rs)
        + 2.0 * trace(&c.a.dot(&c.ah2).dot(&hadamard_power(&c.a, 4)))
}

fn f5_k(c: &EvalCache) -> f64 {
    let r2 = c.r.mapv(|v| v * v);
    c.r.mapv(|v| v.powi(4)).sum() - 6.0 * c.ah2.dot(&r2).sum()
        + sum(&(&(3.0 * c.ah2.dot(&c.ah2)) + &(8.0 * c.ah3.dot(&c.a))
            - &(6.0 * hadamard_power(&c.a, 4))))
}

fn f5_l(c: &EvalCache) -> f64 {
    let r2 = c.r.mapv(|v| v * v);
    let ah2_rs = c.ah2.dot(&Array1::ones(c.a.nrows()));
    (&c.a * &c.a2).dot(&r2).sum() - 4.0 * dvec(&c.a2.dot(&c.ah2)).dot(&c.r)
        - dvec(&c.a3).dot(&ah2_rs)
        + 2.0 * trace(&c.ah2.dot(&c.ah2).dot(&c.a))
        + 4.0 * trace(&c.ah3.dot(&c.a2))
}

fn f5_m(c: &EvalCache) -> f64 {
    dvec(&c.a3).mapv(|v| v * v).sum()
        - 4.0 * sum(&(&hadamard_power(&c.a2, 2) * &c.ah2))
        + 2.0 * trace(&c.ah2.dot(&c.ah2).dot(&c.ah2))
}

fn f5_n(c: &EvalCache) -> f64 {
    let a2h2 = hadamard_power(&c.a2, 2);
    let m = &c.a.dot(&(&a2h2 * &c.a)) - &(2.0 * (&(&c.ah2.dot(&c.a) * &c.a2) * &c.a))
        - &(&c.ah2 * &a2h2);
    sum(&m) - c.r.dot(&dvec(&c.ah2.dot(&c.ah2).dot(&c.a)))
        + trace(&(&c.ah2.dot(&c.ah2).dot(&c.ah2) + &(2.0 * c.ah3.dot(&c.ah2).dot(&c.a))))
}

fn f5_o(c: &EvalCache) -> f64 {
    let aa = Slice3Factor::scaled(c.a.clone(), c.a.clone());
    let ac = Slice3Factor::scaled(c.ah2.clone(), c.a.clone());
    let t = slice_inner_3(&[aa.clone(), aa, ac]).expect("non-empty plan");
    let e = &c.a * &c.a2;
    trace(
        &(&c.a.dot(&e).dot(&e) - &c.a.dot(&c.ah2).dot(&(&c.ah2 * &c.a2))
            - &c.a2.dot(&(&c.ah2.dot(&c.a) * &c.ah2))
            + &c.ah3.dot(&c.ah2).dot(&c.ah2)),
    ) - t
}

fn f5_p(c: &EvalCache) -> f64 {
    let f1 = Slice4Factor::new(
        c.a.clone(),
        Some(c.a.clone()),
        Some(c.a.clone()),
        Some(c.a.clone()),
    );
    let f2 = Slice4Factor::new(c.a.clone(), Some(c.a.clone()), None, None);
    let f3 = Slice4Factor::new(c.a.clone(), None, Some(c.a.clone()), None);
    let t = slice_inner_4(&[f1, f2, f3]).expect("non-empty plan");
    t + trace(&hadamard_power(&c.a, 4).dot(&c.ah2).dot(&c.ah2))
        - 2.0 * sum(&(&hadamard_power(&c.a.dot(&c.ah2), 2) * &c.ah2))
}

fn f5_q(c: &EvalCache) -> f64 {
    let aa = Slice3Factor::scaled(c.a.clone(), c.a.clone());
    let m = &scale_rows(&c.a, &c.r) - &(3.0 * &c.ah2);
    let f3 = Slice3Factor::scaled(m, c.a.clone());
    slice_inner_3(&[aa.clone(), aa, f3]).expect("non-empty plan")
}

fn f5_r(c: &EvalCache) -> f64 {
    let m = &(&hadamard_power(&c.a2, 3) * &c.a)
        - &(3.0 * (&(&c.a2 * &c.a) * &c.ah2.dot(&c.ah2)));
    sum(&m) + 2.0 * trace(&c.ah3.dot(&c.ah3).dot(&c.a))
}

fn f5_s(c: &EvalCache) -> f64 {
    let aa = Slice3Factor::scaled(c.a.clone(), c.a.clone());
    let ae = Slice3Factor::scaled(&c.a * &c.a2, c.a.clone());
    let ac = Slice3Factor::scaled(c.ah2.clone(), c.a.clone());
    let t1 = slice_inner_3(&[aa.clone(), aa.clone(), ae]).expect("non-empty plan");
    let t2 = slice_inner_3(&[aa.clone(), ac.clone(), ac]).expect("non-empty plan");
    t1 - 2.0 * t2
}

fn f5_t(c: &EvalCache) -> f64 {
    let f1 = Slice4Factor::new(
        c.a.clone(),
        Some(c.a.clone()),
        Some(c.a.clone()),
        Some(c.a.clone()),
    );
    let f2 = Slice4Factor::new(c.a.clone(), Some(c.a.clone()), Some(c.a.clone()), None);
    let f3 = Slice4Factor::new(c.a.clone(), None, Some(c.a.clone()), None);
    let t4 = slice_inner_4(&[f1, f2, f3]).expect("non-empty plan");
    let ca = Slice3Factor::scaled(c.a.clone(), c.ah2.clone());
    t4 - slice_inner_3(&[ca.clone(), ca.clone(), ca]).expect("non-empty plan")
}

fn f5_u(c: &EvalCache) -> f64 {
    let f1 = Slice4Factor::new(
        c.a.clone(),
        Some(c.a.clone()),
        Some(c.a.clone()),
        Some(c.a.clone()),
    );
    let f2 = Slice4Factor::new(c.a.clone(), Some(c.a.clone()), Some(c.a.clone()), None);
    slice_inner_4(&[f1, f2.clone(), f2]).expect("non-empty plan")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    #[test]
    fn batch_matches_single_evaluations() {
        let g = crate::bench::seeded_graph(7, 13);
        let all = eval_all(&g);
        assert_eq!(all.len(), 29);
        for (id, v) in all {
            assert_eq!(v, eval_closed_form(id, &g).unwrap(), "{id}");
        }
    }

    #[test]
    fn unknown_id() {
        let g = WeightedGraph::complete(4);
        assert!(matches!(
            eval_closed_form("nope", &g),
            Err(Error::UnknownPattern(_))
        ));
    }

    #[test]
    fn complete_graph_fixtures() {
        // Labeled counts on K_n are falling factorials when the pattern has
        // as many vertices as edges allow.
        let k6 = WeightedGraph::complete(6);
        assert!((eval_closed_form("t3_a", &k6).unwrap() - 120.0).abs() < 1e-9);
        let k4 = WeightedGraph::complete(4);
        assert!((eval_closed_form("t4_c", &k4).unwrap() - 24.0).abs() < 1e-9);
        let k5 = WeightedGraph::complete(5);
        assert!((eval_closed_form("f5_u", &k5).unwrap() - 120.0).abs() < 1e-9);
    }

    #[test]
    fn all_patterns_vanish_below_size() {
        // Fewer vertices than the pattern needs: every count must be zero.
        for e in catalog() {
            let g = WeightedGraph::complete(e.pattern.m() - 1);
            let v = eval_closed_form(e.id, &g).unwrap();
            assert!(v.abs() < 1e-9, "{} gave {v} on K_{}", e.id, e.pattern.m() - 1);
        }
    }

    #[test]
    fn unweighted_counts_are_nonnegative_integers() {
        let g = WeightedGraph::complete(7);
        for e in catalog() {
            let v = eval_closed_form(e.id, &g).unwrap();
            assert!(v > 0.0, "{} gave {v}", e.id);
            assert!((v - v.round()).abs() < 1e-6, "{} gave {v}", e.id);
        }
    }
}
