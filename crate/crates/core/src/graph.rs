//! Dense weighted graph representation and text ingestion.
//!
//! A graph is a symmetric `n x n` matrix of finite edge weights with a zero
//! diagonal. Two text formats are supported: an edge list (`u v w` per line,
//! 0-based ids) and a whitespace-separated dense matrix.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Absolute tolerance for symmetry checks on ingested matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A dense, symmetric, zero-diagonal weighted graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    weights: Array2<f64>,
}

impl WeightedGraph {
    /// Builds a graph from a dense matrix, validating symmetry (within
    /// [`SYMMETRY_TOL`], then symmetrizing by averaging), the zero diagonal
    /// and finiteness of every entry.
    pub fn from_matrix(mut weights: Array2<f64>) -> Result<Self> {
        let (rows, cols) = weights.dim();
        if rows != cols {
            return Err(Error::ShapeError(format!(
                "expected a square matrix, got {rows}x{cols}"
            )));
        }
        for ((i, j), &w) in weights.indexed_iter() {
            if !w.is_finite() {
                return Err(Error::BadWeight { line: i + 1, value: w });
            }
            if i == j && w != 0.0 {
                return Err(Error::NonzeroDiagonal { i, value: w });
            }
            if i < j {
                let delta = (w - weights[[j, i]]).abs();
                if delta > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric { i, j, delta });
                }
            }
        }
        for i in 0..rows {
            for j in (i + 1)..rows {
                let avg = 0.5 * (weights[[i, j]] + weights[[j, i]]);
                weights[[i, j]] = avg;
                weights[[j, i]] = avg;
            }
        }
        Ok(Self { weights })
    }

    /// Zero graph on `n` vertices.
    pub fn zero(n: usize) -> Self {
        Self {
            weights: Array2::zeros((n, n)),
        }
    }

    /// Builds the unweighted complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut w = Array2::from_elem((n, n), 1.0);
        for i in 0..n {
            w[[i, i]] = 0.0;
        }
        Self { weights: w }
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &Array2<f64> {
        &self.weights
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weights[[u, v]]
    }

    /// Row sums, i.e. the vector `A 1`.
    pub fn row_sums(&self) -> Array1<f64> {
        self.weights.sum_axis(ndarray::Axis(1))
    }

    /// Returns the graph with every vertex relabeled by `perm` (`perm[i]` is
    /// the new index of vertex `i`). Used by permutation-invariance tests.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n();
        assert_eq!(perm.len(), n);
        let mut w = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                w[[perm[i], perm[j]]] = self.weights[[i, j]];
            }
        }
        Self { weights: w }
    }

    /// Renders the dense-matrix text form (row per line, space separated).
    pub fn render_dense(&self) -> String {
        let mut out = String::new();
        for row in self.weights.rows() {
            let line: Vec<String> = row.iter().map(|w| format!("{w}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Renders the edge-list text form (header line plus one line per
    /// nonzero upper-triangle entry).
    pub fn render_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                let w = self.weights[[i, j]];
                if w != 0.0 {
                    out.push_str(&format!("{i} {j} {w}\n"));
                }
            }
        }
        out
    }
}

/// Parses the edge-list format: lines of `u v w` with 0-based vertex ids,
/// `#` comments, and an optional leading `n <count>` header fixing the size.
/// Without a header the size is `1 + max id`.
pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut fixed_n: Option<usize> = None;
    let mut edges: Vec<(usize, usize, f64, usize)> = Vec::new();
    let mut max_id = 0usize;
    let mut seen_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if !seen_data && fixed_n.is_none() && tokens.len() == 2 && tokens[0] == "n" {
            let n: usize = tokens[1].parse().map_err(|_| Error::Malformed {
                line: line_no,
                msg: format!("invalid vertex count {:?}", tokens[1]),
            })?;
            fixed_n = Some(n);
            continue;
        }
        if tokens.len() != 3 {
            return Err(Error::Malformed {
                line: line_no,
                msg: format!("expected 'u v w', got {:?}", line),
            });
        }
        let u: usize = tokens[0].parse().map_err(|_| Error::Malformed {
            line: line_no,
            msg: format!("invalid vertex id {:?}", tokens[0]),
        })?;
        let v: usize = tokens[1].parse().map_err(|_| Error::Malformed {
            line: line_no,
            msg: format!("invalid vertex id {:?}", tokens[1]),
        })?;
        let w: f64 = tokens[2].parse().map_err(|_| Error::Malformed {
            line: line_no,
            msg: format!("invalid weight {:?}", tokens[2]),
        })?;
        if !w.is_finite() {
            return Err(Error::BadWeight { line: line_no, value: w });
        }
        if u == v {
            if w != 0.0 {
                return Err(Error::SelfLoop { vertex: u });
            }
            continue;
        }
        seen_data = true;
        max_id = max_id.max(u).max(v);
        edges.push((u.min(v), u.max(v), w, line_no));
    }

    let n = match fixed_n {
        Some(n) => {
            if seen_data && max_id >= n {
                return Err(Error::ShapeError(format!(
                    "vertex id {max_id} out of range for declared n = {n}"
                )));
            }
            n
        }
        None => {
            if seen_data {
                max_id + 1
            } else {
                0
            }
        }
    };

    let mut weights = Array2::zeros((n, n));
    let mut set: Vec<Vec<bool>> = vec![vec![false; n]; n];
    for (u, v, w, line_no) in edges {
        if set[u][v] && weights[[u, v]] != w {
            return Err(Error::DuplicateEdge {
                line: line_no,
                u,
                v,
                first: weights[[u, v]],
                second: w,
            });
        }
        set[u][v] = true;
        weights[[u, v]] = w;
        weights[[v, u]] = w;
    }
    WeightedGraph::from_matrix(weights)
}

/// Parses the dense-matrix format: `n` whitespace-separated rows of `n`
/// reals. Validation matches [`WeightedGraph::from_matrix`].
pub fn parse_dense_matrix(text: &str) -> Result<WeightedGraph> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split_whitespace().map(str::parse::<f64>).collect();
        let row = row.map_err(|e| Error::Malformed {
            line: line_no,
            msg: format!("invalid matrix entry: {e}"),
        })?;
        rows.push(row);
    }
    let n = rows.len();
    for row in &rows {
        if row.len() != n {
            return Err(Error::ShapeError(format!(
                "ragged rows: expected {n} columns, got {}",
                row.len()
            )));
        }
    }
    let mut weights = Array2::zeros((n, n));
    for (i, row) in rows.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            weights[[i, j]] = w;
        }
    }
    WeightedGraph::from_matrix(weights)
}
