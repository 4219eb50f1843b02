//! Dense linear-algebra primitives and slice-wise tensor contraction.
//!
//! The tensor-valued counting formulas are inner products of chained
//! mode-(1,2) products against a slice-identity tensor. Per fixed trailing
//! index the mode-(1,2) product is an ordinary matrix product, and the
//! identity contraction turns into a sum of slice traces:
//!
//! ```text
//!   <T1 x_{1,2} T2 x_{1,2} T3, I>  =  sum_k  tr( S1(k) S2(k) S3(k) )
//! ```
//!
//! Every slice used by the formulas is a row-scaled base matrix,
//! `S(k)[i][j] = d(k)[i] * B[i][j]`, which lets a slice trace be computed
//! with a single matrix product via
//!
//! ```text
//!   tr(D1 B1 D2 B2 D3 B3) = d1^T [ (B1 D2 B2) .* B3^T ] d3 .
//! ```
//!
//! Working memory is a constant number of `n x n` buffers; no three- or
//! four-way array is ever materialized.

use ndarray::linalg::general_mat_mul;
use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

pub type Matrix = Array2<f64>;
pub type Vector = Array1<f64>;

fn check_square_same(x: &Matrix, y: &Matrix) -> Result<()> {
    if x.dim() != y.dim() || x.nrows() != x.ncols() {
        return Err(Error::ShapeError(format!(
            "expected matching square matrices, got {:?} and {:?}",
            x.dim(),
            y.dim()
        )));
    }
    Ok(())
}

pub fn matmul(x: &Matrix, y: &Matrix) -> Result<Matrix> {
    check_square_same(x, y)?;
    Ok(x.dot(y))
}

pub fn hadamard(x: &Matrix, y: &Matrix) -> Result<Matrix> {
    check_square_same(x, y)?;
    Ok(x * y)
}

/// Entrywise `k`-th power.
pub fn hadamard_power(x: &Matrix, k: u32) -> Matrix {
    x.mapv(|v| v.powi(k as i32))
}

pub fn trace(x: &Matrix) -> f64 {
    x.diag().sum()
}

pub fn diag_vector(x: &Matrix) -> Vector {
    x.diag().to_owned()
}

pub fn row_sums(x: &Matrix) -> Vector {
    x.sum_axis(ndarray::Axis(1))
}

/// `1^T X 1`, the sum of all entries.
pub fn ones_quadratic(x: &Matrix) -> f64 {
    x.sum()
}

/// One factor of a 3-way slice plan: `S(k)[i][j] = d(k)[i] * base[i][j]`
/// with `d(k)` the `k`-th column of `scale` (all ones when absent).
#[derive(Debug, Clone)]
pub struct Slice3Factor {
    pub base: Matrix,
    pub scale: Option<Matrix>,
}

impl Slice3Factor {
    pub fn plain(base: Matrix) -> Self {
        Self { base, scale: None }
    }

    pub fn scaled(base: Matrix, scale: Matrix) -> Self {
        Self {
            base,
            scale: Some(scale),
        }
    }

    /// Materializes the slice at trailing index `k` (test/reference path).
    pub fn slice(&self, k: usize) -> Matrix {
        let mut s = self.base.clone();
        if let Some(sc) = &self.scale {
            for (i, mut row) in s.rows_mut().into_iter().enumerate() {
                row *= sc[[i, k]];
            }
        }
        s
    }
}

/// One factor of a 4-way slice plan:
/// `S(k,l)[i][j] = k_scale[i][k] * l_scale[i][l] * kl_scalar[k][l] * base[i][j]`
/// with absent parts treated as ones.
#[derive(Debug, Clone)]
pub struct Slice4Factor {
    pub base: Matrix,
    pub k_scale: Option<Matrix>,
    pub l_scale: Option<Matrix>,
    pub kl_scalar: Option<Matrix>,
}

impl Slice4Factor {
    pub fn new(
        base: Matrix,
        k_scale: Option<Matrix>,
        l_scale: Option<Matrix>,
        kl_scalar: Option<Matrix>,
    ) -> Self {
        Self {
            base,
            k_scale,
            l_scale,
            kl_scalar,
        }
    }

    fn diag_into(&self, k: usize, l: usize, out: &mut Vector) {
        out.fill(1.0);
        if let Some(sc) = &self.k_scale {
            for (i, v) in out.iter_mut().enumerate() {
                *v *= sc[[i, k]];
            }
        }
        if let Some(sc) = &self.l_scale {
            for (i, v) in out.iter_mut().enumerate() {
                *v *= sc[[i, l]];
            }
        }
    }

    fn scalar(&self, k: usize, l: usize) -> f64 {
        self.kl_scalar.as_ref().map_or(1.0, |m| m[[k, l]])
    }

    /// Materializes the slice at `(k, l)` (test/reference path).
    pub fn slice(&self, k: usize, l: usize) -> Matrix {
        let n = self.base.nrows();
        let mut d = Vector::zeros(n);
        self.diag_into(k, l, &mut d);
        let mut s = self.base.clone();
        for (i, mut row) in s.rows_mut().into_iter().enumerate() {
            row *= d[i] * self.scalar(k, l);
        }
        s
    }
}

fn plan_dim_3(factors: &[Slice3Factor]) -> Result<usize> {
    if factors.is_empty() {
        return Err(Error::EmptyPlan);
    }
    let n = factors[0].base.nrows();
    for f in factors {
        if f.base.dim() != (n, n) {
            return Err(Error::ShapeError("mismatched slice factor shapes".into()));
        }
        if let Some(sc) = &f.scale {
            if sc.dim() != (n, n) {
                return Err(Error::ShapeError("mismatched slice scale shape".into()));
            }
        }
    }
    Ok(n)
}

// tr(D1 B1 D2 B2 D3 B3) with the middle product E = B1 D2 B2 precomputed
// and B3 passed already transposed (so both row walks are contiguous):
// sum_{i,j} d1[i] E[i][j] B3t[i][j] d3[j].
fn bilinear_trace(d1: &Vector, e: &Matrix, b3t: &Matrix, d3: &Vector) -> f64 {
    let d3 = d3.as_slice().expect("contiguous");
    let mut acc = 0.0;
    for (i, (erow, brow)) in e.rows().into_iter().zip(b3t.rows()).enumerate() {
        let erow = erow.to_slice().expect("contiguous");
        let brow = brow.to_slice().expect("contiguous");
        let mut row_acc = 0.0;
        for j in 0..erow.len() {
            row_acc += erow[j] * brow[j] * d3[j];
        }
        acc += d1[i] * row_acc;
    }
    acc
}

fn scale_rows_into(base: &Matrix, d: &Vector, out: &mut Matrix) {
    out.assign(base);
    for (i, mut row) in out.rows_mut().into_iter().enumerate() {
        row *= d[i];
    }
}

fn col_of(m: &Option<Matrix>, k: usize, n: usize) -> Vector {
    match m {
        Some(m) => m.column(k).to_owned(),
        None => Vector::ones(n),
    }
}

/// Evaluates `sum_k tr( S1(k) S2(k) ... )` for a 3-way slice plan without
/// materializing an `n^3` tensor. Reduction order is ascending `k`.
pub fn slice_inner_3(factors: &[Slice3Factor]) -> Result<f64> {
    let n = plan_dim_3(factors)?;
    let mut total = 0.0;
    if factors.len() == 3 {
        let mut scaled = Matrix::zeros((n, n));
        let mut e = Matrix::zeros((n, n));
        let (f1, f2, f3) = (&factors[0], &factors[1], &factors[2]);
        let b3t = f3.base.t().as_standard_layout().to_owned();
        for k in 0..n {
            let d2 = col_of(&f2.scale, k, n);
            scale_rows_into(&f2.base, &d2, &mut scaled);
            general_mat_mul(1.0, &f1.base, &scaled, 0.0, &mut e);
            let d1 = col_of(&f1.scale, k, n);
            let d3 = col_of(&f3.scale, k, n);
            total += bilinear_trace(&d1, &e, &b3t, &d3);
        }
        return Ok(total);
    }
    // General path: multiply materialized slices in order.
    for k in 0..n {
        let mut acc = factors[0].slice(k);
        for f in &factors[1..] {
            acc = acc.dot(&f.slice(k));
        }
        total += trace(&acc);
    }
    Ok(total)
}

fn plan_dim_4(factors: &[Slice4Factor]) -> Result<usize> {
    if factors.is_empty() {
        return Err(Error::EmptyPlan);
    }
    let n = factors[0].base.nrows();
    for f in factors {
        for m in [Some(&f.base), f.k_scale.as_ref(), f.l_scale.as_ref(), f.kl_scalar.as_ref()]
            .into_iter()
            .flatten()
        {
            if m.dim() != (n, n) {
                return Err(Error::ShapeError("mismatched slice factor shapes".into()));
            }
        }
    }
    Ok(n)
}

fn is_swap_symmetric(f: &Slice4Factor) -> bool {
    let scales_match = match (&f.k_scale, &f.l_scale) {
        (None, None) => true,
        (Some(a), Some(b)) => a == b,
        _ => false,
    };
    let scalar_sym = f
        .kl_scalar
        .as_ref()
        .map_or(true, |m| m == &m.t().as_standard_layout().to_owned());
    scales_match && scalar_sym
}

/// Evaluates `sum_{k,l} tr( S1(k,l) S2(k,l) ... )` for a 4-way slice plan,
/// keeping memory at a constant number of `n x n` buffers.
///
/// For three-factor plans, if some factor's slice depends on only one of
/// the trailing indices, that index is iterated in the outer loop so the
/// middle matrix product is reused across the inner loop (one `n^3`
/// product per outer step instead of per pair). When every factor is
/// symmetric under swapping the trailing indices, only `l >= k` pairs are
/// evaluated.
pub fn slice_inner_4(factors: &[Slice4Factor]) -> Result<f64> {
    let n = plan_dim_4(factors)?;
    if factors.len() == 3 {
        // Look for a cyclic rotation whose middle factor depends on a
        // single trailing index (trace is invariant under rotation).
        for rot in 0..3 {
            let x = &factors[rot];
            let mid = &factors[(rot + 1) % 3];
            let z = &factors[(rot + 2) % 3];
            if mid.kl_scalar.is_some() {
                continue;
            }
            let outer_is_k = match (&mid.k_scale, &mid.l_scale) {
                (_, None) => true,
                (None, Some(_)) => false,
                _ => continue,
            };
            return Ok(rotated_inner_4(n, x, mid, z, outer_is_k));
        }
        let symmetric = factors.iter().all(is_swap_symmetric);
        return Ok(generic_inner_4(n, factors, symmetric));
    }
    // General path: multiply materialized slices per pair.
    let mut total = 0.0;
    for k in 0..n {
        for l in 0..n {
            let mut acc = factors[0].slice(k, l);
            for f in &factors[1..] {
                acc = acc.dot(&f.slice(k, l));
            }
            total += trace(&acc);
        }
    }
    Ok(total)
}

fn rotated_inner_4(
    n: usize,
    x: &Slice4Factor,
    mid: &Slice4Factor,
    z: &Slice4Factor,
    outer_is_k: bool,
) -> f64 {
    let mut scaled = Matrix::zeros((n, n));
    let mut e = Matrix::zeros((n, n));
    let mut dm = Vector::zeros(n);
    let mut dx = Vector::zeros(n);
    let mut dz = Vector::zeros(n);
    let bzt = z.base.t().as_standard_layout().to_owned();
    let mut total = 0.0;
    for t in 0..n {
        // Middle diagonal depends only on the outer index.
        if outer_is_k {
            mid.diag_into(t, 0, &mut dm);
        } else {
            mid.diag_into(0, t, &mut dm);
        }
        scale_rows_into(&mid.base, &dm, &mut scaled);
        general_mat_mul(1.0, &x.base, &scaled, 0.0, &mut e);
        for s in 0..n {
            let (k, l) = if outer_is_k { (t, s) } else { (s, t) };
            let scalar = x.scalar(k, l) * z.scalar(k, l);
            if scalar == 0.0 {
                continue;
            }
            x.diag_into(k, l, &mut dx);
            z.diag_into(k, l, &mut dz);
            total += scalar * bilinear_trace(&dx, &e, &bzt, &dz);
        }
    }
    total
}

fn generic_inner_4(n: usize, factors: &[Slice4Factor], symmetric: bool) -> f64 {
    let (f1, f2, f3) = (&factors[0], &factors[1], &factors[2]);
    let mut scaled = Matrix::zeros((n, n));
    let mut e = Matrix::zeros((n, n));
    let mut d1 = Vector::zeros(n);
    let mut d2 = Vector::zeros(n);
    let mut d3 = Vector::zeros(n);
    let b3t = f3.base.t().as_standard_layout().to_owned();
    let mut total = 0.0;
    for k in 0..n {
        let l_start = if symmetric { k } else { 0 };
        for l in l_start..n {
            let scalar = f1.scalar(k, l) * f2.scalar(k, l) * f3.scalar(k, l);
            if scalar == 0.0 {
                continue;
            }
            f2.diag_into(k, l, &mut d2);
            scale_rows_into(&f2.base, &d2, &mut scaled);
            general_mat_mul(1.0, &f1.base, &scaled, 0.0, &mut e);
            f1.diag_into(k, l, &mut d1);
            f3.diag_into(k, l, &mut d3);
            let v = scalar * bilinear_trace(&d1, &e, &b3t, &d3);
            total += if symmetric && l > k { 2.0 * v } else { v };
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weighted_triangle() -> Matrix {
        ndarray::arr2(&[[0.0, 2.0, 3.0], [2.0, 0.0, 5.0], [3.0, 5.0, 0.0]])
    }

    fn complete(n: usize) -> Matrix {
        let mut a = Matrix::from_elem((n, n), 1.0);
        for i in 0..n {
            a[[i, i]] = 0.0;
        }
        a
    }

    fn clique4_plan(a: &Matrix) -> Vec<Slice3Factor> {
        let f = Slice3Factor::scaled(a.clone(), a.clone());
        vec![f.clone(), f.clone(), f]
    }

    fn clique5_plan(a: &Matrix) -> Vec<Slice4Factor> {
        let f1 = Slice4Factor::new(
            a.clone(),
            Some(a.clone()),
            Some(a.clone()),
            Some(a.clone()),
        );
        let f23 = Slice4Factor::new(a.clone(), Some(a.clone()), Some(a.clone()), None);
        vec![f1, f23.clone(), f23]
    }

    #[test]
    fn basic_ops() {
        let a = ndarray::arr2(&[[0.0, 2.0], [2.0, 0.0]]);
        assert_eq!(hadamard_power(&a, 2), ndarray::arr2(&[[0.0, 4.0], [4.0, 0.0]]));
        let t = weighted_triangle();
        let t3 = t.dot(&t).dot(&t);
        assert!((trace(&t3) - 180.0).abs() < 1e-12);
        assert!((ones_quadratic(&t) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch() {
        let a = Matrix::zeros((2, 2));
        let b = Matrix::zeros((3, 3));
        assert!(matches!(matmul(&a, &b), Err(Error::ShapeError(_))));
        assert!(matches!(hadamard(&a, &b), Err(Error::ShapeError(_))));
    }

    #[test]
    fn empty_plans() {
        assert!(matches!(slice_inner_3(&[]), Err(Error::EmptyPlan)));
        assert!(matches!(slice_inner_4(&[]), Err(Error::EmptyPlan)));
    }

    #[test]
    fn clique4_on_k4() {
        let v = slice_inner_3(&clique4_plan(&complete(4))).unwrap();
        assert!((v - 24.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn clique4_zero_row() {
        let mut a = complete(4);
        a.row_mut(0).fill(0.0);
        a.column_mut(0).fill(0.0);
        let v = slice_inner_3(&clique4_plan(&a)).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn clique4_homogeneity() {
        let c = 1.7;
        let v = slice_inner_3(&clique4_plan(&(complete(4) * c))).unwrap();
        assert!((v - 24.0 * c.powi(6)).abs() < 1e-9 * v.abs());
    }

    #[test]
    fn clique5_on_k5() {
        let v = slice_inner_4(&clique5_plan(&complete(5))).unwrap();
        assert!((v - 120.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn clique5_too_few_vertices() {
        let v = slice_inner_4(&clique5_plan(&complete(4))).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn clique5_homogeneity() {
        let c = 0.6;
        let v = slice_inner_4(&clique5_plan(&(complete(5) * c))).unwrap();
        assert!((v - 120.0 * c.powi(10)).abs() < 1e-9 * 120.0 * c.powi(10));
    }

    // Reference: materialize every slice and sum traces directly.
    fn naive_inner_3(factors: &[Slice3Factor]) -> f64 {
        let n = factors[0].base.nrows();
        (0..n)
            .map(|k| {
                let mut acc = factors[0].slice(k);
                for f in &factors[1..] {
                    acc = acc.dot(&f.slice(k));
                }
                trace(&acc)
            })
            .sum()
    }

    fn naive_inner_4(factors: &[Slice4Factor]) -> f64 {
        let n = factors[0].base.nrows();
        let mut total = 0.0;
        for k in 0..n {
            for l in 0..n {
                let mut acc = factors[0].slice(k, l);
                for f in &factors[1..] {
                    acc = acc.dot(&f.slice(k, l));
                }
                total += trace(&acc);
            }
        }
        total
    }

    #[test]
    fn matches_materialized_reference() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 3..=6 {
            let mut a = Matrix::zeros((n, n));
            for i in 0..n {
                for j in (i + 1)..n {
                    let w: f64 = rng.gen();
                    a[[i, j]] = w;
                    a[[j, i]] = w;
                }
            }
            let h2 = hadamard_power(&a, 2);
            let p3 = vec![
                Slice3Factor::scaled(a.clone(), a.clone()),
                Slice3Factor::scaled(h2.clone(), a.clone()),
                Slice3Factor::scaled(a.clone(), h2.clone()),
            ];
            let got = slice_inner_3(&p3).unwrap();
            let want = naive_inner_3(&p3);
            assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));

            // Asymmetric 4-way plan exercising the rotation path.
            let p4 = vec![
                Slice4Factor::new(a.clone(), Some(a.clone()), Some(a.clone()), Some(a.clone())),
                Slice4Factor::new(a.clone(), Some(a.clone()), None, None),
                Slice4Factor::new(a.clone(), None, Some(a.clone()), None),
            ];
            let got = slice_inner_4(&p4).unwrap();
            let want = naive_inner_4(&p4);
            assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));

            // Fully coupled plan exercising the symmetric generic path.
            let p5 = clique5_plan(&a);
            let got = slice_inner_4(&p5).unwrap();
            let want = naive_inner_4(&p5);
            assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn deterministic_repeats() {
        let a = complete(6) * 0.37;
        let first = slice_inner_3(&clique4_plan(&a)).unwrap();
        for _ in 0..3 {
            assert_eq!(first.to_bits(), slice_inner_3(&clique4_plan(&a)).unwrap().to_bits());
        }
        let first4 = slice_inner_4(&clique5_plan(&a)).unwrap();
        for _ in 0..3 {
            assert_eq!(first4.to_bits(), slice_inner_4(&clique5_plan(&a)).unwrap().to_bits());
        }
    }
}
