//! Dense matrices over [`BigReal`] and the kernels the solvers need:
//! Cholesky, cyclic Jacobi diagonalization and a scaled LU log-determinant.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::real::{working_precision, BigReal};
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigReal>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BigReal::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigReal::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigReal) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from nested rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<BigReal>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigReal::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigReal] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row `upper` shared and row `lower` mutable; requires `upper < lower`.
    fn row_pair_mut(&mut self, upper: usize, lower: usize) -> (&[BigReal], &mut [BigReal]) {
        assert!(upper < lower);
        let c = self.cols;
        let (head, tail) = self.data.split_at_mut(lower * c);
        (&head[upper * c..(upper + 1) * c], &mut tail[..c])
    }

    pub fn column(&self, j: usize) -> Vec<BigReal> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::InvalidArgument(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = BigReal::zero();
            for k in 0..self.cols {
                acc += &self[(i, k)] * &rhs[(k, j)];
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[BigReal]) -> Vec<BigReal> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| super::real::dot(self.row(i), v)).collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigReal {
        self.data.iter().map(BigReal::abs).fold(BigReal::zero(), BigReal::max)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = BigReal;
    fn index(&self, (i, j): (usize, usize)) -> &BigReal {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigReal {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_sig_string(8)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Symmetric matrix holding a single copy of each off-diagonal pair
/// (packed lower triangle).
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    packed: Vec<BigReal>,
}

#[inline]
fn packed_index(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            packed: vec![BigReal::zero(); dim * (dim + 1) / 2],
        }
    }

    /// Fills from `f(i, j)` evaluated for `j <= i` only.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> BigReal) -> Self {
        let mut packed = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in 0..=i {
                packed.push(f(i, j));
            }
        }
        SymMatrix { dim, packed }
    }

    /// Reads the lower triangle of a square matrix.
    pub fn from_lower(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidArgument("matrix is not square".into()));
        }
        Ok(Self::from_fn(m.rows(), |i, j| m[(i, j)].clone()))
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let m = Matrix::from_i64_rows(rows)?;
        for i in 0..m.rows() {
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::InvalidArgument("matrix is not symmetric".into()));
                }
            }
        }
        Self::from_lower(&m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigReal {
        &self.packed[packed_index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigReal) {
        self.packed[packed_index(i, j)] = v;
    }

    pub fn to_dense(&self) -> Matrix {
        Matrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).clone())
    }

    /// Quadratic form `x^T A y`.
    pub fn bilinear(&self, x: &[BigReal], y: &[BigReal]) -> BigReal {
        let mut acc = BigReal::zero();
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            let mut row = BigReal::zero();
            for (j, yj) in y.iter().enumerate() {
                row += self.get(i, j) * yj;
            }
            acc += &x[i] * row;
        }
        acc
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym{:?}", self.to_dense())
    }
}

/// Lower-triangular `L` with `L L^T = S`.
pub fn cholesky(s: &SymMatrix) -> Result<Matrix> {
    let n = s.dim();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = s.get(j, j).clone();
        for k in 0..j {
            d -= l[(j, k)].square();
        }
        if d.signum() <= 0 {
            return Err(Error::NotPositiveDefinite {
                row: j,
                pivot: d.to_f64(),
            });
        }
        let djj = d.sqrt()?;
        for i in j + 1..n {
            let mut acc = s.get(i, j).clone();
            for k in 0..j {
                acc -= &l[(i, k)] * &l[(j, k)];
            }
            l[(i, j)] = acc / &djj;
        }
        l[(j, j)] = djj;
    }
    Ok(l)
}

/// Solves `L X = B` for lower-triangular `L`.
pub fn forward_substitute(l: &Matrix, b: &Matrix) -> Matrix {
    let n = l.rows();
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in 0..n {
            let mut acc = x[(i, c)].clone();
            for k in 0..i {
                acc -= &l[(i, k)] * &x[(k, c)];
            }
            x[(i, c)] = acc / &l[(i, i)];
        }
    }
    x
}

/// Solves `L^T x = b` for lower-triangular `L`.
pub fn back_substitute_transposed(l: &Matrix, b: &[BigReal]) -> Vec<BigReal> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        let mut acc = x[i].clone();
        for k in i + 1..n {
            acc -= &l[(k, i)] * &x[k];
        }
        x[i] = acc / &l[(i, i)];
    }
    x
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Ascending.
    pub values: Vec<BigReal>,
    /// Column `j` is the unit eigenvector of `values[j]`.
    pub vectors: Matrix,
    pub sweeps: usize,
}

pub const JACOBI_MAX_SWEEPS: usize = 80;

/// Cyclic Jacobi diagonalization.
pub fn sym_eigen(a: &SymMatrix) -> Result<SymEigen> {
    let n = a.dim();
    let mut m = a.to_dense();
    let mut v = Matrix::identity(n);
    let eps = BigReal::epsilon();
    let mut frob = BigReal::zero();
    for i in 0..n {
        for j in 0..n {
            frob += m[(i, j)].square();
        }
    }
    let tol = (&eps * &eps) * &frob;

    let mut sweeps = 0;
    loop {
        let mut off = BigReal::zero();
        for i in 0..n {
            for j in 0..i {
                off += m[(i, j)].square();
            }
        }
        if off <= tol || n < 2 {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::IterationLimit { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                if m[(p, q)].is_zero() {
                    continue;
                }
                let apq = m[(p, q)].clone();
                // Negligible against both diagonal entries: drop it.
                let tiny = apq.abs() * 128;
                if (&m[(p, p)].abs() + &tiny) == m[(p, p)].abs()
                    && (&m[(q, q)].abs() + &tiny) == m[(q, q)].abs()
                    && sweeps > 4
                {
                    m[(p, q)] = BigReal::zero();
                    m[(q, p)] = BigReal::zero();
                    continue;
                }
                let theta = (&m[(q, q)] - &m[(p, p)]) / (&apq * 2);
                let root = (theta.square() + 1).sqrt()?;
                let t = if theta.is_sign_negative() {
                    -(theta.abs() + root).recip()?
                } else {
                    (theta.abs() + root).recip()?
                };
                let c = (t.square() + 1).sqrt()?.recip()?;
                let s = &t * &c;
                let tau = &s / (&c + 1);

                m[(p, p)] -= &t * &apq;
                m[(q, q)] += &t * &apq;
                m[(p, q)] = BigReal::zero();
                m[(q, p)] = BigReal::zero();
                for r in 0..n {
                    if r != p && r != q {
                        let arp = m[(r, p)].clone();
                        let arq = m[(r, q)].clone();
                        let new_rp = &arp - &s * (&arq + &tau * &arp);
                        let new_rq = &arq + &s * (&arp - &tau * &arq);
                        m[(r, p)] = new_rp.clone();
                        m[(p, r)] = new_rp;
                        m[(r, q)] = new_rq.clone();
                        m[(q, r)] = new_rq;
                    }
                }
                for r in 0..n {
                    let vrp = v[(r, p)].clone();
                    let vrq = v[(r, q)].clone();
                    v[(r, p)] = &vrp - &s * (&vrq + &tau * &vrp);
                    v[(r, q)] = &vrq + &s * (&vrp - &tau * &vrq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)].clone()).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])].clone());
    Ok(SymEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Sign and natural-log magnitude of a determinant.
#[derive(Clone, Debug)]
pub struct LogDet {
    /// -1, 0 or +1. Zero when the determinant vanishes to working precision.
    pub sign: i8,
    /// `ln |det|`, `None` only when an exactly zero pivot occurred.
    pub ln_abs: Option<BigReal>,
    /// `ln (|det| / prod of row 2-norms)`, a scale-free conditioning measure
    /// (always <= 0 up to rounding).
    pub ln_relative: Option<BigReal>,
    /// Largest number of leading bits cancelled in forming any pivot.
    pub cancelled_bits: f64,
}

impl LogDet {
    fn singular() -> Self {
        LogDet {
            sign: 0,
            ln_abs: None,
            ln_relative: None,
            cancelled_bits: f64::INFINITY,
        }
    }

    /// Reassembles the determinant. Overflows to infinity for huge values.
    pub fn value(&self) -> BigReal {
        match (&self.ln_abs, self.sign) {
            (Some(l), s) if s != 0 => {
                let mag = l.exp();
                if s < 0 {
                    -mag
                } else {
                    mag
                }
            }
            _ => BigReal::zero(),
        }
    }
}

/// `log2(2^a + 2^b)`.
fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// Bits of slack above the unit roundoff used by the exact-zero test.
pub const ZERO_DET_SLACK_BITS: i32 = 32;

/// Partial-pivoting LU with per-row scaling; magnitudes are accumulated in
/// log space so entries spanning hundreds of decades do not overflow.
///
/// Alongside each entry the elimination carries the sum of the magnitudes
/// that were combined into it. A pivot smaller than that sum by more than
/// `prec - 32` bits is cancellation noise, and the determinant is reported
/// as sign 0.
pub fn lu_logdet(m: &Matrix) -> Result<LogDet> {
    if !m.is_square() {
        return Err(Error::InvalidArgument("lu_logdet needs a square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(LogDet {
            sign: 1,
            ln_abs: Some(BigReal::zero()),
            ln_relative: Some(BigReal::zero()),
            cancelled_bits: 0.0,
        });
    }
    let mut a = m.clone();
    let mut ln_scale = BigReal::zero();
    for i in 0..n {
        let norm_sq: BigReal = a.row(i).iter().map(BigReal::square).sum();
        if norm_sq.is_zero() {
            return Ok(LogDet::singular());
        }
        let norm = norm_sq.sqrt()?;
        ln_scale += norm.ln()?;
        for j in 0..n {
            a[(i, j)] /= &norm;
        }
    }
    // log2 of the accumulated magnitudes behind each entry.
    let mut bound: Vec<f64> = (0..n * n).map(|idx| a[(idx / n, idx % n)].log2_abs()).collect();

    let mut sign: i8 = 1;
    let mut ln_rel = BigReal::zero();
    let mut cancelled_bits: f64 = 0.0;
    for k in 0..n {
        let mut piv = k;
        let mut best = a[(k, k)].abs();
        for i in k + 1..n {
            let cand = a[(i, k)].abs();
            if cand > best {
                best = cand;
                piv = i;
            }
        }
        if best.is_zero() {
            return Ok(LogDet::singular());
        }
        if piv != k {
            for j in 0..n {
                let tmp = a[(k, j)].clone();
                a[(k, j)] = a[(piv, j)].clone();
                a[(piv, j)] = tmp;
                bound.swap(k * n + j, piv * n + j);
            }
            sign = -sign;
        }
        let pivot = a[(k, k)].clone();
        if pivot.is_sign_negative() {
            sign = -sign;
        }
        cancelled_bits = cancelled_bits.max(bound[k * n + k] - best.log2_abs());
        ln_rel += best.ln()?;
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let factor = &a[(i, k)] / &pivot;
            let factor_log2 = factor.log2_abs();
            let (row_k, row_i) = a.row_pair_mut(k, i);
            for j in k + 1..n {
                row_i[j].sub_mul_assign(&factor, &row_k[j]);
                bound[i * n + j] = log2_add(bound[i * n + j], factor_log2 + bound[k * n + j]);
            }
        }
    }

    if cancelled_bits > f64::from(working_precision() as i32 - ZERO_DET_SLACK_BITS) {
        sign = 0;
    }
    Ok(LogDet {
        sign,
        ln_abs: Some(&ln_rel + &ln_scale),
        ln_relative: Some(ln_rel),
        cancelled_bits,
    })
}
