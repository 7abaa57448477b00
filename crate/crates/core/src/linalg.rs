//! Dense complex vectors and matrices.
//!
//! Everything here is sized for desk-scale problems (n up to a few dozen).
//! Matrices are stored row-major and are immutable once built: every
//! operation returns a fresh value.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Maximum number of cyclic Jacobi sweeps before giving up.
pub const MAX_JACOBI_SWEEPS: usize = 100;

fn check_finite(data: &[C64]) -> Result<()> {
    match data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// A finite complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    data: Vec<C64>,
}

impl CVector {
    pub fn new(data: Vec<C64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Empty("vector"));
        }
        check_finite(&data)?;
        Ok(Self { data })
    }

    /// Computational basis vector |index⟩.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut data = vec![ZERO; dim];
        data[index] = ONE;
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &CVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::dims(self.dim(), other.dim()));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scale(&self, factor: C64) -> CVector {
        CVector {
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Euclidean distance ‖self − other‖.
    pub fn distance(&self, other: &CVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::dims(self.dim(), other.dim()));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

impl Index<usize> for CVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

/// A finite complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty("matrix"));
        }
        if data.len() != rows * cols {
            return Err(Error::dims(
                format!("{} entries", rows * cols),
                format!("{} entries", data.len()),
            ));
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::dims(
                format!("{n_cols} columns"),
                format!("{} columns", bad.len()),
            ));
        }
        Self::new(n_rows, n_cols, rows.concat())
    }

    /// Real-valued convenience constructor, mostly for tests and fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![ONE; n])
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// |u⟩⟨v|
    pub fn outer(u: &CVector, v: &CVector) -> Self {
        let (r, c) = (u.dim(), v.dim());
        let mut data = Vec::with_capacity(r * c);
        for a in u.as_slice() {
            for b in v.as_slice() {
                data.push(a * b.conj());
            }
        }
        Self { rows: r, cols: c, data }
    }

    /// Rank-one projector |v⟩⟨v| onto the normalized direction of `v`.
    pub fn projector_onto(v: &CVector) -> Self {
        let n = v.norm();
        let u = v.scale(C64::new(1.0 / n, 0.0));
        Self::outer(&u, &u)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector {
            data: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.cols).map(<[C64]>::to_vec).collect()
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).conj());
            }
        }
        CMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::dims(
                format!("{} rows on the right operand", self.cols),
                format!("{} rows", other.rows),
            ));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if self.cols != v.dim() {
            return Err(Error::dims(self.cols, v.dim()));
        }
        Ok(CVector {
            data: (0..self.rows)
                .map(|i| self.row(i).iter().zip(v.as_slice()).map(|(a, b)| a * b).sum())
                .collect(),
        })
    }

    /// ⟨v|A|v⟩
    pub fn expectation(&self, v: &CVector) -> Result<C64> {
        v.inner(&self.apply(v)?)
    }

    fn zip_with(&self, other: &CMatrix, f: impl Fn(C64, C64) -> C64) -> Result<CMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::dims(
                format!("{:?}", self.shape()),
                format!("{:?}", other.shape()),
            ));
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute off-diagonal entry.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    worst = worst.max(self.get(i, j).norm());
                }
            }
        }
        worst
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![ZERO; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        data[(i * other.rows + k) * cols + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        CMatrix { rows, cols, data }
    }

    /// ‖A − A†‖_F
    pub fn hermiticity_residual(&self) -> Result<f64> {
        self.require_square()?;
        frobenius_distance(self, &self.adjoint())
    }

    /// max(‖A†A − I‖_F, ‖AA† − I‖_F)
    pub fn unitarity_residual(&self) -> Result<f64> {
        let n = self.require_square()?;
        let id = CMatrix::identity(n);
        let left = frobenius_distance(&self.adjoint().matmul(self)?, &id)?;
        let right = frobenius_distance(&self.matmul(&self.adjoint())?, &id)?;
        Ok(left.max(right))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.try_add(rhs).expect("matrix shapes must agree")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("matrix shapes must agree")
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("inner dimensions must agree")
    }
}

/// Standard complex matrix product.
pub fn mat_mul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.matmul(b)
}

pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

/// sqrt(Σ |a_ij − b_ij|²)
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    Ok(a.try_sub(b)?.frobenius_norm())
}

/// [a, b] = ab − ba
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = a.require_square()?;
    let m = b.require_square()?;
    if n != m {
        return Err(Error::dims(n, m));
    }
    a.matmul(b)?.try_sub(&b.matmul(a)?)
}

/// One eigenpair of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: CVector,
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back ascending; equal eigenvalues keep the order of the
/// Jacobi columns they came from. Each eigenvector is unit-norm with its first
/// non-negligible component made real and positive.
pub fn hermitian_eig(a: &CMatrix, tol: f64) -> Result<Vec<EigenPair>> {
    let n = a.require_square()?;
    let scale = a.frobenius_norm().max(1.0);
    let residual = a.hermiticity_residual()?;
    if residual > tol * scale {
        return Err(Error::NotHermitian { residual });
    }

    // Work on the exactly Hermitian part so rotations stay consistent.
    let mut m: Vec<C64> = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
        }
    }
    let mut v: Vec<C64> = CMatrix::identity(n).data;

    let off_norm = |m: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let threshold = f64::EPSILON * scale;

    let mut sweeps = 0;
    while off_norm(&m) > threshold {
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::ConvergenceFailure {
                sweeps,
                off_diagonal: off_norm(&m),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let g = m[p * n + q];
                let r = g.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                let phase = g / r;
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J acts on the (p, q) plane: J_pp = c, J_pq = s, J_qp = -s·conj(e), J_qq = c·conj(e).
                let j_pp = C64::new(c, 0.0);
                let j_pq = C64::new(s, 0.0);
                let j_qp = -phase.conj() * s;
                let j_qq = phase.conj() * c;

                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = mkp * j_pp + mkq * j_qp;
                    m[k * n + q] = mkp * j_pq + mkq * j_qq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = j_pp.conj() * mpk + j_qp.conj() * mqk;
                    m[q * n + k] = j_pq.conj() * mpk + j_qq.conj() * mqk;
                }
                m[p * n + q] = ZERO;
                m[q * n + p] = ZERO;
                m[p * n + p] = C64::new(m[p * n + p].re, 0.0);
                m[q * n + q] = C64::new(m[q * n + q].re, 0.0);

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * j_pp + vkq * j_qp;
                    v[k * n + q] = vkp * j_pq + vkq * j_qq;
                }
            }
        }
    }

    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|j| {
            let mut col: Vec<C64> = (0..n).map(|i| v[i * n + j]).collect();
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let lead = col.iter().copied().find(|z| z.norm() > 1e-8).unwrap_or(ONE);
            let fix = lead.conj() / (lead.norm() * norm);
            for z in &mut col {
                *z *= fix;
            }
            EigenPair {
                value: m[j * n + j].re,
                vector: CVector { data: col },
            }
        })
        .collect();
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(pairs)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The argument is scaled by 2^-s until its Frobenius norm is at most 0.5,
/// the series is summed until a term's norm drops below 1e-16, and the
/// result is squared s times.
pub fn expm_oracle(a: &CMatrix) -> Result<CMatrix> {
    let n = a.require_square()?;
    let norm = a.frobenius_norm();
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    let scaled = a.scale(C64::new(1.0 / 2f64.powi(squarings as i32), 0.0));

    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=200u32 {
        term = term.matmul(&scaled)?.scale(C64::new(1.0 / f64::from(k), 0.0));
        sum = sum.try_add(&term)?;
        if term.frobenius_norm() < 1e-16 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum)?;
    }
    Ok(sum)
}
