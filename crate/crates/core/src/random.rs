//! Seeded generators for random states, unitaries, Hermitian matrices and
//! operator families with prescribed structure.
//!
//! These feed the property tests and the acceptance suite.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, CVector, C64, ZERO};
use crate::measurement::{MeasurementOperatorSet, Normalization, QuantumState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniformly distributed pure state of dimension `dim`.
pub fn state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> QuantumState {
    let amps = (0..dim).map(|_| gaussian(rng)).collect();
    QuantumState::from_amplitudes(amps, Normalization::Normalize).expect("non-zero with probability 1")
}

/// Gram–Schmidt (applied twice) on the columns of `a`; returns a matrix
/// with orthonormal columns.
fn orthonormalize_columns(a: &CMatrix) -> CMatrix {
    let (rows, cols) = a.shape();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v: Vec<C64> = a.column(j).into_vec();
        for _ in 0..2 {
            for b in &basis {
                let proj: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        basis.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut data = vec![ZERO; rows * cols];
    for (j, b) in basis.iter().enumerate() {
        for (i, &z) in b.iter().enumerate() {
            data[i * cols + j] = z;
        }
    }
    CMatrix::new(rows, cols, data).expect("finite")
}

/// Random `rows × cols` isometry (orthonormal columns), `rows ≥ cols`.
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    assert!(rows >= cols);
    let a = CMatrix::new(rows, cols, (0..rows * cols).map(|_| gaussian(rng)).collect()).expect("finite");
    orthonormalize_columns(&a)
}

/// Haar-distributed unitary of dimension `n`.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    isometry(rng, n, n)
}

/// Random Hermitian matrix `(G + G†)/2` with Gaussian entries, rescaled to
/// Frobenius norm `norm`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: f64) -> CMatrix {
    let g = CMatrix::new(n, n, (0..n * n).map(|_| gaussian(rng)).collect()).expect("finite");
    let h = (&g + &g.adjoint()).scale(C64::new(0.5, 0.0));
    h.scale(C64::new(norm / h.frobenius_norm(), 0.0))
}

/// Hermitian matrix `V diag(λ) V†` with the given eigenvalues and a random eigenbasis.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(rng: &mut R, eigenvalues: &[f64]) -> CMatrix {
    let v = unitary(rng, eigenvalues.len());
    let d = CMatrix::from_diag(&eigenvalues.iter().map(|&l| C64::new(l, 0.0)).collect::<Vec<_>>());
    &(&v * &d) * &v.adjoint()
}

/// Unimodular phases `e^{iθ}` with uniform θ.
pub fn phases<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<C64> {
    (0..count)
        .map(|_| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// Splits `0..n` into `groups` non-empty disjoint sets, shuffled.
pub fn partition<R: Rng + ?Sized>(rng: &mut R, n: usize, groups: usize) -> Vec<Vec<usize>> {
    assert!(groups >= 1 && groups <= n);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut out: Vec<Vec<usize>> = idx[..groups].iter().map(|&k| vec![k]).collect();
    for &k in &idx[groups..] {
        out[rng.random_range(0..groups)].push(k);
    }
    out
}

/// Operators `M_m = W D_m W'` where the `D_m` are 0/1 diagonal indicators of
/// disjoint index groups and `W`, `W'` are shared random unitaries.
///
/// Such a family satisfies `M_i†M_j = M_i M_j† = 0` for `i ≠ j` and
/// `Σ M_m†M_m = I`.
pub fn orthogonal_family<R: Rng + ?Sized>(rng: &mut R, n: usize, groups: usize) -> Vec<CMatrix> {
    let w = unitary(rng, n);
    let w2 = unitary(rng, n);
    partition(rng, n, groups)
        .into_iter()
        .map(|group| {
            let mut d = vec![ZERO; n];
            for k in group {
                d[k] = C64::new(1.0, 0.0);
            }
            &(&w * &CMatrix::from_diag(&d)) * &w2
        })
        .collect()
}

/// A generic complete operator set: the `count` stacked `n × n` blocks of a
/// random `(count·n) × n` isometry.
pub fn complete_set<R: Rng + ?Sized>(rng: &mut R, n: usize, count: usize) -> MeasurementOperatorSet {
    let v = isometry(rng, n * count, n);
    let blocks = (0..count)
        .map(|b| {
            let data = v.as_slice()[b * n * n..(b + 1) * n * n].to_vec();
            CMatrix::new(n, n, data).expect("block")
        })
        .collect();
    MeasurementOperatorSet::complete(blocks, 1e-10).expect("isometry blocks are complete")
}

/// Random normalized vector as a bare [`CVector`].
pub fn vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    state(rng, dim).amplitudes().clone()
}
