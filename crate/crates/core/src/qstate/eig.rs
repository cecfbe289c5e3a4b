//! Hermitian eigendecomposition for the small dense matrices used here.

use nalgebra::{DMatrix, SMatrix};
use num_complex::Complex64;

use super::STATE_TOL;
use crate::error::{QkdError, Result};

fn validate_hermitian(dim: usize, entries: &[Complex64]) -> Result<()> {
    if dim == 0 || entries.len() != dim * dim {
        return Err(QkdError::Dimension(format!(
            "expected {} entries for a {dim}x{dim} matrix, got {}",
            dim * dim,
            entries.len()
        )));
    }
    for i in 0..dim {
        for j in i..dim {
            let dev = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
            if dev > 2.0 * STATE_TOL {
                return Err(QkdError::InvalidState(format!(
                    "matrix is not Hermitian: entry ({i},{j}) deviates by {dev:.3e}"
                )));
            }
        }
    }
    Ok(())
}

/// Symmetrizes so rounding asymmetries cannot leak into the decomposition.
#[inline]
fn sym(entries: &[Complex64], dim: usize, i: usize, j: usize) -> Complex64 {
    (entries[i * dim + j] + entries[j * dim + i].conj()) * 0.5
}

/// Eigenvalues of entries already known to be Hermitian (validated at
/// construction of the owning value), written ascending into `out`; returns
/// the count. Statically sized paths cover the dimensions the rate scans
/// hammer on.
pub(crate) fn eigenvalues_into(dim: usize, entries: &[Complex64], out: &mut [f64; 16]) -> usize {
    match dim {
        2 => {
            let m: SMatrix<Complex64, 2, 2> = SMatrix::from_fn(|i, j| sym(entries, 2, i, j));
            out[..2].copy_from_slice(m.symmetric_eigenvalues().as_slice());
        }
        4 => {
            let m: SMatrix<Complex64, 4, 4> = SMatrix::from_fn(|i, j| sym(entries, 4, i, j));
            out[..4].copy_from_slice(m.symmetric_eigenvalues().as_slice());
        }
        _ => {
            let m = DMatrix::from_fn(dim, dim, |i, j| sym(entries, dim, i, j));
            out[..dim].copy_from_slice(m.symmetric_eigenvalues().as_slice());
        }
    }
    out[..dim].sort_by(|a, b| a.total_cmp(b));
    dim
}

/// Eigenvalues, ascending, of entries already known to be Hermitian.
pub(crate) fn eigenvalues_unchecked(dim: usize, entries: &[Complex64]) -> Vec<f64> {
    let mut buf = [0.0; 16];
    let n = eigenvalues_into(dim, entries, &mut buf);
    buf[..n].to_vec()
}

/// Eigenvalues of a Hermitian matrix (row-major entries), ascending.
pub fn eig_hermitian(dim: usize, entries: &[Complex64]) -> Result<Vec<f64>> {
    validate_hermitian(dim, entries)?;
    Ok(eigenvalues_unchecked(dim, entries))
}

/// Eigenvalues (ascending) and matching eigenvectors of a Hermitian matrix.
///
/// The returned matrix is row-major with eigenvector `k` in column `k`, so the
/// input is reconstructed as `V diag(w) V†`.
pub fn eig_hermitian_full(dim: usize, entries: &[Complex64]) -> Result<(Vec<f64>, Vec<Complex64>)> {
    validate_hermitian(dim, entries)?;
    let m = DMatrix::from_fn(dim, dim, |i, j| sym(entries, dim, i, j));
    let decomp = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| decomp.eigenvalues[a].total_cmp(&decomp.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| decomp.eigenvalues[k]).collect();
    let mut vectors = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (col, &k) in order.iter().enumerate() {
        for row in 0..dim {
            vectors[row * dim + col] = decomp.eigenvectors[(row, k)];
        }
    }
    Ok((values, vectors))
}
