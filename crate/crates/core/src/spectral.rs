//! Orthogonal diagonalization of the interaction matrix.
//!
//! The convention throughout the crate is `Ω² = T · D² · Tᵀ`: the columns of
//! `T` are eigenvectors of `Ω²` and `D = diag(Ω_0, …, Ω_N)` holds the normal-mode
//! frequencies in ascending order. Every other quantity (matrix powers, the
//! evolution kernel, dressed/normal basis changes) is derived from that single
//! factorization.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::jacobi_eigen;
use crate::linalg::Matrix;
use crate::model::CouplingMatrix;
use crate::scalar::Scalar;

/// Relative threshold below which an eigenvalue of `Ω²` counts as non-positive.
pub const POSITIVITY_THRESHOLD: f64 = 1e-12;

/// Eigendecomposition of `Ω²`: orthogonal `T` and positive frequencies `Ω_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalModeBasis<T> {
    transform: Matrix<T>,
    frequencies: Vec<T>,
}

impl<T: Scalar> NormalModeBasis<T> {
    /// The orthogonal matrix `T`; column `k` is the eigenvector for `Ω_k`.
    pub fn transform(&self) -> &Matrix<T> {
        &self.transform
    }

    /// Normal-mode frequencies `Ω_k`, ascending.
    pub fn frequencies(&self) -> &[T] {
        &self.frequencies
    }

    /// Eigenvalues `Ω_k²` of the interaction matrix.
    pub fn eigenvalues(&self) -> Vec<T> {
        self.frequencies.iter().map(|&w| w * w).collect()
    }

    pub fn dim(&self) -> usize {
        self.frequencies.len()
    }

    /// `Tr D = Σ_k Ω_k`.
    pub fn trace(&self) -> T {
        self.frequencies.iter().fold(T::zero(), |acc, &w| acc + w)
    }

    /// `‖TᵀT − I‖_max`.
    pub fn orthogonality_defect(&self) -> T {
        self.transform.orthogonality_defect()
    }

    /// `‖T·D²·Tᵀ − Ω²‖_max`.
    pub fn reconstruction_defect(&self, m: &CouplingMatrix<T>) -> T {
        matrix_power(self, T::one()).max_abs_diff(m.entries())
    }

    /// Checks `index < dim`.
    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.dim() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, dim: self.dim() })
        }
    }
}

/// Flips each column so that its entry of largest magnitude is positive
/// (the first such entry on ties).
fn fix_column_signs<T: Scalar>(t: &mut Matrix<T>) {
    let n = t.rows();
    for col in 0..t.cols() {
        let mut pivot = 0;
        for row in 1..n {
            if t[(row, col)].abs() > t[(pivot, col)].abs() {
                pivot = row;
            }
        }
        if t[(pivot, col)] < T::zero() {
            for row in 0..n {
                t[(row, col)] = -t[(row, col)];
            }
        }
    }
}

/// Diagonalizes `Ω²`, returning frequencies in ascending order with a fixed
/// column sign convention.
///
/// Fails with [`Error::NonPositiveSpectrum`] when the smallest eigenvalue is not
/// above `1e-12` times the largest eigenvalue magnitude, i.e. the coupling is
/// strong enough to make some normal mode unstable.
pub fn diagonalize<T: Scalar>(m: &CouplingMatrix<T>) -> Result<NormalModeBasis<T>> {
    let eig = jacobi_eigen(m.entries())?;
    let n = eig.values.len();

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps degenerate eigenpairs in solver order
    order.sort_by(|&a, &b| eig.values[a].partial_cmp(&eig.values[b]).expect("finite eigenvalues"));

    let eigenvalues: Vec<T> = order.iter().map(|&k| eig.values[k]).collect();
    let largest = eigenvalues.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()));
    let threshold = T::lit(POSITIVITY_THRESHOLD) * largest;
    let smallest = eigenvalues[0];
    if !(smallest > threshold) {
        return Err(Error::NonPositiveSpectrum {
            min_eigenvalue: smallest.to_f64().unwrap_or(f64::NAN),
            threshold: threshold.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut transform = Matrix::from_fn(n, n, |row, col| eig.vectors[(row, order[col])]);
    fix_column_signs(&mut transform);
    let frequencies = eigenvalues.iter().map(|&x| x.sqrt()).collect();
    Ok(NormalModeBasis { transform, frequencies })
}

/// `(Ω²)^α = T · diag(Ω_k^{2α}) · Tᵀ` for any real `α`.
///
/// `α = ½` gives `Ω`, `α = −½` gives `Ω⁻¹`, `α = ¼` gives `Ω^{1/2}`. The result
/// is assembled on the upper triangle and mirrored, so it is exactly symmetric.
pub fn matrix_power<T: Scalar>(basis: &NormalModeBasis<T>, alpha: T) -> Matrix<T> {
    let n = basis.dim();
    let t = &basis.transform;
    let two_alpha = alpha + alpha;
    let weights: Vec<T> = basis.frequencies.iter().map(|&w| w.powf(two_alpha)).collect();
    let mut out = Matrix::zeros(n, n);
    for r in 0..n {
        for s in r..n {
            let value = (0..n).fold(T::zero(), |acc, k| acc + t[(r, k)] * weights[k] * t[(s, k)]);
            out[(r, s)] = value;
            out[(s, r)] = value;
        }
    }
    out
}

/// `min Ω_k² / max Ω_k²`, a dimensionless positive-definiteness margin.
pub fn stability_margin<T: Scalar>(basis: &NormalModeBasis<T>) -> T {
    let lo = basis.frequencies[0];
    let hi = basis.frequencies[basis.dim() - 1];
    (lo * lo) / (hi * hi)
}
