//! Cyclic Jacobi eigensolver for real symmetric matrices.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Unsorted eigenpairs: `a = vectors · diag(values) · vectorsᵀ`, eigenvectors in columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

/// Sweeps allowed per unit of dimension.
pub const SWEEPS_PER_DIM: usize = 30;

/// Convergence target for the off-diagonal Frobenius norm relative to `‖a‖_F`.
/// Never tighter than a few ulps of the scalar type.
pub fn convergence_tolerance<T: Scalar>() -> T {
    T::lit(1e-14).max(T::lit(8.0) * T::epsilon())
}

fn off_diagonal_norm<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + a[(i, j)] * a[(i, j)];
            }
        }
    }
    acc.sqrt()
}

/// Diagonalizes a symmetric matrix by cyclic Jacobi rotations.
///
/// Pivots are visited row by row (`p < q`). A rotation is skipped when its
/// off-diagonal entry is already zero, and an entry that is negligible against
/// both diagonal entries is flushed to zero once the first sweeps are done.
pub fn jacobi_eigen<T: Scalar>(a: &Matrix<T>) -> Result<SymmetricEigen<T>> {
    assert!(a.is_square(), "Jacobi requires a square matrix");
    let n = a.rows();
    let mut a = a.clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();
    let target = convergence_tolerance::<T>() * scale;
    let max_sweeps = SWEEPS_PER_DIM * n;
    let half = T::lit(0.5);
    let flush = T::lit(0.01) * T::epsilon();

    for sweep in 0..=max_sweeps {
        let off = off_diagonal_norm(&a);
        if off <= target || off == T::zero() {
            return Ok(SymmetricEigen { values: a.diagonal(), vectors: v });
        }
        if sweep == max_sweeps {
            return Err(Error::NoConvergence {
                sweeps: max_sweeps,
                off_norm: off.to_f64().unwrap_or(f64::NAN),
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                if sweep > 3 && apq.abs() <= flush * app.abs() && apq.abs() <= flush * aqq.abs() {
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                // tan of the rotation angle, smaller root for stability
                let theta = (aqq - app) * half / apq;
                let t = if theta.abs() > T::lit(1e150).min(T::max_value().sqrt()) {
                    half / theta
                } else {
                    let sign = if theta < T::zero() { -T::one() } else { T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let tau = s / (T::one() + c);

                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp;
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq;
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp - s * (vrq + tau * vrp);
                    v[(r, q)] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }
    unreachable!("loop returns on its last iteration")
}
