//! Independent reference computations.
//!
//! [`integrate_propagator`] integrates `q̈ + Ω²q = 0` with fixed-step RK4 straight
//! from the interaction matrix and never touches the eigensolver, so comparing
//! [`kernel_from_propagator`] against [`crate::dynamics::kernel`] certifies the
//! spectral pipeline. [`analytic_two_mode`] is the closed-form `N = 1` solution.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::CouplingMatrix;
use crate::scalar::Scalar;
use crate::spectral::{matrix_power, NormalModeBasis, POSITIVITY_THRESHOLD};

/// Linear phase-space flow `(q(0), p(0)) ↦ (q(t), p(t))` in four blocks:
/// `q(t) = qq·q(0) + qp·p(0)`, `p(t) = pq·q(0) + pp·p(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpacePropagator<T> {
    pub time: T,
    pub qq: Matrix<T>,
    pub qp: Matrix<T>,
    pub pq: Matrix<T>,
    pub pp: Matrix<T>,
    /// Number of RK4 steps taken.
    pub steps: usize,
}

impl<T: Scalar> PhaseSpacePropagator<T> {
    pub fn dim(&self) -> usize {
        self.qq.rows()
    }

    /// The full `2(N+1) × 2(N+1)` block matrix `S`.
    pub fn block_matrix(&self) -> Matrix<T> {
        let n = self.dim();
        Matrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => self.qq[(i, j)],
            (true, false) => self.qp[(i, j - n)],
            (false, true) => self.pq[(i - n, j)],
            (false, false) => self.pp[(i - n, j - n)],
        })
    }

    /// `‖Sᵀ·J·S − J‖_max` with `J = [[0, I], [−I, 0]]`.
    pub fn symplectic_defect(&self) -> T {
        let n = self.dim();
        let form = Matrix::from_fn(2 * n, 2 * n, |i, j| {
            if i < n && j == i + n {
                T::one()
            } else if i >= n && j + n == i {
                -T::one()
            } else {
                T::zero()
            }
        });
        let s = self.block_matrix();
        s.transpose().matmul(&form).matmul(&s).max_abs_diff(&form)
    }
}

/// Largest RK4 step the oracle accepts: `10⁻²` of the shortest period implied by
/// the Gershgorin bound on the spectrum of `Ω²`.
pub fn max_step<T: Scalar>(m: &CouplingMatrix<T>) -> T {
    T::lit(1e-2) * T::TAU() / m.gershgorin_upper_bound().sqrt()
}

/// Step used for cross-validation: a quarter of [`max_step`].
///
/// At this step the RK4 phase error stays below `1e-7` and the symplectic
/// defect below `1e-9` over `t ≤ 20` for frequencies up to the Gershgorin bound.
pub fn recommended_step<T: Scalar>(m: &CouplingMatrix<T>) -> T {
    max_step(m) / T::lit(4.0)
}

/// Integrates `d/dt (Q, P) = (P, −Ω²·Q)` from `(Q, P) = (I, 0)` and `(0, I)`.
///
/// The step count is `⌈t/dt_max⌉` and the step is shrunk so the last one lands
/// exactly on `t`. `dt_max` must not exceed [`max_step`].
pub fn integrate_propagator<T: Scalar>(m: &CouplingMatrix<T>, t: T, dt_max: T) -> Result<PhaseSpacePropagator<T>> {
    if !(t >= T::zero() && t.is_finite()) {
        return Err(Error::invalid(format!("integration time must be finite and >= 0, got {t}")));
    }
    if !(dt_max > T::zero()) {
        return Err(Error::invalid(format!("dt_max must be positive, got {dt_max}")));
    }
    let limit = max_step(m);
    if dt_max > limit {
        return Err(Error::invalid(format!("dt_max = {dt_max} exceeds the stability limit {limit}")));
    }

    let n = m.dim();
    let width = 2 * n;
    let omega_sq = m.entries();
    // columns are the 2n initial conditions; q and p each hold n rows of `width`
    let mut q = Matrix::from_fn(n, width, |i, j| if i == j { T::one() } else { T::zero() });
    let mut p = Matrix::from_fn(n, width, |i, j| if i + n == j { T::one() } else { T::zero() });
    let steps = (t / dt_max).ceil().to_usize().expect("finite step count");
    if steps > 0 {
        let h = t / T::from_count(steps);
        let two = T::lit(2.0);
        let half = h / two;
        let sixth = h / T::lit(6.0);
        let zeros = || Matrix::<T>::zeros(n, width);
        let (mut kq, mut kp) = ([zeros(), zeros(), zeros(), zeros()], [zeros(), zeros(), zeros(), zeros()]);
        let (mut q_stage, mut p_stage) = (zeros(), zeros());
        for _ in 0..steps {
            for stage in 0..4 {
                let (qs, ps) = if stage == 0 {
                    (&q, &p)
                } else {
                    let a = if stage == 3 { h } else { half };
                    axpy_into(&mut q_stage, &q, a, &kq[stage - 1]);
                    axpy_into(&mut p_stage, &p, a, &kp[stage - 1]);
                    (&q_stage, &p_stage)
                };
                // dq/dt = p, dp/dt = −Ω²q
                kq[stage].clone_from(ps);
                neg_matmul_into(&mut kp[stage], omega_sq, qs);
            }
            for (x, k) in [(&mut q, &kq), (&mut p, &kp)] {
                for i in 0..n {
                    for j in 0..width {
                        let incr = k[0][(i, j)] + two * k[1][(i, j)] + two * k[2][(i, j)] + k[3][(i, j)];
                        x[(i, j)] = x[(i, j)] + sixth * incr;
                    }
                }
            }
        }
    }

    let block = |x: &Matrix<T>, c0: usize| Matrix::from_fn(n, n, |i, j| x[(i, c0 + j)]);
    Ok(PhaseSpacePropagator { time: t, qq: block(&q, 0), qp: block(&q, n), pq: block(&p, 0), pp: block(&p, n), steps })
}

/// `out = x + a·k`.
fn axpy_into<T: Scalar>(out: &mut Matrix<T>, x: &Matrix<T>, a: T, k: &Matrix<T>) {
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            out[(i, j)] = x[(i, j)] + a * k[(i, j)];
        }
    }
}

/// `out = −m·x`.
fn neg_matmul_into<T: Scalar>(out: &mut Matrix<T>, m: &Matrix<T>, x: &Matrix<T>) {
    for i in 0..m.rows() {
        for j in 0..x.cols() {
            let mut acc = T::zero();
            for k in 0..m.cols() {
                acc = acc + m[(i, k)] * x[(k, j)];
            }
            out[(i, j)] = -acc;
        }
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Parts of the dressed-operator flow `y(t) = A·y(0) + B·y†(0)`, with
/// `y = Ω^{1/2}(q + iΩ⁻¹p)/√(2ħ)`:
///
/// ```text
/// A = ½[Ω^{½}·qq·Ω^{−½} + Ω^{−½}·pp·Ω^{½} + i(Ω^{−½}·pq·Ω^{−½} − Ω^{½}·qp·Ω^{½})]
/// B = ½[Ω^{½}·qq·Ω^{−½} − Ω^{−½}·pp·Ω^{½} + i(Ω^{−½}·pq·Ω^{−½} + Ω^{½}·qp·Ω^{½})]
/// ```
///
/// For the exact flow `qq = pp = cos Ωt`, `qp = Ω⁻¹ sin Ωt`, `pq = −Ω sin Ωt`, so
/// `A = e^{−iΩt} = J(t)` and `B = 0`.
fn dressed_flow<T: Scalar>(basis: &NormalModeBasis<T>, prop: &PhaseSpacePropagator<T>) -> (Matrix<Complex<T>>, Matrix<Complex<T>>) {
    let root = matrix_power(basis, T::lit(0.25));
    let inv_root = matrix_power(basis, T::lit(-0.25));
    let a1 = root.matmul(&prop.qq).matmul(&inv_root);
    let a2 = inv_root.matmul(&prop.pp).matmul(&root);
    let b1 = inv_root.matmul(&prop.pq).matmul(&inv_root);
    let b2 = root.matmul(&prop.qp).matmul(&root);
    let half = T::lit(0.5);
    let n = prop.dim();
    let a = Matrix::from_fn(n, n, |i, j| {
        Complex::new(a1[(i, j)] + a2[(i, j)], b1[(i, j)] - b2[(i, j)]) * half
    });
    let b = Matrix::from_fn(n, n, |i, j| {
        Complex::new(a1[(i, j)] - a2[(i, j)], b1[(i, j)] + b2[(i, j)]) * half
    });
    (a, b)
}

/// Evolution kernel reconstructed from the integrated phase-space flow.
pub fn kernel_from_propagator<T: Scalar>(
    m: &CouplingMatrix<T>,
    basis: &NormalModeBasis<T>,
    prop: &PhaseSpacePropagator<T>,
) -> Result<Matrix<Complex<T>>> {
    check_dim(m.dim(), basis.dim())?;
    check_dim(m.dim(), prop.dim())?;
    Ok(dressed_flow(basis, prop).0)
}

/// The `y†(0)` coefficient of the dressed flow. It vanishes for the exact
/// dynamics, so its size measures the integration error.
pub fn pair_creation_block<T: Scalar>(
    m: &CouplingMatrix<T>,
    basis: &NormalModeBasis<T>,
    prop: &PhaseSpacePropagator<T>,
) -> Result<Matrix<Complex<T>>> {
    check_dim(m.dim(), basis.dim())?;
    check_dim(m.dim(), prop.dim())?;
    Ok(dressed_flow(basis, prop).1)
}

/// Closed-form normal modes of one oscillator and one field mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeSolution<T> {
    pub omega_minus: T,
    pub omega_plus: T,
    /// Rotation angle: `(cos θ, sin θ)` is the eigenvector of `Ω₋`, `(−sin θ, cos θ)` that of `Ω₊`.
    pub theta: T,
}

/// `Ω±² = (ω₀² + ω₁²)/2 ± √((ω₀² − ω₁²)²/4 + c₁²)`, `θ = ½·atan2(2c₁, ω₁² − ω₀²)`.
///
/// `Ω₋²` is taken as `det/Ω₊²` to avoid cancellation.
pub fn analytic_two_mode<T: Scalar>(omega0: T, omega1: T, c1: T) -> Result<TwoModeSolution<T>> {
    let a = omega0 * omega0;
    let b = omega1 * omega1;
    let two = T::lit(2.0);
    let mean = (a + b) / two;
    let half_gap = (a - b) / two;
    let radius = half_gap.hypot(c1);
    let plus_sq = mean + radius;
    let minus_sq = (a * b - c1 * c1) / plus_sq;
    let threshold = T::lit(POSITIVITY_THRESHOLD) * plus_sq;
    if !(minus_sq > threshold) {
        return Err(Error::NonPositiveSpectrum {
            min_eigenvalue: minus_sq.to_f64().unwrap_or(f64::NAN),
            threshold: threshold.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(TwoModeSolution {
        omega_minus: minus_sq.sqrt(),
        omega_plus: plus_sq.sqrt(),
        theta: (two * c1).atan2(b - a) / two,
    })
}
