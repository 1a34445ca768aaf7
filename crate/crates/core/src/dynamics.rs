//! Time evolution, transition amplitudes and the energy spectrum.
//!
//! Everything here is a c-number kernel built from the normal-mode basis:
//! the evolution kernel `J(t) = T·e^{−iDt}·Tᵀ` that propagates dressed-state
//! amplitudes, the multi-quanta amplitudes `phase(t)·J_rs(t)ⁿ`, the holomorphic
//! transformation functions in both bases, and the spectrum `ħΣΩ_k(n_k + ½)`.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::spectral::NormalModeBasis;

/// Unitary, complex-symmetric kernel `J_rs(t) = Σ_k T_rk T_sk e^{−iΩ_k t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionKernel<T> {
    time: T,
    entries: Matrix<Complex<T>>,
}

impl<T: Scalar> EvolutionKernel<T> {
    pub fn time(&self) -> T {
        self.time
    }

    pub fn entries(&self) -> &Matrix<Complex<T>> {
        &self.entries
    }

    pub fn get(&self, r: usize, s: usize) -> Complex<T> {
        self.entries[(r, s)]
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    /// `‖J·Jᴴ − I‖_max`.
    pub fn unitarity_defect(&self) -> T {
        self.entries.unitarity_defect()
    }
}

/// Phase factors `e^{−iΩ_k t}`, computed directly from `t` for every sample.
fn mode_phases<T: Scalar>(basis: &NormalModeBasis<T>, t: T) -> Vec<Complex<T>> {
    basis
        .frequencies()
        .iter()
        .map(|&w| {
            let (s, c) = (w * t).sin_cos();
            Complex::new(c, -s)
        })
        .collect()
}

fn kernel_entry<T: Scalar>(basis: &NormalModeBasis<T>, phases: &[Complex<T>], r: usize, s: usize) -> Complex<T> {
    let t = basis.transform();
    phases
        .iter()
        .enumerate()
        .fold(Complex::zero(), |acc, (k, &phase)| acc + phase * (t[(r, k)] * t[(s, k)]))
}

/// Builds `J(t)`. Entries are computed on the upper triangle and mirrored.
pub fn kernel<T: Scalar>(basis: &NormalModeBasis<T>, t: T) -> EvolutionKernel<T> {
    let n = basis.dim();
    let phases = mode_phases(basis, t);
    let mut entries = Matrix::zeros(n, n);
    for r in 0..n {
        for s in r..n {
            let value = kernel_entry(basis, &phases, r, s);
            entries[(r, s)] = value;
            entries[(s, r)] = value;
        }
    }
    EvolutionKernel { time: t, entries }
}

/// `|J_rs(t)|²`: probability that one quantum in dressed component `r` is found in `s`.
pub fn transition_probability<T: Scalar>(basis: &NormalModeBasis<T>, r: usize, s: usize, t: T) -> Result<T> {
    basis.check_index(r)?;
    basis.check_index(s)?;
    Ok(kernel_entry(basis, &mode_phases(basis, t), r, s).norm_sqr())
}

/// `Σ_r |J_rs(t)|²`, equal to one up to rounding because `T` is orthogonal.
pub fn survival_sum<T: Scalar>(basis: &NormalModeBasis<T>, s: usize, t: T) -> Result<T> {
    basis.check_index(s)?;
    let phases = mode_phases(basis, t);
    Ok((0..basis.dim()).fold(T::zero(), |acc, r| acc + kernel_entry(basis, &phases, r, s).norm_sqr()))
}

/// Global phase attached to the dressed-state amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PhaseConvention {
    /// Full vacuum phase `e^{−i·TrD·t/2}`.
    #[default]
    TotalVacuumPhase,
    /// Per-pair split `e^{−i·TrD·t/(2N)}`, N the number of field modes.
    PaperPerPair,
}

impl PhaseConvention {
    pub fn factor<T: Scalar>(self, basis: &NormalModeBasis<T>, t: T) -> Complex<T> {
        let half_trace = basis.trace() / T::lit(2.0);
        let angle = match self {
            PhaseConvention::TotalVacuumPhase => half_trace * t,
            PhaseConvention::PaperPerPair => half_trace * t / T::from_count(basis.dim() - 1),
        };
        let (s, c) = angle.sin_cos();
        Complex::new(c, -s)
    }
}

/// `⟨n̄_s, t | n̄_r⟩ = phase(t)·J_rs(t)ⁿ`: amplitude for `n` quanta initially in dressed
/// component `r` to all be found in `s` at time `t`.
///
/// The multinomial sum over how the quanta distribute among the normal modes is
/// exactly the expansion of `J_rsⁿ`, so the power is taken directly.
pub fn multiquanta_amplitude<T: Scalar>(
    basis: &NormalModeBasis<T>,
    r: usize,
    s: usize,
    n: u32,
    t: T,
    phase: PhaseConvention,
) -> Result<Complex<T>> {
    basis.check_index(r)?;
    basis.check_index(s)?;
    let j = kernel_entry(basis, &mode_phases(basis, t), r, s);
    Ok(phase.factor(basis, t) * num_traits::pow(j, n as usize))
}

/// One evaluated amplitude with its probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeSample<T> {
    pub time: T,
    pub r: usize,
    pub s: usize,
    pub n: u32,
    pub value: Complex<T>,
    /// `re² + im²` of `value`.
    pub probability: T,
}

pub fn amplitude_sample<T: Scalar>(
    basis: &NormalModeBasis<T>,
    r: usize,
    s: usize,
    n: u32,
    t: T,
    phase: PhaseConvention,
) -> Result<AmplitudeSample<T>> {
    let value = multiquanta_amplitude(basis, r, s, n, t, phase)?;
    Ok(AmplitudeSample { time: t, r, s, n, value, probability: value.re * value.re + value.im * value.im })
}

/// Closed time interval `[t0, t1]` sampled at `steps + 1` points including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid<T> {
    pub t0: T,
    pub t1: T,
    pub steps: usize,
}

impl<T: Scalar> TimeGrid<T> {
    pub fn new(t0: T, t1: T, steps: usize) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(Error::invalid("time grid bounds must be finite"));
        }
        if t1 < t0 {
            return Err(Error::invalid(format!("time grid needs t1 >= t0, got t0={t0}, t1={t1}")));
        }
        if steps < 1 {
            return Err(Error::invalid("time grid needs at least one step"));
        }
        Ok(Self { t0, t1, steps })
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sample `i`; each one is computed from the endpoints, never accumulated.
    pub fn at(&self, i: usize) -> T {
        if i == self.steps {
            return self.t1;
        }
        self.t0 + (self.t1 - self.t0) * T::from_count(i) / T::from_count(self.steps)
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..=self.steps).map(|i| self.at(i))
    }
}

/// Evaluates `J(t)` on every grid point.
pub fn kernel_series<T: Scalar>(basis: &NormalModeBasis<T>, grid: &TimeGrid<T>) -> Vec<EvolutionKernel<T>> {
    grid.times().map(|t| kernel(basis, t)).collect()
}

/// Quanta `(n_0, …, n_N)` in each normal mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OccupationVector {
    quanta: Vec<u32>,
}

impl OccupationVector {
    pub fn new(quanta: Vec<u32>) -> Self {
        Self { quanta }
    }

    pub fn vacuum(dim: usize) -> Self {
        Self { quanta: vec![0; dim] }
    }

    pub fn quanta(&self) -> &[u32] {
        &self.quanta
    }

    pub fn len(&self) -> usize {
        self.quanta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quanta.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.quanta.iter().map(|&n| u64::from(n)).sum()
    }

    /// Entrywise sum; `None` if the lengths differ.
    pub fn combine(&self, other: &Self) -> Option<Self> {
        (self.len() == other.len())
            .then(|| Self::new(self.quanta.iter().zip(&other.quanta).map(|(a, b)| a + b).collect()))
    }
}

/// `E = ħ·Σ_k Ω_k·n_k + (ħ/2)·Σ_k Ω_k`.
pub fn spectrum_energy<T: Scalar>(basis: &NormalModeBasis<T>, occ: &OccupationVector, hbar: T) -> Result<T> {
    if occ.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: occ.len() });
    }
    let excitation = basis
        .frequencies()
        .iter()
        .zip(occ.quanta())
        .fold(T::zero(), |acc, (&w, &n)| acc + w * T::lit(f64::from(n)));
    Ok(hbar * excitation + vacuum_energy(basis, hbar))
}

/// Zero-point energy `(ħ/2)·Tr D`.
pub fn vacuum_energy<T: Scalar>(basis: &NormalModeBasis<T>, hbar: T) -> T {
    hbar / T::lit(2.0) * basis.trace()
}

fn check_len<T>(basis_dim: usize, v: &[T]) -> Result<()> {
    if v.len() == basis_dim {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: basis_dim, found: v.len() })
    }
}

/// `⟨ξ†, t | ξ, 0⟩ = e^{−i·TrD·t/2} · exp(Σ_k ξ†_k ξ_k(0) e^{−iΩ_k t})` in the normal-mode basis.
pub fn transformation_function_normal<T: Scalar>(
    basis: &NormalModeBasis<T>,
    xi_dag: &[Complex<T>],
    xi0: &[Complex<T>],
    t: T,
) -> Result<Complex<T>> {
    check_len(basis.dim(), xi_dag)?;
    check_len(basis.dim(), xi0)?;
    let exponent = mode_phases(basis, t)
        .iter()
        .zip(xi_dag.iter().zip(xi0))
        .fold(Complex::zero(), |acc, (&phase, (&a, &b))| acc + a * b * phase);
    Ok(PhaseConvention::TotalVacuumPhase.factor(basis, t) * exponent.exp())
}

/// `⟨y†, t | y, 0⟩ = e^{−i·TrD·t/2} · exp(y†ᵀ·J(t)·y(0))` in the dressed basis.
pub fn transformation_function_dressed<T: Scalar>(
    basis: &NormalModeBasis<T>,
    y_dag: &[Complex<T>],
    y0: &[Complex<T>],
    t: T,
) -> Result<Complex<T>> {
    check_len(basis.dim(), y_dag)?;
    check_len(basis.dim(), y0)?;
    let j = kernel(basis, t);
    let jy = j.entries().matvec(y0);
    let exponent = y_dag.iter().zip(&jy).fold(Complex::zero(), |acc, (&a, &b)| acc + a * b);
    Ok(PhaseConvention::TotalVacuumPhase.factor(basis, t) * exponent.exp())
}

/// Dressed to normal-mode labels: `ξ = Tᵀ·y`.
pub fn to_normal_coordinates<T: Scalar>(basis: &NormalModeBasis<T>, y: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    check_len(basis.dim(), y)?;
    let t = basis.transform();
    Ok((0..basis.dim())
        .map(|k| (0..basis.dim()).fold(Complex::zero(), |acc, j| acc + y[j] * t[(j, k)]))
        .collect())
}

/// Largest `n` whose factorial is accumulated exactly by repeated multiplication.
const EXACT_FACTORIAL_LIMIT: u32 = 20;

/// `ln n!` accumulated term by term.
fn ln_factorial<T: Scalar>(n: u32) -> T {
    (2..=n).fold(T::zero(), |acc, k| acc + T::lit(f64::from(k)).ln())
}

/// Holomorphic overlap `⟨n|ξ⟩ = ξⁿ/√(n!)`.
///
/// Fails with [`Error::Overflow`] once `n!` is not representable in `T`
/// (`n > 170` for `f64`). Above `n = 20` the value is assembled in polar form
/// from `ln n!` so that `ξⁿ` itself never overflows first.
pub fn number_overlap<T: Scalar>(xi: Complex<T>, n: u32) -> Result<Complex<T>> {
    if n == 0 {
        return Ok(Complex::one());
    }
    if n <= EXACT_FACTORIAL_LIMIT {
        let fact = (2..=n).fold(T::one(), |acc, k| acc * T::lit(f64::from(k)));
        return Ok(num_traits::pow(xi, n as usize) / fact.sqrt());
    }
    let ln_fact = ln_factorial::<T>(n);
    if ln_fact > T::max_value().ln() {
        return Err(Error::Overflow(format!("{n}! exceeds the floating-point range")));
    }
    if xi == Complex::zero() {
        return Ok(Complex::zero());
    }
    let n_real = T::lit(f64::from(n));
    let (modulus, arg) = xi.to_polar();
    let log_magnitude = n_real * modulus.ln() - ln_fact / T::lit(2.0);
    Ok(Complex::from_polar(log_magnitude.exp(), n_real * arg))
}
