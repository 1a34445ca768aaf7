//! Problem instances: one central oscillator of frequency `ω₀` linearly coupled to
//! `N` field modes `(ω_k, c_k)`, and the arrowhead interaction matrix `Ω²` they define.
//!
//! Index 0 always refers to the central oscillator; indices `1..=N` are the field
//! modes in the order they were given.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// One field mode: bare frequency and coupling to the central oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldMode<T> {
    pub omega: T,
    /// Coupling constant. Any sign is allowed; zero decouples the mode.
    pub coupling: T,
}

impl<T> FieldMode<T> {
    pub fn new(omega: T, coupling: T) -> Self {
        Self { omega, coupling }
    }
}

/// Validated physical parameters of a model instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelConfig<T> {
    omega0: T,
    modes: Vec<FieldMode<T>>,
    hbar: T,
}

impl<T: Scalar> ModelConfig<T> {
    pub fn new(omega0: T, modes: Vec<FieldMode<T>>, hbar: T) -> Result<Self> {
        if !(omega0 > T::zero() && omega0.is_finite()) {
            return Err(Error::invalid(format!("omega0 must be positive and finite, got {omega0}")));
        }
        if modes.is_empty() {
            return Err(Error::invalid("at least one field mode is required"));
        }
        for (i, mode) in modes.iter().enumerate() {
            if !(mode.omega > T::zero() && mode.omega.is_finite()) {
                return Err(Error::invalid(format!(
                    "mode {} frequency must be positive and finite, got {}",
                    i + 1,
                    mode.omega
                )));
            }
            if !mode.coupling.is_finite() {
                return Err(Error::invalid(format!("mode {} coupling is not finite", i + 1)));
            }
        }
        if !(hbar > T::zero() && hbar.is_finite()) {
            return Err(Error::invalid(format!("hbar must be positive and finite, got {hbar}")));
        }
        Ok(Self { omega0, modes, hbar })
    }

    /// Same as [`ModelConfig::new`] with `ħ = 1`.
    pub fn with_unit_hbar(omega0: T, modes: Vec<FieldMode<T>>) -> Result<Self> {
        Self::new(omega0, modes, T::one())
    }

    /// Convenience constructor from `(ω_k, c_k)` pairs with `ħ = 1`.
    pub fn from_pairs(omega0: T, pairs: &[(T, T)]) -> Result<Self> {
        Self::with_unit_hbar(omega0, pairs.iter().map(|&(w, c)| FieldMode::new(w, c)).collect())
    }

    pub fn omega0(&self) -> T {
        self.omega0
    }

    pub fn modes(&self) -> &[FieldMode<T>] {
        &self.modes
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    /// Number of field modes `N`.
    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Dimension `N + 1` of the coupled system.
    pub fn dim(&self) -> usize {
        self.modes.len() + 1
    }

    /// Returns a copy with a different `ħ`.
    pub fn with_hbar(&self, hbar: T) -> Result<Self> {
        Self::new(self.omega0, self.modes.clone(), hbar)
    }
}

/// Which reading of the cavity mode spectrum a preset uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FrequencyConvention {
    /// `ω_k = π/k`, exactly as printed in the source derivation.
    #[default]
    PaperLiteral,
    /// `ω_k = kπ/R`, the conventional spectrum of a cavity of radius `R`.
    LinearInK,
}

/// Scalar field in a spherical cavity of radius `R` with a dipole at its center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalCavityPreset<T> {
    pub g: T,
    pub radius: T,
    pub mode_count: usize,
    pub convention: FrequencyConvention,
}

/// Expands a cavity preset into explicit parameters.
///
/// Both conventions use `c_k = (ω_k/R)·√(2g)`. The central oscillator is taken
/// resonant with the first mode, `ω₀ = ω₁`, and `ħ = 1`.
pub fn build_config_from_preset<T: Scalar>(preset: &SphericalCavityPreset<T>) -> Result<ModelConfig<T>> {
    let SphericalCavityPreset { g, radius, mode_count, convention } = *preset;
    if !(g > T::zero() && g.is_finite()) {
        return Err(Error::invalid(format!("preset g must be positive, got {g}")));
    }
    if !(radius > T::zero() && radius.is_finite()) {
        return Err(Error::invalid(format!("preset R must be positive, got {radius}")));
    }
    if mode_count < 1 {
        return Err(Error::invalid("preset N must be at least 1"));
    }
    let coupling_scale = (T::lit(2.0) * g).sqrt();
    let modes: Vec<FieldMode<T>> = (1..=mode_count)
        .map(|k| {
            let k = T::from_count(k);
            let omega = match convention {
                FrequencyConvention::PaperLiteral => T::PI() / k,
                FrequencyConvention::LinearInK => k * T::PI() / radius,
            };
            FieldMode::new(omega, omega / radius * coupling_scale)
        })
        .collect();
    let omega0 = modes[0].omega;
    ModelConfig::with_unit_hbar(omega0, modes)
}

/// Real symmetric arrowhead matrix `Ω²`.
///
/// `[0][0] = ω₀²`, `[k][k] = ω_k²`, `[0][k] = [k][0] = −c_k`, every other entry is
/// exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix<T> {
    entries: Matrix<T>,
}

impl<T: Scalar> CouplingMatrix<T> {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix<T> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[(i, j)]
    }

    /// Reads the parameters back off the matrix: `ω` from the square roots of
    /// the diagonal, `c_k` from column 0.
    pub fn recover_config(&self, hbar: T) -> Result<ModelConfig<T>> {
        let n = self.dim();
        let modes = (1..n)
            .map(|k| FieldMode::new(self.entries[(k, k)].sqrt(), -self.entries[(k, 0)]))
            .collect();
        ModelConfig::new(self.entries[(0, 0)].sqrt(), modes, hbar)
    }

    /// Upper bound on the largest eigenvalue from Gershgorin discs.
    pub fn gershgorin_upper_bound(&self) -> T {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let radius = (0..n)
                    .filter(|&j| j != i)
                    .fold(T::zero(), |acc, j| acc + self.entries[(i, j)].abs());
                self.entries[(i, i)] + radius
            })
            .fold(T::neg_infinity(), T::max)
    }
}

/// Assembles `Ω²` from a validated configuration.
pub fn build_interaction_matrix<T: Scalar>(config: &ModelConfig<T>) -> CouplingMatrix<T> {
    let n = config.dim();
    let mut entries = Matrix::zeros(n, n);
    entries[(0, 0)] = config.omega0 * config.omega0;
    for (i, mode) in config.modes.iter().enumerate() {
        let k = i + 1;
        entries[(k, k)] = mode.omega * mode.omega;
        entries[(0, k)] = -mode.coupling;
        entries[(k, 0)] = -mode.coupling;
    }
    CouplingMatrix { entries }
}
