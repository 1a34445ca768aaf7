//! Seeded random model ensembles for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{FieldMode, ModelConfig};
use crate::scalar::Scalar;

/// Sampling ranges for random models.
///
/// Frequencies are uniform in `[omega_min, omega_max]`. Couplings are drawn so
/// that `Σ_k c_k²/ω_k² ≤ max_coupling_fraction · ω₀²`, which keeps the Schur
/// complement `ω₀² − Σ c_k²/ω_k²` of the arrowhead matrix, and hence every
/// eigenvalue, positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub omega_min: f64,
    pub omega_max: f64,
    pub max_coupling_fraction: f64,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self { omega_min: 0.1, omega_max: 10.0, max_coupling_fraction: 0.9 }
    }
}

/// Deterministic generator of random [`ModelConfig`]s.
#[derive(Debug, Clone)]
pub struct ModelEnsemble {
    rng: ChaCha8Rng,
    spec: EnsembleSpec,
}

impl ModelEnsemble {
    pub fn new(seed: u64, spec: EnsembleSpec) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), spec }
    }

    pub fn with_seed(seed: u64) -> Self {
        Self::new(seed, EnsembleSpec::default())
    }

    fn frequency(&mut self) -> f64 {
        self.rng.gen_range(self.spec.omega_min..=self.spec.omega_max)
    }

    /// Draws a model with exactly `mode_count` field modes.
    pub fn model<T: Scalar>(&mut self, mode_count: usize) -> ModelConfig<T> {
        assert!(mode_count >= 1, "a model needs at least one field mode");
        let omega0 = self.frequency();
        let omegas: Vec<f64> = (0..mode_count).map(|_| self.frequency()).collect();
        let raw: Vec<f64> = (0..mode_count).map(|_| self.rng.gen_range(-1.0..=1.0)).collect();
        let strength = self.rng.gen_range(0.0..self.spec.max_coupling_fraction);
        let norm_sq: f64 = raw.iter().map(|u| u * u).sum();
        let scale = if norm_sq > 0.0 { omega0 * (strength / norm_sq).sqrt() } else { 0.0 };
        let modes = omegas
            .iter()
            .zip(&raw)
            .map(|(&w, &u)| FieldMode::new(T::lit(w), T::lit(u * w * scale)))
            .collect();
        ModelConfig::with_unit_hbar(T::lit(omega0), modes).expect("sampled parameters are valid")
    }

    /// Draws a model whose mode count is uniform in `1..=max_modes`.
    pub fn model_up_to<T: Scalar>(&mut self, max_modes: usize) -> ModelConfig<T> {
        let n = self.rng.gen_range(1..=max_modes);
        self.model(n)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Complex number with both parts uniform in `[-scale, scale]`.
    pub fn complex(&mut self, scale: f64) -> num_complex::Complex<f64> {
        num_complex::Complex::new(self.uniform(-scale, scale), self.uniform(-scale, scale))
    }
}
