//! Exact normal-mode solution of a harmonic oscillator linearly coupled to `N`
//! field-mode oscillators.
//!
//! The pipeline is: [`ModelConfig`](model::ModelConfig) →
//! [`build_interaction_matrix`] → [`diagonalize`] →
//! kernels, amplitudes and energies in [`dynamics`]. The [`oracle`] module
//! reproduces the time evolution without the eigensolver.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases
//! below fix the double-precision instantiation used by the CLI.

pub mod config;
pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod jacobi;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod scalar;
pub mod spectral;

pub use config::{load_config, parse_config};
pub use dynamics::{
    amplitude_sample, kernel, kernel_series, multiquanta_amplitude, number_overlap, spectrum_energy,
    survival_sum, to_normal_coordinates, transformation_function_dressed, transformation_function_normal,
    transition_probability, vacuum_energy, AmplitudeSample, EvolutionKernel, OccupationVector, PhaseConvention,
    TimeGrid,
};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use model::{
    build_config_from_preset, build_interaction_matrix, CouplingMatrix, FieldMode, FrequencyConvention, ModelConfig,
    SphericalCavityPreset,
};
pub use oracle::{analytic_two_mode, integrate_propagator, kernel_from_propagator, PhaseSpacePropagator, TwoModeSolution};
pub use scalar::Scalar;
pub use spectral::{diagonalize, matrix_power, stability_margin, NormalModeBasis};

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;
pub type ModelConfig64 = ModelConfig<f64>;
pub type ModelConfig32 = ModelConfig<f32>;
pub type CouplingMatrix64 = CouplingMatrix<f64>;
pub type CouplingMatrix32 = CouplingMatrix<f32>;
pub type NormalModeBasis64 = NormalModeBasis<f64>;
pub type NormalModeBasis32 = NormalModeBasis<f32>;
pub type EvolutionKernel64 = EvolutionKernel<f64>;
pub type EvolutionKernel32 = EvolutionKernel<f32>;
pub type PhaseSpacePropagator64 = PhaseSpacePropagator<f64>;
pub type AmplitudeSample64 = AmplitudeSample<f64>;
pub type TimeGrid64 = TimeGrid<f64>;
