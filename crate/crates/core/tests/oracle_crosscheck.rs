use std::f64::consts::FRAC_PI_4;

use coupled_modes::ensemble::ModelEnsemble;
use coupled_modes::oracle::{max_step, pair_creation_block, recommended_step};
use coupled_modes::{
    analytic_two_mode, build_interaction_matrix, diagonalize, integrate_propagator, kernel, kernel_from_propagator,
    CouplingMatrix, Matrix, ModelConfig, NormalModeBasis, PhaseSpacePropagator,
};

fn random_matrix(seed: u64, n: usize) -> CouplingMatrix<f64> {
    let cfg: ModelConfig<f64> = ModelEnsemble::with_seed(seed).model(n);
    build_interaction_matrix(&cfg)
}

/// `T·diag(f(Ω_k))·Tᵀ` straight from the basis.
fn spectral_function(basis: &NormalModeBasis<f64>, f: impl Fn(f64) -> f64) -> Matrix<f64> {
    let t = basis.transform();
    let d = Matrix::from_diagonal(&basis.frequencies().iter().map(|&w| f(w)).collect::<Vec<_>>());
    t.matmul(&d).matmul(&t.transpose())
}

/// Largest block error of the integrated flow against `cos Ωt`, `Ω⁻¹ sin Ωt`, `−Ω sin Ωt`.
fn propagator_error(basis: &NormalModeBasis<f64>, prop: &PhaseSpacePropagator<f64>) -> f64 {
    let t = prop.time;
    let cos = spectral_function(basis, |w| (w * t).cos());
    let sin_over = spectral_function(basis, |w| (w * t).sin() / w);
    let sin_times = spectral_function(basis, |w| -(w * t).sin() * w);
    [
        prop.qq.max_abs_diff(&cos),
        prop.pp.max_abs_diff(&cos),
        prop.qp.max_abs_diff(&sin_over),
        prop.pq.max_abs_diff(&sin_times),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

#[test]
fn blocks_match_spectral_closed_form() {
    let m = random_matrix(4, 4);
    let basis = diagonalize(&m).unwrap();
    let prop = integrate_propagator(&m, 5.0, recommended_step(&m)).unwrap();
    assert!(propagator_error(&basis, &prop) <= 1e-6);
}

#[test]
fn kernel_agrees_with_spectral_kernel() {
    for seed in 0..6 {
        let m = random_matrix(seed, 1 + seed as usize % 8);
        let basis = diagonalize(&m).unwrap();
        for &t in &[1.0, 5.0, 10.0] {
            let prop = integrate_propagator(&m, t, recommended_step(&m)).unwrap();
            let oracle = kernel_from_propagator(&m, &basis, &prop).unwrap();
            let diff = oracle.max_modulus_diff(kernel(&basis, t).entries());
            assert!(diff <= 1e-6, "seed {seed} t {t}: {diff:e}");
            assert!(pair_creation_block(&m, &basis, &prop).unwrap().max_modulus() <= 1e-6);
        }
    }
}

#[test]
fn decoupled_kernel_is_phase_diagonal() {
    let m = build_interaction_matrix(&ModelConfig::from_pairs(1.0, &[(2.0, 0.0), (0.5, 0.0)]).unwrap());
    let basis = diagonalize(&m).unwrap();
    let t = 3.0;
    let prop = integrate_propagator(&m, t, recommended_step(&m)).unwrap();
    let oracle = kernel_from_propagator(&m, &basis, &prop).unwrap();
    for (i, &w) in [1.0f64, 2.0, 0.5].iter().enumerate() {
        let expected = coupled_modes::Complex64::new((w * t).cos(), -(w * t).sin());
        assert!((oracle[(i, i)] - expected).norm() <= 1e-8);
    }
    assert!(oracle.map(|z| z.norm()).as_slice().iter().enumerate().all(|(idx, &v)| idx % 4 == 0 || v <= 1e-12));
}

#[test]
fn zero_time_kernel_is_identity() {
    let m = random_matrix(9, 5);
    let basis = diagonalize(&m).unwrap();
    let prop = integrate_propagator(&m, 0.0, max_step(&m)).unwrap();
    let oracle = kernel_from_propagator(&m, &basis, &prop).unwrap();
    assert!(oracle.max_modulus_diff(&Matrix::identity(6)) <= 1e-12);
}

#[test]
fn symplectic_within_budget() {
    for seed in 0..4 {
        let m = random_matrix(20 + seed, 3);
        for &t in &[1.0, 7.5, 20.0] {
            let prop = integrate_propagator(&m, t, recommended_step(&m)).unwrap();
            assert!(prop.symplectic_defect() <= 1e-8, "seed {seed} t {t}: {:e}", prop.symplectic_defect());
        }
    }
}

#[test]
fn rk4_is_fourth_order() {
    // decoupled oscillator at ω = 1; both step sizes divide t exactly
    let m = build_interaction_matrix(&ModelConfig::from_pairs(1.0, &[(1.0, 0.0)]).unwrap());
    let basis = diagonalize(&m).unwrap();
    let t = 10.0;
    let coarse = propagator_error(&basis, &integrate_propagator(&m, t, 0.05).unwrap());
    let fine = propagator_error(&basis, &integrate_propagator(&m, t, 0.025).unwrap());
    let order = (coarse / fine).log2();
    assert!((3.7..=4.3).contains(&order), "order {order}");
}

#[test]
fn analytic_two_mode_matches_diagonalization() {
    let cases: [(f64, f64, f64); 5] = [(1.0, 1.0, 0.1), (1.0, 2.0, 0.5), (3.0, 0.5, -0.7), (0.2, 0.25, 0.01), (2.0, 2.0, -1.5)];
    for &(w0, w1, c) in &cases {
        let s = analytic_two_mode(w0, w1, c).unwrap();
        let b = diagonalize(&build_interaction_matrix(&ModelConfig::from_pairs(w0, &[(w1, c)]).unwrap())).unwrap();
        assert!((b.frequencies()[0] - s.omega_minus).abs() <= 1e-12 * s.omega_minus);
        assert!((b.frequencies()[1] - s.omega_plus).abs() <= 1e-12 * s.omega_plus);
        // columns of T are (cos θ, sin θ) and (−sin θ, cos θ) up to sign
        let (sin, cos) = s.theta.sin_cos();
        let t = b.transform();
        let col0 = [t[(0, 0)], t[(1, 0)]];
        let col1 = [t[(0, 1)], t[(1, 1)]];
        let sign0 = if col0[0] * cos + col0[1] * sin >= 0.0 { 1.0 } else { -1.0 };
        let sign1 = if -col1[0] * sin + col1[1] * cos >= 0.0 { 1.0 } else { -1.0 };
        assert!((col0[0] - sign0 * cos).abs() < 1e-12 && (col0[1] - sign0 * sin).abs() < 1e-12);
        assert!((col1[0] + sign1 * sin).abs() < 1e-12 && (col1[1] - sign1 * cos).abs() < 1e-12);
    }
    assert!((analytic_two_mode(1.0f64, 1.0, 0.1).unwrap().theta - FRAC_PI_4).abs() < 1e-15);
}
