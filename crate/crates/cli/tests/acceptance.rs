//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p coupled-modes-cli --test acceptance -- --nocapture`
//! to see the report.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::process::Command;
use std::time::{Duration, Instant};

use coupled_modes::ensemble::ModelEnsemble;
use coupled_modes::oracle::{max_step, recommended_step};
use coupled_modes::{
    analytic_two_mode, build_interaction_matrix, diagonalize, integrate_propagator, kernel, kernel_from_propagator,
    matrix_power, multiquanta_amplitude, spectrum_energy, survival_sum, to_normal_coordinates,
    transformation_function_dressed, transformation_function_normal, Complex64, CouplingMatrix64, Matrix,
    ModelConfig64, NormalModeBasis64, OccupationVector, PhaseConvention, TimeGrid64,
};

const SEED: u64 = 20_240_601;

struct Outcome {
    id: u32,
    name: &'static str,
    /// Worst measured defect divided by its tolerance; ≤ 1 passes.
    worst_ratio: f64,
    detail: String,
    elapsed: Duration,
    budget: Option<Duration>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.worst_ratio <= 1.0 && self.budget.is_none_or(|b| self.elapsed < b)
    }

    fn line(&self) -> String {
        let budget = match self.budget {
            Some(b) => format!("{:.2}s < {}s", self.elapsed.as_secs_f64(), b.as_secs()),
            None => format!("{:.2}s", self.elapsed.as_secs_f64()),
        };
        format!(
            "{} {:>2} {:<40} {}; runtime {budget}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

/// Tracks the worst `measured / tolerance` ratio of one criterion.
#[derive(Default)]
struct Worst {
    entries: Vec<(&'static str, f64, f64)>,
}

impl Worst {
    fn record(&mut self, what: &'static str, measured: f64, tolerance: f64) {
        match self.entries.iter_mut().find(|e| e.0 == what) {
            Some(e) => e.1 = if measured.is_nan() { f64::NAN } else { e.1.max(measured) },
            None => self.entries.push((what, measured, tolerance)),
        }
    }

    fn ratio(&self) -> f64 {
        self.entries.iter().map(|e| if e.1.is_nan() { f64::INFINITY } else { e.1 / e.2 }).fold(0.0, f64::max)
    }

    fn detail(&self) -> String {
        self.entries.iter().map(|(w, m, t)| format!("{w} {m:.2e} <= {t:.0e}")).collect::<Vec<_>>().join(", ")
    }
}

fn timed(id: u32, name: &'static str, budget: Option<u64>, f: impl FnOnce(&mut Worst)) -> Outcome {
    let start = Instant::now();
    let mut worst = Worst::default();
    f(&mut worst);
    Outcome {
        id,
        name,
        worst_ratio: worst.ratio(),
        detail: worst.detail(),
        elapsed: start.elapsed(),
        budget: budget.map(Duration::from_secs),
    }
}

struct Sample {
    config: ModelConfig64,
    m: CouplingMatrix64,
    basis: NormalModeBasis64,
}

fn ensemble(seed: u64, count: usize, max_modes: usize) -> Vec<Sample> {
    let mut rng = ModelEnsemble::with_seed(seed);
    (0..count)
        .map(|_| {
            let config: ModelConfig64 = rng.model_up_to(max_modes);
            let m = build_interaction_matrix(&config);
            let basis = diagonalize(&m).expect("ensemble models are positive definite");
            Sample { config, m, basis }
        })
        .collect()
}

fn orthogonality_and_reconstruction(w: &mut Worst) {
    for s in ensemble(SEED, 200, 32) {
        let dim = s.basis.dim() as f64;
        w.record("ortho", s.basis.orthogonality_defect() / dim, 1e-12);
        w.record("recon", s.basis.reconstruction_defect(&s.m) / s.m.entries().max_abs(), 1e-10);
    }
}

fn unitarity_sum_rule(w: &mut Worst) {
    let models = ensemble(SEED, 200, 32);
    let mut rng = ModelEnsemble::with_seed(SEED ^ 0x2);
    let times: Vec<f64> = (0..100).map(|_| rng.uniform(0.0, 50.0)).collect();
    for s in &models {
        for &t in &times {
            for src in 0..s.basis.dim() {
                w.record("sum-1", (survival_sum(&s.basis, src, t).unwrap() - 1.0).abs(), 1e-10);
            }
        }
    }
}

fn oracle_equivalence(w: &mut Worst) {
    for s in ensemble(SEED ^ 0x3, 20, 8) {
        let dt = recommended_step(&s.m);
        assert!(dt <= max_step(&s.m));
        for t in [1.0, 5.0, 10.0] {
            let prop = integrate_propagator(&s.m, t, dt).unwrap();
            let oracle = kernel_from_propagator(&s.m, &s.basis, &prop).unwrap();
            w.record("|J_oracle-J|", oracle.max_modulus_diff(kernel(&s.basis, t).entries()), 1e-6);
        }
    }
}

fn golden_two_mode(w: &mut Worst) {
    let config = ModelConfig64::from_pairs(1.0, &[(1.0, 0.1)]).unwrap();
    let basis = diagonalize(&build_interaction_matrix(&config)).unwrap();
    let (lo, hi) = (0.9f64.sqrt(), 1.1f64.sqrt());
    let f = basis.frequencies();
    w.record("freq rel", ((f[0] - lo).abs() / lo).max((f[1] - hi).abs() / hi), 1e-12);

    let analytic = analytic_two_mode(1.0f64, 1.0, 0.1).unwrap();
    w.record("theta", (analytic.theta - FRAC_PI_4).abs(), 1e-12);
    // the Ω₋ column of T is (cos θ, sin θ)
    let t = basis.transform();
    let column = (t[(0, 0)] - FRAC_PI_4.cos()).abs().max((t[(1, 0)] - FRAC_PI_4.sin()).abs());
    w.record("T column", column, 1e-12);

    let grid = TimeGrid64::new(0.0, 200.0, 999).unwrap();
    assert_eq!(grid.len(), 1000);
    for time in grid.times() {
        let p = kernel(&basis, time).get(0, 0).norm_sqr();
        w.record("|J00|^2", (p - ((hi - lo) * time / 2.0).cos().powi(2)).abs(), 1e-10);
    }
}

fn vacuum_energy(w: &mut Worst) {
    let mut rng = ModelEnsemble::with_seed(SEED ^ 0x5);
    for s in ensemble(SEED, 200, 32) {
        let hbar = rng.uniform(0.1, 3.0);
        let config = s.config.with_hbar(hbar).unwrap();
        let got = spectrum_energy(&s.basis, &OccupationVector::vacuum(s.basis.dim()), config.hbar()).unwrap();
        // compensated sum as an independent reference
        let (mut sum, mut carry) = (0.0f64, 0.0f64);
        for &omega in s.basis.frequencies() {
            let y = omega - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        let want = hbar / 2.0 * sum;
        w.record("rel", (got - want).abs() / want, 1e-12);
    }
}

/// Taylor coefficients of `f` around 0 from `m` samples on the unit circle.
fn taylor_coefficients(f: impl Fn(Complex64) -> Complex64, count: usize, m: usize) -> Vec<Complex64> {
    let samples: Vec<(Complex64, Complex64)> =
        (0..m).map(|j| Complex64::from_polar(1.0, TAU * j as f64 / m as f64)).map(|z| (z, f(z))).collect();
    (0..count)
        .map(|n| samples.iter().map(|&(z, fz)| fz * z.powu(n as u32).conj()).sum::<Complex64>() / m as f64)
        .collect()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn transformation_functions(w: &mut Worst) {
    let mut rng = ModelEnsemble::with_seed(SEED ^ 0x6);
    let zero = Complex64::new(0.0, 0.0);
    for s in ensemble(SEED ^ 0x6, 5, 1).iter().map(|s| &s.basis) {
        let half_trace: f64 = s.frequencies().iter().sum::<f64>() / 2.0;
        for _ in 0..4 {
            let t = rng.uniform(0.0, 20.0);
            for (k, &omega) in s.frequencies().iter().enumerate() {
                let f = |z: Complex64| {
                    let mut xi_dag = vec![zero; 2];
                    let mut xi0 = vec![zero; 2];
                    xi_dag[k] = z;
                    xi0[k] = Complex64::new(1.0, 0.0);
                    transformation_function_normal(s, &xi_dag, &xi0, t).unwrap()
                };
                for (n, c) in taylor_coefficients(f, 7, 64).iter().enumerate() {
                    let want = Complex64::new(0.0, -(half_trace + omega * n as f64) * t).exp() / factorial(n as u32);
                    w.record("series term", (c - want).norm(), 1e-12);
                }
            }
        }
    }
    for s in ensemble(SEED ^ 0x7, 40, 8).iter().map(|s| &s.basis) {
        let dim = s.dim();
        let y_dag: Vec<Complex64> = (0..dim).map(|_| rng.complex(0.6)).collect();
        let y0: Vec<Complex64> = (0..dim).map(|_| rng.complex(0.6)).collect();
        let t = rng.uniform(0.0, 20.0);
        let dressed = transformation_function_dressed(s, &y_dag, &y0, t).unwrap();
        let xi_dag = to_normal_coordinates(s, &y_dag).unwrap();
        let xi0 = to_normal_coordinates(s, &y0).unwrap();
        let normal = transformation_function_normal(s, &xi_dag, &xi0, t).unwrap();
        w.record("basis change", (dressed - normal).norm() / dressed.norm().max(1.0), 1e-12);
    }
}

fn semigroup_and_generator(w: &mut Worst) {
    let mut rng = ModelEnsemble::with_seed(SEED ^ 0x8);
    for s in ensemble(SEED ^ 0x8, 50, 16).iter().map(|s| &s.basis) {
        let (t1, t2) = (rng.uniform(-25.0, 25.0), rng.uniform(-25.0, 25.0));
        let composed = kernel(s, t1).entries().matmul(kernel(s, t2).entries());
        w.record("semigroup", kernel(s, t1 + t2).entries().max_modulus_diff(&composed), 1e-10);

        let h = 1e-5;
        let fd: Matrix<Complex64> =
            (kernel(s, h).entries() - kernel(s, -h).entries()).map(|z| Complex64::i() * z / (2.0 * h));
        let omega = matrix_power(s, 0.5).to_complex();
        w.record("generator rel", fd.max_modulus_diff(&omega) / omega.max_modulus(), 1e-6);
    }
}

fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .flat_map(|first| {
            compositions(n - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn multinomial_expansion(w: &mut Worst) {
    let mut rng = ModelEnsemble::with_seed(SEED ^ 0x9);
    for modes in 1..=2 {
        for _ in 0..10 {
            let config: ModelConfig64 = rng.model(modes);
            let b = diagonalize(&build_interaction_matrix(&config)).unwrap();
            let tm = b.transform();
            let t = rng.uniform(0.0, 20.0);
            for r in 0..=modes {
                for s in 0..=modes {
                    let terms: Vec<Complex64> = b
                        .frequencies()
                        .iter()
                        .enumerate()
                        .map(|(k, &om)| Complex64::new(0.0, -om * t).exp() * (tm[(r, k)] * tm[(s, k)]))
                        .collect();
                    for n in 0..=3 {
                        let brute: Complex64 = compositions(n, terms.len())
                            .iter()
                            .map(|ls| {
                                let coeff = factorial(n) / ls.iter().map(|&l| factorial(l)).product::<f64>();
                                ls.iter().zip(&terms).fold(Complex64::new(coeff, 0.0), |acc, (&l, &a)| acc * a.powu(l))
                            })
                            .sum();
                        let phase = PhaseConvention::TotalVacuumPhase;
                        let direct = multiquanta_amplitude(&b, r, s, n, t, phase).unwrap() / phase.factor(&b, t);
                        w.record("|direct-brute|", (direct - brute).norm(), 1e-12);
                    }
                }
            }
        }
    }
}

fn rk4_order(w: &mut Worst) {
    let m = build_interaction_matrix(&ModelConfig64::from_pairs(1.0, &[(1.0, 0.0)]).unwrap());
    let t = 10.0;
    let error = |dt: f64| {
        let p = integrate_propagator(&m, t, dt).unwrap();
        let (c, s) = (t.cos(), t.sin());
        [(p.qq[(0, 0)], c), (p.qp[(0, 0)], s), (p.pq[(0, 0)], -s), (p.pp[(0, 0)], c)]
            .iter()
            .map(|(got, want)| (got - want).abs())
            .fold(0.0, f64::max)
    };
    let order = (error(0.05) / error(0.025)).log2();
    // centred on 4 with the allowed half-width 0.3
    w.record("|order-4|", (order - 4.0).abs(), 0.3);
}

fn cli_determinism(w: &mut Worst) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("model.toml");
    std::fs::write(
        &cfg,
        "[model]\nomega0 = 1.3\nmodes = [\n  { omega = 0.7, c = 0.2 },\n  { omega = 2.1, c = -0.4 },\n  { omega = 1.0, c = 0.05 },\n]\n",
    )
    .unwrap();
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_coupled-modes")).args(args).arg("--config").arg(&cfg).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let evolve = ["evolve", "--pair", "0,1", "--pair", "2,3", "--n", "2", "--t1", "30", "--steps", "300", "--seed", "5"];
    let validate = ["validate", "--seed", "5"];
    let mut differing = 0.0;
    for args in [&evolve[..], &validate[..], &[&validate[..], &["--format", "json"]].concat()[..]] {
        if run(args) != run(args) {
            differing += 1.0;
        }
    }
    w.record("differing outputs", differing, 0.0);
}

#[test]
fn acceptance() {
    let outcomes = [
        timed(1, "orthogonality & reconstruction", Some(10), orthogonality_and_reconstruction),
        timed(2, "unitarity sum rule", Some(30), unitarity_sum_rule),
        timed(3, "oracle equivalence", Some(60), oracle_equivalence),
        timed(4, "analytic N=1 golden test", Some(1), golden_two_mode),
        timed(5, "vacuum energy", None, vacuum_energy),
        timed(6, "transformation-function consistency", None, transformation_functions),
        timed(7, "semigroup and generator", None, semigroup_and_generator),
        timed(8, "multinomial expansion", None, multinomial_expansion),
        timed(9, "RK4 order", None, rk4_order),
        timed(10, "CLI determinism", None, cli_determinism),
    ];
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
