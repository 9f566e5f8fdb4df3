//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.
//!
//! Run with `cargo test -p circreg --test acceptance --release` for speed.

use std::f64::consts::PI;
use std::time::Instant;

use circreg::circular::{self, CircularDataset, LevelTables};
use circreg::experiments::{
    self, calibrate_c0, reliability_ratio, run_monte_carlo, simulate_dataset, two_decimals, MonteCarloConfig, SimulatedData,
    SimulationModel,
};
use circreg::linear::{self, LinearDataset};
use circreg::sampling::SeededRng;
use circreg::{atan2_dir, circ_dist, Angle, CircularNoise, Component, EstimatorConfig, LinearNoise, NoiseSpec, PlanePoint};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};

const SEED: u64 = 1;
const REPS: usize = 50;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn report(o: &Outcome, secs: f64) {
    println!("{} [{}] {} ({secs:.1}s)", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail);
}

// Simpson's rule on [a, b] with `m` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

// E[cos ζ] for ζ ~ vM(0, κ), by quadrature.
fn vm_mean_cos(kappa: f64) -> f64 {
    let num = simpson(|t| t.cos() * (kappa * (t.cos() - 1.0)).exp(), -PI, PI, 4000);
    let den = simpson(|t| (kappa * (t.cos() - 1.0)).exp(), -PI, PI, 4000);
    num / den
}

fn within_band(me: f64, paper: f64) -> bool {
    me >= paper / 2.0 && me <= 2.0 * paper
}

fn table(name: &'static str, cells: [NoiseSpec; 2], papers: [[f64; 2]; 2], kind_lc: bool) -> Outcome {
    let x = if kind_lc { 0.2 } else { 1.5 };
    let c0 = if kind_lc { 0.4 } else { 0.08 };
    let mut me = [[0.0; 2]; 2];
    let mut lines = Vec::new();
    let mut pass = true;
    for (i, noise) in cells.iter().enumerate() {
        let model = if kind_lc { SimulationModel::lc(*noise) } else { SimulationModel::cc(*noise) }.unwrap();
        for (j, n) in [200usize, 500].into_iter().enumerate() {
            let cfg = MonteCarloConfig {
                n,
                x,
                reps: REPS,
                seed: SEED,
                estimator: EstimatorConfig::adaptive(c0).unwrap(),
            };
            let r = run_monte_carlo(&model, &cfg).unwrap();
            me[i][j] = r.mean_error;
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            let ok = within_band(me[i][j], papers[i][j]);
            pass &= ok;
            lines.push(format!(
                "{} n={}: {:.4} vs {:.4}{}",
                cells[i],
                [200, 500][j],
                me[i][j],
                papers[i][j],
                if ok { "" } else { " out of band" }
            ));
        }
    }
    let n_order = me[0][1] < me[0][0] && me[1][1] < me[1][0];
    let s_order = me[1][0] > me[0][0] && me[1][1] > me[0][1];
    if !n_order {
        lines.push("ME does not decrease with n".into());
    }
    if !s_order {
        lines.push("ME does not increase with noise level".into());
    }
    Outcome {
        name,
        pass: pass && n_order && s_order,
        detail: lines.join("; "),
    }
}

fn criterion_1() -> Outcome {
    table(
        "1 LC table",
        [NoiseSpec::Laplace(0.075), NoiseSpec::Laplace(0.1)],
        [[0.0064, 0.0029], [0.0137, 0.0048]],
        true,
    )
}

fn criterion_2() -> Outcome {
    // λ = 1.74 is the noisier design.
    table(
        "2 CC table",
        [NoiseSpec::WrappedLaplace(2.54), NoiseSpec::WrappedLaplace(1.74)],
        [[0.0124, 0.0091], [0.0139, 0.0107]],
        false,
    )
}

fn criterion_3() -> Outcome {
    let cases = [
        (SimulationModel::lc(NoiseSpec::Laplace(0.075)).unwrap(), 0.88),
        (SimulationModel::lc(NoiseSpec::Laplace(0.1)).unwrap(), 0.80),
        (SimulationModel::cc(NoiseSpec::WrappedLaplace(2.54)).unwrap(), 0.88),
        (SimulationModel::cc(NoiseSpec::WrappedLaplace(1.74)).unwrap(), 0.80),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, want) in cases {
        let got = two_decimals(reliability_ratio(&m));
        pass &= (got - want).abs() < 1e-12;
        parts.push(format!("{}: {got:.2}", m.noise));
    }
    Outcome {
        name: "3 reliability",
        pass,
        detail: parts.join(", "),
    }
}

fn criterion_4() -> Outcome {
    let lc = SimulationModel::lc(NoiseSpec::Laplace(0.075)).unwrap();
    let cc = SimulationModel::cc(NoiseSpec::WrappedLaplace(2.54)).unwrap();
    let a = calibrate_c0(&lc, 200, 0.2, lc.calibration_grid(), REPS, SEED).unwrap();
    let b = calibrate_c0(&cc, 200, 1.5, cc.calibration_grid(), REPS, SEED).unwrap();
    let describe = |c: &experiments::CalibrationCurve| match c.plateau {
        Some(p) => format!("[{}, {}]", c.grid[p.start], c.grid[p.end]),
        None => "none".into(),
    };
    let (ok_a, ok_b) = (a.plateau_contains(0.4), b.plateau_contains(0.08));
    Outcome {
        name: "4 calibration plateaus",
        pass: ok_a && ok_b,
        detail: format!(
            "LC plateau {} {} 0.4 (R(0.4) = {:.4}, min R = {:.4}); CC plateau {} {} 0.08",
            describe(&a),
            if ok_a { "contains" } else { "excludes" },
            a.risks[a.grid.iter().position(|&g| g == 0.4).unwrap()],
            a.risks.iter().copied().fold(f64::INFINITY, f64::min),
            describe(&b),
            if ok_b { "contains" } else { "excludes" },
        ),
    }
}

fn circular_oracle(theta: &[f64], z: &[f64], x: f64, level: i64, lambda: Option<f64>) -> f64 {
    let n = theta.len() as f64;
    let mut s = 0.0;
    for (t, zk) in theta.iter().zip(z) {
        for l in -level..=level {
            let f = lambda.map_or(1.0, |lam| lam * lam / (lam * lam + (l * l) as f64));
            s += t.sin() * ((l as f64) * (zk - x)).cos() / f;
        }
    }
    s / (2.0 * PI * n)
}

fn linear_oracle(theta: &[f64], z: &[f64], x: f64, h: f64, inv_cf: impl Fn(f64) -> f64) -> f64 {
    let n = theta.len() as f64;
    let t_max = 1.0 / h;
    let mut s = 0.0;
    for (t, zk) in theta.iter().zip(z) {
        let u = zk - x;
        let w = simpson(|s| (s * u).cos() * inv_cf(s), -t_max, t_max, 20_000) / (2.0 * PI);
        s += t.sin() * w;
    }
    s / n
}

fn criterion_5() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_c, mut worst_l) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let n = rng.random_range(1..=10);
        let theta: Vec<f64> = (0..n).map(|_| rng.random_range(-PI..PI)).collect();
        if i % 2 == 0 {
            let z: Vec<f64> = (0..n).map(|_| rng.random_range(-PI..PI)).collect();
            let x = rng.random_range(-PI..PI);
            let level = rng.random_range(0..=5usize);
            let lambda = if rng.random_bool(0.8) { Some(rng.random_range(0.5..5.0)) } else { None };
            let noise = lambda.map_or(CircularNoise::none(), |l| CircularNoise::wrapped_laplace(l).unwrap());
            let data = CircularDataset::from_radians(&theta, &z).unwrap();
            let got = circular::projection_estimate(&data, &data.weights(), Component::Sine, level, &noise, Angle::new(x).unwrap()).unwrap();
            let want = circular_oracle(&theta, &z, x, level as i64, lambda);
            worst_c = worst_c.max((got - want).abs() / want.abs().max(1.0));
        } else {
            let z: Vec<f64> = (0..n).map(|_| rng.random_range(-0.5..1.5)).collect();
            let x = rng.random_range(0.0..1.0);
            let h = [1.0, 0.5, 1.0 / 3.0][rng.random_range(0..3)];
            let sigma = rng.random_range(0.02..0.3);
            let (noise, inv): (LinearNoise, Box<dyn Fn(f64) -> f64>) = match rng.random_range(0..3) {
                0 => (LinearNoise::none(), Box::new(|_| 1.0)),
                1 => (LinearNoise::laplace(sigma).unwrap(), Box::new(move |t| 1.0 + sigma * sigma * t * t)),
                _ => (LinearNoise::gaussian(sigma).unwrap(), Box::new(move |t| (0.5 * sigma * sigma * t * t).exp())),
            };
            let data = LinearDataset::from_radians(&theta, &z).unwrap();
            let got = linear::projection_estimate_linear(&data, &data.weights(), Component::Sine, h, &noise, x).unwrap();
            let want = linear_oracle(&theta, &z, x, h, inv);
            worst_l = worst_l.max((got - want).abs() / want.abs().max(1.0));
        }
    }
    Outcome {
        name: "5 oracle equivalence",
        pass: worst_c <= 1e-10 && worst_l <= 1e-8,
        detail: format!("max circular deviation {worst_c:.2e} (tol 1e-10), max linear deviation {worst_l:.2e} (tol 1e-8)"),
    }
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

fn criterion_6() -> Outcome {
    const N: usize = 20;
    const R: usize = 2000;
    // Circular: p_{1,L}(x) = (1/2π) ∫ E[sin Θ | X = s] f_X(s) D_L(s - x) ds.
    let cc = SimulationModel::cc(NoiseSpec::WrappedLaplace(2.54)).unwrap();
    let (x_c, level) = (1.5, 3usize);
    let a5 = vm_mean_cos(5.0);
    let kx = 0.01;
    let norm = simpson(|s| (kx * s.cos()).exp(), -PI, PI, 4000);
    let m_cc = |s: f64| 0.5 + (s + 3.0 * s.sin()).cos();
    let dirichlet = |u: f64| (-(level as i64)..=level as i64).map(|l| ((l as f64) * u).cos()).sum::<f64>();
    let truth_c = simpson(|s| a5 * m_cc(s).sin() * (kx * s.cos()).exp() / norm * dirichlet(s - x_c), -PI, PI, 20_000) / (2.0 * PI);
    let noise_c = cc.noise.to_circular().unwrap();
    let est_c: Vec<f64> = (0..R)
        .map(|r| {
            let mut rng = SeededRng::new(77, r as u64 + 1);
            let SimulatedData::Circular(d) = simulate_dataset(&cc, N, &mut rng).unwrap() else { unreachable!() };
            circular::projection_estimate(&d, &d.weights(), Component::Sine, level, &noise_c, Angle::new(x_c).unwrap()).unwrap()
        })
        .collect();
    let (mc, sc) = mean_se(&est_c);

    // Linear: (K_h ∗ p₁)(x) with K_h(u) = sin(u/h)/(πu) and p₁ = E[cos ζ] sin m(s) on [0, 1].
    let lc = SimulationModel::lc(NoiseSpec::Laplace(0.1)).unwrap();
    let (x_l, h) = (0.2, 1.0 / 3.0);
    let a10 = vm_mean_cos(10.0);
    let m_lc = |s: f64| (20.0 * s - 11.0).atan2((10.0 * s - 5.0).powi(2) + 2.0);
    let kernel = |u: f64| if u == 0.0 { 1.0 / (PI * h) } else { (u / h).sin() / (PI * u) };
    let truth_l = simpson(|s| kernel(x_l - s) * a10 * m_lc(s).sin(), 0.0, 1.0, 20_000);
    let noise_l = lc.noise.to_linear().unwrap();
    let est_l: Vec<f64> = (0..R)
        .map(|r| {
            let mut rng = SeededRng::new(77, r as u64 + 1);
            let SimulatedData::Linear(d) = simulate_dataset(&lc, N, &mut rng).unwrap() else { unreachable!() };
            linear::projection_estimate_linear(&d, &d.weights(), Component::Sine, h, &noise_l, x_l).unwrap()
        })
        .collect();
    let (ml, sl) = mean_se(&est_l);
    let (zc, zl) = ((mc - truth_c) / sc, (ml - truth_l) / sl);
    Outcome {
        name: "6 unbiasedness",
        pass: zc.abs() <= 3.0 && zl.abs() <= 3.0,
        detail: format!(
            "circular L={level}: mean {mc:.5} vs {truth_c:.5} ({zc:+.2} SE); linear h=1/3: mean {ml:.5} vs {truth_l:.5} ({zl:+.2} SE)"
        ),
    }
}

fn run_prop<S: Strategy>(name: &str, cases: u32, strat: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Option<String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strat, test).err().map(|e| format!("{name}: {e}"))
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    failures.extend(run_prop("atan2 scale", 512, (-1e3..1e3f64, -1e3..1e3f64, 1e-3..1e3f64), |(a, b, c)| {
        prop_assume!(a != 0.0 || b != 0.0);
        let p = atan2_dir(PlanePoint::new(a, b)).unwrap();
        let q = atan2_dir(PlanePoint::new(c * a, c * b)).unwrap();
        prop_assert!(circ_dist(p, q) < 1e-12);
        Ok(())
    }));
    failures.extend(run_prop("d_c bounds and symmetry", 512, (-10.0..10.0f64, -10.0..10.0f64), |(a, b)| {
        let (a, b) = (circreg::wrap(a).unwrap(), circreg::wrap(b).unwrap());
        let d = circ_dist(a, b);
        prop_assert!((0.0..=2.0).contains(&d));
        prop_assert_eq!(d, circ_dist(b, a));
        prop_assert!(circ_dist(a, a) == 0.0);
        Ok(())
    }));
    failures.extend(run_prop("selected level in grid", 48, (20usize..150, 0.5..4.0f64, any::<u64>(), 0.001..2.0f64), |(n, lambda, seed, c0)| {
        let model = SimulationModel::cc(NoiseSpec::WrappedLaplace(lambda)).unwrap();
        let SimulatedData::Circular(d) = simulate_dataset(&model, n, &mut SeededRng::new(seed, 1)).unwrap() else { unreachable!() };
        let noise = model.noise.to_circular().unwrap();
        let grid = LevelTables::new(&noise, n).unwrap().grid().unwrap();
        match circular::estimate_m_circular(&d, &noise, Angle::new(1.5).unwrap(), &EstimatorConfig::adaptive(c0).unwrap()) {
            Ok(e) => {
                for l in e.diagnostics.selected_levels() {
                    prop_assert!(grid.contains(l), "L = {} not in grid", l);
                }
            }
            Err(circreg::Error::UndefinedDirection) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
        Ok(())
    }));
    failures.extend(run_prop("selected bandwidth in grid", 32, (20usize..120, 0.02..0.2f64, any::<u64>(), 0.001..4.0f64), |(n, sigma, seed, c0)| {
        let model = SimulationModel::lc(NoiseSpec::Laplace(sigma)).unwrap();
        let SimulatedData::Linear(d) = simulate_dataset(&model, n, &mut SeededRng::new(seed, 1)).unwrap() else { unreachable!() };
        let noise = model.noise.to_linear().unwrap();
        let grid = linear::bandwidth_grid(n, &noise).unwrap();
        match linear::estimate_m_linear(&d, &noise, 0.2, &EstimatorConfig::adaptive(c0).unwrap()) {
            Ok(e) => {
                for h in e.diagnostics.selected_bandwidths() {
                    prop_assert!(grid.contains(h), "h = {} not in grid", h);
                }
            }
            Err(circreg::Error::UndefinedDirection) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
        Ok(())
    }));
    failures.extend(run_prop("determinism", 6, (any::<u64>(), prop::bool::ANY), |(seed, lc)| {
        let model = if lc {
            SimulationModel::lc(NoiseSpec::Laplace(0.1)).unwrap()
        } else {
            SimulationModel::cc(NoiseSpec::WrappedLaplace(2.54)).unwrap()
        };
        let cfg = MonteCarloConfig {
            n: 60,
            x: model.default_x(),
            reps: 8,
            seed,
            estimator: EstimatorConfig::adaptive(model.default_c0()).unwrap(),
        };
        let a = run_monte_carlo(&model, &cfg).unwrap();
        let b = run_monte_carlo(&model, &cfg).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        Ok(())
    }));
    failures.extend(run_prop("closed-form norms vs quadrature", 128, (1usize..60, 0.01..0.5f64), |(k, sigma)| {
        let h = 1.0 / k as f64;
        let norms = linear::kernel_norms(h, &LinearNoise::laplace(sigma).unwrap()).unwrap();
        let t = 1.0 / h;
        let l1 = simpson(|s| 1.0 + sigma * sigma * s * s, -t, t, 200);
        let l2 = simpson(|s| (1.0 + sigma * sigma * s * s).powi(2), -t, t, 200);
        prop_assert!((norms.l1 - l1).abs() <= 1e-8 * l1);
        prop_assert!((norms.l2_sq - l2).abs() <= 1e-8 * l2);
        Ok(())
    }));
    Outcome {
        name: "7 invariants",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "atan2 scale, d_c, grid admissibility, determinism, norms".into()
        } else {
            failures.join("; ")
        },
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    // `cargo test -- --list` and friends.
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let criteria: [fn() -> Outcome; 7] = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let o = c();
        if !o.pass {
            failed += 1;
        }
        report(&o, start.elapsed().as_secs_f64());
    }
    println!("NOTE [8 convergence rates] asymptotic statements, not checked numerically");
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
