//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//! Run with `cargo test -p robust-overparam --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use robust_overparam::data::{sample_domain, SynthConfig};
use robust_overparam::harness::output::{csv_bytes, meta};
use robust_overparam::harness::{
    run_anticonc, run_coupling, run_fit, run_train, AntiConcConfig, AttackKind, CouplingConfig, CouplingRow,
    DataSource, FitConfig, FitOutcome, TrainConfig, TrainRun,
};
use robust_overparam::network::{init_network, perturb_columns};
use robust_overparam::poly::chebyshev::chebyshev_table;
use robust_overparam::poly::sign::{certify_sign, compressed_sign_uncertified};
use robust_overparam::poly::step::certify_step;
use robust_overparam::poly::{compressed_power, linspace, step_poly, SignTerms, StepSpec};
use robust_overparam::training::LossKind;

const GRID: usize = 10_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit_s: u64) -> (bool, String) {
    (elapsed.as_secs_f64() < limit_s as f64, format!("{:.1}s/{limit_s}s", elapsed.as_secs_f64()))
}

fn instance() -> DataSource {
    DataSource::Synth(SynthConfig::new(20, 10, 0.8, 7))
}

const SIGN_PAIRS: [(f64, f64); 3] = [(0.5, 0.2), (0.25, 0.1), (0.1, 0.05)];

fn step_matrix() -> Vec<StepSpec> {
    let mut out = Vec::new();
    for delta in [0.5, 0.8, 1.2] {
        for rho in [0.02, 0.05] {
            for eps1 in [0.1, 0.01] {
                out.push(StepSpec::new(rho, delta, eps1).expect("valid step spec"));
            }
        }
    }
    out
}

fn sign_approximation() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (eta, eps1) in SIGN_PAIRS {
        let p = compressed_sign_uncertified(eta, eps1).expect("sign polynomial");
        let err = certify_sign(&p, eta, eps1, GRID).iter().map(|c| c.max_error).fold(0.0, f64::max);
        let bound = SignTerms::degree_bound(eta, eps1);
        let ok = err <= eps1 && p.degree() <= bound;
        pass &= ok;
        parts.push(format!("({eta},{eps1}) err {err:.3e} deg {}/{bound}", p.degree()));
    }
    let (fast, t) = within(start.elapsed(), 10);
    outcome(pass && fast, format!("{}; {t}", parts.join(", ")))
}

fn chebyshev_compression() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (s, d) in [(10usize, 6.0f64), (20, 12.0), (40, 18.0)] {
        let p = compressed_power(s, d).expect("compressed power");
        let bound = 2.0 * (-d * d / (2.0 * s as f64)).exp();
        let worst = linspace(-1.0, 1.0, GRID).map(|z| (p.eval(z) - z.powi(s as i32)).abs()).fold(0.0, f64::max);
        pass &= worst <= bound;
        parts.push(format!("({s},{d}) {worst:.2e}<={bound:.2e}"));
    }
    let mut exact = 0.0_f64;
    for s in [6usize, 10, 20] {
        let p = compressed_power(s, s as f64).expect("compressed power");
        exact = linspace(-1.0, 1.0, GRID).map(|z| (p.eval(z) - z.powi(s as i32)).abs()).fold(exact, f64::max);
    }
    pass &= exact <= 1e-12;
    outcome(pass, format!("{}; p_ss {exact:.1e}", parts.join(", ")))
}

fn coefficient_bounds() -> Outcome {
    let table = chebyshev_table(30);
    let cheb_ok = table.iter().enumerate().all(|(k, coeffs)| {
        let limit = BigInt::from(1) << (2 * k);
        coeffs.iter().all(|c| c.magnitude() <= limit.magnitude())
    });
    let mut pairs: Vec<(f64, f64)> = SIGN_PAIRS.to_vec();
    pairs.extend(step_matrix().iter().map(|s| (s.eta_gap(), s.eps1())));
    let mut checked = 0;
    let mut sign_ok = true;
    for (eta, eps1) in pairs {
        let d_cap = SignTerms::new(eta, eps1).expect("sign terms").d_cap;
        if d_cap > 40.0 {
            continue;
        }
        let p = compressed_sign_uncertified(eta, eps1).expect("sign polynomial");
        sign_ok &= p.exact_monomial().coefficients_bounded_by_pow2(4.0 * d_cap);
        checked += 1;
    }
    outcome(
        cheb_ok && sign_ok && checked > 0,
        format!("T_0..T_30 exact {cheb_ok}; compressed sign {checked} polys with D<=40 {sign_ok}"),
    )
}

fn step_polynomial() -> Outcome {
    let mut failed = Vec::new();
    let specs = step_matrix();
    for spec in &specs {
        let q = step_poly(spec).expect("step polynomial");
        if certify_step(&q, spec, GRID).iter().any(|c| !c.pass) {
            failed.push(format!("(delta {}, rho {}, eps1 {})", spec.delta(), spec.rho(), spec.eps1()));
        }
    }
    outcome(failed.is_empty(), format!("{} cells, failing: {:?}", specs.len(), failed))
}

fn fit_config() -> FitConfig {
    FitConfig {
        data: instance(),
        rho: 0.05,
        delta: Some(0.8),
        eps: 0.3,
        m_list: vec![4096],
        perturbations: 200,
        ridge: None,
        seed: 7,
    }
}

fn robust_fit() -> (Outcome, Vec<u8>) {
    let start = Instant::now();
    let cfg = fit_config();
    let out: FitOutcome = run_fit(&cfg).expect("fit run");
    let (fast, t) = within(start.elapsed(), 60);
    let csv = csv_bytes(&meta("fit", cfg.seed, &cfg).unwrap(), &out.rows).unwrap();
    let row = &out.rows[0];
    (
        outcome(
            out.cap_pass && fast,
            format!(
                "cap error {:.3e} <= {}; pseudo fit m=4096 error {:.3e}; {t}",
                out.cap_max_error, out.tolerance, row.max_sample_error
            ),
        ),
        csv,
    )
}

fn coupling_config() -> CouplingConfig {
    CouplingConfig {
        m_list: vec![1 << 10, 1 << 12, 1 << 14, 1 << 16],
        r_list: vec![2.0],
        d: 10,
        samples: 20_000,
        repeats: 3,
        seed: 1,
        grad_batch: 64,
    }
}

fn non_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

fn coupling() -> (Outcome, Outcome, Vec<u8>) {
    let start = Instant::now();
    let cfg = coupling_config();
    let rows: Vec<CouplingRow> = run_coupling(&cfg).expect("coupling run");
    let (fast, t) = within(start.elapsed(), 600);
    let gaps: Vec<f64> = rows.iter().map(|r| r.gap_median).collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r.grad_ratio_median).collect();
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ");
    let csv = csv_bytes(&meta("coupling", cfg.seed, &cfg).unwrap(), &rows).unwrap();
    (
        outcome(non_increasing(&gaps) && fast, format!("gap medians {}; {t}", fmt(&gaps))),
        outcome(non_increasing(&ratios), format!("gradient ratios {}", fmt(&ratios))),
        csv,
    )
}

fn train_config() -> TrainConfig {
    let mut cfg = TrainConfig::new(instance(), 0.05, 8192, 0.3, 2.0, 7);
    cfg.attack = AttackKind::Worst;
    cfg.attack_steps = 20;
    cfg.attack_restarts = 3;
    cfg.c_t = 1.0;
    cfg.c_eta = 1.0;
    cfg.regret = true;
    cfg.perturbations = 200;
    cfg
}

fn train() -> (TrainRun, Duration, Vec<u8>) {
    let start = Instant::now();
    let cfg = train_config();
    let run = run_train(&cfg).expect("training run");
    let elapsed = start.elapsed();
    let csv = csv_bytes(&meta("train", cfg.seed, &cfg).unwrap(), &run.trace).unwrap();
    (run, elapsed, csv)
}

/// Short runs covering the other adversaries and losses; the main run is checked too.
fn invariants(main: &TrainRun) -> Outcome {
    let mut runs = 1;
    let mut violations = main.summary.invariant_violations.len();
    for (attack, loss, m) in [
        (AttackKind::Identity, LossKind::Absolute, 512),
        (AttackKind::Random, LossKind::huber(0.3).unwrap(), 1024),
        (AttackKind::Worst, LossKind::huber(0.3).unwrap(), 2048),
    ] {
        let mut cfg = TrainConfig::new(instance(), 0.05, m, 0.3, 1.0, 7);
        cfg.attack = attack;
        cfg.loss = loss;
        let run = run_train(&cfg).expect("training run");
        violations += run.summary.invariant_violations.len();
        runs += 1;
    }
    outcome(violations == 0, format!("{runs} runs, {violations} violations"))
}

fn end_to_end(run: &TrainRun, elapsed: Duration) -> Outcome {
    let s = &run.summary;
    let regret = s.regret.as_ref().expect("regret check requested");
    let relative = s.best_robust_loss <= 0.5 * s.initial_robust_loss;
    let (fast, t) = within(elapsed, 900);
    outcome(
        relative && regret.pass && fast,
        format!(
            "T {} best {:.4} (t={}) / initial {:.4} = {:.3} (need <= 0.5); regret avg {:.4} <= {:.4} + {} {}; {t}",
            s.hp.t,
            s.best_robust_loss,
            s.best_t,
            s.initial_robust_loss,
            s.best_to_initial,
            regret.average_robust_loss,
            regret.fitted_robust_loss,
            regret.eps,
            regret.pass
        ),
    )
}

fn anti_concentration() -> Outcome {
    let rows = run_anticonc(&AntiConcConfig {
        d: 10,
        t_grid: vec![0.01, 0.05, 0.1, 0.5],
        trials: 100_000,
        seed: 7,
    })
    .expect("anti-concentration run");
    let detail = rows
        .iter()
        .map(|r| format!("t={} {:.1}se", r.t, (r.estimate - r.exact).abs() / r.std_error))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(rows.iter().all(|r| r.pass), detail)
}

fn gradient_correctness() -> Outcome {
    let losses = [LossKind::Absolute, LossKind::huber(0.5).unwrap()];
    let mut worst = 0.0_f64;
    let mut configs = 0;
    let mut pass = true;
    for (m, d, seed) in [(32, 4, 1), (256, 10, 2), (1024, 6, 3)] {
        let state = perturb_columns(&init_network(m, d, seed).unwrap(), 3.0, seed).unwrap();
        let pts = sample_domain(d, 8, seed, 1);
        let labels = alternating(pts.len());
        for loss in losses {
            for pseudo in [false, true] {
                let r = fd_weight_gradient(&state, &pts, &labels, loss, pseudo, 20, seed);
                pass &= r.pass(20);
                worst = worst.max(r.worst_rel);
                configs += 1;
            }
        }
    }
    for (m, d, seed) in [(16, 3, 4), (64, 8, 5)] {
        let state = perturb_columns(&init_network(m, d, seed).unwrap(), 2.0, seed).unwrap();
        let pts = sample_domain(d, 60, seed, 1);
        let labels = alternating(pts.len());
        for loss in losses {
            let r = fd_input_gradient(&state, &pts, &labels, loss, 20, seed);
            pass &= r.pass(20);
            worst = worst.max(r.worst_rel);
            configs += 1;
        }
    }
    outcome(pass, format!("{configs} configurations, worst relative error {worst:.2e}"))
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = vec![
        (1, "sign approximation", sign_approximation()),
        (2, "chebyshev compression", chebyshev_compression()),
        (3, "coefficient bounds", coefficient_bounds()),
        (4, "step polynomial", step_polynomial()),
    ];

    let (fit, fit_csv) = robust_fit();
    results.push((5, "robust fit", fit));
    let (gap, grad, coupling_csv) = coupling();
    results.push((6, "coupling", gap));
    results.push((7, "gradient coupling", grad));
    let (run, elapsed, train_csv) = train();
    results.push((8, "drift and gradient bounds", invariants(&run)));
    results.push((9, "end-to-end training", end_to_end(&run, elapsed)));
    results.push((10, "anti-concentration", anti_concentration()));
    results.push((11, "gradient correctness", gradient_correctness()));

    let same = [
        ("fit", fit_csv == robust_fit().1),
        ("coupling", coupling_csv == coupling().2),
        ("train", train_csv == train().2),
    ];
    let differing: Vec<&str> = same.iter().filter(|(_, s)| !s).map(|(n, _)| *n).collect();
    results.push((
        12,
        "determinism",
        outcome(differing.is_empty(), format!("reruns of fit, coupling, train; differing: {differing:?}")),
    ));

    let mut failed = 0;
    for (n, name, o) in &results {
        if !o.pass {
            failed += 1;
        }
        println!("{} [{n}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
