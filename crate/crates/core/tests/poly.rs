use robust_overparam::poly::complexity::DEFAULT_BASE_CONSTANT;
use robust_overparam::poly::sign::{certify_sign, compressed_sign_uncertified};
use robust_overparam::poly::step::certify_step;
use robust_overparam::poly::{
    complexity_measures, compressed_power, compressed_sign_poly, frostig_sign_poly, linspace, step_poly,
    SignTerms, StepSpec,
};

fn step_matrix() -> Vec<StepSpec> {
    let mut out = Vec::new();
    for delta in [0.5, 0.8, 1.2] {
        for rho in [0.02, 0.05] {
            for eps1 in [0.1, 0.01] {
                out.push(StepSpec::new(rho, delta, eps1).unwrap());
            }
        }
    }
    out
}

#[test]
fn step_matrix_certifies_on_dense_grids() {
    for spec in step_matrix() {
        let q = step_poly(&spec).unwrap();
        for c in certify_step(&q, &spec, 10_000) {
            assert!(c.pass, "{spec:?}: {c:?}");
        }
    }
}

/// The compressed Chebyshev degree (in `1 - z^2`) stays within `D`, itself within
/// `(3/eta) ln(2/(eta eps1))`; the degree in `z` is `2 * that + 1`.
#[test]
fn sign_degree_within_bound_across_step_matrix() {
    for spec in step_matrix() {
        let p = compressed_sign_uncertified(spec.eta_gap(), spec.eps1()).unwrap();
        let terms = SignTerms::new(spec.eta_gap(), spec.eps1()).unwrap();
        let bound = SignTerms::degree_bound(spec.eta_gap(), spec.eps1());
        let cdeg = p.compression_degree().unwrap();
        assert!(cdeg as f64 <= terms.d_cap && terms.d_cap <= bound as f64, "{spec:?}");
        assert_eq!(p.degree(), 2 * cdeg + 1);
        eprintln!(
            "eta {:.4} eps1 {}: z-degree {} bound {} ({})",
            spec.eta_gap(),
            spec.eps1(),
            p.degree(),
            bound,
            if p.degree() <= bound { "within" } else { "exceeds" }
        );
    }
}

#[test]
fn sign_approximants_are_odd() {
    for (eta, eps1) in [(0.5, 0.2), (0.25, 0.1)] {
        for p in [frostig_sign_poly(eta, eps1).unwrap(), compressed_sign_uncertified(eta, eps1).unwrap()] {
            for z in linspace(-1.0, 1.0, 1001) {
                assert!((p.eval(-z) + p.eval(z)).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn frostig_series_examples() {
    let p = frostig_sign_poly(0.25, 0.1).unwrap();
    let worst = linspace(0.25, 1.0, 10_000).map(|z| (p.eval(z) - 1.0).abs()).fold(0.0, f64::max);
    assert!(worst <= 0.05, "{worst}");
    assert!((p.eval(0.5) - 1.0).abs() <= 0.05);
}

#[test]
fn compressed_power_examples() {
    let p = compressed_power(6, 6.0).unwrap();
    let worst = linspace(-1.0, 1.0, 10_000).map(|z| (p.eval(z) - z.powi(6)).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-12);
    let p = compressed_power(20, 12.0).unwrap();
    let bound = 2.0 * (-144.0_f64 / 40.0).exp();
    let worst = linspace(-1.0, 1.0, 10_000).map(|z| (p.eval(z) - z.powi(20)).abs()).fold(0.0, f64::max);
    assert!(worst <= bound, "{worst} > {bound}");
}

#[test]
fn certified_sign_example() {
    let p = compressed_sign_poly(0.5, 0.2).unwrap();
    for c in certify_sign(&p, 0.5, 0.2, 10_000) {
        assert!(c.max_error <= 0.2);
    }
}

#[test]
fn step_complexity_regression() {
    let spec = StepSpec::new(0.05, 0.8, 0.01).unwrap();
    let q = step_poly(&spec).unwrap();
    let r = complexity_measures(&q, 0.01, DEFAULT_BASE_CONSTANT).unwrap();
    assert!((r.log2_c_eps - 306.2627146).abs() < 1e-6, "{}", r.log2_c_eps);
    assert!((r.log2_c_plain - 162.8271254).abs() < 1e-6, "{}", r.log2_c_plain);
}
