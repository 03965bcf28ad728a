//! End-to-end certification on a combination with a zero placed by
//! construction: F = ζ(s) − c·L_χ4(s) with c = ζ(3/2)/L_χ4(3/2) vanishes at
//! s = 3/2, and the circle machinery must certify it from the truncated
//! twisted products alone.

use num_complex::Complex64;
use periodic_dirichlet::offzero::*;
use periodic_dirichlet::*;

fn opts() -> EvalOptions {
    EvalOptions::default()
}

fn synthetic_set() -> [(Character, DirichletPolynomial); 2] {
    let o = opts();
    let chi4 = primitive_inducer(&enumerate_characters(4)[1]).inducer;
    let triv = enumerate_characters(1).pop().unwrap();
    let s0 = Complex64::new(1.5, 0.0);
    let c = l_function(&triv, s0, &o).unwrap() / l_function(&chi4, s0, &o).unwrap();
    [
        (triv, DirichletPolynomial::one()),
        (chi4, DirichletPolynomial::from_pairs(&[(1, -c)])),
    ]
}

#[test]
fn certify_constructed_zero() {
    let o = opts();
    let set = synthetic_set();
    let (q, y, comps) = g_components(&set).unwrap();
    assert_eq!((q, y), (4, 2));
    let mut cfg = SolverConfig::new(q, 1.5);
    cfg.y = y;
    cfg.p_max = 200_000;
    let sums = class_sums(&cfg).unwrap();
    let theta = ThetaAssignment::zero(q, y, cfg.p_max);

    let circle = choose_circle(&comps, &theta, 1.4, 1.6, &sums).unwrap();
    assert!(circle.gamma > 0.0);
    assert!(circle.center - circle.radius > 1.0);

    // with zero phases the aligning shift is t ≈ 0
    let t = find_t(&theta, 3, (-0.01, 0.01), 1e-4).unwrap();
    assert!(t.abs() < 1e-4);

    let cert = rouche_certify(&comps, t, &circle, &theta, &sums, &o).unwrap();
    assert!(cert.valid);
    assert!(cert.zeros_inside >= 1);
    assert!(cert.max_diff + cert.slack < cert.gamma);

    // independent confirmation: the combination really vanishes at 3/2
    let f15 = f_sum(&comps, Complex64::new(1.5, 0.0), &o).unwrap();
    assert!(f15.norm() < 1e-9, "|F(3/2)| = {}", f15.norm());
}

#[test]
fn gamma_estimate_stable_under_coarser_sampling() {
    // halving the sampling density moves the gamma estimate less than the
    // reported slack scale
    let set = synthetic_set();
    let (q, y, comps) = g_components(&set).unwrap();
    let mut cfg = SolverConfig::new(q, 1.5);
    cfg.y = y;
    cfg.p_max = 50_000;
    let sums = class_sums(&cfg).unwrap();
    let theta = ThetaAssignment::zero(q, y, cfg.p_max);
    let circle = choose_circle(&comps, &theta, 1.4, 1.6, &sums).unwrap();
    // direct min over a coarse sweep of the same circle
    let mut coarse_min = f64::INFINITY;
    for k in 0..256 {
        let ang = std::f64::consts::TAU * k as f64 / 256.0;
        let s = Complex64::new(
            circle.center + circle.radius * ang.cos(),
            circle.radius * ang.sin(),
        );
        let (v, _) = g_sum(&comps, s, &theta, &sums).unwrap();
        coarse_min = coarse_min.min(v.norm());
    }
    assert!(
        (coarse_min - circle.gamma).abs() < 0.2 * coarse_min,
        "gamma {} vs coarse minimum {coarse_min}",
        circle.gamma
    );
}

#[test]
fn perturbed_sum_keeps_certificate() {
    // adding a constant below γ/2 to F leaves the count inside unchanged:
    // Rouché with an explicit bound
    let o = opts();
    let set = synthetic_set();
    let (q, y, comps) = g_components(&set).unwrap();
    let mut cfg = SolverConfig::new(q, 1.5);
    cfg.y = y;
    cfg.p_max = 200_000;
    let sums = class_sums(&cfg).unwrap();
    let theta = ThetaAssignment::zero(q, y, cfg.p_max);
    let circle = choose_circle(&comps, &theta, 1.4, 1.6, &sums).unwrap();
    let shift = Complex64::new(circle.gamma / 2.0, 0.0);
    let f = |s: Complex64| {
        f_sum(&comps, s, &o).map(|v| v + shift).map_err(|e| match e {
            offzero::SolveError::Eval(ev) => ev,
            other => EvalError::Domain(other.to_string()),
        })
    };
    let winding = periodic_dirichlet::counting::winding_circle(
        &f,
        Complex64::new(circle.center, 0.0),
        circle.radius,
    )
    .unwrap();
    assert_eq!(winding, 1, "perturbation below γ must not move the zero out");
}

#[test]
fn demo_rejects_single_character() {
    let triv = enumerate_characters(1).pop().unwrap();
    let set = [(triv, DirichletPolynomial::one())];
    assert!(matches!(
        certified_zero_search(&set, 1.02, 1.2, 100.0, None, &opts()),
        Err(SolveError::TooFewCharacters { n: 1 })
    ));
}

#[test]
fn demo_budget_monotonicity() {
    // doubling the budget never loses certificates
    let o = opts();
    let chi4 = primitive_inducer(&enumerate_characters(4)[1]).inducer;
    let triv = enumerate_characters(1).pop().unwrap();
    let set = [
        (chi4, DirichletPolynomial::one()),
        (triv, DirichletPolynomial::one()),
    ];
    let mut cfg = SolverConfig::new(4, 1.11);
    cfg.p_max = 100_000;
    let small = certified_zero_search(&set, 1.02, 1.2, 100.0, Some(cfg.clone()), &o).unwrap();
    let large = certified_zero_search(&set, 1.02, 1.2, 200.0, Some(cfg), &o).unwrap();
    assert!(large.certificates.len() >= small.certificates.len());
    // both runs must be explicit about their outcome
    assert!(small.certified() || small.failure.is_some());
    assert!(large.certified() || large.failure.is_some());
}
