//! From phase assignments to certified zeros.
//!
//! Given components F_j(s) = P_j(s) L_ψj(s) and a phase assignment θ, the
//! twisted functions
//!
//!   G_j(s) = P_j(s; twisted) · Π_{p≤y} (1 − ψ_j(p) p^(−s−i t_p))^(−1)
//!            · Π_{y<p≤P} (1 − χ_j(p) p^(−s−i t_p))^(−1)
//!
//! are steered so that Σ_j G_j vanishes inside a circle in Re s > 1. A real
//! shift t with p^(it) ≈ p^(i t_p) for the few primes that matter keeps
//! Σ_j F_j(s+it) within γ = min_circle |Σ G_j| of Σ G_j, and Rouché's theorem
//! transfers the zero to F(·+it).

use num_complex::Complex64;
use serde::Serialize;

use super::solver::{
    class_sums, solve_product_system, ClassSums, SolveError, SolverConfig, ThetaAssignment,
};
use crate::arith::{lcm, prime_divisors, sieve_primes};
use crate::characters::{character_matrix, induce, Character};
use crate::counting::winding_circle;
use crate::eval::{l_function, log_tail_bound, real_pow, twisted_poly_eval, EvalOptions};
use crate::sequences::DirichletPolynomial;

const TAU: f64 = std::f64::consts::TAU;

/// One summand F_j = P_j·L_ψj prepared for the pipeline: the primitive
/// character, its induction to the common modulus, and the polynomial.
#[derive(Debug, Clone)]
pub struct GComponent {
    pub psi: Character,
    pub chi: Character,
    pub poly: DirichletPolynomial,
}

/// Assemble components over the lcm of the conductors. Returns the common
/// modulus q and the polynomial-prime bound y (every prime dividing q or a
/// support index must stay below the class-sum range).
pub fn g_components(
    set: &[(Character, DirichletPolynomial)],
) -> Result<(u64, u64, Vec<GComponent>), SolveError> {
    if set.len() < 2 {
        return Err(SolveError::TooFewCharacters { n: set.len() });
    }
    let q = set
        .iter()
        .fold(1u64, |acc, (psi, _)| lcm(acc, psi.modulus().max(1)));
    let mut y = 2u64;
    for p in prime_divisors(q) {
        y = y.max(p);
    }
    for (_, poly) in set {
        if poly.is_empty() {
            return Err(SolveError::Config(
                "component polynomials must be non-zero".into(),
            ));
        }
        for (k, _) in poly.terms() {
            for p in prime_divisors(k) {
                y = y.max(p);
            }
        }
    }
    let comps = set
        .iter()
        .map(|(psi, poly)| GComponent {
            chi: induce(psi, q),
            psi: psi.clone(),
            poly: poly.clone(),
        })
        .collect();
    Ok((q, y, comps))
}

/// The n-th roots of unity e^(2πi j/n), j = 1…n; they sum to zero, which is
/// what makes Σ_j G_j vanish at the circle center.
pub fn build_targets(n: usize) -> Result<Vec<Complex64>, SolveError> {
    if n < 2 {
        return Err(SolveError::TooFewCharacters { n });
    }
    Ok((1..=n)
        .map(|j| {
            let ang = TAU * j as f64 / n as f64;
            Complex64::new(ang.cos(), ang.sin())
        })
        .collect())
}

/// G_j(s) over the finite prime budget, with the absolute error bound from
/// the omitted primes beyond p_max. Requires Re s > 1.
pub fn g_eval(
    comp: &GComponent,
    s: Complex64,
    theta: &ThetaAssignment,
    sums: &ClassSums,
) -> Result<(Complex64, f64), SolveError> {
    if s.re <= 1.0 {
        return Err(SolveError::Config(format!(
            "G is only evaluated for Re s > 1, got {}",
            s.re
        )));
    }
    let twist = |p: u64| theta.t_p(p);
    // polynomial part, twisted
    let mut value = twisted_poly_eval(&comp.poly, s, &twist);
    // Euler factors of the primitive character for p ≤ y
    for p in sieve_primes(theta.y) {
        let x = comp.psi.eval(p) * real_pow(p as f64, -(s + Complex64::new(0.0, twist(p))));
        let factor = Complex64::new(1.0, 0.0) - x;
        if factor.norm() < 1e-14 {
            return Err(SolveError::FactorSingular { p });
        }
        value /= factor;
    }
    // twisted Euler product over the class primes
    for class in &sums.classes {
        let chi_a = comp.chi.eval(class.residue);
        if chi_a.norm() == 0.0 {
            continue;
        }
        for &p in &class.primes {
            let th = theta.theta(p);
            let x = chi_a * (p as f64).powf(-s.re)
                * Complex64::new(0.0, -(s.im * (p as f64).ln() - th)).exp();
            let factor = Complex64::new(1.0, 0.0) - x;
            if factor.norm() < 1e-14 {
                return Err(SolveError::FactorSingular { p });
            }
            value /= factor;
        }
    }
    let tail_log = log_tail_bound(s.re, sums.p_max);
    let bound = value.norm() * (tail_log.exp() - 1.0);
    Ok((value, bound))
}

/// Σ_j G_j(s) and the summed error bound.
pub fn g_sum(
    comps: &[GComponent],
    s: Complex64,
    theta: &ThetaAssignment,
    sums: &ClassSums,
) -> Result<(Complex64, f64), SolveError> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for comp in comps {
        let (v, b) = g_eval(comp, s, theta, sums)?;
        acc += v;
        bound += b;
    }
    Ok((acc, bound))
}

/// A circle C(σ0, r) on which Σ G_j is certifiably bounded away from zero.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Circle {
    pub center: f64,
    pub radius: f64,
    /// Certified min |Σ G_j| on the circle, net of sampling slack and
    /// truncation bounds.
    pub gamma: f64,
}

/// Sample Σ G_j on circles of decreasing radius until the minimum modulus,
/// minus Lipschitz sampling slack and truncation bounds, is positive.
pub fn choose_circle(
    comps: &[GComponent],
    theta: &ThetaAssignment,
    sigma1: f64,
    sigma2: f64,
    sums: &ClassSums,
) -> Result<Circle, SolveError> {
    let sigma0 = 0.5 * (sigma1 + sigma2);
    let half = 0.5 * (sigma2 - sigma1);
    const SAMPLES: usize = 512;
    for frac in [0.8, 0.6, 0.4, 0.2] {
        let r = frac * half;
        if sigma0 - r <= 1.0 {
            continue; // Euler products need Re s > 1 on the whole circle
        }
        let mut values = Vec::with_capacity(SAMPLES);
        let mut max_tail = 0.0f64;
        for k in 0..SAMPLES {
            let ang = TAU * k as f64 / SAMPLES as f64;
            let s = Complex64::new(sigma0 + r * ang.cos(), r * ang.sin());
            let (v, b) = g_sum(comps, s, theta, sums)?;
            values.push(v);
            max_tail = max_tail.max(b);
        }
        let min_mod = values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        let arc_step = TAU * r / SAMPLES as f64;
        let lipschitz = values
            .iter()
            .zip(values.iter().cycle().skip(1))
            .map(|(a, b)| (b - a).norm() / arc_step)
            .fold(0.0, f64::max);
        let slack = lipschitz * arc_step / 2.0;
        let gamma = min_mod - slack - max_tail;
        if gamma > 0.0 {
            return Ok(Circle {
                center: sigma0,
                radius: r,
                gamma,
            });
        }
    }
    Err(SolveError::NoPositiveGamma)
}

/// Distance between two angles on the circle, in [0, π].
fn circle_distance(a: f64, b: f64) -> f64 {
    let mut d = (a - b) % TAU;
    if d < 0.0 {
        d += TAU;
    }
    d.min(TAU - d)
}

/// Search the window for a real t with max_{p ≤ p_m} dist(−t·log p, θ_p) < eps:
/// coarse grid at step eps/(2·log p_m), then golden-section refinement of the
/// max-mismatch objective around promising grid points. Returns the first
/// qualifying t.
pub fn find_t(
    theta: &ThetaAssignment,
    p_m: u64,
    window: (f64, f64),
    eps: f64,
) -> Result<f64, SolveError> {
    let primes: Vec<u64> = sieve_primes(p_m);
    if primes.len() > 8 {
        return Err(SolveError::TooManyPrimes { m: primes.len() });
    }
    if primes.is_empty() {
        return Ok(window.0);
    }
    let objective = |t: f64| -> f64 {
        primes
            .iter()
            .map(|&p| circle_distance(-t * (p as f64).ln(), theta.theta(p)))
            .fold(0.0, f64::max)
    };
    let log_pm = (p_m as f64).ln();
    let step = eps / (2.0 * log_pm);
    let (t_min, t_max) = window;
    let n_steps = ((t_max - t_min) / step).ceil() as u64;
    for k in 0..=n_steps {
        let t = t_min + k as f64 * step;
        if t > t_max {
            break;
        }
        let obj = objective(t);
        if obj < eps {
            return Ok(t);
        }
        if obj < 2.0 * eps {
            // golden-section refinement on [t − step, t + step]
            let phi = 0.5 * (5.0f64.sqrt() - 1.0);
            let mut a = (t - step).max(t_min);
            let mut b = (t + step).min(t_max);
            let mut c = b - phi * (b - a);
            let mut d = a + phi * (b - a);
            let mut fc = objective(c);
            let mut fd = objective(d);
            for _ in 0..60 {
                if fc < fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - phi * (b - a);
                    fc = objective(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + phi * (b - a);
                    fd = objective(d);
                }
            }
            let best = if fc < fd { c } else { d };
            if objective(best) < eps {
                return Ok(best);
            }
        }
    }
    Err(SolveError::NotFound)
}

/// Evidence that F(·+it) has the same zeros as Σ G_j inside the circle.
#[derive(Debug, Clone, Serialize)]
pub struct RoucheCertificate {
    pub center: f64,
    pub radius: f64,
    /// Certified minimum of |Σ G_j| on the circle.
    pub gamma: f64,
    /// Sampled maximum of |F(s+it) − Σ G_j(s)|.
    pub max_diff: f64,
    /// Lipschitz sampling slack plus truncation allowances.
    pub slack: f64,
    pub t: f64,
    /// Zeros of F(·+it) inside the circle, by direct winding count.
    pub zeros_inside: u32,
    pub sample_count: usize,
    pub lipschitz_bound: f64,
    pub valid: bool,
}

/// Σ_j F_j(s) = Σ_j P_j(s)·L_ψj(s), the untwisted target function.
pub fn f_sum(
    comps: &[GComponent],
    s: Complex64,
    opts: &EvalOptions,
) -> Result<Complex64, SolveError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for comp in comps {
        let p = crate::eval::dirichlet_poly_eval(&comp.poly, s);
        let l = l_function(&comp.psi, s, opts)?;
        acc += p * l;
    }
    Ok(acc)
}

/// Verify max |F(s+it) − Σ G_j(s)| + slack < γ on the circle and count the
/// zeros of F(·+it) inside by an independent winding pass.
pub fn rouche_certify(
    comps: &[GComponent],
    t: f64,
    circle: &Circle,
    theta: &ThetaAssignment,
    sums: &ClassSums,
    opts: &EvalOptions,
) -> Result<RoucheCertificate, SolveError> {
    const SAMPLES: usize = 512;
    let mut diffs = Vec::with_capacity(SAMPLES);
    let mut max_diff = 0.0f64;
    let mut max_tail = 0.0f64;
    for k in 0..SAMPLES {
        let ang = TAU * k as f64 / SAMPLES as f64;
        let s = Complex64::new(circle.center + circle.radius * ang.cos(), circle.radius * ang.sin());
        let (g, gb) = g_sum(comps, s, theta, sums)?;
        let f = f_sum(comps, s + Complex64::new(0.0, t), opts)?;
        let d = (f - g).norm();
        diffs.push(f - g);
        max_diff = max_diff.max(d);
        max_tail = max_tail.max(gb);
    }
    let arc_step = TAU * circle.radius / SAMPLES as f64;
    let lipschitz = diffs
        .iter()
        .zip(diffs.iter().cycle().skip(1))
        .map(|(a, b)| (b - a).norm() / arc_step)
        .fold(0.0, f64::max);
    let slack = lipschitz * arc_step / 2.0 + max_tail;
    let valid = max_diff + slack < circle.gamma;
    if !valid {
        return Err(SolveError::CertificationFailed {
            max_diff,
            slack,
            gamma: circle.gamma,
        });
    }
    // independent re-check: winding of F(·+it) around the circle
    let f = |s: Complex64| {
        f_sum(comps, s + Complex64::new(0.0, t), opts).map_err(|e| match e {
            SolveError::Eval(ev) => ev,
            other => crate::eval::EvalError::Domain(other.to_string()),
        })
    };
    let zeros = winding_circle(&f, Complex64::new(circle.center, 0.0), circle.radius)
        .map_err(|e| SolveError::Config(format!("winding recheck failed: {e}")))?;
    if zeros < 1 {
        return Err(SolveError::CertificationFailed {
            max_diff,
            slack,
            gamma: circle.gamma,
        });
    }
    Ok(RoucheCertificate {
        center: circle.center,
        radius: circle.radius,
        gamma: circle.gamma,
        max_diff,
        slack,
        t,
        zeros_inside: zeros as u32,
        sample_count: SAMPLES,
        lipschitz_bound: lipschitz,
        valid,
    })
}

/// Pipeline stage at which a demonstration run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DemoStage {
    Configuration,
    ClassSums,
    FixedPointTargets,
    CircleSelection,
    ShiftSearch,
    Certification,
}

/// Structured failure report: never a silent pass.
#[derive(Debug, Clone, Serialize)]
pub struct DemoFailure {
    pub stage: DemoStage,
    pub message: String,
    /// Largest class-space target magnitude the run needed.
    pub required: f64,
    /// Representable per-class reach at this budget (≈ S_a/3).
    pub attainable: f64,
}

/// Outcome of a zero-production run.
#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub certificates: Vec<RoucheCertificate>,
    pub failure: Option<DemoFailure>,
    pub windows_scanned: u32,
    pub t_budget: f64,
    /// Certified zeros per unit of t scanned.
    pub density: f64,
}

impl DemoReport {
    pub fn certified(&self) -> bool {
        !self.certificates.is_empty()
    }
}

/// Run the whole production pipeline for F = Σ P_ψ L_ψ over (σ1, σ2), 1 < σ1:
/// targets → fixed point → circle → shift search over successive windows →
/// certification. Returns every certificate found within the t-budget, or a
/// structured failure describing the first blocking stage.
pub fn certified_zero_search(
    set: &[(Character, DirichletPolynomial)],
    sigma1: f64,
    sigma2: f64,
    t_budget: f64,
    cfg_template: Option<SolverConfig>,
    opts: &EvalOptions,
) -> Result<DemoReport, SolveError> {
    let (q, y, comps) = g_components(set)?;
    if !(1.0 < sigma1 && sigma1 < sigma2 && sigma2 <= 1.5) {
        return Err(SolveError::Config(format!(
            "need 1 < sigma1 < sigma2 <= 1.5, got ({sigma1}, {sigma2})"
        )));
    }
    let sigma0 = 0.5 * (sigma1 + sigma2);
    let mut cfg = cfg_template.unwrap_or_else(|| SolverConfig::new(q, sigma0));
    cfg.q = q;
    cfg.sigma = sigma0;
    cfg.y = cfg.y.max(y);
    cfg.radius = 1.0;
    let matrix = character_matrix(q);
    let sums = match class_sums(&cfg) {
        Ok(s) => s,
        Err(e) => {
            return Ok(DemoReport {
                certificates: Vec::new(),
                failure: Some(DemoFailure {
                    stage: DemoStage::ClassSums,
                    message: e.to_string(),
                    required: 0.0,
                    attainable: 0.0,
                }),
                windows_scanned: 0,
                t_budget,
                density: 0.0,
            })
        }
    };

    // Log-product targets: G_j(σ0) = e^(2πi j/n) requires the class primes to
    // deliver log(target_j) − log h_j(σ0), indexed by the induced character's
    // position in enumeration order. The surviving global scale freedom
    // (targets ρ·e^(iα)·roots still sum to zero) is spent zeroing the class-1
    // coordinate, which is the most the budget can shed.
    let n = comps.len();
    let targets = build_targets(n)?;
    let chars_q = crate::characters::enumerate_characters(q);
    let mut z = vec![Complex64::new(0.0, 0.0); matrix.residues.len()];
    let mut seen = Vec::new();
    for (j, comp) in comps.iter().enumerate() {
        let idx = chars_q
            .iter()
            .position(|c| c.label() == comp.chi.label())
            .expect("induced character is one of the characters mod q");
        if seen.contains(&idx) {
            return Err(SolveError::Config(
                "component characters must be pairwise distinct".into(),
            ));
        }
        seen.push(idx);
        // h_j(σ0) with zero polynomial twists
        let twist = |_: u64| 0.0;
        let mut h = twisted_poly_eval(&comp.poly, Complex64::new(sigma0, 0.0), &twist);
        for p in sieve_primes(cfg.y) {
            let x = comp.psi.eval(p) * real_pow(p as f64, -Complex64::new(sigma0, 0.0));
            h /= Complex64::new(1.0, 0.0) - x;
        }
        if h.norm() == 0.0 {
            return Err(SolveError::Config(
                "component head vanishes at the circle center".into(),
            ));
        }
        z[idx] = targets[j].ln() - h.ln();
    }
    let mut w = matrix.apply_inverse(&z);
    // global rescaling of the targets only moves the class-1 coordinate
    w[0] = Complex64::new(0.0, 0.0);
    let z = matrix.apply(&w);
    let required = w.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let attainable = sums.s_min() / 3.0;

    let product = match solve_product_system(&cfg, &sums, &matrix, &z) {
        Ok(p) => p,
        Err(e) => {
            return Ok(DemoReport {
                certificates: Vec::new(),
                failure: Some(DemoFailure {
                    stage: DemoStage::FixedPointTargets,
                    message: format!(
                        "needed per-class mass {required:.3} against reach {attainable:.3}: {e}"
                    ),
                    required,
                    attainable,
                }),
                windows_scanned: 0,
                t_budget,
                density: 0.0,
            })
        }
    };

    let circle = match choose_circle(&comps, &product.theta, sigma1, sigma2, &sums) {
        Ok(c) => c,
        Err(e) => {
            return Ok(DemoReport {
                certificates: Vec::new(),
                failure: Some(DemoFailure {
                    stage: DemoStage::CircleSelection,
                    message: e.to_string(),
                    required,
                    attainable,
                }),
                windows_scanned: 0,
                t_budget,
                density: 0.0,
            })
        }
    };

    // alignment over successive windows; primes up to 19 are 8 constraints
    let p_m = 19u64;
    let eps = 0.3;
    let window_len = 200.0f64;
    let mut certificates = Vec::new();
    let mut windows_scanned = 0u32;
    let mut t_cursor = 0.0f64;
    let mut last_failure: Option<DemoFailure> = None;
    while t_cursor < t_budget {
        let hi = (t_cursor + window_len).min(t_budget);
        windows_scanned += 1;
        match find_t(&product.theta, p_m, (t_cursor, hi), eps) {
            Ok(t) => {
                match rouche_certify(&comps, t, &circle, &product.theta, &sums, opts) {
                    Ok(cert) => {
                        certificates.push(cert);
                        t_cursor = t + 1.0;
                    }
                    Err(e) => {
                        last_failure = Some(DemoFailure {
                            stage: DemoStage::Certification,
                            message: e.to_string(),
                            required,
                            attainable,
                        });
                        t_cursor = t + 1.0;
                    }
                }
            }
            Err(_) => {
                if last_failure.is_none() {
                    last_failure = Some(DemoFailure {
                        stage: DemoStage::ShiftSearch,
                        message: format!(
                            "no aligning t in [{t_cursor:.0}, {hi:.0}] at eps = {eps}"
                        ),
                        required,
                        attainable,
                    });
                }
                t_cursor = hi;
            }
        }
    }
    let density = certificates.len() as f64 / t_budget;
    Ok(DemoReport {
        failure: if certificates.is_empty() {
            last_failure.or(Some(DemoFailure {
                stage: DemoStage::ShiftSearch,
                message: "no certificates within budget".into(),
                required,
                attainable,
            }))
        } else {
            None
        },
        certificates,
        windows_scanned,
        t_budget,
        density,
    })
}
