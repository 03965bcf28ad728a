//! Analytic continuation of Dirichlet series with periodic coefficients.
//!
//! Everything reduces to the Hurwitz zeta function ζ(s, r) = Σ_{n≥0} (n+r)^(−s)
//! evaluated by Euler–Maclaurin summation:
//!
//!   ζ(s,r) = Σ_{n<N} (n+r)^(−s) + (N+r)^(1−s)/(s−1) + (N+r)^(−s)/2
//!            + Σ_{k=1}^{K} B_{2k}/(2k)! · s(s+1)⋯(s+2k−2) · (N+r)^(−s−2k+1) + R_K
//!
//! with the remainder bounded by the first omitted term times
//! |s+2K+1|/(Re s + 2K+1). The pole at s = 1 is carried symbolically: the
//! workhorse computes ζ(s,r) − 1/(s−1), which is entire, so combinations with
//! zero mean (entire continuations) stay accurate arbitrarily close to s = 1.

use num_complex::Complex64;
use thiserror::Error;

use crate::characters::Character;
use crate::sequences::{DirichletPolynomial, PeriodicSequence};

/// Radius around s = 1 inside which a genuine pole is reported instead of a
/// value.
pub const POLE_RADIUS: f64 = 1e-14;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("simple pole at s = 1 (|s-1| = {distance:.3e})")]
    Pole { distance: f64 },
    #[error("remainder bound {bound:.3e} exceeds target {target:.3e}")]
    Precision { bound: f64, target: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("Euler factor at p = {p} is singular")]
    FactorSingular { p: u64 },
}

/// Accuracy and range controls for the continuation routines.
#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    /// Absolute error target for a single Hurwitz zeta evaluation.
    pub target_abs_error: f64,
    /// Cap on |Im s|; Euler–Maclaurin cost grows linearly with it.
    pub max_imag: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            target_abs_error: 1e-12,
            max_imag: 1e4,
        }
    }
}

impl EvalOptions {
    pub fn with_target(target_abs_error: f64) -> Result<Self, EvalError> {
        if !(1e-15..=1e-3).contains(&target_abs_error) {
            return Err(EvalError::Domain(format!(
                "target absolute error {target_abs_error:e} outside [1e-15, 1e-3]"
            )));
        }
        Ok(EvalOptions {
            target_abs_error,
            ..Default::default()
        })
    }
}

/// B_0, B_2, B_4, …, B_50 as correctly rounded doubles.
const BERNOULLI_EVEN: [f64; 26] = [
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
    1520097643918070802691.0 / 1806.0,
    -27833269579301024235023.0 / 690.0,
    596451111593912163277961.0 / 282.0,
    -5609403368997817686249127547.0 / 46410.0,
    495057205241079648212477525.0 / 66.0,
];

/// B_{2k}/(2k)!, the Euler–Maclaurin coefficient.
fn em_coeff(k: usize) -> f64 {
    debug_assert!(k < BERNOULLI_EVEN.len());
    let mut fact = 1.0f64;
    for i in 2..=(2 * k) {
        fact *= i as f64;
    }
    BERNOULLI_EVEN[k] / fact
}

/// b^w for real b > 0: exp(w·ln b).
#[inline]
pub fn real_pow(base: f64, exponent: Complex64) -> Complex64 {
    (exponent * base.ln()).exp()
}

/// (e^w − 1)/w, stable near w = 0.
fn expm1_over(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        // Σ_{j≥0} w^j/(j+1)!
        let mut acc = Complex64::new(1.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 2..=6 {
            term *= w / k as f64;
            acc += term;
        }
        acc
    } else {
        (w.exp() - 1.0) / w
    }
}

/// Deflated Hurwitz zeta ζ(s, r) − 1/(s−1) with explicit parameters.
///
/// Returns the value together with the remainder bound. `n_terms` is the
/// series cutoff N, `bern_terms` the number K of Bernoulli correction terms
/// (K ≤ 24). The bound is ∞ when Re s + 2K + 1 ≤ 0.
pub fn hurwitz_deflated_params(
    s: Complex64,
    r: f64,
    n_terms: usize,
    bern_terms: usize,
) -> (Complex64, f64) {
    assert!(bern_terms + 1 < BERNOULLI_EVEN.len(), "Bernoulli table exhausted");
    assert!(r > 0.0 && r <= 1.0, "r must lie in (0, 1]");
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..n_terms {
        sum += real_pow(n as f64 + r, -s);
    }
    let nr = n_terms as f64 + r;
    let ln_nr = nr.ln();
    // ((N+r)^(1−s) − 1)/(s−1) = −ln(N+r)·(e^w − 1)/w with w = (1−s)ln(N+r)
    let w = (Complex64::new(1.0, 0.0) - s) * ln_nr;
    sum += -ln_nr * expm1_over(w);
    let nr_pow_ms = real_pow(nr, -s);
    sum += 0.5 * nr_pow_ms;

    let inv_nr2 = 1.0 / (nr * nr);
    let mut rising = s; // s(s+1)⋯(s+2k−2), one factor at k = 1
    let mut power = nr_pow_ms / nr; // (N+r)^(−s−2k+1) at k = 1
    for k in 1..=bern_terms {
        sum += em_coeff(k) * rising * power;
        rising = rising * (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
        power *= inv_nr2;
    }
    // First omitted term (k = K+1) with the standard tail factor.
    let k1 = bern_terms + 1;
    let omitted = (em_coeff(k1) * rising * power).norm();
    let cutoff = s.re + (2 * bern_terms + 1) as f64;
    let bound = if cutoff > 0.0 {
        omitted * (s + (2 * bern_terms + 1) as f64).norm() / cutoff
    } else {
        f64::INFINITY
    };
    (sum, bound)
}

/// Default Euler–Maclaurin parameters: N = max(20, 1.3·|Im s|) + 30, K = 12.
fn default_params(s: Complex64) -> (usize, usize) {
    let n = (20.0f64).max(s.im.abs() * 1.3).ceil() as usize + 30;
    (n, 12)
}

fn check_domain(s: Complex64, r: f64, opts: &EvalOptions) -> Result<(), EvalError> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(EvalError::Domain(format!("r = {r} outside (0, 1]")));
    }
    if s.im.abs() > opts.max_imag {
        return Err(EvalError::Domain(format!(
            "|Im s| = {} exceeds cap {}",
            s.im.abs(),
            opts.max_imag
        )));
    }
    Ok(())
}

/// Hurwitz zeta ζ(s, r) for 0 < r ≤ 1, s ≠ 1.
pub fn hurwitz_zeta(s: Complex64, r: f64, opts: &EvalOptions) -> Result<Complex64, EvalError> {
    check_domain(s, r, opts)?;
    let dist = (s - 1.0).norm();
    if dist < POLE_RADIUS {
        return Err(EvalError::Pole { distance: dist });
    }
    let (n, k) = default_params(s);
    let (deflated, bound) = hurwitz_deflated_params(s, r, n, k);
    if bound > opts.target_abs_error {
        return Err(EvalError::Precision {
            bound,
            target: opts.target_abs_error,
        });
    }
    Ok(deflated + 1.0 / (s - 1.0))
}

/// ζ(s, r) with explicit Euler–Maclaurin parameters; the self-consistency
/// oracle for the default path.
pub fn hurwitz_zeta_params(
    s: Complex64,
    r: f64,
    n_terms: usize,
    bern_terms: usize,
) -> Result<(Complex64, f64), EvalError> {
    let dist = (s - 1.0).norm();
    if dist < POLE_RADIUS {
        return Err(EvalError::Pole { distance: dist });
    }
    let (deflated, bound) = hurwitz_deflated_params(s, r, n_terms, bern_terms);
    Ok((deflated + 1.0 / (s - 1.0), bound))
}

/// Residue of F_a at s = 1: (1/q)·Σ a_j. Zero means the continuation is
/// entire.
pub fn residue_at_one(a: &PeriodicSequence) -> Complex64 {
    a.period_sum() / a.period() as f64
}

/// Threshold below which a floating-point period sum is treated as exact
/// cancellation (entire function).
fn pole_coeff_threshold(a: &PeriodicSequence) -> f64 {
    1e-10 * (1.0 + a.abs_sum())
}

fn f_eval_inner(
    values: &[Complex64],
    pole_coeff: Complex64,
    s: Complex64,
    opts: &EvalOptions,
) -> Result<Complex64, EvalError> {
    let q = values.len() as u64;
    let abs_sum: f64 = values.iter().map(|v| v.norm()).sum();
    let dist = (s - 1.0).norm();
    if dist < POLE_RADIUS && pole_coeff.norm() > 0.0 {
        return Err(EvalError::Pole { distance: dist });
    }
    let (n, k) = default_params(s);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut bound = 0.0f64;
    for (j, aj) in values.iter().enumerate() {
        if aj.norm() == 0.0 {
            continue;
        }
        let (deflated, b) = hurwitz_deflated_params(s, (j as f64 + 1.0) / q as f64, n, k);
        acc += aj * deflated;
        bound += aj.norm() * b;
    }
    let allowed = opts.target_abs_error * abs_sum.max(1.0);
    if bound > allowed {
        return Err(EvalError::Precision {
            bound,
            target: allowed,
        });
    }
    if pole_coeff.norm() > 0.0 {
        acc += pole_coeff / (s - 1.0);
    }
    Ok(real_pow(q as f64, -s) * acc)
}

/// F_a(s): the meromorphic continuation of Σ a_n n^(−s), via
/// F_a(s) = q^(−s) Σ_j a_j ζ(s, j/q).
///
/// The only possible singularity is a simple pole at s = 1 with residue
/// mean(a); it is reported as `Pole` when the mean is nonzero and s is within
/// `POLE_RADIUS` of 1. Entire combinations evaluate stably at s = 1 itself.
pub fn f_eval(a: &PeriodicSequence, s: Complex64, opts: &EvalOptions) -> Result<Complex64, EvalError> {
    check_domain(s, 1.0, opts)?;
    let sum = a.period_sum();
    // Treat a numerically cancelled mean as exact zero; otherwise keep the
    // pole term, which preserves exact linearity in the coefficients.
    let pole_coeff = if sum.norm() <= pole_coeff_threshold(a) && (s - 1.0).norm() < 1e-6 {
        Complex64::new(0.0, 0.0)
    } else {
        sum
    };
    f_eval_inner(a.values(), pole_coeff, s, opts)
}

/// L_χ(s) = q^(−s) Σ_a χ(a) ζ(s, a/q).
///
/// The pole at s = 1 exists exactly when χ is principal; principality is
/// decided from the label, so non-principal characters evaluate cleanly at
/// s = 1 (e.g. the Leibniz value at the nontrivial character mod 4).
pub fn l_function(chi: &Character, s: Complex64, opts: &EvalOptions) -> Result<Complex64, EvalError> {
    check_domain(s, 1.0, opts)?;
    let pole_coeff = if chi.is_principal() {
        Complex64::new(crate::arith::euler_phi(chi.modulus()) as f64, 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    };
    f_eval_inner(chi.values(), pole_coeff, s, opts)
}

/// Σ c_k k^(−s), exact finite sum.
pub fn dirichlet_poly_eval(p: &DirichletPolynomial, s: Complex64) -> Complex64 {
    p.terms().map(|(k, c)| c * real_pow(k as f64, -s)).sum()
}

/// Phase shifts per prime: k^(−s) becomes Π p^(−(s+i t_p) e) over p^e ∥ k.
/// Primes missing from the map are untwisted (t_p = 0).
pub fn twisted_poly_eval(
    p: &DirichletPolynomial,
    s: Complex64,
    twists: &dyn Fn(u64) -> f64,
) -> Complex64 {
    p.terms()
        .map(|(k, c)| {
            let mut acc = c;
            for (prime, e) in crate::arith::factorize(k) {
                let sp = s + Complex64::new(0.0, twists(prime));
                acc *= real_pow(prime as f64, -sp * e as f64);
            }
            acc
        })
        .sum()
}

/// Finite twisted Euler product Π_{pFrom < p ≤ pTo} (1 − χ(p) p^(−s−i t_p))^(−1)
/// over the supplied primes, with the log-tail bound for the omitted primes
/// beyond `p_to`: 2·Σ_{p > pTo} p^(−Re s) ≤ 2·pTo^(1−Re s)/(Re s − 1).
pub fn euler_tail_eval(
    chi: &Character,
    s: Complex64,
    twists: &dyn Fn(u64) -> f64,
    primes: &[u64],
    p_from: u64,
    p_to: u64,
) -> Result<(Complex64, f64), EvalError> {
    let mut acc = Complex64::new(1.0, 0.0);
    for &p in primes {
        if p <= p_from || p > p_to {
            continue;
        }
        let x = chi.eval(p) * real_pow(p as f64, -(s + Complex64::new(0.0, twists(p))));
        let factor = Complex64::new(1.0, 0.0) - x;
        if factor.norm() < 1e-14 {
            return Err(EvalError::FactorSingular { p });
        }
        acc /= factor;
    }
    Ok((acc, log_tail_bound(s.re, p_to)))
}

/// Σ_{p > P} p^(−σ) for σ > 1, by partial summation against the bound
/// π(x) < 1.25506·x/ln x (valid for x > 1): the tail is at most
/// 1.25506·σ·P^(1−σ)/((σ−1)·ln P). Below P = 17 the cruder all-integers
/// integral bound is used.
pub fn prime_tail_bound(sigma: f64, p_to: u64) -> f64 {
    if sigma <= 1.0 {
        return f64::INFINITY;
    }
    let p = p_to as f64;
    if p < 17.0 {
        return p.powf(1.0 - sigma) / (sigma - 1.0);
    }
    1.25506 * sigma * p.powf(1.0 - sigma) / ((sigma - 1.0) * p.ln())
}

/// Bound on |log Π_{p > p_to} (1 − χ(p) p^(−s−it_p))^(−1)|: each factor's log
/// is at most 2·p^(−σ) in modulus (since p^(−σ) ≤ 1/2), so the whole tail is
/// below 2·Σ_{p > p_to} p^(−σ).
pub fn log_tail_bound(sigma: f64, p_to: u64) -> f64 {
    2.0 * prime_tail_bound(sigma, p_to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;
    use std::f64::consts::PI;

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn zeta_at_two() {
        let v = hurwitz_zeta(Complex64::new(2.0, 0.0), 1.0, &opts()).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < 1e-12, "{v}");
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn hurwitz_half_identity() {
        // ζ(s, 1/2) = (2^s − 1) ζ(s)
        let v = hurwitz_zeta(Complex64::new(2.0, 0.0), 0.5, &opts()).unwrap();
        assert!((v.re - PI * PI / 2.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn hurwitz_self_consistency_oracle() {
        // doubled series length and doubled Bernoulli order as the oracle
        let s = Complex64::new(0.75, 10.0);
        let (n, k) = (((10.0f64 * 1.3).max(20.0)).ceil() as usize + 30, 12usize);
        let fast = hurwitz_zeta(s, 1.0 / 3.0, &opts()).unwrap();
        let (slow, bound) = hurwitz_zeta_params(s, 1.0 / 3.0, 2 * n, 2 * k).unwrap();
        assert!(bound < 1e-13);
        assert!((fast - slow).norm() < 1e-11, "{}", (fast - slow).norm());
    }

    #[test]
    fn hurwitz_pole_and_domain_errors() {
        assert!(matches!(
            hurwitz_zeta(Complex64::new(1.0, 0.0), 1.0, &opts()),
            Err(EvalError::Pole { .. })
        ));
        assert!(matches!(
            hurwitz_zeta(Complex64::new(2.0, 0.0), 1.5, &opts()),
            Err(EvalError::Domain(_))
        ));
        assert!(matches!(
            hurwitz_zeta(Complex64::new(2.0, 2e4), 1.0, &opts()),
            Err(EvalError::Domain(_))
        ));
    }

    #[test]
    fn far_left_evaluation_reports_precision() {
        // Re s + 2K + 1 ≤ 0 leaves the remainder unbounded
        assert!(matches!(
            hurwitz_zeta(Complex64::new(-30.0, 0.0), 1.0, &opts()),
            Err(EvalError::Precision { .. })
        ));
    }

    #[test]
    fn hurwitz_multiplication_identity() {
        // Σ_{j=1}^q ζ(s, j/q) = q^s ζ(s) on a grid avoiding s = 1
        for q in 1..=12u64 {
            for &re in &[-1.0, -0.3, 0.2, 0.5, 1.5, 3.0] {
                for &im in &[0.0, 7.3, -21.0, 50.0] {
                    let s = Complex64::new(re, im);
                    let lhs: Complex64 = (1..=q)
                        .map(|j| hurwitz_zeta(s, j as f64 / q as f64, &opts()).unwrap())
                        .sum();
                    let rhs = real_pow(q as f64, s) * hurwitz_zeta(s, 1.0, &opts()).unwrap();
                    assert!(
                        (lhs - rhs).norm() < 1e-10,
                        "q={q} s={s} diff={}",
                        (lhs - rhs).norm()
                    );
                }
            }
        }
    }

    #[test]
    fn leibniz_value_at_one() {
        let chi4 = enumerate_characters(4).pop().unwrap();
        let v = l_function(&chi4, Complex64::new(1.0, 0.0), &opts()).unwrap();
        assert!((v.re - PI / 4.0).abs() < 1e-12, "{v}");
        assert!(v.im.abs() < 1e-13);
    }

    #[test]
    fn l_mod_1_is_zeta() {
        let triv = enumerate_characters(1).pop().unwrap();
        let v = l_function(&triv, Complex64::new(2.0, 0.0), &opts()).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn l_mod_3_partial_summation_oracle() {
        // Σ χ(n)/n² grouped in periods: brackets 1/(3k+1)² − 1/(3k+2)² are
        // positive and decreasing, so the tail is below the first omitted
        // bracket.
        let chi3 = enumerate_characters(3).pop().unwrap();
        let mut direct = 0.0f64;
        let blocks = 300_000u64;
        for k in 0..blocks {
            let n1 = (3 * k + 1) as f64;
            let n2 = (3 * k + 2) as f64;
            direct += 1.0 / (n1 * n1) - 1.0 / (n2 * n2);
        }
        let tail = {
            let n1 = (3 * blocks + 1) as f64;
            let n2 = (3 * blocks + 2) as f64;
            1.0 / (n1 * n1) - 1.0 / (n2 * n2)
        };
        let v = l_function(&chi3, Complex64::new(2.0, 0.0), &opts()).unwrap();
        assert!(
            (v.re - direct).abs() < tail + 1e-10,
            "L = {}, partial = {direct}, tail = {tail}",
            v.re
        );
        assert!(v.im.abs() < 1e-13);
    }

    #[test]
    fn principal_character_pole() {
        let chi0 = &enumerate_characters(4)[0];
        assert!(matches!(
            l_function(chi0, Complex64::new(1.0, 0.0), &opts()),
            Err(EvalError::Pole { .. })
        ));
    }

    #[test]
    fn f_eval_examples() {
        let one = PeriodicSequence::from_real(&[1.0]);
        let v = f_eval(&one, Complex64::new(2.0, 0.0), &opts()).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < 1e-12);

        let chi4_seq = PeriodicSequence::from_real(&[1.0, 0.0, -1.0, 0.0]);
        let v = f_eval(&chi4_seq, Complex64::new(1.0, 0.0), &opts()).unwrap();
        assert!((v.re - PI / 4.0).abs() < 1e-12, "{v}");

        assert!(matches!(
            f_eval(&one, Complex64::new(1.0, 0.0), &opts()),
            Err(EvalError::Pole { .. })
        ));
    }

    #[test]
    fn residues() {
        assert_eq!(
            residue_at_one(&PeriodicSequence::from_real(&[1.0])),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            residue_at_one(&PeriodicSequence::from_real(&[1.0, -1.0])),
            Complex64::new(0.0, 0.0)
        );
        let r = residue_at_one(&PeriodicSequence::from_real(&[1.0, 2.0, 0.0]));
        assert!((r.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_series_consistency() {
        // For Re s ≥ 2 the truncated series approximates F_a within
        // max|a_j|·N^(1−σ)/(σ−1).
        let a = PeriodicSequence::from_real(&[1.0, 2.0, 0.0]);
        let n_max = 2000u64;
        for &s in &[Complex64::new(2.0, 0.0), Complex64::new(2.5, 13.0)] {
            let f = f_eval(&a, s, &opts()).unwrap();
            let partial: Complex64 = (1..=n_max)
                .map(|n| a.value_at(n) * real_pow(n as f64, -s))
                .sum();
            let max_a = a.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
            let bound = max_a * (n_max as f64).powf(1.0 - s.re) / (s.re - 1.0);
            assert!((f - partial).norm() <= bound, "s={s}");
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let a = PeriodicSequence::new(vec![
            Complex64::new(1.0, 0.5),
            Complex64::new(-2.0, 0.25),
            Complex64::new(0.0, -1.0),
        ]);
        for &s in &[Complex64::new(0.7, 9.0), Complex64::new(2.2, -4.0)] {
            let lhs = f_eval(&a.conj(), s.conj(), &opts()).unwrap();
            let rhs = f_eval(&a, s, &opts()).unwrap().conj();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn poly_eval_examples() {
        let p = DirichletPolynomial::from_pairs(&[
            (1, Complex64::new(1.0, 0.0)),
            (2, Complex64::new(-1.0, 0.0)),
        ]);
        assert!(dirichlet_poly_eval(&p, Complex64::new(0.0, 0.0)).norm() < 1e-15);
        assert!(
            (dirichlet_poly_eval(&p, Complex64::new(2.0, 0.0)).re - 0.75).abs() < 1e-15
        );
        let one = DirichletPolynomial::one();
        assert_eq!(
            dirichlet_poly_eval(&one, Complex64::new(3.3, 2.2)),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn twisted_poly_matches() {
        let p = DirichletPolynomial::from_pairs(&[
            (1, Complex64::new(1.0, 0.0)),
            (2, Complex64::new(-0.5, 0.2)),
            (6, Complex64::new(0.0, 1.0)),
        ]);
        let s = Complex64::new(1.4, 2.0);
        // zero twist reduces to the plain evaluation
        let twisted = twisted_poly_eval(&p, s, &|_| 0.0);
        assert!((twisted - dirichlet_poly_eval(&p, s)).norm() < 1e-14);

        // full-turn phase at p = 2 is invisible
        let p2 = DirichletPolynomial::from_pairs(&[(2, Complex64::new(1.0, 0.0))]);
        let full_turn = 2.0 * PI / 2.0f64.ln();
        let v = twisted_poly_eval(&p2, s, &|p| if p == 2 { full_turn } else { 0.0 });
        assert!((v - real_pow(2.0, -s)).norm() < 1e-13);

        // direct recomputation: 1 + 2^(−1−i) + 3^(−1−2i)
        let p123 = DirichletPolynomial::from_pairs(&[
            (1, Complex64::new(1.0, 0.0)),
            (2, Complex64::new(1.0, 0.0)),
            (3, Complex64::new(1.0, 0.0)),
        ]);
        let s1 = Complex64::new(1.0, 0.0);
        let v = twisted_poly_eval(&p123, s1, &|p| match p {
            2 => 1.0,
            3 => 2.0,
            _ => 0.0,
        });
        let expect = Complex64::new(1.0, 0.0)
            + real_pow(2.0, -Complex64::new(1.0, 1.0))
            + real_pow(3.0, -Complex64::new(1.0, 2.0));
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn euler_tail_examples() {
        let primes = crate::arith::sieve_primes(100);
        let triv = enumerate_characters(1).pop().unwrap();
        let s = Complex64::new(2.0, 0.0);

        // empty range
        let (v, _) = euler_tail_eval(&triv, s, &|_| 0.0, &primes, 7, 7).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));

        // partial product toward ζ(2)
        let (v, tail) = euler_tail_eval(&triv, s, &|_| 0.0, &primes, 1, 97).unwrap();
        let mut direct = 1.0f64;
        for &p in primes.iter().filter(|&&p| p <= 97) {
            direct /= 1.0 - (p as f64).powi(-2);
        }
        assert!((v.re - direct).abs() < 1e-13);
        assert!((v.re - PI * PI / 6.0).abs() < tail.exp() - 1.0 + 1e-6);

        // single factor with unit character value
        let (v, _) = euler_tail_eval(&triv, s, &|_| 0.0, &primes, 1, 2).unwrap();
        assert!((v.re - 4.0 / 3.0).abs() < 1e-15);
    }
}
