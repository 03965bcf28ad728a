//! Per-class phase solvers: class sums over primes in arithmetic
//! progressions, the three-block split, the two-angle equation, and the
//! fixed-point correction that upgrades linear targets to log-product
//! targets.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::{gcd, sieve_primes};
use crate::characters::{enumerate_characters, Character, CharacterMatrix};


#[derive(Debug, Clone, Error)]
pub enum SolveError {
    #[error("class sums cannot reach the requested radius; largest feasible R = {max_feasible_r:.6e}")]
    InfeasibleRadius { max_feasible_r: f64 },
    #[error("three-block split unattainable at this budget; best achievable delta = {best_delta:.4}")]
    SplitUnattainable { best_delta: f64 },
    #[error("two-angle equation has no solution for target {target}")]
    NoSolution { target: Complex64 },
    #[error("verification residual {residual:.3e} exceeds allowance {allowed:.3e}")]
    ResidualTooLarge { residual: f64, allowed: f64 },
    #[error("fixed point failed to converge; final discrepancy {discrepancy:.3e}")]
    NonConvergence { discrepancy: f64 },
    #[error("Euler factor at p = {p} is singular")]
    FactorSingular { p: u64 },
    #[error("no radius gave a positive certified minimum on the circle")]
    NoPositiveGamma,
    #[error("certification failed: max |F − ΣG| = {max_diff:.4e} + slack {slack:.4e} ≥ γ = {gamma:.4e}")]
    CertificationFailed { max_diff: f64, slack: f64, gamma: f64 },
    #[error("no aligning shift found in the window")]
    NotFound,
    #[error("at least two primitive characters are required, got {n}")]
    TooFewCharacters { n: usize },
    #[error("too many constrained primes for the grid search: {m} > 8")]
    TooManyPrimes { m: usize },
    #[error(transparent)]
    Eval(#[from] crate::eval::EvalError),
    #[error("configuration error: {0}")]
    Config(String),
}

/// Budget and tolerance knobs for the phase solvers.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Modulus whose characters drive the system.
    pub q: u64,
    /// Real part σ > 1 at which sums and products are formed.
    pub sigma: f64,
    /// Primes ≤ y are polynomial primes, excluded from the class sums.
    pub y: u64,
    /// Largest prime included in sums and products.
    pub p_max: u64,
    /// Target radius R for the solvable polydisk.
    pub radius: f64,
    /// Fixed-point stopping tolerance.
    pub fix_tol: f64,
    /// Fixed-point iteration cap.
    pub max_iter: u32,
    /// Acceptable deviation of the block weights from 1/3. The classical
    /// window is 1/100, which needs far more prime mass near the cut than
    /// desk budgets carry (at q = 4, σ = 1.2 the first class-3 prime alone
    /// holds ~25% of the mass); the two-angle solver tolerates much more.
    pub split_delta: f64,
}

impl SolverConfig {
    pub fn new(q: u64, sigma: f64) -> SolverConfig {
        SolverConfig {
            q,
            sigma,
            y: 3,
            p_max: 10_000_000,
            radius: 0.1,
            fix_tol: 1e-9,
            max_iter: 200,
            split_delta: 0.1,
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if !(self.sigma > 1.0 && self.sigma <= 2.0) {
            return Err(SolveError::Config(format!(
                "sigma = {} outside (1, 2]",
                self.sigma
            )));
        }
        if self.y >= self.p_max {
            return Err(SolveError::Config(format!(
                "y = {} must be below p_max = {}",
                self.y, self.p_max
            )));
        }
        Ok(())
    }
}

/// Prime mass per residue class: S_a = Σ_{y < p ≤ P, p ≡ a (q)} p^(−σ).
#[derive(Debug, Clone)]
pub struct ClassSum {
    pub residue: u64,
    pub primes: Vec<u64>,
    pub weights: Vec<f64>,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct ClassSums {
    pub q: u64,
    pub sigma: f64,
    pub y: u64,
    pub p_max: u64,
    /// One entry per residue coprime to q, ascending.
    pub classes: Vec<ClassSum>,
    /// Whether min_a S_a ≥ 10·‖C⁻¹‖∞·R held for the configured radius.
    pub feasible: bool,
    /// Largest radius the feasibility inequality allows.
    pub max_feasible_r: f64,
    /// Integral bound on the omitted mass Σ_{p > P} p^(−σ).
    pub tail_bound: f64,
}

impl ClassSums {
    pub fn class(&self, residue: u64) -> &ClassSum {
        self.classes
            .iter()
            .find(|c| c.residue == residue)
            .expect("residue coprime to q")
    }

    pub fn s_min(&self) -> f64 {
        self.classes.iter().map(|c| c.total).fold(f64::INFINITY, f64::min)
    }
}

/// Sieve the prime budget and accumulate the class sums. Errors when some
/// class holds no primes at all (nothing is representable there).
pub fn class_sums(cfg: &SolverConfig) -> Result<ClassSums, SolveError> {
    cfg.validate()?;
    let inv_norm = 1.0; // ‖C⁻¹‖∞ for the unitary character matrix
    let primes = sieve_primes(cfg.p_max);
    let mut classes: BTreeMap<u64, ClassSum> = (1..=cfg.q)
        .filter(|&a| gcd(a, cfg.q) == 1 || cfg.q == 1)
        .map(|a| {
            (
                a,
                ClassSum {
                    residue: a,
                    primes: Vec::new(),
                    weights: Vec::new(),
                    total: 0.0,
                },
            )
        })
        .collect();
    for &p in &primes {
        if p <= cfg.y {
            continue;
        }
        let a = if cfg.q == 1 { 1 } else { p % cfg.q };
        if let Some(class) = classes.get_mut(&a) {
            let w = (p as f64).powf(-cfg.sigma);
            class.primes.push(p);
            class.weights.push(w);
            class.total += w;
        }
    }
    let classes: Vec<ClassSum> = classes.into_values().collect();
    if let Some(empty) = classes.iter().find(|c| c.primes.is_empty()) {
        let _ = empty;
        return Err(SolveError::InfeasibleRadius { max_feasible_r: 0.0 });
    }
    let s_min = classes.iter().map(|c| c.total).fold(f64::INFINITY, f64::min);
    let max_feasible_r = s_min / (10.0 * inv_norm);
    let feasible = cfg.radius <= max_feasible_r;
    let tail_bound = crate::eval::prime_tail_bound(cfg.sigma, cfg.p_max);
    Ok(ClassSums {
        q: cfg.q,
        sigma: cfg.sigma,
        y: cfg.y,
        p_max: cfg.p_max,
        classes,
        feasible,
        max_feasible_r,
        tail_bound,
    })
}

/// A partition of one class into three consecutive blocks with weights
/// λ0, λ1, λ2 near 1/3 each.
#[derive(Debug, Clone, Copy)]
pub struct BlockSplit {
    /// Last prime of the first block.
    pub p1: u64,
    /// Last prime of the second block.
    pub p2: u64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// max(|λ0 − 1/3|, |λ1 − 1/3|) actually achieved.
    pub delta_achieved: f64,
}

/// Greedy prefix split of a weighted list into three blocks with the first
/// two prefix weights as close to 1/3 of the total as the granularity allows.
fn split_weights(weights: &[f64]) -> Option<(usize, usize, f64, f64)> {
    if weights.len() < 3 {
        return None;
    }
    let total: f64 = weights.iter().sum();
    let target = total / 3.0;
    // first block: prefix through index i0 (inclusive)
    let mut best_i0 = 0usize;
    let mut best_err = f64::INFINITY;
    let mut prefix = 0.0;
    for (i, w) in weights.iter().enumerate() {
        prefix += w;
        let err = (prefix - target).abs();
        if err < best_err && i + 2 < weights.len() {
            best_err = err;
            best_i0 = i;
        }
        if prefix > target && i + 2 >= weights.len() {
            break;
        }
    }
    let lambda0: f64 = weights[..=best_i0].iter().sum::<f64>() / total;
    // second block: prefix from i0+1 through i1
    let mut best_i1 = best_i0 + 1;
    let mut best_err1 = f64::INFINITY;
    let mut prefix1 = 0.0;
    for (i, w) in weights.iter().enumerate().skip(best_i0 + 1) {
        prefix1 += w;
        let err = (prefix1 - target).abs();
        if err < best_err1 && i + 1 < weights.len() {
            best_err1 = err;
            best_i1 = i;
        }
    }
    let lambda1: f64 = weights[best_i0 + 1..=best_i1].iter().sum::<f64>() / total;
    Some((best_i0, best_i1, lambda0, lambda1))
}

/// Choose the block boundaries p1 < p2 for a class so λ0 and λ1 land within
/// `delta` of 1/3.
pub fn block_split(sums: &ClassSums, residue: u64, delta: f64) -> Result<BlockSplit, SolveError> {
    let class = sums.class(residue);
    let (i0, i1, l0, l1) = split_weights(&class.weights).ok_or(
        SolveError::SplitUnattainable {
            best_delta: f64::INFINITY,
        },
    )?;
    let achieved = (l0 - 1.0 / 3.0).abs().max((l1 - 1.0 / 3.0).abs());
    if achieved > delta {
        return Err(SolveError::SplitUnattainable {
            best_delta: achieved,
        });
    }
    Ok(BlockSplit {
        p1: class.primes[i0],
        p2: class.primes[i1],
        lambda0: l0,
        lambda1: l1,
        lambda2: 1.0 - l0 - l1,
        delta_achieved: achieved,
    })
}

/// Solve λ1·e^(i u1) + λ2·e^(−i u2) = target for u1, u2 ∈ (0, π/2).
///
/// Geometrically: λ2·e^(−i u2) must land on the circle of radius λ1 around
/// the target, so u2 is a root of |target − λ2 e^(−i u2)| = λ1, found by a
/// dense scan plus bisection; u1 is then the argument of the remainder. A
/// short Newton polish brings the residual below 1e-12. The guaranteed
/// region is the disk |target − λ0| ≤ 1/10 but anything the image covers is
/// accepted.
pub fn solve_two_angle(
    lambda1: f64,
    lambda2: f64,
    target: Complex64,
) -> Result<(f64, f64), SolveError> {
    const LIMIT: f64 = std::f64::consts::FRAC_PI_2;
    let g = |u1: f64, u2: f64| {
        lambda1 * Complex64::new(u1.cos(), u1.sin()) + lambda2 * Complex64::new(u2.cos(), -u2.sin())
            - target
    };
    let h = |u2: f64| (target - lambda2 * Complex64::new(u2.cos(), -u2.sin())).norm() - lambda1;

    let polish = |mut u1: f64, mut u2: f64| -> Option<(f64, f64)> {
        for _ in 0..60 {
            let r = g(u1, u2);
            if r.norm() < 1e-13 {
                return (u1 > 0.0 && u1 < LIMIT && u2 > 0.0 && u2 < LIMIT).then_some((u1, u2));
            }
            let j11 = -lambda1 * u1.sin();
            let j21 = lambda1 * u1.cos();
            let j12 = -lambda2 * u2.sin();
            let j22 = -lambda2 * u2.cos();
            let det = j11 * j22 - j12 * j21;
            if det.abs() < 1e-300 {
                return None;
            }
            let du1 = (r.re * j22 - r.im * j12) / det;
            let du2 = (j11 * r.im - j21 * r.re) / det;
            let mut step = 1.0f64;
            let mut accepted = false;
            for _ in 0..30 {
                let n1 = (u1 - step * du1).clamp(1e-12, LIMIT - 1e-12);
                let n2 = (u2 - step * du2).clamp(1e-12, LIMIT - 1e-12);
                if g(n1, n2).norm() < r.norm() {
                    u1 = n1;
                    u2 = n2;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                return None;
            }
        }
        (g(u1, u2).norm() < 1e-12 && u1 > 0.0 && u1 < LIMIT && u2 > 0.0 && u2 < LIMIT)
            .then_some((u1, u2))
    };

    // scan for sign changes of h on [0, π/2]
    const SCAN: usize = 256;
    let mut prev_u = 0.0f64;
    let mut prev_h = h(0.0);
    for k in 1..=SCAN {
        let u = LIMIT * k as f64 / SCAN as f64;
        let cur_h = h(u);
        if prev_h == 0.0 || prev_h * cur_h < 0.0 || cur_h == 0.0 {
            // bisect to the root
            let (mut lo, mut hi) = (prev_u, u);
            let mut flo = prev_h;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = h(mid);
                if flo * fm <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            let u2 = 0.5 * (lo + hi);
            let rem = target - lambda2 * Complex64::new(u2.cos(), -u2.sin());
            let u1 = rem.arg();
            if u1 > -1e-9 && u1 < LIMIT + 1e-9 {
                if let Some(sol) = polish(u1.clamp(1e-9, LIMIT - 1e-9), u2.clamp(1e-9, LIMIT - 1e-9))
                {
                    return Ok(sol);
                }
            }
        }
        prev_u = u;
        prev_h = cur_h;
    }
    // interior tangency fallback: try the symmetric start
    if let Some(sol) = polish(std::f64::consts::FRAC_PI_3, std::f64::consts::FRAC_PI_3) {
        return Ok(sol);
    }
    Err(SolveError::NoSolution { target })
}

/// Phase choices for one residue class: rotation on the first block,
/// rotation + π ± u1 on the second, rotation + π ∓ u2 on the third (wrapped
/// into (−π, π]).
///
/// The basic pattern has rotation 0 and signs (+, −). Mirroring the signs
/// solves the conjugate target with the same angles; rotating the whole
/// pattern by arg(w_a) turns any residual target real, which the two-angle
/// image always covers for |w_a| ≲ S_a/3. Both extensions keep the
/// three-consecutive-block structure.
#[derive(Debug, Clone, Copy)]
pub struct ClassPhases {
    pub p1: u64,
    pub p2: u64,
    pub u1: f64,
    pub u2: f64,
    pub mirrored: bool,
    pub rotation: f64,
}

impl ClassPhases {
    fn theta(&self, p: u64) -> f64 {
        let (s1, s2) = if self.mirrored { (-1.0, 1.0) } else { (1.0, -1.0) };
        let base = if p <= self.p1 {
            0.0
        } else if p <= self.p2 {
            std::f64::consts::PI + s1 * self.u1
        } else {
            std::f64::consts::PI + s2 * self.u2
        };
        wrap_angle(base + self.rotation)
    }
}

fn wrap_angle(x: f64) -> f64 {
    let mut y = x % std::f64::consts::TAU;
    if y > std::f64::consts::PI {
        y -= std::f64::consts::TAU;
    } else if y <= -std::f64::consts::PI {
        y += std::f64::consts::TAU;
    }
    y
}

/// Phases θ_p per prime (equivalently t_p = −θ_p / log p).
///
/// Class primes follow the three-block rule; polynomial primes (p ≤ y) carry
/// explicit overrides, default 0. Primes beyond the budget are treated as
/// unphased (θ_p = 0), with the omission absorbed into reported tail bounds.
#[derive(Debug, Clone)]
pub struct ThetaAssignment {
    pub q: u64,
    pub y: u64,
    pub p_max: u64,
    per_class: BTreeMap<u64, ClassPhases>,
    poly_overrides: BTreeMap<u64, f64>,
}

impl ThetaAssignment {
    /// The all-zero assignment (no twist).
    pub fn zero(q: u64, y: u64, p_max: u64) -> ThetaAssignment {
        ThetaAssignment {
            q,
            y,
            p_max,
            per_class: BTreeMap::new(),
            poly_overrides: BTreeMap::new(),
        }
    }

    pub fn set_poly_phase(&mut self, p: u64, theta: f64) {
        self.poly_overrides.insert(p, wrap_angle(theta));
    }

    /// θ_p for any prime.
    pub fn theta(&self, p: u64) -> f64 {
        if p <= self.y {
            return self.poly_overrides.get(&p).copied().unwrap_or(0.0);
        }
        if p > self.p_max {
            return 0.0;
        }
        let a = if self.q == 1 { 1 } else { p % self.q };
        self.per_class.get(&a).map(|c| c.theta(p)).unwrap_or(0.0)
    }

    /// t_p = −θ_p / log p, the shift that realizes the phase as p^(−i t_p).
    pub fn t_p(&self, p: u64) -> f64 {
        -self.theta(p) / (p as f64).ln()
    }
}

/// Result of the linear-target solve.
#[derive(Debug, Clone)]
pub struct PhaseSolution {
    pub theta: ThetaAssignment,
    /// max_j |Σ_{y<p≤P} χ_j(p) p^(−σ) e^(iθ_p) − z_j| over the full character
    /// set.
    pub residual: f64,
    /// Class-sum mass beyond the prime budget (integral bound).
    pub tail_allowance: f64,
    /// w = C⁻¹ z in class space.
    pub w: Vec<Complex64>,
}

/// Solve Σ_{y<p≤P} χ_j(p) p^(−σ−i t_p) = z_j for all characters mod q.
///
/// Targets are given per character in `enumerate_characters` order; when
/// fewer targets than φ(q) are supplied the remaining characters are assigned
/// target 0. Change of variables w = C⁻¹z turns the system into one equation
/// per residue class, solved by the three-block phase rule.
pub fn solve_phase_system(
    cfg: &SolverConfig,
    sums: &ClassSums,
    matrix: &CharacterMatrix,
    targets: &[Complex64],
) -> Result<PhaseSolution, SolveError> {
    cfg.validate()?;
    let phi = matrix.residues.len();
    if targets.len() > phi {
        return Err(SolveError::Config(format!(
            "{} targets for {} characters",
            targets.len(),
            phi
        )));
    }
    let mut z = vec![Complex64::new(0.0, 0.0); phi];
    z[..targets.len()].copy_from_slice(targets);
    let w = matrix.apply_inverse(&z);

    let mut per_class = BTreeMap::new();
    for (idx, &a) in matrix.residues.iter().enumerate() {
        let class = sums.class(a);
        if w[idx].norm() > class.total {
            // |Σ p^(−σ) e^(iθ)| ≤ S_a no matter the phases
            return Err(SolveError::InfeasibleRadius {
                max_feasible_r: sums.max_feasible_r,
            });
        }
        let split = block_split(sums, a, cfg.split_delta)?;
        let reduced = w[idx] / class.total;
        let plain = Complex64::new(split.lambda0, 0.0) - reduced;
        // preferred: the untransformed pattern; then its mirror; finally the
        // rotation placing the target on the real axis
        let attempts = [
            (plain, false, 0.0),
            (plain.conj(), true, 0.0),
            (
                Complex64::new(split.lambda0 - reduced.norm(), 0.0),
                false,
                reduced.arg(),
            ),
        ];
        let mut solved = None;
        let mut last_err = SolveError::NoSolution { target: plain };
        for &(target, mirrored, rotation) in &attempts {
            match solve_two_angle(split.lambda1, split.lambda2, target) {
                Ok((u1, u2)) => {
                    solved = Some((u1, u2, mirrored, rotation));
                    break;
                }
                Err(e) => last_err = e,
            }
        }
        let (u1, u2, mirrored, rotation) = solved.ok_or(last_err)?;
        per_class.insert(
            a,
            ClassPhases {
                p1: split.p1,
                p2: split.p2,
                u1,
                u2,
                mirrored,
                rotation,
            },
        );
    }
    let theta = ThetaAssignment {
        q: cfg.q,
        y: cfg.y,
        p_max: cfg.p_max,
        per_class,
        poly_overrides: BTreeMap::new(),
    };

    // verification: recompute the character sums directly from the phases
    let chars = enumerate_characters(cfg.q);
    let mut residual = 0.0f64;
    for (j, chi) in chars.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for class in &sums.classes {
            let chi_a = chi.eval(class.residue);
            if chi_a.norm() == 0.0 {
                continue;
            }
            for (&p, &wgt) in class.primes.iter().zip(&class.weights) {
                let th = theta.theta(p);
                acc += chi_a * wgt * Complex64::new(th.cos(), th.sin());
            }
        }
        residual = residual.max((acc - z[j]).norm());
    }
    let allowed = 1e-8 + sums.tail_bound;
    if residual > allowed {
        return Err(SolveError::ResidualTooLarge {
            residual,
            allowed,
        });
    }
    Ok(PhaseSolution {
        theta,
        residual,
        tail_allowance: sums.tail_bound,
        w,
    })
}

/// Result of the log-product fixed point.
#[derive(Debug, Clone)]
pub struct ProductSolution {
    pub theta: ThetaAssignment,
    pub iterations: u32,
    /// Final step size of the iteration.
    pub discrepancy: f64,
    /// max_j |−Σ log(1 − χ_j(p) p^(−σ−i t_p)) − z_j| over the prime budget.
    pub log_residual: f64,
    pub tail_allowance: f64,
    /// Largest |E_j| seen across iterations (must stay below Σ p^(−2σ) < 1).
    pub e_max: f64,
}

/// E_j(θ) = Σ_{y<p≤P} [log(1 − x) + x] with x = χ_j(p) p^(−σ) e^(iθ_p); the
/// correction between linear sums and log-products.
fn correction_terms(
    chars: &[Character],
    sums: &ClassSums,
    theta: &ThetaAssignment,
) -> Result<(Vec<Complex64>, f64), SolveError> {
    let mut e = vec![Complex64::new(0.0, 0.0); chars.len()];
    for class in &sums.classes {
        for (&p, &wgt) in class.primes.iter().zip(&class.weights) {
            let th = theta.theta(p);
            let phase = Complex64::new(th.cos(), th.sin());
            for (j, chi) in chars.iter().enumerate() {
                let x = chi.eval(p) * wgt * phase;
                if x.norm() == 0.0 {
                    continue;
                }
                let factor = Complex64::new(1.0, 0.0) - x;
                if factor.norm() < 1e-14 {
                    return Err(SolveError::FactorSingular { p });
                }
                e[j] += factor.ln() + x;
            }
        }
    }
    let e_max = e.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok((e, e_max))
}

/// Σ_{y<p≤P} p^(−2σ), the rigorous bound on each |E_j|.
pub fn e_bound(sums: &ClassSums) -> f64 {
    sums.classes
        .iter()
        .flat_map(|c| c.weights.iter())
        .map(|w| w * w)
        .sum()
}

/// Drive the twisted Euler products to e^(z_j): iterate v ← z + E(θ(v)),
/// where θ(v) solves the linear system at targets v. On convergence
/// Π_{p>y} (1 − χ_j(p) p^(−σ−i t_p))^(−1) = exp(z_j) up to the reported
/// residual and tail.
pub fn solve_product_system(
    cfg: &SolverConfig,
    sums: &ClassSums,
    matrix: &CharacterMatrix,
    targets: &[Complex64],
) -> Result<ProductSolution, SolveError> {
    let chars = enumerate_characters(cfg.q);
    let phi = chars.len();
    let mut z = vec![Complex64::new(0.0, 0.0); phi];
    z[..targets.len()].copy_from_slice(targets);

    let bound = e_bound(sums);
    let mut e_max_seen = 0.0f64;
    for damping in [1.0f64, 0.5] {
        let mut v = z.clone();
        let mut discrepancy = f64::INFINITY;
        for iter in 0..cfg.max_iter {
            let sol = solve_phase_system(cfg, sums, matrix, &v)?;
            let (e, e_max) = correction_terms(&chars, sums, &sol.theta)?;
            debug_assert!(e_max <= bound + 1e-9, "E-bound violated: {e_max} > {bound}");
            e_max_seen = e_max_seen.max(e_max);
            let next: Vec<Complex64> = z
                .iter()
                .zip(&e)
                .zip(&v)
                .map(|((zj, ej), vj)| vj + damping * (zj + ej - vj))
                .collect();
            discrepancy = next
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            v = next;
            if discrepancy < cfg.fix_tol {
                let sol = solve_phase_system(cfg, sums, matrix, &v)?;
                // verify the log-products directly against the targets
                let mut log_residual = 0.0f64;
                for j in 0..phi {
                    let mut log_sum = Complex64::new(0.0, 0.0);
                    for class in &sums.classes {
                        for (&p, &wgt) in class.primes.iter().zip(&class.weights) {
                            let th = sol.theta.theta(p);
                            let x = chars[j].eval(p) * wgt * Complex64::new(th.cos(), th.sin());
                            if x.norm() > 0.0 {
                                log_sum += (Complex64::new(1.0, 0.0) - x).ln();
                            }
                        }
                    }
                    log_residual = log_residual.max((-log_sum - z[j]).norm());
                }
                let allowed = 10.0 * cfg.fix_tol + sums.tail_bound + sol.residual;
                if log_residual > allowed {
                    return Err(SolveError::ResidualTooLarge {
                        residual: log_residual,
                        allowed,
                    });
                }
                return Ok(ProductSolution {
                    theta: sol.theta,
                    iterations: iter + 1,
                    discrepancy,
                    log_residual,
                    tail_allowance: sums.tail_bound,
                    e_max: e_max_seen,
                });
            }
        }
        if damping == 0.5 {
            return Err(SolveError::NonConvergence { discrepancy });
        }
    }
    unreachable!()
}
