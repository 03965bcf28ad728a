//! Integer arithmetic underpinning the character machinery: factorization,
//! prime sieves, and the generator decomposition of (ℤ/qℤ)*.
//!
//! (ℤ/qℤ)* is decomposed by CRT over the prime powers dividing q.  For an odd
//! prime power p^e the unit group is cyclic, generated by the smallest
//! primitive root.  For 2^e with e ≥ 3 it is ⟨−1⟩ × ⟨5⟩ of orders 2 and
//! 2^(e−2); for 2^2 it is ⟨−1⟩; for 2^1 it is trivial.

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple. Panics on overflow.
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// base^exp mod m, with m ≥ 1.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut b: u128 = (base % m) as u128;
    let m = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Prime factorization by trial division, as (prime, exponent) pairs in
/// increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of n, increasing.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// All divisors of n, sorted increasing.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Primes up to `limit` inclusive, by a sieve of Eratosthenes.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Smallest primitive root modulo an odd prime power pe = p^e.
///
/// Candidates g = 2, 3, … are tested by checking g^(φ/r) ≢ 1 for every prime
/// r dividing φ(p^e).
pub fn smallest_primitive_root(pe: u64, p: u64) -> u64 {
    debug_assert!(p % 2 == 1 && pe % p == 0);
    let phi = pe / p * (p - 1);
    let factors = prime_divisors(phi);
    'outer: for g in 2..pe {
        if gcd(g, pe) != 1 {
            continue;
        }
        for &r in &factors {
            if mod_pow(g, phi / r, pe) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("odd prime power {pe} has a primitive root");
}

/// One cyclic factor of (ℤ/qℤ)*: a generator of known order together with a
/// discrete-log table for the residues modulo its prime power.
#[derive(Debug, Clone)]
pub struct UnitFactor {
    /// Prime power p^e this factor lives in.
    pub prime_power: u64,
    /// Prime p.
    pub prime: u64,
    /// Generator as a residue modulo `prime_power`.
    pub generator: u64,
    /// Order of the generator.
    pub order: u64,
    /// dlog[n mod p^e] = k with generator^k ≡ n, or `u32::MAX` off the
    /// subgroup / on non-units. For the ⟨5⟩ factor of 2^e the table holds the
    /// 5-exponent of ±n, whichever is a power of 5.
    dlog: Vec<u32>,
}

/// Generator decomposition of (ℤ/qℤ)*.
///
/// Factors are ordered by increasing prime, with the 2-part contributing
/// ⟨−1⟩ before ⟨5⟩ when both are present. Character labels index exponents
/// against exactly this ordering.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    pub modulus: u64,
    /// Cyclic factors with order > 1. Empty for q ≤ 2.
    pub factors: Vec<UnitFactor>,
    /// lcm of the factor orders (the exponent of the group); 1 for q ≤ 2.
    pub exponent: u64,
}

/// Largest modulus for which value tables are built. Above this the O(q)
/// tables stop being desk-scale.
pub const MAX_MODULUS: u64 = 1_000_000;

impl UnitGroup {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1, "modulus must be positive");
        assert!(q <= MAX_MODULUS, "modulus {q} exceeds the {MAX_MODULUS} cap");
        let mut factors = Vec::new();
        for (p, e) in factorize(q) {
            let pe = p.pow(e);
            if p == 2 {
                match e {
                    1 => {}
                    2 => {
                        // (ℤ/4ℤ)* = ⟨3⟩, order 2.
                        let mut dlog = vec![u32::MAX; 4];
                        dlog[1] = 0;
                        dlog[3] = 1;
                        factors.push(UnitFactor {
                            prime_power: 4,
                            prime: 2,
                            generator: 3,
                            order: 2,
                            dlog,
                        });
                    }
                    _ => {
                        // (ℤ/2^eℤ)* = ⟨−1⟩ × ⟨5⟩.
                        let half = 2u64.pow(e - 2);
                        let mut dlog_sign = vec![u32::MAX; pe as usize];
                        let mut dlog_five = vec![u32::MAX; pe as usize];
                        let mut v: u64 = 1;
                        for k in 0..half {
                            dlog_sign[v as usize] = 0;
                            dlog_five[v as usize] = k as u32;
                            let w = pe - v; // −v
                            dlog_sign[w as usize] = 1;
                            dlog_five[w as usize] = k as u32;
                            v = v * 5 % pe;
                        }
                        factors.push(UnitFactor {
                            prime_power: pe,
                            prime: 2,
                            generator: pe - 1,
                            order: 2,
                            dlog: dlog_sign,
                        });
                        factors.push(UnitFactor {
                            prime_power: pe,
                            prime: 2,
                            generator: 5,
                            order: half,
                            dlog: dlog_five,
                        });
                    }
                }
            } else {
                let g = smallest_primitive_root(pe, p);
                let order = pe / p * (p - 1);
                let mut dlog = vec![u32::MAX; pe as usize];
                let mut v: u64 = 1;
                for k in 0..order {
                    dlog[v as usize] = k as u32;
                    v = v * g % pe;
                }
                factors.push(UnitFactor {
                    prime_power: pe,
                    prime: p,
                    generator: g,
                    order,
                    dlog,
                });
            }
        }
        let exponent = factors.iter().fold(1u64, |acc, f| lcm(acc, f.order));
        UnitGroup {
            modulus: q,
            factors,
            exponent,
        }
    }

    /// φ(q) = product of factor orders (times 1 for the trivial part).
    pub fn order(&self) -> u64 {
        self.factors.iter().map(|f| f.order).product()
    }

    /// Discrete logs of a residue coprime to q, one entry per factor.
    /// Returns None when gcd(n, q) > 1.
    pub fn dlogs(&self, n: u64) -> Option<Vec<u64>> {
        if gcd(n % self.modulus.max(1), self.modulus) != 1 && self.modulus > 1 {
            return None;
        }
        let mut out = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let r = (n % f.prime_power) as usize;
            let k = f.dlog[r];
            if k == u32::MAX {
                return None;
            }
            out.push(k as u64);
        }
        Some(out)
    }

    /// Lift of the i-th factor's generator to a residue mod q that is ≡ 1 in
    /// every other factor (CRT).
    pub fn generator_lift(&self, i: usize) -> u64 {
        let f = &self.factors[i];
        // Find n ≡ f.generator (mod f.prime_power), n ≡ 1 (mod q / p^e),
        // except that the two factors of the 2-part share a prime power:
        // lift ⟨−1⟩ as (−1, 1) and ⟨5⟩ as (1, 5) inside the 2-part.
        let q = self.modulus;
        let pe = f.prime_power;
        let rest = q / pe;
        // target residue modulo pe
        let target = f.generator;
        let mut n = target;
        while n % pe != target || (rest > 1 && n % rest != 1) {
            n += pe;
            if n > q {
                n -= q;
            }
        }
        n % q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_lcm_phi() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(lcm(4, 6), 12);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(24), 8);
        assert_eq!(euler_phi(97), 96);
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let ps = sieve_primes(200);
        assert_eq!(ps.len(), 46);
        assert_eq!(ps[0], 2);
        assert_eq!(*ps.last().unwrap(), 199);
    }

    #[test]
    fn primitive_roots_small() {
        assert_eq!(smallest_primitive_root(3, 3), 2);
        assert_eq!(smallest_primitive_root(9, 3), 2);
        assert_eq!(smallest_primitive_root(5, 5), 2);
        assert_eq!(smallest_primitive_root(7, 7), 3);
        assert_eq!(smallest_primitive_root(25, 5), 2);
    }

    #[test]
    fn unit_group_orders() {
        for q in 1..=60u64 {
            let g = UnitGroup::new(q);
            assert_eq!(g.order(), euler_phi(q), "q={q}");
        }
    }

    #[test]
    fn unit_group_dlogs_roundtrip() {
        for q in [1u64, 2, 3, 4, 8, 12, 16, 24, 45] {
            let g = UnitGroup::new(q);
            for n in 1..=q {
                if gcd(n, q) != 1 {
                    assert!(g.dlogs(n).is_none() || q == 1);
                    continue;
                }
                let logs = g.dlogs(n).expect("unit has dlogs");
                // Reconstruct n from generator lifts.
                let mut m: u128 = 1;
                for (i, &k) in logs.iter().enumerate() {
                    m = m * mod_pow(g.generator_lift(i), k, q) as u128 % q.max(1) as u128;
                }
                if q > 1 {
                    assert_eq!(m as u64, n % q, "q={q} n={n}");
                }
            }
        }
    }
}
