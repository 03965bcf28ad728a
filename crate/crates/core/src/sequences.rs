//! Periodic coefficient sequences and finite Dirichlet polynomials.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A q-periodic sequence a = (a_n), stored as one period a_1, …, a_q.
///
/// The central input object: it determines the Dirichlet series Σ a_n n^(−s)
/// and its meromorphic continuation.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSequence {
    values: Vec<Complex64>,
}

impl PeriodicSequence {
    pub fn new(values: Vec<Complex64>) -> PeriodicSequence {
        assert!(!values.is_empty(), "period must be at least 1");
        PeriodicSequence { values }
    }

    /// Real-valued convenience constructor.
    pub fn from_real(values: &[f64]) -> PeriodicSequence {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn period(&self) -> u64 {
        self.values.len() as u64
    }

    /// One period a_1, …, a_q.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// a_n for any n ≥ 1.
    pub fn value_at(&self, n: u64) -> Complex64 {
        let q = self.period();
        let r = n % q;
        let idx = if r == 0 { q - 1 } else { r - 1 };
        self.values[idx as usize]
    }

    /// Σ_{j=1}^q a_j.
    pub fn period_sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// Σ_{j=1}^q |a_j|.
    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm() == 0.0)
    }

    /// Index of the first nonzero coefficient (1-based), if any.
    pub fn first_nonzero(&self) -> Option<u64> {
        self.values
            .iter()
            .position(|v| v.norm() != 0.0)
            .map(|i| i as u64 + 1)
    }

    /// The same sequence re-listed with period `m` (requires q | m).
    pub fn with_period(&self, m: u64) -> PeriodicSequence {
        assert!(m % self.period() == 0, "new period must be a multiple");
        PeriodicSequence::new((1..=m).map(|n| self.value_at(n)).collect())
    }

    /// Componentwise α·a + β·b, at the lcm of the two periods.
    pub fn linear_combination(
        alpha: Complex64,
        a: &PeriodicSequence,
        beta: Complex64,
        b: &PeriodicSequence,
    ) -> PeriodicSequence {
        let m = crate::arith::lcm(a.period(), b.period());
        PeriodicSequence::new(
            (1..=m)
                .map(|n| alpha * a.value_at(n) + beta * b.value_at(n))
                .collect(),
        )
    }

    pub fn conj(&self) -> PeriodicSequence {
        PeriodicSequence::new(self.values.iter().map(|v| v.conj()).collect())
    }

    pub fn scale(&self, c: Complex64) -> PeriodicSequence {
        PeriodicSequence::new(self.values.iter().map(|v| c * v).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct SequenceWire {
    q: u64,
    values: Vec<[f64; 2]>,
}

impl Serialize for PeriodicSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SequenceWire {
            q: self.period(),
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodicSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = SequenceWire::deserialize(d)?;
        if wire.q == 0 {
            return Err(serde::de::Error::custom("period q must be positive"));
        }
        if wire.q as usize != wire.values.len() {
            return Err(serde::de::Error::custom(format!(
                "q = {} does not match {} values",
                wire.q,
                wire.values.len()
            )));
        }
        Ok(PeriodicSequence::new(
            wire.values
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        ))
    }
}

/// A finitely supported Dirichlet polynomial Σ c_k k^(−s).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DirichletPolynomial {
    coeffs: BTreeMap<u64, Complex64>,
}

impl DirichletPolynomial {
    pub fn new() -> DirichletPolynomial {
        DirichletPolynomial {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_pairs(pairs: &[(u64, Complex64)]) -> DirichletPolynomial {
        let mut p = Self::new();
        for &(k, c) in pairs {
            p.add_term(k, c);
        }
        p
    }

    /// The constant polynomial c·1^(−s).
    pub fn constant(c: Complex64) -> DirichletPolynomial {
        Self::from_pairs(&[(1, c)])
    }

    pub fn one() -> DirichletPolynomial {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// Accumulate c into the k-th coefficient, dropping exact zeros.
    pub fn add_term(&mut self, k: u64, c: Complex64) {
        assert!(k >= 1, "Dirichlet polynomial indices start at 1");
        let entry = self.coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() == 0.0 {
            self.coeffs.remove(&k);
        }
    }

    pub fn coefficient(&self, k: u64) -> Complex64 {
        self.coeffs
            .get(&k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Support and coefficients in increasing k order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn support(&self) -> Vec<u64> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> DirichletPolynomial {
        DirichletPolynomial {
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, c * v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_indexing() {
        let a = PeriodicSequence::from_real(&[1.0, 0.0, -1.0, 0.0]);
        assert_eq!(a.period(), 4);
        assert_eq!(a.value_at(1).re, 1.0);
        assert_eq!(a.value_at(3).re, -1.0);
        assert_eq!(a.value_at(7).re, -1.0);
        assert_eq!(a.value_at(8).re, 0.0);
        assert_eq!(a.first_nonzero(), Some(1));
    }

    #[test]
    fn sequence_json_roundtrip_and_validation() {
        let a = PeriodicSequence::from_real(&[1.0, 0.0]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"q":2,"values":[[1.0,0.0],[0.0,0.0]]}"#);
        let b: PeriodicSequence = serde_json::from_str(&json).unwrap();
        assert_eq!(a, b);

        let bad: Result<PeriodicSequence, _> =
            serde_json::from_str(r#"{"q":3,"values":[[1.0,0.0]]}"#);
        assert!(bad.is_err());
        let zero: Result<PeriodicSequence, _> = serde_json::from_str(r#"{"q":0,"values":[]}"#);
        assert!(zero.is_err());
    }

    #[test]
    fn polynomial_terms_drop_zeros() {
        let mut p = DirichletPolynomial::one();
        p.add_term(2, Complex64::new(-1.0, 0.0));
        p.add_term(2, Complex64::new(1.0, 0.0));
        assert_eq!(p.support(), vec![1]);
    }
}
