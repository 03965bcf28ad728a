//! Dirichlet characters modulo q with exact root-of-unity arithmetic.
//!
//! A character is identified by its label: the tuple of exponents against the
//! fixed generator decomposition of (ℤ/qℤ)* (CRT over prime powers, smallest
//! primitive root for odd prime powers, ⟨−1⟩ then ⟨5⟩ for 2^e with e ≥ 3).
//! Values are stored as complex numbers but every value is derived from an
//! exact phase numerator over the group exponent, so orthogonality and
//! induction identities hold to machine precision and conductors are computed
//! exactly from labels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, euler_phi, gcd, UnitGroup};

/// e^(2πi·num/den) with exact handling of the fourth roots of unity.
fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let g = gcd(num, den);
    let (n, d) = (num / g, den / g);
    match d {
        1 => Complex64::new(1.0, 0.0),
        2 => Complex64::new(-1.0, 0.0),
        4 => {
            if n == 1 {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, -1.0)
            }
        }
        _ => {
            let angle = 2.0 * std::f64::consts::PI * (n as f64) / (d as f64);
            Complex64::new(angle.cos(), angle.sin())
        }
    }
}

/// Metadata of one cyclic factor, kept with each character so conductors and
/// inducers can be computed without rebuilding dlog tables.
#[derive(Debug, Clone, PartialEq, Eq)]
struct FactorMeta {
    prime: u64,
    prime_power: u64,
    order: u64,
}

/// A Dirichlet character modulo q.
///
/// `values[i]` is χ(i+1); the value is zero exactly on residues sharing a
/// factor with q. `label` lists the exponents on the canonical generators.
#[derive(Debug, Clone)]
pub struct Character {
    modulus: u64,
    label: Vec<u64>,
    values: Vec<Complex64>,
    /// Exact phase numerators over `phase_den`; None on non-units.
    phases: Vec<Option<u64>>,
    phase_den: u64,
    factors: Vec<FactorMeta>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.label == other.label
    }
}
impl Eq for Character {}

impl Character {
    /// Build the character with the given exponent label.
    pub fn from_label(q: u64, label: &[u64]) -> Character {
        let group = UnitGroup::new(q);
        assert_eq!(
            label.len(),
            group.factors.len(),
            "label length must match the generator decomposition of (Z/{q}Z)*"
        );
        let dlogs: Vec<Option<Vec<u64>>> = (1..=q).map(|n| group.dlogs(n)).collect();
        Self::from_label_with(&group, &dlogs, label)
    }

    fn from_label_with(group: &UnitGroup, dlogs: &[Option<Vec<u64>>], label: &[u64]) -> Character {
        let q = group.modulus;
        let den = group.exponent;
        let mut values = Vec::with_capacity(q as usize);
        let mut phases = Vec::with_capacity(q as usize);
        for logs in dlogs.iter() {
            match logs {
                None => {
                    values.push(Complex64::new(0.0, 0.0));
                    phases.push(None);
                }
                Some(ls) => {
                    let mut num: u64 = 0;
                    for (i, (&e, &l)) in label.iter().zip(ls.iter()).enumerate() {
                        let d = group.factors[i].order;
                        num = (num + (e as u128 * l as u128 % d as u128) as u64 * (den / d)) % den;
                    }
                    values.push(root_of_unity(num, den));
                    phases.push(Some(num));
                }
            }
        }
        Character {
            modulus: q,
            label: label.to_vec(),
            values,
            phases,
            phase_den: den,
            factors: group
                .factors
                .iter()
                .map(|f| FactorMeta {
                    prime: f.prime,
                    prime_power: f.prime_power,
                    order: f.order,
                })
                .collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn label(&self) -> &[u64] {
        &self.label
    }

    /// Value table χ(1), …, χ(q).
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// χ(n) for any n ≥ 1, by periodicity.
    pub fn eval(&self, n: u64) -> Complex64 {
        let r = n % self.modulus;
        let idx = if r == 0 { self.modulus - 1 } else { r - 1 };
        self.values[idx as usize]
    }

    /// Exact phase of χ(n) as (numerator, denominator), None on non-units.
    pub fn phase(&self, n: u64) -> Option<(u64, u64)> {
        let r = n % self.modulus;
        let idx = if r == 0 { self.modulus - 1 } else { r - 1 };
        self.phases[idx as usize].map(|num| (num, self.phase_den))
    }

    pub fn is_principal(&self) -> bool {
        self.label.iter().all(|&e| e == 0)
    }

    /// The real characters are exactly those with values in {−1, 0, 1}.
    pub fn is_real(&self) -> bool {
        self.label
            .iter()
            .zip(&self.factors)
            .all(|(&e, f)| (2 * e) % f.order == 0)
    }
}

/// Conductor and primitive inducer of a character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveDescriptor {
    pub conductor: u64,
    pub inducer: Character,
}

/// All φ(q) characters mod q, principal first, ordered lexicographically by
/// exponent label. Deterministic across runs.
pub fn enumerate_characters(q: u64) -> Vec<Character> {
    assert!(q >= 1, "modulus must be positive");
    let group = UnitGroup::new(q);
    let dlogs: Vec<Option<Vec<u64>>> = (1..=q).map(|n| group.dlogs(n)).collect();
    let orders: Vec<u64> = group.factors.iter().map(|f| f.order).collect();
    let mut label = vec![0u64; orders.len()];
    let mut out = Vec::with_capacity(group.order() as usize);
    loop {
        out.push(Character::from_label_with(&group, &dlogs, &label));
        // lexicographic successor: increment the last digit, carrying left
        let mut i = label.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            label[i] += 1;
            if label[i] < orders[i] {
                break;
            }
            label[i] = 0;
        }
    }
}

/// 2-adic valuation.
fn v2(mut n: u64) -> u32 {
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    v
}

/// p-adic valuation.
fn vp(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Conductor: the smallest m | q such that χ is induced by a character mod m.
///
/// Computed exactly from the label, factor by factor. For an odd p^e with
/// exponent c ≠ 0 on a generator of order d, the local conductor is
/// p^(v_p(ord χ_p)+1); for the 2-part the ⟨5⟩ exponent decides.
pub fn conductor(chi: &Character) -> u64 {
    let mut m = 1u64;
    let mut i = 0;
    while i < chi.factors.len() {
        let f = &chi.factors[i];
        if f.prime == 2 && i + 1 < chi.factors.len() && chi.factors[i + 1].prime == 2 {
            // 2^e, e ≥ 3: exponents (a, b) on (−1, 5).
            let a = chi.label[i];
            let b = chi.label[i + 1];
            let e = v2(f.prime_power);
            if b == 0 {
                if a != 0 {
                    m *= 4;
                }
            } else {
                m *= 2u64.pow(e - v2(b));
            }
            i += 2;
        } else if f.prime == 2 {
            // 2^2: single ⟨−1⟩ factor.
            if chi.label[i] != 0 {
                m *= 4;
            }
            i += 1;
        } else {
            let c = chi.label[i];
            if c != 0 {
                let d = f.order;
                let ord = d / gcd(d, c);
                m *= f.prime.pow(vp(ord, f.prime) + 1);
            }
            i += 1;
        }
    }
    m
}

/// The primitive character that induces χ, together with its conductor.
pub fn primitive_inducer(chi: &Character) -> PrimitiveDescriptor {
    let m = conductor(chi);
    let q = chi.modulus;
    if m == q {
        return PrimitiveDescriptor {
            conductor: m,
            inducer: chi.clone(),
        };
    }
    let group_m = UnitGroup::new(m);
    let mut label = Vec::with_capacity(group_m.factors.len());
    for i in 0..group_m.factors.len() {
        let gen = group_m.generator_lift(i);
        // lift to a residue coprime to q
        let mut n = gen;
        while gcd(n, q) != 1 {
            n += m;
        }
        let (num, den) = chi.phase(n).expect("lift is coprime to q");
        let d = group_m.factors[i].order;
        let prod = num as u128 * d as u128;
        debug_assert_eq!(prod % den as u128, 0, "induced exponent must be integral");
        label.push((prod / den as u128 % d as u128) as u64);
    }
    PrimitiveDescriptor {
        conductor: m,
        inducer: Character::from_label(m, &label),
    }
}

/// Character mod q induced by ψ (requires modulus(ψ) | q): ψ on residues
/// coprime to q, zero elsewhere.
pub fn induce(psi: &Character, q: u64) -> Character {
    assert!(
        q % psi.modulus == 0,
        "induction requires modulus {} | {q}",
        psi.modulus
    );
    let group = UnitGroup::new(q);
    let mut label = Vec::with_capacity(group.factors.len());
    for i in 0..group.factors.len() {
        let gen = group.generator_lift(i);
        let (num, den) = psi.phase(gen).expect("generator lift is a unit");
        let d = group.factors[i].order;
        let prod = num as u128 * d as u128;
        debug_assert_eq!(prod % den as u128, 0, "induced exponent must be integral");
        label.push((prod / den as u128 % d as u128) as u64);
    }
    Character::from_label(q, &label)
}

/// The unitary matrix C = (χ_j(a)) with rows in `enumerate_characters` order
/// and columns over the coprime residues a, ascending. C·C* = φ(q)·I, so
/// C⁻¹ = C*/φ(q).
#[derive(Debug, Clone)]
pub struct CharacterMatrix {
    pub modulus: u64,
    /// Coprime residues indexing the columns, ascending.
    pub residues: Vec<u64>,
    /// Row-major entries, rows indexed like `enumerate_characters`.
    pub entries: Vec<Vec<Complex64>>,
    /// ‖C⁻¹‖∞ computed from C*/φ(q); equals 1 since all entries are roots of
    /// unity of modulus 1/φ(q).
    pub inverse_inf_norm: f64,
}

impl CharacterMatrix {
    /// w = C⁻¹ z = C* z / φ(q).
    pub fn apply_inverse(&self, z: &[Complex64]) -> Vec<Complex64> {
        let phi = self.residues.len();
        assert_eq!(z.len(), phi);
        (0..phi)
            .map(|a| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, zj) in z.iter().enumerate() {
                    acc += self.entries[j][a].conj() * zj;
                }
                acc / phi as f64
            })
            .collect()
    }

    /// z = C w.
    pub fn apply(&self, w: &[Complex64]) -> Vec<Complex64> {
        let phi = self.residues.len();
        assert_eq!(w.len(), phi);
        self.entries
            .iter()
            .map(|row| row.iter().zip(w).map(|(c, wa)| c * wa).sum())
            .collect()
    }
}

/// Build the character matrix mod q.
pub fn character_matrix(q: u64) -> CharacterMatrix {
    let chars = enumerate_characters(q);
    let residues: Vec<u64> = (1..=q).filter(|&a| gcd(a, q) == 1 || q == 1).collect();
    let entries: Vec<Vec<Complex64>> = chars
        .iter()
        .map(|chi| residues.iter().map(|&a| chi.eval(a)).collect())
        .collect();
    let phi = residues.len() as f64;
    let inverse_inf_norm = (0..residues.len())
        .map(|a| entries.iter().map(|row| row[a].norm() / phi).sum::<f64>())
        .fold(0.0f64, f64::max);
    CharacterMatrix {
        modulus: q,
        residues,
        entries,
        inverse_inf_norm,
    }
}

/// Divisors d of q paired with the characters mod q/d; the index set of the
/// orthogonal basis of the q-periodic sequences.
pub fn divisor_character_pairs(q: u64) -> Vec<(u64, Vec<Character>)> {
    divisors(q)
        .into_iter()
        .map(|d| (d, enumerate_characters(q / d)))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct CharacterWire {
    modulus: u64,
    label: Vec<u64>,
    values: Vec<[f64; 2]>,
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CharacterWire {
            modulus: self.modulus,
            label: self.label.clone(),
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = CharacterWire::deserialize(d)?;
        let chi = Character::from_label(wire.modulus, &wire.label);
        Ok(chi)
    }
}

/// Number of characters mod q (φ(q)); exposed for sanity checks.
pub fn character_count(q: u64) -> u64 {
    euler_phi(q)
}
