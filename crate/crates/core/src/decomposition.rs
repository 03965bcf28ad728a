//! Orthogonal structure of the q-periodic sequences.
//!
//! For each divisor d of q and character χ mod q/d, the arithmetic function
//! χ̃(n) = χ(n/d) (zero unless d | n) is q-periodic, and the q functions χ̃
//! form an orthogonal basis under ⟨a, b⟩ = Σ_{n=1}^q a_n·conj(b_n), with
//! ‖χ̃‖² = φ(q/d). Regrouping the basis by the primitive character ψ inducing
//! χ and expanding
//!
//!   L_χ(s)/d^s = L_ψ(s) · d^(−s) Π_{p | q/(dm)} (1 − ψ(p) p^(−s)),   m = cond ψ,
//!
//! writes every F_a uniquely as Σ_ψ P_ψ(s) L_ψ(s) with P_ψ a Dirichlet
//! polynomial supported on the divisors of q/m.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::{divisors, euler_phi, prime_divisors};
use crate::characters::{enumerate_characters, primitive_inducer, Character, PrimitiveDescriptor};
use crate::sequences::{DirichletPolynomial, PeriodicSequence};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DecompError {
    #[error("the zero sequence has no primitive-component structure")]
    DegenerateInput,
}

/// One basis function χ̃ for (d, χ mod q/d).
#[derive(Debug, Clone)]
pub struct BasisElement {
    pub d: u64,
    /// Character modulo q/d.
    pub chi: Character,
    /// The q-periodic value table of χ̃.
    pub sequence: PeriodicSequence,
    /// ‖χ̃‖² = φ(q/d), exact.
    pub norm_sq: f64,
}

/// Coefficients of a sequence against the χ̃ basis, keyed by (d, label of χ).
#[derive(Debug, Clone)]
pub struct BasisCoefficients {
    pub q: u64,
    pub entries: Vec<(u64, Vec<u64>, Complex64)>,
}

impl BasisCoefficients {
    pub fn coefficient(&self, d: u64, label: &[u64]) -> Complex64 {
        self.entries
            .iter()
            .find(|(dd, ll, _)| *dd == d && ll == label)
            .map(|&(_, _, c)| c)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// A component (ψ, P_ψ) of the decomposition F_a = Σ P_ψ L_ψ.
#[derive(Debug, Clone)]
pub struct PrimitiveComponent {
    pub psi: PrimitiveDescriptor,
    pub poly: DirichletPolynomial,
}

/// The χ̃ basis of the q-periodic sequences: exactly q elements, pairwise
/// orthogonal, ordered by increasing d then character label.
pub fn tilde_basis(q: u64) -> Vec<BasisElement> {
    assert!(q >= 1);
    let mut out = Vec::with_capacity(q as usize);
    for d in divisors(q) {
        for chi in enumerate_characters(q / d) {
            let values: Vec<Complex64> = (1..=q)
                .map(|n| {
                    if n % d == 0 {
                        chi.eval(n / d)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            out.push(BasisElement {
                d,
                sequence: PeriodicSequence::new(values),
                norm_sq: euler_phi(q / d) as f64,
                chi,
            });
        }
    }
    debug_assert_eq!(out.len() as u64, q);
    out
}

/// Orthogonal projection: coeff(d, χ) = ⟨a, χ̃⟩ / φ(q/d).
pub fn project(a: &PeriodicSequence) -> BasisCoefficients {
    let q = a.period();
    let entries = tilde_basis(q)
        .into_iter()
        .map(|el| {
            let mut inner = Complex64::new(0.0, 0.0);
            for m in 1..=(q / el.d) {
                inner += a.value_at(el.d * m) * el.chi.eval(m).conj();
            }
            (el.d, el.chi.label().to_vec(), inner / el.norm_sq)
        })
        .collect();
    BasisCoefficients { q, entries }
}

/// The unique decomposition F_a = Σ_ψ P_ψ L_ψ over the primitive characters
/// inducing characters mod q.
///
/// Each basis coefficient at (d, χ) contributes
/// coeff · d^(−s) Π_{p | q/(d·m)} (1 − ψ(p) p^(−s)) to P_ψ, expanded into a
/// polynomial supported on divisors of q/m. Components are sorted by
/// (conductor, label); identically zero polynomials are dropped.
pub fn primitive_components(a: &PeriodicSequence) -> Vec<PrimitiveComponent> {
    let q = a.period();
    let coeffs = project(a);
    let mut grouped: BTreeMap<(u64, Vec<u64>), (PrimitiveDescriptor, DirichletPolynomial)> =
        BTreeMap::new();
    for el in tilde_basis(q) {
        let c = coeffs.coefficient(el.d, el.chi.label());
        if c.norm() == 0.0 {
            continue;
        }
        let desc = primitive_inducer(&el.chi);
        let m = desc.conductor;
        // expand c · d^(−s) Π_{p | q/(dm)} (1 − ψ(p) p^(−s))
        let mut poly = DirichletPolynomial::from_pairs(&[(el.d, c)]);
        for p in prime_divisors(q / (el.d * m)) {
            let psi_p = desc.inducer.eval(p);
            let mut next = poly.clone();
            for (k, ck) in poly.terms() {
                next.add_term(k * p, -psi_p * ck);
            }
            poly = next;
        }
        let key = (m, desc.inducer.label().to_vec());
        let entry = grouped
            .entry(key)
            .or_insert_with(|| (desc, DirichletPolynomial::new()));
        for (k, ck) in poly.terms() {
            entry.1.add_term(k, ck);
        }
    }
    grouped
        .into_values()
        .filter(|(_, poly)| !poly.is_empty())
        .map(|(psi, poly)| PrimitiveComponent { psi, poly })
        .collect()
}

/// Whether F_a lies in the subspace spanned by L_ψ(s)/d^s, i.e. every other
/// primitive component is below `tol` relative to the largest coefficient.
pub fn membership(
    a: &PeriodicSequence,
    psi: &PrimitiveDescriptor,
    tol: f64,
) -> Result<bool, DecompError> {
    if a.is_zero() {
        return Err(DecompError::DegenerateInput);
    }
    let comps = primitive_components(a);
    let max_overall = comps
        .iter()
        .map(|c| c.poly.max_coeff_norm())
        .fold(0.0, f64::max);
    Ok(comps.iter().all(|c| {
        c.psi == *psi || c.poly.max_coeff_norm() < tol * max_overall
    }))
}

/// Coefficient sequence of Σ P_ψ(s) L_ψ(s), listed with period q.
///
/// The n-th series coefficient is Σ_ψ Σ_{k | n} c_{ψ,k} ψ(n/k); it is
/// q-periodic whenever every support index divides q/cond(ψ).
pub fn reconstruct(q: u64, components: &[PrimitiveComponent]) -> PeriodicSequence {
    let values: Vec<Complex64> = (1..=q)
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            for comp in components {
                for (k, ck) in comp.poly.terms() {
                    if n % k == 0 {
                        acc += ck * comp.psi.inducer.eval(n / k);
                    }
                }
            }
            acc
        })
        .collect();
    PeriodicSequence::new(values)
}
