//! Dirichlet series with periodic coefficients.
//!
//! A q-periodic sequence a = (a_n) determines the series Σ a_n n^(−s), whose
//! continuation F_a is meromorphic with at most a simple pole at s = 1. This
//! crate provides:
//!
//! - exact Dirichlet character arithmetic mod q ([`characters`]),
//! - numerical continuation of F_a, Hurwitz zeta, and L-functions ([`eval`]),
//! - the orthogonal character-basis decomposition of the space of q-periodic
//!   sequences and its regrouping by primitive character ([`decomposition`]),
//! - rectangle zero counting by the argument principle, zero-density tables
//!   and second-moment diagnostics ([`counting`]),
//! - the constructive search for zeros in Re s > 1 of combinations
//!   Σ P_ψ(s) L_ψ(s): per-class phase solvers, the fixed-point correction,
//!   phase alignment in t, and Rouché certification ([`offzero`]).

pub mod arith;
pub mod characters;
pub mod counting;
pub mod decomposition;
pub mod eval;
pub mod offzero;
pub mod sequences;

pub use characters::{
    character_matrix, conductor, enumerate_characters, induce, primitive_inducer, Character,
    CharacterMatrix, PrimitiveDescriptor,
};
pub use counting::{
    count_zeros, density_table, distinct_zeros, second_moment, halfplane_ratio, winding_number,
    CountError, DensityRow, MomentResult, RatioResult, Rectangle, ZeroReport,
};
pub use decomposition::{
    membership, primitive_components, project, reconstruct, tilde_basis, BasisCoefficients,
    BasisElement, DecompError, PrimitiveComponent,
};
pub use eval::{
    dirichlet_poly_eval, euler_tail_eval, f_eval, hurwitz_zeta, hurwitz_zeta_params, l_function,
    residue_at_one, twisted_poly_eval, EvalError, EvalOptions,
};
pub use sequences::{DirichletPolynomial, PeriodicSequence};
