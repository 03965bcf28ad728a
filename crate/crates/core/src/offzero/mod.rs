//! Constructive zero search in Re s > 1 for combinations Σ P_ψ(s) L_ψ(s).
//!
//! The route: solve the per-residue-class phase system so the twisted prime
//! sums Σ_{p>y} χ_j(p) p^(−σ−i t_p) hit prescribed targets, correct for the
//! log-versus-linear mismatch with a fixed-point iteration so the twisted
//! Euler products hit prescribed values, search for a real shift t aligning
//! finitely many prime phases, and certify a zero of the shifted function on
//! a circle by Rouché's theorem.

mod pipeline;
mod solver;

pub use pipeline::{
    build_targets, choose_circle, f_sum, find_t, g_components, g_eval, g_sum, rouche_certify,
    certified_zero_search, Circle, DemoFailure, DemoReport, DemoStage, GComponent, RoucheCertificate,
};
pub use solver::{
    block_split, class_sums, e_bound, solve_phase_system, solve_product_system, solve_two_angle,
    BlockSplit, ClassSums, PhaseSolution, ProductSolution, SolveError, SolverConfig,
    ThetaAssignment,
};
