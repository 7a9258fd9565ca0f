//! Exact computer algebra for braided exterior algebras of quantum sl(N).
//!
//! The library works over the rational function field Q(s, u), where `s`
//! stands for the N-th root q^{1/N} of the deformation parameter q and `u`
//! is a free parameter (the twist λ, or the Clifford constant c). On top of
//! that field it provides:
//!
//! * sparse exact linear algebra (echelon forms, kernels, subspace lattice),
//! * the explicit actions of E_i, F_i, K_i on the fundamental module V of
//!   quantum sl(N), its dual V*, and tensor powers of H = V ⊕ V*,
//! * the braidings on V⊗V, V*⊗V*, V*⊗V and the rescaled braiding σ_λ on
//!   H⊗H together with its symmetrizers,
//! * the quadratic algebras Λ_q(V), Λ_q(V*) and the twisted exterior
//!   algebra of H, with graded dimensions and degree-3 intersections,
//! * the classification of their quadratic-constant PBW-deformations by
//!   exact solution of the β-constraint system, including the search for
//!   the special twist locus,
//! * the quantum Clifford algebra Cl_q(c) as a confluent rewriting system,
//!   with its bilinear form, rescaling isomorphism and spinor representation.
//!
//! Everything is exact; there is no floating point anywhere.

pub mod braiding;
pub mod clifford;
pub mod linalg;
pub mod pbw;
pub mod quadratic;
// pub mod report;
pub mod scalar;
pub mod uqact;

pub use scalar::{MPoly, Rat, Scalar};
