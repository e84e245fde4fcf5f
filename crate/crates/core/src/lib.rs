//! Exact computation of Morita-equivalence invariants for noncommutative
//! tori `A_θ` and twisted group C*-algebras `C*(G; σ)` of finitely
//! generated abelian groups.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactlin`]: exact scalars in `Q(√d)` and integer lattice algorithms.
//! - [`hyperlattice`]: the hyperbolic form on `Z^{2n}`, compatible bases and
//!   transversals to isotropic subspaces.
//! - [`reduction`]: `O(n,n|Z)` elements, their partial action on skew
//!   matrices, and the reduction `θ ↦ diag(0, θ̃)` with `θ̃` nondegenerate.
//! - [`invariants`]: centers, Pfaffian trace ranges and the Morita decision for tori.
//! - [`twisted`]: the same invariants for bicharacters on `Z^r ⊕ finite`.
//! - [`batch`]: data-parallel drivers over many inputs.
//!
//! All arithmetic is exact; there are no tolerances anywhere.

pub mod batch;
pub mod exactlin;
pub mod hyperlattice;
pub mod invariants;
pub mod reduction;
pub mod twisted;

pub use exactlin::{IntLattice, IntMatrix, Scalar, ScalarMatrix};
pub use invariants::{SearchBounds, TraceRange, Verdict};
pub use reduction::{CanonicalForm, OnnElement, SkewMatrix};
pub use twisted::{Bicharacter, FgGroup};
