//! Morita invariants of noncommutative tori: the degeneracy subgroup (center),
//! Pfaffian trace ranges, comparison of ranges up to positive scaling, and the
//! resulting equivalence decision.

mod decide;
mod pfaffian;
mod trace_range;

pub use decide::{
    k_group_ranks, lattices_equal_up_to_scaling, morita_equivalent, morita_equivalent_with, ordered_k0_isomorphic,
    range_equal_up_to_scaling, range_equal_up_to_scaling_with, Reason, SearchBounds, Verdict,
};
pub use pfaffian::{pfaffian, pfaffian_by_expansion, pfaffian_by_matchings, PfaffianError};
pub use trace_range::{trace_range, QuadLattice, TraceRange};

use crate::exactlin::{integral_solution_lattice, IntLattice};
use crate::reduction::SkewMatrix;

/// `H_θ = {X ∈ Zⁿ : Xθ ∈ Zⁿ}`; its rank is the dimension of the center's spectrum.
pub fn degeneracy_subgroup(theta: &SkewMatrix) -> IntLattice {
    integral_solution_lattice(theta.matrix())
}
