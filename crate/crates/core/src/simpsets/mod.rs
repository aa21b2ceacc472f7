//! Simplicial sets with finitely many nondegenerate simplices, nerves of
//! ordered simplicial complexes, fibered powers and their cochains.

mod cochains;
mod complex;
mod fibered;
mod sset;
mod term;

pub use cochains::{
    coboundary_matrix, cochain_complex, cochain_dim, normalized_cochain_complex,
    pullback_cochain_map, pullback_matrix, unnormalized_cochain_complex, CochainModel,
};
pub use complex::{induced_sset_map, nerve_of_complex, Nerve, SComplex, VertexMap};
pub use fibered::{fibered_power, projection_map, FiberedPower};
pub use sset::{SSet, SSetMap, SimplexIndex};
pub use term::SimplexTerm;
