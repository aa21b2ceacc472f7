//! Scaffolding for the quadratic-system setting: symbolic generation of the
//! fibered systems `S_p` and assembly of the descent double complex from
//! complexes supplied by an external provider.

mod poly;
mod provider;
mod system;

pub use poly::{Monomial, QuadraticPoly, Var};
pub use provider::{
    assemble_double_complex, assemble_from_provider, emit_bundle, identity_pattern_bundle,
    index_set, mock_bundle, parse_bundle, zero_bundle, BundleDoc, ComplexDoc, IndexSet,
    MorphismDoc, MorphismKey, PermutationDoc, PermutationMorphism, ProviderBundle,
};
pub use system::{
    block_var, coordinate_swap, emit_system, generate_fibered_systems, infer_arity, parse_system,
    substitute_block, FiberedSystem, FiberedSystemDoc,
};
