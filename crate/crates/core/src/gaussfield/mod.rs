//! Valued fields, Gauss valuations on `K(T_1, …, T_n)` and their finite extensions.

pub mod extensions;
pub mod field;
pub mod newton;
pub mod poly;
pub mod resfield;
pub mod residue;

pub use extensions::{
    branch_values, check_squarefree, count_gauss_extensions, count_gauss_extensions_twisted,
    extension_branches, extension_count_profile, extension_count_profile_twisted,
    verify_separating_set, ExtensionInfo, ExtensionProfile,
};
pub use field::{FieldElem, FieldKind, ValuedFieldDesc};
pub use newton::{newton_polygon, NewtonPolygon, NewtonSegment};
pub use poly::ValuedPolynomial;
pub use residue::{gauss_eval, gauss_residue, residues_alg_independent, GradedResidue, ResiduePolynomial};
