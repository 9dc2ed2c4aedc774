//! Finite abelian `p`-groups with a `Γ`-action, i.e. finite `Λ`-modules.

pub mod annihilator;
pub mod dual;
mod gamma;
pub mod hom;
pub mod structure;

pub use annihilator::{
    binomial_shape, express_as_unit_multiple, find_binomial_annihilator, minimal_annihilator,
    order_profile, OrderProfile, RelationLattice,
};
pub use dual::{dual_module, faithful_dual_generator, order_reversal, order_reversal_with, pairing};
pub use gamma::{apply_matrix, hom_condition, Elem, GammaModule, Submodule};
pub use hom::{kernel_of, quotient, Hom, Quotient};
pub use structure::{is_cyclic_lambda, is_straight, roof, socle, CyclicTest, FpTModule, FpTStructure};
