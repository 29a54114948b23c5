//! Density of the additive group generated by `u_1, ..., u_m` in `C^n`.

mod exact;
mod instance;
mod lll;
mod numeric;
mod verdict;

pub use exact::{primitive_integer, rational_system, relation_rank_exact, square_determinant_form, waldschmidt_exact};
pub use instance::{build_instance, build_instance_exact, DensityInstance, Provenance};
pub use lll::{Reduced, RelationLattice};
pub use numeric::{waldschmidt_numeric, NUMERIC_MIN_PREC};
pub use verdict::{count_shortcut, Certificate, DensityStatus, DensityVerdict};
