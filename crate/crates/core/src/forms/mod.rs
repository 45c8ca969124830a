//! Binary, ternary and weighted homogeneous forms.

pub(crate) mod binary;
mod resultant;
pub(crate) mod ternary;
mod weighted;

pub use binary::{BinaryForm, BinaryRoot, FormSqrt, SquarefreeDecomposition};
pub use resultant::resultant;
pub use ternary::TernaryForm;
pub use weighted::WeightedForm;
