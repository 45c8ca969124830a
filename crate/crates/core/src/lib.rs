//! Exact arithmetic for degree-2 del Pezzo surfaces over finite fields of odd
//! characteristic, and a search for rational curves on them via pulled-back
//! double covers of plane curves.

pub mod cover;
pub mod cli;
pub mod curve;
pub mod error;
pub mod field;
pub mod forms;
pub mod golden;
pub mod json;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod search;
pub mod surface;

pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use forms::{BinaryForm, TernaryForm, WeightedForm};
