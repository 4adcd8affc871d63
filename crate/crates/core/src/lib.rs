pub mod algebra;
pub mod bracket;
pub mod derivation;
pub mod error;
pub mod eval;
pub mod mellin_barnes;
pub mod numerics;
pub mod pipeline;
pub mod reference;
pub mod representations;

pub use error::{Error, Result};
