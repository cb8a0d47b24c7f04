pub mod error;
pub mod harness;
pub mod exactnum;
pub mod moebius;
pub mod constructors;
pub mod invariants;
pub mod piecewise;

pub use error::{Error, Result};
