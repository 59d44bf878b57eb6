pub mod analysis;
pub mod decomp;
pub mod error;
pub mod opalg;

pub use error::{Error, Result};
pub mod rng;
pub mod states;
pub mod witness;
