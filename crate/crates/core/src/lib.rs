pub mod error;
pub mod cli;
pub mod exactla;
pub mod ideals;
pub mod ntkernel;
pub mod relgen;
pub mod secest;
pub mod solver;

pub use error::{Error, Result};
