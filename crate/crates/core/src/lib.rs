pub mod error;
pub mod rewrite;
pub mod admissible;
pub mod cache;
pub mod cli;
pub mod normalform;
pub mod oracle_a;
pub mod rootsystem;
pub mod tracking;
pub mod weyl;

pub use error::{Error, Result};
