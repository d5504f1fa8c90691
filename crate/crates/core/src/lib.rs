pub mod cli;
pub mod error;
pub mod functions;
pub mod inequalities;
pub mod operator;
pub mod quadrature;
pub mod special;
pub mod sweep;

pub use error::{Error, Result};
