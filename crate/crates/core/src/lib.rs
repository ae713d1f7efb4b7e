pub mod cli;
pub mod coefficients;
pub mod error;
pub mod families;
pub mod inequalities;
pub mod report;
pub mod schur;
pub mod search;
pub mod series;
pub mod tolerance;

pub use error::{Error, Result};
