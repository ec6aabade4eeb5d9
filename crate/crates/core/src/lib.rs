pub mod basis;
pub mod cli;
pub mod bridge;
pub mod coeff;
pub mod cyclotomic;
pub mod error;
pub mod linalg;
pub mod module;
pub mod params;
pub mod parse;
pub mod poisson;
pub mod poly;
pub mod reps;
pub mod rewrite;
pub mod word;

pub use error::{Error, Result};
