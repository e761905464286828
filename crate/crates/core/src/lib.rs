pub mod calculus;
pub mod chart;
pub mod error;
pub mod exactnum;
pub mod io;
pub mod momentum;
pub mod report;
pub mod star;
pub mod sweep;
pub mod symmetry;

pub use error::{Error, Result};
