pub mod arrangement;
pub mod charpoly;
pub mod error;
pub mod exactlin;
pub mod homology;
pub mod poset;
pub mod sheaf;
pub mod theorems;

pub use error::{Error, Result};
