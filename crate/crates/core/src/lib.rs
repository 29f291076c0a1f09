pub mod cat_o;
pub mod dirac;
pub mod error;
pub mod hodge;
pub mod liealg;
pub mod linalg;
pub mod roots;
pub mod spinor;

pub use error::{Error, Result};
