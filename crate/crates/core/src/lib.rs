pub mod algebra;
pub mod analysis;
pub mod error;
pub mod protocols;
pub mod runtime;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64;
