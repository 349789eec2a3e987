//! Exact desk-scale laboratory for the function-field circle method.

pub mod audit;
pub mod binform;
pub mod circle;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod forms;
pub mod kinfty;
pub mod latgon;
pub mod linalg;
pub mod moduli;
pub mod poly;
pub mod weyl;

pub use error::{Budget, Error, Result};
