//! Numerical and exact tools for secant varieties of Segre-Grassmann varieties.
#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod certify;
pub mod combinatorics;
pub mod flattening;
pub mod homotopy;
pub mod invariants;
mod error;
pub mod linalg;
pub mod poly;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{SecantSpec, TensorPoint};
