pub mod error;
pub mod linalg;
pub mod ncx;
pub mod ndgcat;
pub mod random;
pub mod verify;
pub mod verify_cat;
pub mod workspace;
pub mod scalars;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use scalars::{Field, FieldSpec, Scalar};
