pub mod bundle;
pub mod degree;
pub mod error;
pub mod hopf;
pub mod manifold;
pub mod maps;
pub mod quaternion;
pub mod rotation;
pub mod verify;

pub use error::{Error, Result};
