pub mod cli;
pub mod entangling;
pub mod error;
pub mod linalg;
pub mod matrix_io;
pub mod mixing;
pub mod optimize;
pub mod random;
pub mod report;
pub mod solver;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
