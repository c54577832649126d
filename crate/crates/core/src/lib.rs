//! Exact computation of branching multiplicities of Deligne-Lusztig characters of
//! `GL_n(F_{q^2})` against the Weil representation restricted to `U_n(F_q)`.

pub mod chars;
pub mod cli;
pub mod cyclotomic;
pub mod dl;
pub mod error;
pub mod fields;
pub mod groups;
pub mod mult;
pub mod oracle;
pub mod verify;
pub mod weil;

pub use error::{Error, Result};
