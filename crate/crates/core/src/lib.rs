//! Countable ind- and pro-objects, ind-pro bifunctors on the index preorder
//! `{(i, j) : i <= j}`, and the exact-category checks that relate them, all
//! over finite-dimensional vector spaces over a prime field.
//!
//! Infinite diagrams are carried as finite windows with constant tails; every
//! check in this crate is exact and decidable on that representation.

pub mod beilinson;
pub mod cli;
pub mod error;
pub mod field;
pub mod harness;
pub mod index;
pub mod io;
pub mod linalg;
pub mod tate;
pub mod window;

pub use error::{Error, Result};
pub use field::PrimeField;
pub use linalg::Mat;
