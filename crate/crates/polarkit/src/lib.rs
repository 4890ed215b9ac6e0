//! Exact computations in finite classical polar spaces.
//!
//! The crate builds quadrics and symplectic spaces over small fields GF(q),
//! enumerates their totally singular subspaces, constructs and verifies
//! relative m-ovoids and relative hemisystems of elliptic quadrics, and
//! derives symplectic ovoids, two-character sets and strongly regular
//! graphs from them. Every claim is re-checkable from a JSON certificate.

pub mod error;
pub mod gf;
pub mod matrix;
pub mod projective;
pub mod polar;
pub mod quadform;

pub use error::{Error, Result};
