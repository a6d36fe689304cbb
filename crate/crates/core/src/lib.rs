//! Generalized Heffter arrays, near alternating sign matrices, and the
//! Cayley graph decompositions and surface embeddings they induce.
//!
//! Every construction in this crate has a matching verifier that checks the
//! output from first principles rather than trusting the construction.

pub mod binmat;
pub mod decomp;
pub mod embed;
pub mod error;
pub mod gmatrix;
pub mod gha_cyclic;
pub mod gha_fill;
pub mod group;
pub mod nasm;
pub mod report;

pub use error::{Error, Result};
