//! Exact verification toolkit for vectorial dual-bent functions and the
//! combinatorial objects they induce: partial difference sets, translation
//! association schemes, two-weight codes, generalized Hadamard matrices and
//! bent partitions.

pub mod codes;
pub mod constructions;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod guards;
pub mod hadamard;
pub mod io;
pub mod linalg;
pub mod partitions;
pub mod pds;
pub mod report;
pub mod reproduce;
pub mod scheme;
pub mod selftest;
pub mod transform;
pub mod vdb;
pub mod walsh;

pub use error::{Error, Result};
