//! Exact-arithmetic homology of finite groupoids.
//!
//! The crate computes integer homology of finite ample groupoids through
//! several interchangeable models (the Matui complex of composable tuples,
//! the equivariant complex of common-range tuples, and nerves of colourings),
//! certifies the chain homotopies relating the models by exact matrix
//! identities, and mechanizes the comparison between anti-Cech homology and
//! groupoid homology at finite scale. Everything is arbitrary-precision
//! integer arithmetic; nothing is floating point.
//!
//! Entry points:
//! - [`groupoid`]: validated finite groupoids and their combinatorics;
//! - [`snf`] / [`complex`]: Smith normal form and chain-complex homology;
//! - [`matui`]: homology models of a groupoid and the resolution contraction;
//! - [`colouring`]: colourings, nerves, and the ordering homotopies;
//! - [`anticech`]: comparison maps and anti-Cech sequences;
//! - [`dad`]: one-scale dynamic asymptotic dimension witnesses;
//! - [`uf`]: uniformly finite chains on finite metric spaces.
//!
//! The `ghom` binary exposes the same functionality as a batch CLI; the
//! `examples/` directory has one runnable example per capability.

// index loops over degrees and basis positions mirror the mathematics
#![allow(clippy::needless_range_loop)]

pub mod anticech;
pub mod certificate;
pub mod cli;
pub mod colouring;
pub mod complex;
pub mod corpus;
pub mod dad;
pub mod error;
pub mod groupoid;
pub mod gset;
pub mod matrix;
pub mod matui;
pub mod report;
pub mod snf;
pub mod ss;
pub mod uf;

pub use certificate::{certify_homotopy, ChainMapCertificate, Discrepancy};
pub use complex::{homology, HomologyGroup, IntegerChainComplex};
pub use error::{Error, Result};
pub use groupoid::{build_groupoid, FiniteAmpleGroupoid, GroupoidSpec};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};
