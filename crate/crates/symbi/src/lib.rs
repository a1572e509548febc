//! Numerical machinery for the symmetrized bidisc
//! `G = {(z + w, zw) : z, w in D}`.
//!
//! The crate covers the Carathéodory and Kobayashi extremal problems on `G`,
//! the five-way classification of datums, explicit complex geodesics and
//! their defining polynomials, automorphism transport, the two constructive
//! extension devices (Herglotz sums over `R ∪ F_0` and the annulus
//! improvement map), the six symmetric-extension families in the bidisc, and
//! the retract embeddings of `G` into the spectral ball, the tetrablock and
//! the pentablock.
//!
//! Grid scans and batch evaluations run on rayon when the `parallel`
//! feature is enabled (the default). Every entry point that fans out takes
//! an [`Exec`] so callers can force the sequential path.

// `!(x < y)` is used on purpose so that NaN falls through
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod base;
pub mod caratheodory;
pub mod embeddings;
mod error;
pub mod extension;
pub mod geodesics;
mod jet;
pub mod kobayashi;
pub mod numrange;
pub mod par;
pub mod poly;
pub mod symbidisc;
pub mod variety;
pub mod verify;

pub use base::{C, Datum, DiscDatum, Mobius, PointG, Region};
pub use error::{Error, Result};
pub use par::Exec;
