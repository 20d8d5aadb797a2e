//! Exact intersection theory on quasismooth del Pezzo hypersurfaces in
//! weighted projective 3-space.
//!
//! Everything here is exact rational arithmetic: intersection tables,
//! Zariski decompositions, volume profiles, basis-type multiplicity bounds,
//! weighted blow-up numerics and the affine-inequality certificates that
//! establish lower bounds for the stability threshold.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and
//! the command line live in the companion `wdp` crate.
#![no_std]

extern crate alloc;

pub mod basisbound;
pub mod blowup_lc;
mod error;
pub mod exactnum;
pub mod geometry;
pub mod positivity;
pub mod wps;

pub use error::{Error, Result};
pub use exactnum::{AffineForm, PiecewiseQuadratic, Polytope, QuadPoly, Rational};
