//! Exact combinatorial invariants of one-parameter degenerations.
//!
//! Everything in this crate is computed over the integers (or exact
//! rationals cleared to integers), so results are certificates rather
//! than floating-point estimates.  The only floating-point code is the
//! Monte Carlo star-shapedness check in [`blowfiber`], which is
//! explicitly a sampling certificate with a stated tolerance.
//!
//! Module map:
//! - [`intlin`]: integer matrices, Smith normal form, chain complexes,
//!   homology, mapping-torus homology, mod-n reductions.
//! - [`monoid`]: finitely generated submonoids of a lattice, exactness
//!   and Kummer tests for monoid maps, local model charts.
//! - [`blowfiber`]: the local fiber model at a blown-up point and its
//!   star-shapedness certificate.
//! - [`degen`]: dual graphs of normal crossings degenerations, blowup
//!   moves, Euler characteristics, zeta factorizations.
//! - [`knfiber`]: the nearby fiber surface of a semistable dual graph,
//!   its monodromy, and total-space homology over the circle.
//! - [`etalecmp`]: mod-n cohomology comparisons between circle-power
//!   models and lattice group cohomology.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod blowfiber;
pub mod degen;
pub mod etalecmp;
pub mod intlin;
pub mod knfiber;
pub mod monoid;
