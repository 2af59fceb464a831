//! Exact arithmetic for rational Q-homology projective planes with cyclic
//! quotient singularities.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is computed over
//! arbitrary-precision integers and rationals; there is no floating point.
//!
//! * [`hj`] - Hirzebruch-Jung chains, continuants and per-chain invariants.
//! * [`surface`] - baskets of singularities, `K^2`, orbifold Euler number,
//!   the BMY gate and the nonexistence scans.
//! * [`enumerate`] - bounded, canonical-order chain enumeration.
//! * [`curve`] - the curve-detecting formula and sign classification.
//! * [`graph`] - marked dual graphs, blow-ups, contractions and cascades.
//! * [`fiber`] - singular fibers of P^1-fibrations and their constraints.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod curve;
pub mod enumerate;
mod error;
pub mod fiber;
pub mod graph;
pub mod hj;
mod linalg;
pub mod rational;
pub mod surface;

pub use error::Error;
pub use hj::{Chain, ChainInvariants, CyclicSingularity, DiscrepancyData};
pub use rational::Rational;
pub use surface::{Basket, BmyVerdict, SurfaceInvariants};

pub type Result<T, E = Error> = core::result::Result<T, E>;
