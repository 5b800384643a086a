//! Exact generalized Stirling and Bell numbers from boson normal ordering.
//!
//! The numbers `S_{r,s}(n,k)` are the coefficients in the normally ordered
//! expansion of `[(a†)^r a^s]^n` with `[a, a†] = 1`; their row sums are the
//! generalized Bell numbers `B_{r,s}(n)`. The crate computes them by several
//! independent routes and cross-checks them against
//!
//! * [`oracle`]: literal rewriting of boson words,
//! * [`series`]: Dobinski-type and hypergeometric series, evaluated with
//!   certified truncation bounds, plus exact generating-function identities,
//! * [`fock`]: matrix elements in coherent states on a truncated Fock space.

pub mod error;
pub mod exact;
pub mod fock;
pub mod oracle;
pub mod series;
pub mod stirling;

pub use error::{Error, Result};
pub use exact::{BigFloat, PowerSeries, Rational};
pub use stirling::Params;
