//! Exact q-series engine and verification harness for the congruence family
//! `d_7(n) = 0 (mod 8^alpha)` whenever `3n = 1 (mod 4^alpha)`.
//!
//! The crate is layered bottom-up:
//!
//! - [`series`]: truncated power series in `q` over `Z` or `Z/2^k`.
//! - [`eta`]: eta-quotient specs, their expansions, Newman's modularity
//!   conditions and Ligozat cusp orders.
//! - [`xpoly`]: integer polynomials in the Hauptmodul `x`.
//! - [`elongated`]: `D_k`, `L_alpha`, the operator `U`, reduction to
//!   polynomials in `x` and the modular equation for `x`.
//! - [`valuation`]: the 2-adic bounds `pi`, `theta`, `phi` and the `U(x^n)` table.
//! - [`verifier`]: end-to-end checks and the aggregated suite.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod elongated;
pub mod error;
pub mod eta;
pub mod golden;
mod linalg;
pub mod report;
pub mod series;
pub mod valuation;
pub mod verifier;
pub mod xpoly;

pub use error::{Error, Result};
pub use eta::{CuspOrderVector, EtaQuotientSpec};
pub use report::{Counterexample, Status, VerificationReport};
pub use series::{CoefficientRing, TruncatedSeries};
pub use xpoly::XPolynomial;
