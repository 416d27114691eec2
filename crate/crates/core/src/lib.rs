//! Exact computations around interim feasibility of Bayesian mechanisms,
//! optimal revenue and welfare at desk scale, Khintchine constants, the
//! Chow-parameter polytope, and counting-reduction gadgets.
//!
//! All arithmetic is over arbitrary-precision rationals.

pub mod boolpp;
pub mod chow;
pub mod error;
pub mod gadgets;
pub mod interim;
pub mod io;
pub mod limits;
pub mod model;
pub mod optimize;
pub mod rational;
pub mod ratlp;

pub use error::{Error, Result};
pub use rational::Rational;
