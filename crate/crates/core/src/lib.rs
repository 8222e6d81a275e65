//! Disk amplitudes of the three-state Potts model on random triangulations:
//! the generating equation in noncommuting boundary variables, its graded
//! solution, the loop equations it implies, the quintic spectral curve, and
//! an independent Wick-contraction referee.

pub mod curve;
pub mod error;
pub mod freealg;
pub mod loopcat;
pub mod oracle;
pub mod ring;
pub mod solver;

pub use error::{Error, Result};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rationals.
pub type Rational = BigRational;
/// Integer polynomials in `c`: amplitudes at symbolic coupling.
pub type CPoly = ring::Poly<BigInt>;
/// Integer polynomials in `c` over overflow-checked machine integers.
pub type FastCPoly = ring::Poly<i128>;
/// Rational functions in `c`.
pub type CFunction = ring::RationalFunction;
/// Amplitude table at symbolic `c`.
pub type SymbolicTable = solver::SolutionTable<CPoly>;
/// Amplitude table at a rational `c`.
pub type RationalTable = solver::SolutionTable<Rational>;
