use thiserror::Error;

use crate::ring::{ArithError, ParseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("coupling c = {0} is a pole of the propagator (1 + c - 2c^2 = 0)")]
    PropagatorPole(String),
    #[error("{what} needs {needed}, table provides {available}")]
    InsufficientDepth { what: String, needed: usize, available: usize },
    #[error("amplitude p[{word}] at g^{order} is not in the table")]
    MissingAmplitude { word: String, order: usize },
    #[error("oracle input too large: {half_edges} half-edges, about {estimate:.3e} matchings")]
    Oversize { half_edges: usize, estimate: f64 },
    #[error("unknown {kind} {name:?}")]
    Unknown { kind: &'static str, name: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
