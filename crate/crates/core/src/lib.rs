//! Exact enumeration of coloured hard-dimer configurations (CHDCs).
//!
//! A CHDC is a word over `{b, r}` together with non-intersecting dimers, each
//! joining two nearest vertices of the same colour. Three independent engines
//! compute the census polynomial `Σ m_{ijk} b3^i r3^j y^k` of a word:
//!
//! * [`chdc::census`]: brute-force enumeration;
//! * [`series`]: noncommutative formal power series, built either from the
//!   recursive tree equations or from the rational closed form;
//! * [`recog`]: a 38-dimensional linear representation `λᵀ μ(x) γ`.
//!
//! [`transfer`] evaluates the resulting generating functions and
//! [`asymptotics`] studies the exponential growth of configuration counts.

pub mod asymptotics;
pub mod chdc;
pub mod error;
pub mod poly;
pub mod recog;
pub mod series;
pub mod transfer;
pub mod verify;
pub mod word;

pub use chdc::{
    candidate_dimers, census, config_type, enumerate_configs, is_valid, Configuration, Dimer,
    TypeTriple,
};
pub use error::{Error, Result};
pub use poly::{EvalPoint, Monomial, Poly, Scalar};
pub use recog::LinRep;
pub use series::TruncatedSeries;
pub use word::{Colour, Word};
