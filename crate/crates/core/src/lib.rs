//! Digital (T,s)-sequences over finite fields built from Riemann–Roch spaces
//! of global function fields, with exhaustive verification of their quality
//! parameters.

pub mod acceptance;
pub mod construct;
pub mod divisor;
pub mod ellcurve;
pub mod error;
pub mod expr;
pub mod function_field;
pub mod genmat;
pub mod gf;
pub mod linalg;
pub mod netverify;
pub mod params;
pub mod pipeline;
pub mod poly;
pub mod ratfunc;
pub mod seqgen;
pub mod series;

pub use error::{Error, Result};
