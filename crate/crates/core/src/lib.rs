//! Exact computation of `Ext^•(D_X, M)` for the canonical D-module of a
//! hypersurface `X = {f = 0}`, over the Weyl algebra with rational
//! coefficients.

pub mod curve;
pub mod error;
pub mod hypersurface;
pub mod linalg;
pub mod models;
pub mod quotient;
pub mod rational;
pub mod rewrite;
pub mod table;
pub mod weyl;

pub use error::{Error, Result};
pub use rational::Rational;
pub use table::{LevelStatus, TruncationTable};
pub use weyl::{multiply, FiltrationKind, Generator, SymbolPolynomial, WeylElement, WeylMonomial};
