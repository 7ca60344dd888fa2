//! Exact arithmetic in the Weyl algebra `D_n = Q⟨x_1..x_n, ∂_1..∂_n⟩`.
//!
//! Elements are kept normal-ordered (all `x` left of all `∂`) at all times;
//! products are expanded with the closed-form commutation of `∂^b` past `x^a`.

mod element;
mod monomial;
pub mod parse;
mod symbol;

pub use element::{multiply, WeylElement};
pub(crate) use element::monomial_product;
pub(crate) use monomial::compositions_into;
pub use monomial::{FiltrationKind, Generator, WeylMonomial};
pub use symbol::SymbolPolynomial;
