//! Finite-group monomial categories: hyperHecke algebras, monocentres,
//! induced line modules, convolution models and bar-monomial resolutions,
//! all with exact cyclotomic arithmetic.

pub mod bar;
pub mod character;
pub mod convolution;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod hyperhecke;
pub mod linalg;
pub mod monocentre;
pub mod modp;
pub mod monomial;
pub mod rep;
pub mod snf;

pub use character::{CharPair, Character, PairPoset};
pub use cyclotomic::CycloScalar;
pub use error::{Error, Result};
pub use group::{FiniteGroup, Subgroup};
