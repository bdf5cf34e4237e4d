//! Combinatorial tools for the Lamplighter group `L = ℤ₂ ≀ ℤ`, its finitely
//! presented approximations `G₁(n)`, van Kampen diagrams and `a`-bands.

pub mod bands;
pub mod cayley;
pub mod diagram;
pub mod error;
pub mod extended;
pub mod lamp;
pub mod presented;
pub mod semistability;
pub mod word;

pub use error::{Error, Result};
pub use lamp::LampElement;
pub use word::{GroupWord, Letter};
