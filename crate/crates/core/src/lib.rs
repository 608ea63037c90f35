//! Exact delta invariants for projective bundles, cones and edge-cone
//! Kähler-Einstein profiles over Fano bases.

pub mod angle;
pub mod arith;
pub mod bundle;
pub mod calabi;
pub mod cli;
pub mod cone;
pub mod error;
pub mod oracle;

pub use arith::{Polynomial, Rational};
pub use error::{Error, Result};
