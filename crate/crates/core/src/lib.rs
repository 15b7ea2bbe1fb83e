//! p-ranks of hyperelliptic curves over small finite fields and of the Prym
//! varieties of their unramified double covers.

pub mod cartier;
pub mod census;
pub mod cli;
pub mod covers;
pub mod error;
pub mod gf;
pub mod poly;
pub mod symbolic;
pub mod zeta;

pub use error::{Error, Result};
