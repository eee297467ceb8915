//! Non-interactive quantum XOR oblivious transfer with symmetric pure states:
//! cheating-probability formulas, numerical oracles that check them, and
//! seeded protocol simulations.

pub mod cheat;
pub mod error;
pub mod linalg;
pub mod measurements;
pub mod protocol;
pub mod reports;
pub mod state_family;

pub use error::{Error, Result};
