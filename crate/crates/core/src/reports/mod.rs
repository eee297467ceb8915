//! Report generation for the command-line tool.

pub mod format;
pub mod frequency;
pub mod sweep;
pub mod tradeoff;
pub mod verify;
