//! Command-line front end for the `incgb` library.

pub mod app;
pub mod syntax;
