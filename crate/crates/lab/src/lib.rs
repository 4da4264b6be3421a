//! Command-line driver and interchange formats for `sharkovsky-core`.

#![allow(clippy::result_large_err)]

pub mod cli;
pub mod format;
