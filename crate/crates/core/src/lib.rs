//! Exact periodic-orbit dynamics of continuous piecewise-linear interval
//! maps: the Sharkovsky ordering, Markov graphs of orbit patterns,
//! constructive periodic-point witnesses and truncated tent maps.
//!
//! All arithmetic is exact over [`Rational`]. The crate is `no_std` and
//! needs only `alloc`.

#![no_std]
#![deny(unsafe_code)]
#![allow(clippy::result_large_err)]

extern crate alloc;

mod error;
mod interval;
pub mod order;
pub mod pattern;
pub mod pwl;
mod rational;
pub mod tent;
pub mod witness;

pub use error::{Error, Result};
pub use interval::Interval;
pub use pattern::{CyclicPattern, IntervalLoop, MarkovGraph, SpectrumMethod};
pub use pwl::{connect_the_dots, pattern_orbit, FixedPoints, Orbit, PeriodicOrbits, PwlMap};
pub use rational::{rat, ParseRationalError, Rational};

pub const DEFAULT_PIECE_BUDGET: usize = 1 << 20;
pub const DEFAULT_WALK_BUDGET: usize = 1 << 20;

/// Caps on materialized breakpoints and enumerated walks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub pieces: usize,
    pub walks: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            pieces: DEFAULT_PIECE_BUDGET,
            walks: DEFAULT_WALK_BUDGET,
        }
    }
}
