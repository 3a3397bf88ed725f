//! Stabilisation of switched linear and affine systems by periodic switching
//! signals with bounded switching frequency.
//!
//! A switched affine system `x' = A_i x + b_i` is stabilisable by a single
//! state-independent signal whenever some convex combination of the `A_i` is
//! Hurwitz. This crate finds such a combination, builds the periodic signal
//! that realises it, decides stability of that signal through the spectral
//! radius of its one-period transition matrix, and simulates the resulting
//! dynamics exactly, including limit cycles of affine systems without a
//! common equilibrium.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

// `!(x < y)` is used on purpose so that NaN lands on the failing branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod model;
pub mod presets;
pub mod signals;
pub mod simulate;
pub mod stability;
pub mod synthesis;

pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
pub use model::{SubSystem, SwitchedSystem, Weights};
pub use signals::{example_signal, NormMinPolicy, PeriodicSignal, Segment};
