//! The two bundled two-mode planar systems.
//!
//! Both share the mode matrices
//!
//! ```text
//! A1 = [-2.1 -2 ]    A2 = [1    2 ]
//!      [ 0.5  1 ]         [0.1 -2 ]
//! ```
//!
//! neither of which is Hurwitz, while their midpoint is. The first system has
//! a common equilibrium `(0, -1)`; the second does not and settles onto a
//! limit cycle around the average equilibrium `(0, 3)`.

use crate::linalg::{Matrix, Vector};
use crate::model::{SubSystem, SwitchedSystem, Weights};

pub fn mode_matrices() -> [Matrix; 2] {
    [
        Matrix::from_rows(&[[-2.1, -2.0], [0.5, 1.0]]).expect("finite constant"),
        Matrix::from_rows(&[[1.0, 2.0], [0.1, -2.0]]).expect("finite constant"),
    ]
}

fn build(b1: [f64; 2], b2: [f64; 2]) -> SwitchedSystem {
    let [a1, a2] = mode_matrices();
    let s1 = SubSystem::new(a1, Vector::new(b1.to_vec()).expect("finite")).expect("2x2 mode");
    let s2 = SubSystem::new(a2, Vector::new(b2.to_vec()).expect("finite")).expect("2x2 mode");
    SwitchedSystem::new(vec![s1, s2]).expect("consistent dimensions")
}

/// Affine system with `b1 = (-2, 1)`, `b2 = (2, -2)`; common equilibrium
/// `(0, -1)`.
pub fn example_one() -> SwitchedSystem {
    build([-2.0, 1.0], [2.0, -2.0])
}

/// Affine system with `b1 = (-2, 1)`, `b2 = (2, 2)`; no common equilibrium.
pub fn example_two() -> SwitchedSystem {
    build([-2.0, 1.0], [2.0, 2.0])
}

/// Equal activation with the four-unit cycle of the bundled signal.
pub fn example_weights() -> Weights {
    Weights::new(vec![0.5, 0.5], 4.0).expect("valid constant weights")
}
