//! Dense small-matrix numerics: exponential, eigenvalues, norms, LU.

mod eigen;
mod expm;
mod lu;
mod matrix;

pub use eigen::{operator_norm_2, spectral_abscissa, spectral_radius, spectrum, Spectrum};
pub use expm::mat_exp;
pub use lu::{determinant, inverse, solve, Lu};
pub use matrix::{Matrix, Vector};

use crate::error::Result;

/// `[X, Y] = XY - YX`.
pub fn commutator(x: &Matrix, y: &Matrix) -> Result<Matrix> {
    x.require_square()?;
    x.require_same_shape(y, "commutator")?;
    Ok(&(x * y) - &(y * x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_cases() {
        let x = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(commutator(&x, &x).unwrap(), Matrix::zeros(2, 2));

        let d1 = Matrix::from_diagonal(&[1.5, -2.0]);
        let d2 = Matrix::from_diagonal(&[0.3, 7.0]);
        assert_eq!(commutator(&d1, &d2).unwrap(), Matrix::zeros(2, 2));

        let e12 = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        let e21 = Matrix::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(
            commutator(&e12, &e21).unwrap(),
            Matrix::from_diagonal(&[1.0, -1.0])
        );
    }

    #[test]
    fn commutator_dimension_mismatch() {
        assert!(commutator(&Matrix::identity(2), &Matrix::identity(3)).is_err());
    }
}
