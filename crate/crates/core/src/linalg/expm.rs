//! Matrix exponential by scaling and squaring with a diagonal [13/13] Padé
//! approximant.
//!
//! The input is scaled by `2^-s` so that its 1-norm is at most 0.5, the
//! approximant is evaluated on the scaled matrix, and the result is squared
//! `s` times. At that norm the truncation error of the [13/13] approximant is
//! far below double precision.

use crate::error::Result;

use super::lu::Lu;
use super::matrix::Matrix;

/// Largest 1-norm the Padé approximant is evaluated at.
const SCALED_NORM_LIMIT: f64 = 0.5;

/// Coefficients of the [13/13] Padé approximant to `exp`.
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Computes `e^M` for a square matrix.
pub fn mat_exp(m: &Matrix) -> Result<Matrix> {
    let n = m.require_square()?;
    let norm = m.norm_1();
    if norm == 0.0 {
        return Ok(Matrix::identity(n));
    }

    let squarings = if norm > SCALED_NORM_LIMIT {
        (norm / SCALED_NORM_LIMIT).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = m.scaled(2f64.powi(-squarings));

    let b = &PADE_13;
    let ident = Matrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &(&a6.scaled(b[13]) + &a4.scaled(b[11])) + &a2.scaled(b[9]);
    let u_tail = &(&(&a6.scaled(b[7]) + &a4.scaled(b[5])) + &a2.scaled(b[3])) + &ident.scaled(b[1]);
    let u = &a * &(&(&a6 * &u_inner) + &u_tail);

    let v_inner = &(&a6.scaled(b[12]) + &a4.scaled(b[10])) + &a2.scaled(b[8]);
    let v_tail = &(&(&a6.scaled(b[6]) + &a4.scaled(b[4])) + &a2.scaled(b[2])) + &ident.scaled(b[0]);
    let v = &(&a6 * &v_inner) + &v_tail;

    let numer = &v + &u;
    let denom = &v - &u;
    let mut r = Lu::new(&denom)?.solve_matrix(&numer)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}
