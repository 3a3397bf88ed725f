use crate::error::{Error, Result};

use super::matrix::{Matrix, Vector};

/// LU factorisation with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    // L below the diagonal (unit diagonal implied), U on and above.
    factors: Matrix,
    perm: Vec<usize>,
    sign: f64,
    min_pivot: f64,
    scale: f64,
}

impl Lu {
    pub fn new(m: &Matrix) -> Result<Self> {
        let n = m.require_square()?;
        let mut a = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let (p, _) = (k..n)
                .map(|i| (i, a[(i, k)].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if p != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[(k, k)];
            min_pivot = min_pivot.min(pivot.abs());
            if pivot == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let factor = a[(i, k)] / pivot;
                a[(i, k)] = factor;
                if factor != 0.0 {
                    for j in k + 1..n {
                        a[(i, j)] -= factor * a[(k, j)];
                    }
                }
            }
        }
        Ok(Self {
            n,
            factors: a,
            perm,
            sign,
            min_pivot,
            scale: m.max_abs(),
        })
    }

    pub fn determinant(&self) -> f64 {
        (0..self.n).fold(self.sign, |d, i| d * self.factors[(i, i)])
    }

    /// Smallest pivot magnitude encountered.
    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub fn is_singular(&self) -> bool {
        self.min_pivot <= f64::EPSILON * self.n as f64 * self.scale
    }

    fn check_nonsingular(&self) -> Result<()> {
        if self.is_singular() {
            Err(Error::Singular {
                pivot: self.min_pivot,
            })
        } else {
            Ok(())
        }
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.n;
        let b: Vec<f64> = self.perm.iter().map(|&p| x[p]).collect();
        x.copy_from_slice(&b);
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.factors[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.factors[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.factors[(i, i)];
        }
    }

    pub fn solve(&self, rhs: &Vector) -> Result<Vector> {
        if rhs.len() != self.n {
            return Err(Error::Dimension {
                context: "linear solve",
                expected: self.n,
                found: rhs.len(),
            });
        }
        self.check_nonsingular()?;
        let mut x = rhs.as_slice().to_vec();
        self.solve_in_place(&mut x);
        Ok(Vector::from_raw(x))
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Result<Matrix> {
        if rhs.rows() != self.n {
            return Err(Error::Dimension {
                context: "linear solve",
                expected: self.n,
                found: rhs.rows(),
            });
        }
        self.check_nonsingular()?;
        let mut out = Matrix::zeros(self.n, rhs.cols());
        let mut col = vec![0.0; self.n];
        for j in 0..rhs.cols() {
            for i in 0..self.n {
                col[i] = rhs[(i, j)];
            }
            self.solve_in_place(&mut col);
            for i in 0..self.n {
                out[(i, j)] = col[i];
            }
        }
        Ok(out)
    }
}

pub fn determinant(m: &Matrix) -> Result<f64> {
    Ok(Lu::new(m)?.determinant())
}

/// Solves `M x = rhs`; fails with the offending pivot when `M` is singular.
pub fn solve(m: &Matrix, rhs: &Vector) -> Result<Vector> {
    Lu::new(m)?.solve(rhs)
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let lu = Lu::new(m)?;
    lu.solve_matrix(&Matrix::identity(m.rows()))
}
