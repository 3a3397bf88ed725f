//! Switched affine systems `x' = A_i x + b_i`, their convex combinations and
//! equilibria.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{operator_norm_2, Lu, Matrix, Vector};

/// One mode `x' = A x + b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubSystem {
    #[serde(rename = "A")]
    a: Matrix,
    b: Vector,
}

impl SubSystem {
    pub fn new(a: Matrix, b: Vector) -> Result<Self> {
        let n = a.require_square()?;
        if b.len() != n {
            return Err(Error::Dimension {
                context: "affine term",
                expected: n,
                found: b.len(),
            });
        }
        Ok(Self { a, b })
    }

    /// Linear mode with `b = 0`.
    pub fn linear(a: Matrix) -> Result<Self> {
        let n = a.require_square()?;
        Ok(Self {
            a,
            b: Vector::zeros(n),
        })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn is_linear(&self) -> bool {
        self.b.as_slice().iter().all(|&x| x == 0.0)
    }

    /// Vector field `A x + b`.
    pub fn rate(&self, x: &Vector) -> Vector {
        &(&self.a * x) + &self.b
    }

    /// `-A^{-1} b`. Fails when `A` is singular.
    pub fn equilibrium(&self) -> Result<Vector> {
        let lu = Lu::new(&self.a)?;
        if lu.is_singular() {
            return Err(Error::NoUniqueEquilibrium {
                subsystem: 0,
                pivot: lu.min_pivot(),
            });
        }
        Ok(-&lu.solve(&self.b)?)
    }
}

/// Ordered collection of modes sharing one state dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchedSystem {
    n: usize,
    subsystems: Vec<SubSystem>,
}

impl SwitchedSystem {
    pub fn new(subsystems: Vec<SubSystem>) -> Result<Self> {
        let first = subsystems.first().ok_or(Error::Empty("switched system"))?;
        let n = first.dim();
        for s in &subsystems {
            if s.dim() != n {
                return Err(Error::Dimension {
                    context: "subsystem dimension",
                    expected: n,
                    found: s.dim(),
                });
            }
        }
        Ok(Self { n, subsystems })
    }

    /// Linear system from its mode matrices.
    pub fn linear(matrices: Vec<Matrix>) -> Result<Self> {
        Self::new(
            matrices
                .into_iter()
                .map(SubSystem::linear)
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn subsystems(&self) -> &[SubSystem] {
        &self.subsystems
    }

    pub fn subsystem(&self, index: usize) -> Result<&SubSystem> {
        self.subsystems.get(index).ok_or(Error::IndexOutOfRange {
            index,
            count: self.subsystems.len(),
        })
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        self.subsystems.iter().map(|s| s.a.clone()).collect()
    }

    pub fn is_linear(&self) -> bool {
        self.subsystems.iter().all(SubSystem::is_linear)
    }

    /// Same matrices with every affine term dropped.
    pub fn linear_part(&self) -> SwitchedSystem {
        SwitchedSystem {
            n: self.n,
            subsystems: self
                .subsystems
                .iter()
                .map(|s| SubSystem {
                    a: s.a.clone(),
                    b: Vector::zeros(self.n),
                })
                .collect(),
        }
    }

    /// `(sum a_i A_i, sum a_i b_i)`.
    pub fn average_system(&self, weights: &Weights) -> Result<SubSystem> {
        if weights.len() != self.len() {
            return Err(Error::Dimension {
                context: "weights",
                expected: self.len(),
                found: weights.len(),
            });
        }
        let mut a = Matrix::zeros(self.n, self.n);
        let mut b = Vector::zeros(self.n);
        for (s, &alpha) in self.subsystems.iter().zip(weights.alpha()) {
            a = &a + &s.a.scaled(alpha);
            b = &b + &s.b.scaled(alpha);
        }
        Ok(SubSystem { a, b })
    }

    /// Per-mode equilibria; fails on the first singular `A_i`.
    pub fn equilibria(&self) -> Result<Vec<Vector>> {
        self.subsystems
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.equilibrium().map_err(|e| match e {
                    Error::NoUniqueEquilibrium { pivot, .. } => Error::NoUniqueEquilibrium {
                        subsystem: i,
                        pivot,
                    },
                    other => other,
                })
            })
            .collect()
    }

    /// Shared equilibrium of every mode, if one exists.
    ///
    /// Returns the mean of the per-mode equilibria when they agree pairwise
    /// within `tol` in the max-norm.
    pub fn common_equilibrium(&self, tol: f64) -> Result<Option<Vector>> {
        let eqs = self.equilibria()?;
        for (i, ei) in eqs.iter().enumerate() {
            for ej in &eqs[i + 1..] {
                if (ei - ej).norm_inf() > tol {
                    return Ok(None);
                }
            }
        }
        let mut mean = Vector::zeros(self.n);
        for e in &eqs {
            mean = &mean + e;
        }
        Ok(Some(mean.scaled(1.0 / eqs.len() as f64)))
    }

    /// `true` when `y` is an equilibrium of every mode, with a residual
    /// allowance scaled by `1 + ||A_i||`.
    pub fn is_common_equilibrium(&self, y: &Vector, tol: f64) -> Result<bool> {
        for s in &self.subsystems {
            let residual = s.rate(y).norm2();
            if residual > (1.0 + operator_norm_2(&s.a)?) * tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Normalised activation fractions on the simplex together with a cycle
/// period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Weights {
    alpha: Vec<f64>,
    period: f64,
}

impl Weights {
    const SUM_TOL: f64 = 1e-12;

    pub fn new(alpha: Vec<f64>, period: f64) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        if alpha.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "negative or non-finite weight in {alpha:?}"
            )));
        }
        let sum: f64 = alpha.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidWeights(format!(
                "period must be positive, got {period}"
            )));
        }
        Ok(Self { alpha, period })
    }

    /// Rescales nonnegative activation times to sum to one.
    pub fn normalized(raw: &[f64], period: f64) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidWeights("all weights are zero".into()));
        }
        Self::new(raw.iter().map(|a| a / sum).collect(), period)
    }

    /// Equal weights.
    pub fn uniform(m: usize, period: f64) -> Result<Self> {
        Self::new(vec![1.0 / m as f64; m], period)
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn with_period(&self, period: f64) -> Result<Self> {
        Self::new(self.alpha.clone(), period)
    }
}
