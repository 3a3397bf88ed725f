//! Periodic switching signals and their algebra.
//!
//! A [`PeriodicSignal`] is a finite list of activation segments repeated
//! forever. Subsystem indices are zero-based here; file formats and reports
//! use one-based indices.

use crate::error::{Error, Result};
use crate::model::Weights;

/// One activation interval: subsystem `index` runs for `duration`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub index: usize,
    pub duration: f64,
}

impl Segment {
    pub fn new(index: usize, duration: f64) -> Self {
        Self { index, duration }
    }
}

/// Piecewise-constant, right-continuous, periodic switching signal.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSignal {
    segments: Vec<Segment>,
}

impl PeriodicSignal {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSignal("no segments".into()));
        }
        if let Some(s) = segments
            .iter()
            .find(|s| !(s.duration.is_finite() && s.duration > 0.0))
        {
            return Err(Error::InvalidSignal(format!(
                "segment durations must be positive, got {}",
                s.duration
            )));
        }
        Ok(Self { segments })
    }

    /// Builds a signal from `(index, duration)` pairs.
    pub fn from_pairs(pairs: &[(usize, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(i, d)| Segment::new(i, d)).collect())
    }

    /// One segment per subsystem of length `eta * alpha_i * T`, in index
    /// order, skipping zero weights.
    pub fn from_weights(weights: &Weights, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        let segments: Vec<Segment> = weights
            .alpha()
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0.0)
            .map(|(i, &a)| Segment::new(i, eta * a * weights.period()))
            .collect();
        if segments.is_empty() {
            return Err(Error::InvalidWeights("all weights are zero".into()));
        }
        Self::new(segments)
    }

    /// `k` equal segments cycling through subsystems `0..k`, each of length
    /// `duration`.
    pub fn round_robin(k: usize, duration: f64) -> Result<Self> {
        Self::new((0..k).map(|i| Segment::new(i, duration)).collect())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn period(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Checks that every index names one of `count` subsystems.
    pub fn validate_for(&self, count: usize) -> Result<()> {
        match self.segments.iter().find(|s| s.index >= count) {
            Some(s) => Err(Error::IndexOutOfRange {
                index: s.index,
                count,
            }),
            None => Ok(()),
        }
    }

    /// Highest subsystem index used, plus one.
    pub fn subsystem_count(&self) -> usize {
        self.segments.iter().map(|s| s.index + 1).max().unwrap_or(0)
    }

    /// Multiplies every duration by `eta`; activation order is unchanged.
    pub fn scale(&self, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        Ok(Self {
            segments: self
                .segments
                .iter()
                .map(|s| Segment::new(s.index, s.duration * eta))
                .collect(),
        })
    }

    /// The signal `t -> sigma(t + gamma)`.
    ///
    /// Rotates the segment list and splits the segment containing
    /// `gamma mod T` in two.
    pub fn shift(&self, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("shift must be nonnegative, got {gamma}"),
            });
        }
        let offset = gamma % self.period();
        let (k, start) = self.locate(offset);
        let head = self.segments[k];
        let into = offset - start;
        if into <= 0.0 {
            let mut rotated = self.segments[k..].to_vec();
            rotated.extend_from_slice(&self.segments[..k]);
            return Ok(Self { segments: rotated });
        }
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        out.push(Segment::new(head.index, head.duration - into));
        out.extend_from_slice(&self.segments[k + 1..]);
        out.extend_from_slice(&self.segments[..k]);
        out.push(Segment::new(head.index, into));
        Ok(Self { segments: out })
    }

    /// Cyclic rotation of the segment list by `k` positions.
    pub fn rotate(&self, k: usize) -> Self {
        let mut segments = self.segments.clone();
        let len = segments.len();
        segments.rotate_left(k % len);
        Self { segments }
    }

    /// Reorders segments so that position `i` of the result holds segment
    /// `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let len = self.segments.len();
        let mut seen = vec![false; len];
        if perm.len() != len {
            return Err(Error::InvalidPermutation { len });
        }
        for &p in perm {
            if p >= len || seen[p] {
                return Err(Error::InvalidPermutation { len });
            }
            seen[p] = true;
        }
        Ok(Self {
            segments: perm.iter().map(|&p| self.segments[p]).collect(),
        })
    }

    /// Segment position and start time of the segment active at `offset`
    /// within one period.
    fn locate(&self, offset: f64) -> (usize, f64) {
        let mut start = 0.0;
        for (k, s) in self.segments.iter().enumerate() {
            let end = start + s.duration;
            if offset < end {
                return (k, start);
            }
            start = end;
        }
        // Rounding can leave `offset` a hair past the accumulated end.
        (0, 0.0)
    }

    /// Index of the subsystem active at time `t >= 0`.
    pub fn active_index(&self, t: f64) -> usize {
        let offset = t.max(0.0) % self.period();
        self.segments[self.locate(offset).0].index
    }

    /// Fraction of the period each of `count` subsystems is active.
    pub fn activation_fractions(&self, count: usize) -> Result<Weights> {
        self.validate_for(count)?;
        let period = self.period();
        let mut alpha = vec![0.0; count];
        for s in &self.segments {
            alpha[s.index] += s.duration;
        }
        for a in &mut alpha {
            *a /= period;
        }
        // Renormalise away rounding so the simplex check passes.
        let sum: f64 = alpha.iter().sum();
        Weights::new(alpha.iter().map(|a| a / sum).collect(), period)
    }

    /// Shortest segment.
    pub fn min_dwell(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.duration)
            .fold(f64::INFINITY, f64::min)
    }

    /// Mean segment length.
    pub fn mean_dwell(&self) -> f64 {
        self.period() / self.segments.len() as f64
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta.is_finite() && eta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "eta",
            reason: format!("scale must be positive, got {eta}"),
        })
    }
}

/// The bundled two-mode signal: mode 1 on `[0, 2 eta)`, mode 2 on
/// `[2 eta, 4 eta)`, repeated.
pub fn example_signal(eta: f64) -> Result<PeriodicSignal> {
    check_eta(eta)?;
    PeriodicSignal::from_pairs(&[(0, 2.0 * eta), (1, 2.0 * eta)])
}

/// State-feedback rule that activates the mode decreasing `||x||` fastest,
/// re-evaluated every `step` time units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormMinPolicy {
    step: f64,
}

impl NormMinPolicy {
    pub fn new(step: f64) -> Result<Self> {
        if step.is_finite() && step > 0.0 {
            Ok(Self { step })
        } else {
            Err(Error::InvalidParameter {
                name: "step",
                reason: format!("sample step must be positive, got {step}"),
            })
        }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Mode minimising `x^T (A_i x + b_i)`, lowest index on ties.
    pub fn select(
        &self,
        system: &crate::model::SwitchedSystem,
        x: &crate::linalg::Vector,
    ) -> usize {
        let mut best = 0;
        let mut best_score = f64::INFINITY;
        for (i, s) in system.subsystems().iter().enumerate() {
            let score = x.dot(&s.rate(x));
            if score < best_score {
                best = i;
                best_score = score;
            }
        }
        best
    }
}
