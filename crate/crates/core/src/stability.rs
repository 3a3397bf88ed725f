//! One-period transition matrices of switched linear systems under periodic
//! signals, and the certificates built on them.
//!
//! Stability of the periodic system is decided by the spectral radius of the
//! monodromy matrix `Phi = e^{t_k A_k} ... e^{t_1 A_1}`. The induced-norm test
//! `||Phi|| < 1` is only sufficient and is reported alongside.
//!
//! The commutator machinery expands `log Phi` in powers of `h = eta * T`:
//! `log Phi = h Z1 + h^2 Z2 + h^3 Z3 + O(h^4)` with `Z1` the averaged matrix
//! and `Z2` the leading commutator correction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{commutator, determinant, mat_exp, operator_norm_2, spectral_radius, Matrix};
use crate::model::{SwitchedSystem, Weights};
use crate::signals::{PeriodicSignal, Segment};

/// Transition matrix over one period. The first segment is the rightmost
/// factor.
pub fn monodromy(system: &SwitchedSystem, signal: &PeriodicSignal) -> Result<Matrix> {
    signal.validate_for(system.len())?;
    let mut phi = Matrix::identity(system.dim());
    for seg in signal.segments() {
        let a = system.subsystem(seg.index)?.a();
        phi = &mat_exp(&a.scaled(seg.duration))? * &phi;
    }
    Ok(phi)
}

/// Transition matrix of the linear part over `[0, horizon]`.
pub fn transition_matrix(
    system: &SwitchedSystem,
    signal: &PeriodicSignal,
    horizon: f64,
) -> Result<Matrix> {
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "horizon",
            reason: format!("must be nonnegative, got {horizon}"),
        });
    }
    let period = signal.period();
    let ratio = horizon / period;
    let nearest = ratio.round();
    let (cycles, remainder) = if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
        (nearest as u64, 0.0)
    } else {
        let c = ratio.floor();
        (c as u64, horizon - c * period)
    };

    let mut phi = monodromy(system, signal)?.powi(cycles)?;
    let mut left = remainder;
    for seg in signal.segments() {
        if left <= 0.0 {
            break;
        }
        let dt = seg.duration.min(left);
        let a = system.subsystem(seg.index)?.a();
        phi = &mat_exp(&a.scaled(dt))? * &phi;
        left -= dt;
    }
    Ok(phi)
}

/// Outcome of the spectral stability test for one periodic signal.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub eta: f64,
    pub period: f64,
    pub spectral_radius: f64,
    pub determinant: f64,
    pub det_oracle: f64,
    pub is_stable: bool,
    /// `||Phi||_2 < 1`, the conservative norm test.
    pub norm_condition_holds: bool,
    pub operator_norm: f64,
    pub monodromy: Matrix,
}

/// Decides asymptotic stability of the linear part under `signal`.
pub fn is_ici_stable(system: &SwitchedSystem, signal: &PeriodicSignal) -> Result<StabilityReport> {
    is_ici_stable_at(system, signal, 1.0)
}

/// As [`is_ici_stable`] for `signal` scaled by `eta`; the report records
/// `eta`.
pub fn is_ici_stable_at(
    system: &SwitchedSystem,
    signal: &PeriodicSignal,
    eta: f64,
) -> Result<StabilityReport> {
    let signal = signal.scale(eta)?;
    let phi = monodromy(system, &signal)?;
    let rho = spectral_radius(&phi)?;
    let norm = operator_norm_2(&phi)?;
    Ok(StabilityReport {
        eta,
        period: signal.period(),
        spectral_radius: rho,
        determinant: determinant(&phi)?,
        det_oracle: det_monodromy_oracle(system, &signal)?,
        is_stable: rho < 1.0,
        norm_condition_holds: norm < 1.0,
        operator_norm: norm,
        monodromy: phi,
    })
}

/// Closed-form `det(Phi) = exp(sum_k t_k tr(A_k))`, independent of the
/// segment order.
pub fn det_monodromy_oracle(system: &SwitchedSystem, signal: &PeriodicSignal) -> Result<f64> {
    signal.validate_for(system.len())?;
    let exponent: f64 = signal
        .segments()
        .iter()
        .map(|s| s.duration * system.subsystems()[s.index].a().trace())
        .sum();
    Ok(exponent.exp())
}

/// Spectral radius and determinant of the monodromy for one reordering.
#[derive(Debug, Clone, Serialize)]
pub struct PermutationOutcome {
    pub permutation: Vec<usize>,
    pub spectral_radius: f64,
    pub determinant: f64,
    pub is_stable: bool,
}

/// Evaluates the monodromy under each segment permutation.
///
/// The determinant is invariant under every permutation; the spectrum only
/// under cyclic ones, so the stability verdict may change.
pub fn permutation_survey(
    system: &SwitchedSystem,
    signal: &PeriodicSignal,
    permutations: &[Vec<usize>],
) -> Result<Vec<PermutationOutcome>> {
    permutations
        .iter()
        .map(|perm| {
            let phi = monodromy(system, &signal.permute(perm)?)?;
            let rho = spectral_radius(&phi)?;
            Ok(PermutationOutcome {
                permutation: perm.clone(),
                spectral_radius: rho,
                determinant: determinant(&phi)?,
                is_stable: rho < 1.0,
            })
        })
        .collect()
}

/// Graded matrix series `sum_g h^g P[g-1]`, truncated at a fixed order.
#[derive(Clone)]
struct Graded(Vec<Matrix>);

impl Graded {
    fn zero(order: usize, n: usize) -> Self {
        Graded(vec![Matrix::zeros(n, n); order])
    }

    fn first_order(m: Matrix, order: usize) -> Self {
        let n = m.rows();
        let mut g = Self::zero(order, n);
        g.0[0] = m;
        g
    }

    fn add(&self, other: &Graded, factor: f64) -> Graded {
        Graded(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + &b.scaled(factor))
                .collect(),
        )
    }

    fn bracket(&self, other: &Graded) -> Result<Graded> {
        let order = self.0.len();
        let n = self.0[0].rows();
        let mut out = Self::zero(order, n);
        // grade(i + 1) * grade(j + 1) lands in grade i + j + 2
        for i in 0..order {
            for j in 0..order {
                let g = i + j + 1;
                if g < order {
                    out.0[g] = &out.0[g] + &commutator(&self.0[i], &other.0[j])?;
                }
            }
        }
        Ok(out)
    }
}

/// `log(e^X e^Y)` through third order.
fn bch(x: &Graded, y: &Graded) -> Result<Graded> {
    let xy = x.bracket(y)?;
    let x_xy = x.bracket(&xy)?;
    let y_xy = y.bracket(&xy)?;
    Ok(x.add(y, 1.0)
        .add(&xy, 0.5)
        .add(&x_xy, 1.0 / 12.0)
        .add(&y_xy, -1.0 / 12.0))
}

/// Coefficients `[Z1, .., Z_order]` of `log Phi = sum_g (eta T)^g Z_g`
/// for the shape of `signal` normalised to unit scale.
///
/// `order` is 1, 2 or 3.
pub fn bch_series(
    system: &SwitchedSystem,
    signal: &PeriodicSignal,
    order: usize,
) -> Result<Vec<Matrix>> {
    if !(1..=3).contains(&order) {
        return Err(Error::InvalidParameter {
            name: "order",
            reason: format!("BCH truncation order must be 1, 2 or 3, got {order}"),
        });
    }
    signal.validate_for(system.len())?;
    let period = signal.period();
    let mut z: Option<Graded> = None;
    for seg in signal.segments() {
        let x = Graded::first_order(
            system.subsystems()[seg.index]
                .a()
                .scaled(seg.duration / period),
            order,
        );
        z = Some(match z {
            None => x,
            Some(prev) => bch(&x, &prev)?,
        });
    }
    Ok(z.expect("signals are nonempty").0)
}

/// Second-order BCH coefficient for a signal shape:
/// `C2 = 1/2 sum_{j > i} f_j f_i [A_{p(j)}, A_{p(i)}]` over segment positions,
/// with `f` the per-segment fractions of the period.
pub fn bch_c2_for_signal(system: &SwitchedSystem, signal: &PeriodicSignal) -> Result<Matrix> {
    signal.validate_for(system.len())?;
    let period = signal.period();
    let segs = signal.segments();
    let mut c = Matrix::zeros(system.dim(), system.dim());
    for (j, later) in segs.iter().enumerate() {
        for earlier in &segs[..j] {
            let bracket = commutator(
                system.subsystems()[later.index].a(),
                system.subsystems()[earlier.index].a(),
            )?;
            let coeff = 0.5 * (later.duration / period) * (earlier.duration / period);
            c = &c + &bracket.scaled(coeff);
        }
    }
    Ok(c)
}

/// Second-order BCH coefficient for weights activated in `order`.
///
/// `order` lists distinct subsystem indices; each is active for its weight's
/// share of the period.
pub fn bch_c2(system: &SwitchedSystem, weights: &Weights, order: &[usize]) -> Result<Matrix> {
    let signal = ordered_signal(system, weights, order)?;
    bch_c2_for_signal(system, &signal)
}

fn ordered_signal(
    system: &SwitchedSystem,
    weights: &Weights,
    order: &[usize],
) -> Result<PeriodicSignal> {
    if weights.len() != system.len() {
        return Err(Error::Dimension {
            context: "weights",
            expected: system.len(),
            found: weights.len(),
        });
    }
    let mut seen = vec![false; system.len()];
    let mut segments = Vec::with_capacity(order.len());
    for &i in order {
        if i >= system.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                count: system.len(),
            });
        }
        if seen[i] {
            return Err(Error::InvalidPermutation { len: order.len() });
        }
        seen[i] = true;
        if weights.alpha()[i] > 0.0 {
            segments.push(Segment::new(i, weights.alpha()[i] * weights.period()));
        }
    }
    if segments.is_empty() {
        return Err(Error::InvalidWeights(
            "activation order selects no weight".into(),
        ));
    }
    PeriodicSignal::new(segments)
}

/// Default `k` grid `{1, 2, 4, .., 1024}` for the commutator bound.
pub fn default_k_grid() -> Vec<u32> {
    (0..=10).map(|p| 1u32 << p).collect()
}

/// Both sides of the commutator bound at one `k`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundTerm {
    pub k: u32,
    /// `||exp(h^2 C2 / k)||_2`
    pub commutator_side: f64,
    /// `||exp(h A / k)||_2^{-1}`
    pub average_side: f64,
}

impl BoundTerm {
    pub fn holds(&self) -> bool {
        self.commutator_side < self.average_side
    }
}

/// Evaluates the commutator bound for weights in index order at scale `eta`,
/// returning one term per `k`.
pub fn lemma4_terms(
    system: &SwitchedSystem,
    weights: &Weights,
    eta: f64,
    k_list: &[u32],
) -> Result<Vec<BoundTerm>> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: format!("must be positive, got {eta}"),
        });
    }
    if weights.len() != system.len() {
        return Err(Error::Dimension {
            context: "weights",
            expected: system.len(),
            found: weights.len(),
        });
    }
    let signal = PeriodicSignal::from_weights(weights, eta)?;
    lemma4_terms_for_signal(system, &signal, k_list)
}

/// Commutator bound for an already scaled signal, with `h` its period and
/// `A`, `C2` taken from its activation pattern.
pub fn lemma4_terms_for_signal(
    system: &SwitchedSystem,
    signal: &PeriodicSignal,
    k_list: &[u32],
) -> Result<Vec<BoundTerm>> {
    if k_list.is_empty() || k_list.contains(&0) {
        return Err(Error::InvalidParameter {
            name: "k_list",
            reason: "needs at least one positive integer".into(),
        });
    }
    let c2 = bch_c2_for_signal(system, signal)?;
    let avg = system.average_system(&signal.activation_fractions(system.len())?)?;
    let h = signal.period();
    k_list
        .iter()
        .map(|&k| {
            let kf = f64::from(k);
            let lhs = operator_norm_2(&mat_exp(&c2.scaled(h * h / kf))?)?;
            let rhs = 1.0 / operator_norm_2(&mat_exp(&avg.a().scaled(h / kf))?)?;
            Ok(BoundTerm {
                k,
                commutator_side: lhs,
                average_side: rhs,
            })
        })
        .collect()
}

/// `true` iff `||exp(h^2 C2 / k)|| < ||exp(h A / k)||^{-1}` for every `k` in
/// `k_list`, where `h = eta * T`.
pub fn lemma4_bound_holds(
    system: &SwitchedSystem,
    weights: &Weights,
    eta: f64,
    k_list: &[u32],
) -> Result<bool> {
    Ok(lemma4_terms(system, weights, eta, k_list)?
        .iter()
        .all(BoundTerm::holds))
}

/// `||eta C T|| e^{||A T||} e^{||eta C T||}` in the induced 2-norm.
pub fn average_error_bound(a: &Matrix, c: &Matrix, eta: f64, period: f64) -> Result<f64> {
    for (name, v) in [("eta", eta), ("period", period)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("must be positive, got {v}"),
            });
        }
    }
    let ect = operator_norm_2(&c.scaled(eta * period))?;
    let at = operator_norm_2(&a.scaled(period))?;
    Ok(ect * at.exp() * ect.exp())
}

/// Measured `||Phi(horizon) - e^{A horizon}||_2` for the signal built from
/// `weights` at scale `eta`, with `A` the averaged matrix.
pub fn average_deviation(
    system: &SwitchedSystem,
    weights: &Weights,
    eta: f64,
    horizon: f64,
) -> Result<f64> {
    let signal = PeriodicSignal::from_weights(weights, eta)?;
    let phi = transition_matrix(system, &signal, horizon)?;
    let avg = system.average_system(weights)?;
    let target = mat_exp(&avg.a().scaled(horizon))?;
    operator_norm_2(&(&phi - &target))
}
