//! Constructive stabilisation: a Hurwitz point of the convex hull of the mode
//! matrices, then the range of scales `eta` for which the periodic signal
//! built from it is stabilising.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{operator_norm_2, spectral_abscissa, spectral_radius, Matrix};
use crate::model::{SwitchedSystem, Weights};
use crate::signals::PeriodicSignal;
use crate::stability::monodromy;

/// Best convex combination found by [`find_stable_combination`].
#[derive(Debug, Clone, Serialize)]
pub struct CombinationResult {
    pub weights: Weights,
    /// Spectral abscissa of `sum alpha_i A_i`.
    pub abscissa: f64,
    pub found: bool,
    pub evaluations: usize,
}

/// Searches the simplex for weights minimising the spectral abscissa of the
/// combined matrix.
///
/// Scans the lattice of weights with spacing `resolution`, then optionally
/// polishes the best lattice point with Nelder-Mead. The returned weights
/// carry unit period.
pub fn find_stable_combination(
    matrices: &[Matrix],
    resolution: f64,
    refine: bool,
) -> Result<CombinationResult> {
    let first = matrices.first().ok_or(Error::Empty("matrix list"))?;
    let n = first.require_square()?;
    for m in matrices {
        first.require_same_shape(m, "convex combination")?;
    }
    if !(resolution.is_finite() && resolution > 0.0 && resolution <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "resolution",
            reason: format!("grid step must lie in (0, 1], got {resolution}"),
        });
    }

    let mut evaluations = 0usize;
    let mut objective = |alpha: &[f64]| -> Result<f64> {
        evaluations += 1;
        spectral_abscissa(&combine(matrices, alpha, n))
    };

    let steps = (1.0 / resolution).round().max(1.0) as usize;
    let mut best_alpha = vec![0.0; matrices.len()];
    best_alpha[0] = 1.0;
    let mut best_value = f64::INFINITY;
    let mut counts = vec![0usize; matrices.len()];
    let mut alpha = vec![0.0; matrices.len()];
    for_each_composition(steps, &mut counts, 0, &mut |c| {
        for (a, &k) in alpha.iter_mut().zip(c) {
            *a = k as f64 / steps as f64;
        }
        let v = objective(&alpha)?;
        if v < best_value {
            best_value = v;
            best_alpha.copy_from_slice(&alpha);
        }
        Ok(())
    })?;

    if refine && matrices.len() > 1 {
        let (alpha, value) = nelder_mead(&best_alpha, best_value, resolution, &mut objective)?;
        if value < best_value {
            best_value = value;
            best_alpha = alpha;
        }
    }

    Ok(CombinationResult {
        weights: Weights::normalized(&best_alpha, 1.0)?,
        abscissa: best_value,
        found: best_value < 0.0,
        evaluations,
    })
}

fn combine(matrices: &[Matrix], alpha: &[f64], n: usize) -> Matrix {
    matrices
        .iter()
        .zip(alpha)
        .fold(Matrix::zeros(n, n), |acc, (m, &a)| &acc + &m.scaled(a))
}

/// Visits every way of writing `total` as an ordered sum of `counts.len()`
/// nonnegative integers.
fn for_each_composition(
    total: usize,
    counts: &mut [usize],
    pos: usize,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if pos + 1 == counts.len() {
        counts[pos] = total;
        return visit(counts);
    }
    for k in 0..=total {
        counts[pos] = k;
        for_each_composition(total - k, counts, pos + 1, visit)?;
    }
    Ok(())
}

/// Maps an unconstrained point to the simplex by `|z_i| / sum |z_j|`.
fn to_simplex(z: &[f64]) -> Option<Vec<f64>> {
    let sum: f64 = z.iter().map(|x| x.abs()).sum();
    (sum > 0.0).then(|| z.iter().map(|x| x.abs() / sum).collect())
}

/// Derivative-free polish of a simplex point; the abscissa is not smooth.
fn nelder_mead(
    start: &[f64],
    start_value: f64,
    step: f64,
    objective: &mut dyn FnMut(&[f64]) -> Result<f64>,
) -> Result<(Vec<f64>, f64)> {
    const MAX_ITER: usize = 400;
    const FTOL: f64 = 1e-12;

    let dim = start.len();
    let mut eval = |z: &[f64]| -> Result<f64> {
        match to_simplex(z) {
            Some(a) => objective(&a),
            None => Ok(f64::INFINITY),
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.to_vec(), start_value)];
    for i in 0..dim {
        let mut z = start.to_vec();
        z[i] += if z[i] + step <= 1.0 { step } else { -step };
        let f = eval(&z)?;
        simplex.push((z, f));
    }

    for _ in 0..MAX_ITER {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[dim].1 - simplex[0].1;
        if spread.abs() <= FTOL {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|p| p.0[j]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(1.0);
        let fr = eval(&reflected)?;
        if fr < simplex[0].1 {
            let expanded = along(2.0);
            let fe = eval(&expanded)?;
            simplex[dim] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
            continue;
        }
        let contracted = if fr < worst.1 {
            along(0.5)
        } else {
            along(-0.5)
        };
        let fc = eval(&contracted)?;
        if fc < worst.1.min(fr) {
            simplex[dim] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for p in simplex.iter_mut().skip(1) {
            let z: Vec<f64> = best
                .iter()
                .zip(&p.0)
                .map(|(b, x)| b + 0.5 * (x - b))
                .collect();
            let f = eval(&z)?;
            *p = (z, f);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (z, f) = simplex.swap_remove(0);
    Ok((to_simplex(&z).unwrap_or_else(|| start.to_vec()), f))
}

/// Result of [`max_stable_eta`]. `eta_star` is a numerical estimate of the
/// largest scale below which every scale stabilises.
#[derive(Debug, Clone, Serialize)]
pub struct EtaSearchResult {
    pub eta_star: f64,
    /// `(eta, rho(Phi(eta)))` at the grid points, ascending in `eta`.
    pub grid: Vec<(f64, f64)>,
    /// Whether the smallest grid scale is stabilising.
    pub stable_prefix: bool,
    /// Unstable grid scale bounding the stable interval from above, if any.
    pub first_unstable: Option<f64>,
}

/// Spectral radius of the monodromy for `base` scaled by `eta`.
pub fn radius_at(system: &SwitchedSystem, base: &PeriodicSignal, eta: f64) -> Result<f64> {
    spectral_radius(&monodromy(system, &base.scale(eta)?)?)
}

/// Largest stabilising scale for the signal built from `weights`.
///
/// Samples `rho(Phi(eta))` at `grid_points` equally spaced scales in
/// `(0, eta_max]` and bisects between the last stable and first unstable
/// point of the interval anchored at zero, to relative width `refine_tol`.
/// Stable islands beyond the first unstable scale stay in the grid but do not
/// move `eta_star`.
pub fn max_stable_eta(
    system: &SwitchedSystem,
    weights: &Weights,
    eta_max: f64,
    grid_points: usize,
    refine_tol: f64,
) -> Result<EtaSearchResult> {
    let avg = system.average_system(weights)?;
    let abscissa = spectral_abscissa(avg.a())?;
    if !(abscissa < 0.0) {
        return Err(Error::UnstableAverage { abscissa });
    }
    let base = PeriodicSignal::from_weights(weights, 1.0)?;
    max_stable_eta_for_signal(system, &base, eta_max, grid_points, refine_tol)
}

/// As [`max_stable_eta`] for an arbitrary signal shape `base`.
pub fn max_stable_eta_for_signal(
    system: &SwitchedSystem,
    base: &PeriodicSignal,
    eta_max: f64,
    grid_points: usize,
    refine_tol: f64,
) -> Result<EtaSearchResult> {
    if !(eta_max.is_finite() && eta_max > 0.0) {
        return Err(Error::InvalidParameter {
            name: "eta_max",
            reason: format!("must be positive, got {eta_max}"),
        });
    }
    if grid_points == 0 {
        return Err(Error::InvalidParameter {
            name: "grid_points",
            reason: "need at least one grid point".into(),
        });
    }
    if !(refine_tol.is_finite() && refine_tol > 0.0 && refine_tol < 1.0) {
        return Err(Error::InvalidParameter {
            name: "refine_tol",
            reason: format!("must lie in (0, 1), got {refine_tol}"),
        });
    }

    let grid = (1..=grid_points)
        .map(|k| {
            let eta = eta_max * k as f64 / grid_points as f64;
            Ok((eta, radius_at(system, base, eta)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let first_bad = grid.iter().position(|&(_, rho)| !(rho < 1.0));
    let (eta_star, first_unstable) = match first_bad {
        None => (eta_max, None),
        Some(k) => {
            let mut lo = if k == 0 { 0.0 } else { grid[k - 1].0 };
            let mut hi = grid[k].0;
            while hi - lo > refine_tol * hi {
                let mid = 0.5 * (lo + hi);
                if radius_at(system, base, mid)? < 1.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (lo, Some(grid[k].0))
        }
    };

    Ok(EtaSearchResult {
        eta_star,
        stable_prefix: grid[0].1 < 1.0,
        grid,
        first_unstable,
    })
}

/// `10 / (||A_avg||_2 T)`, so that the scaled period `eta T` spans at most
/// ten time constants of the averaged system.
pub fn default_eta_max(system: &SwitchedSystem, weights: &Weights) -> Result<f64> {
    let avg = system.average_system(weights)?;
    let norm = operator_norm_2(avg.a())?;
    if norm == 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta_max",
            reason: "average matrix is zero".into(),
        });
    }
    Ok(10.0 / norm / weights.period())
}
