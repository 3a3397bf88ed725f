//! Exact piecewise integration of switched affine systems.
//!
//! Each constant-mode stretch `x' = A x + b` over time `tau` is solved with
//! the exponential of the augmented matrix `[[A, b], [0, 0]] * tau`, whose top
//! block row is the affine map `x -> e^{A tau} x + v`. No ODE stepper is
//! involved, so trajectories are exact up to rounding.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{mat_exp, solve, spectral_radius, Lu, Matrix, Vector};
use crate::model::{SubSystem, SwitchedSystem};
use crate::signals::{NormMinPolicy, PeriodicSignal};

/// State norm beyond which a simulation is declared divergent.
pub const DIVERGENCE_GUARD: f64 = 1e12;

/// Affine map `x -> M x + v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineMap {
    #[serde(rename = "M")]
    pub m: Matrix,
    pub v: Vector,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        Self {
            m: Matrix::identity(n),
            v: Vector::zeros(n),
        }
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &(&self.m * x) + &self.v
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &AffineMap) -> AffineMap {
        AffineMap {
            m: &self.m * &first.m,
            v: &(&self.m * &first.v) + &self.v,
        }
    }

    /// `x* = (I - M)^{-1} v`.
    pub fn fixed_point(&self) -> Result<Vector> {
        let n = self.m.rows();
        let lu = Lu::new(&(&Matrix::identity(n) - &self.m))?;
        if lu.is_singular() {
            return Err(Error::DegenerateCycle {
                pivot: lu.min_pivot(),
            });
        }
        lu.solve(&self.v)
    }
}

/// Flow map of one mode over `tau`, via the augmented exponential.
pub fn segment_map(sub: &SubSystem, tau: f64) -> Result<AffineMap> {
    let n = sub.dim();
    let mut aug = sub.a().padded(n + 1, n + 1);
    for i in 0..n {
        aug[(i, n)] = sub.b()[i];
    }
    let e = mat_exp(&aug.scaled(tau))?;
    let m = e.block(0, 0, n, n);
    let v = Vector::from_raw((0..n).map(|i| e[(i, n)]).collect());
    Ok(AffineMap { m, v })
}

/// Exact solution of `x' = A x + b` from `x` after time `tau`.
pub fn segment_step(sub: &SubSystem, x: &Vector, tau: f64) -> Result<Vector> {
    if x.len() != sub.dim() {
        return Err(Error::Dimension {
            context: "state",
            expected: sub.dim(),
            found: x.len(),
        });
    }
    Ok(segment_map(sub, tau)?.apply(x))
}

/// How the switching of a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Periodic,
    NormMin,
}

/// One state sample; `active` is the zero-based mode running from `t` on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vector,
    pub active: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub provenance: Provenance,
}

impl Trajectory {
    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `t,x1,..,xn,active` with one-based mode indices.
    pub fn to_csv(&self) -> String {
        let n = self.samples.first().map_or(0, |s| s.x.len());
        let mut out = String::from("t");
        for i in 1..=n {
            out.push_str(&format!(",x{i}"));
        }
        out.push_str(",active\n");
        for s in &self.samples {
            out.push_str(&s.t.to_string());
            for x in s.x.as_slice() {
                out.push(',');
                out.push_str(&x.to_string());
            }
            out.push_str(&format!(",{}\n", s.active + 1));
        }
        out
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be positive, got {v}"),
        })
    }
}

fn sample_times(t_end: f64, dt: f64) -> Vec<f64> {
    let count = (t_end / dt + 1e-9).floor() as usize;
    let mut times: Vec<f64> = (0..=count).map(|k| k as f64 * dt).collect();
    if let Some(&last) = times.last() {
        if last > t_end {
            times.pop();
        }
    }
    if times
        .last()
        .is_none_or(|&last| t_end - last > 1e-12 * t_end.max(1.0))
    {
        times.push(t_end);
    }
    times
}

struct Guard {
    limit: f64,
    samples: Vec<Sample>,
    provenance: Provenance,
}

impl Guard {
    fn check(&self, t: f64, x: &Vector) -> Result<()> {
        let norm = x.norm2();
        if norm > self.limit || !x.is_finite() {
            return Err(Error::Diverged {
                time: t,
                norm,
                trajectory: Box::new(Trajectory {
                    samples: self.samples.clone(),
                    provenance: self.provenance,
                }),
            });
        }
        Ok(())
    }

    fn push(&mut self, t: f64, x: Vector, active: usize) -> Result<()> {
        self.check(t, &x)?;
        self.samples.push(Sample { t, x, active });
        Ok(())
    }
}

/// Simulates under a periodic signal, sampling every `sample_dt` and at
/// `t_end`.
pub fn simulate(
    system: &SwitchedSystem,
    signal: &PeriodicSignal,
    x0: &Vector,
    t_end: f64,
    sample_dt: f64,
) -> Result<Trajectory> {
    simulate_with_guard(system, signal, x0, t_end, sample_dt, DIVERGENCE_GUARD)
}

pub fn simulate_with_guard(
    system: &SwitchedSystem,
    signal: &PeriodicSignal,
    x0: &Vector,
    t_end: f64,
    sample_dt: f64,
    guard: f64,
) -> Result<Trajectory> {
    check_positive("t_end", t_end)?;
    check_positive("sample_dt", sample_dt)?;
    signal.validate_for(system.len())?;
    if x0.len() != system.dim() {
        return Err(Error::Dimension {
            context: "initial state",
            expected: system.dim(),
            found: x0.len(),
        });
    }

    let segments = signal.segments();
    let full_maps = segments
        .iter()
        .map(|s| segment_map(&system.subsystems()[s.index], s.duration))
        .collect::<Result<Vec<_>>>()?;
    let mut starts = Vec::with_capacity(segments.len());
    let mut acc = 0.0;
    for s in segments {
        starts.push(acc);
        acc += s.duration;
    }
    let period = acc;

    let times = sample_times(t_end, sample_dt);
    let mut next = 0;
    let mut guard = Guard {
        limit: guard,
        samples: Vec::with_capacity(times.len()),
        provenance: Provenance::Periodic,
    };
    guard.check(0.0, x0)?;

    let mut x_start = x0.clone();
    let mut cycle = 0u64;
    'outer: loop {
        for (k, seg) in segments.iter().enumerate() {
            let t0 = cycle as f64 * period + starts[k];
            let t1 = t0 + seg.duration;
            let sub = &system.subsystems()[seg.index];
            while next < times.len() && times[next] < t1 {
                let ts = times[next];
                let x = if ts <= t0 {
                    x_start.clone()
                } else {
                    segment_step(sub, &x_start, ts - t0)?
                };
                guard.push(ts, x, seg.index)?;
                next += 1;
            }
            if next == times.len() {
                break 'outer;
            }
            x_start = full_maps[k].apply(&x_start);
            guard.check(t1, &x_start)?;
        }
        cycle += 1;
    }

    Ok(Trajectory {
        samples: guard.samples,
        provenance: Provenance::Periodic,
    })
}

/// Sampled-time norm-minimising closed loop: every `policy.step()` the mode
/// minimising `x^T (A_i x + b_i)` is selected and held for one step.
pub fn simulate_norm_min(
    system: &SwitchedSystem,
    x0: &Vector,
    t_end: f64,
    policy: &NormMinPolicy,
) -> Result<Trajectory> {
    simulate_norm_min_with_guard(system, x0, t_end, policy, DIVERGENCE_GUARD)
}

pub fn simulate_norm_min_with_guard(
    system: &SwitchedSystem,
    x0: &Vector,
    t_end: f64,
    policy: &NormMinPolicy,
    guard: f64,
) -> Result<Trajectory> {
    check_positive("t_end", t_end)?;
    if x0.len() != system.dim() {
        return Err(Error::Dimension {
            context: "initial state",
            expected: system.dim(),
            found: x0.len(),
        });
    }
    let h = policy.step();
    let step_maps = system
        .subsystems()
        .iter()
        .map(|s| segment_map(s, h))
        .collect::<Result<Vec<_>>>()?;

    let times = sample_times(t_end, h);
    let mut guard = Guard {
        limit: guard,
        samples: Vec::with_capacity(times.len()),
        provenance: Provenance::NormMin,
    };
    let mut x = x0.clone();
    for (k, &t) in times.iter().enumerate() {
        let active = policy.select(system, &x);
        guard.push(t, x.clone(), active)?;
        if let Some(&t_next) = times.get(k + 1) {
            let tau = t_next - t;
            x = if (tau - h).abs() <= 1e-12 * h {
                step_maps[active].apply(&x)
            } else {
                segment_step(&system.subsystems()[active], &x, tau)?
            };
        }
    }
    Ok(Trajectory {
        samples: guard.samples,
        provenance: Provenance::NormMin,
    })
}

/// One-period map `x(T) = M x(0) + v` under `signal`.
pub fn poincare_map(system: &SwitchedSystem, signal: &PeriodicSignal) -> Result<AffineMap> {
    signal.validate_for(system.len())?;
    let mut map = AffineMap::identity(system.dim());
    for seg in signal.segments() {
        map = segment_map(&system.subsystems()[seg.index], seg.duration)?.compose(&map);
    }
    Ok(map)
}

/// Attracting periodic orbit of an affine system under a periodic signal.
#[derive(Debug, Clone, Serialize)]
pub struct Cycle {
    pub fixed_point: Vector,
    pub period: f64,
    pub orbit: Vec<(f64, Vector)>,
    /// Spectral radius of the one-period linear part.
    pub spectral_radius: f64,
    /// Equilibrium of the averaged system, when its matrix is invertible.
    pub average_equilibrium: Option<Vector>,
    /// Largest distance from the orbit to `average_equilibrium`.
    pub practical_radius: Option<f64>,
}

impl Cycle {
    /// Euclidean distance from `point` to the sampled orbit polyline.
    pub fn distance_to(&self, point: &Vector) -> f64 {
        polyline_distance(&self.orbit, point)
    }

    /// Largest orbit distance from `x*`; zero when the orbit is a point.
    pub fn diameter(&self) -> f64 {
        self.orbit
            .iter()
            .map(|(_, x)| x.distance(&self.fixed_point))
            .fold(0.0, f64::max)
    }
}

fn segment_distance(a: &Vector, b: &Vector, p: &Vector) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(&ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    p.distance(&(a + &ab.scaled(t)))
}

fn polyline_distance(orbit: &[(f64, Vector)], p: &Vector) -> f64 {
    match orbit {
        [] => f64::INFINITY,
        [(_, only)] => p.distance(only),
        _ => orbit
            .windows(2)
            .map(|w| segment_distance(&w[0].1, &w[1].1, p))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Symmetric Hausdorff distance between two sampled orbits, each treated as a
/// polyline.
pub fn hausdorff_distance(a: &[(f64, Vector)], b: &[(f64, Vector)]) -> f64 {
    let one_way = |from: &[(f64, Vector)], to: &[(f64, Vector)]| {
        from.iter()
            .map(|(_, x)| polyline_distance(to, x))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Fixed point of the one-period map and the orbit through it, sampled at
/// `orbit_samples` equally spaced times.
pub fn limit_cycle(
    system: &SwitchedSystem,
    signal: &PeriodicSignal,
    orbit_samples: usize,
) -> Result<Cycle> {
    if orbit_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "orbit_samples",
            reason: "need at least one sample".into(),
        });
    }
    let map = poincare_map(system, signal)?;
    let rho = spectral_radius(&map.m)?;
    if !(rho < 1.0) {
        return Err(Error::NoAttractingCycle {
            spectral_radius: rho,
        });
    }
    let fixed_point = map.fixed_point()?;
    let period = signal.period();
    let traj = simulate(
        system,
        signal,
        &fixed_point,
        period,
        period / orbit_samples as f64,
    )?;
    let orbit: Vec<(f64, Vector)> = traj.samples.into_iter().map(|s| (s.t, s.x)).collect();

    let weights = signal.activation_fractions(system.len())?;
    let avg = system.average_system(&weights)?;
    let average_equilibrium = solve(avg.a(), avg.b()).ok().map(|v| -&v);
    let practical_radius = average_equilibrium
        .as_ref()
        .map(|e| orbit.iter().map(|(_, x)| x.distance(e)).fold(0.0, f64::max));

    Ok(Cycle {
        fixed_point,
        period,
        orbit,
        spectral_radius: rho,
        average_equilibrium,
        practical_radius,
    })
}

/// `k` points evenly spaced on the unit circle, starting at `(1, 0)`.
pub fn unit_circle_points(k: usize) -> Vec<Vector> {
    (0..k)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
            Vector::from_raw(vec![th.cos(), th.sin()])
        })
        .collect()
}
