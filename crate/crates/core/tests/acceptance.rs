//! Acceptance suite. Runs every criterion, prints one `PASS`/`FAIL` line each
//! with the measured quantities, and exits nonzero if any threshold or time
//! budget is missed.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use switchstab::linalg::{determinant, mat_exp, operator_norm_2, spectrum, Matrix};
use switchstab::model::{SwitchedSystem, Weights};
use switchstab::presets;
use switchstab::signals::{example_signal, NormMinPolicy, PeriodicSignal, Segment};
use switchstab::simulate::{limit_cycle, simulate, simulate_norm_min, unit_circle_points};
use switchstab::stability::{self, det_monodromy_oracle, is_ici_stable, monodromy};
use switchstab::synthesis;
use switchstab::Vector;

fn report(
    id: u32,
    name: &str,
    budget_s: f64,
    body: impl FnOnce() -> Result<String, String>,
) -> bool {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let outcome = match outcome {
        Ok(detail) if elapsed > Duration::from_secs_f64(budget_s) => Err(format!(
            "{detail}; took {:.2}s, budget {budget_s}s",
            elapsed.as_secs_f64()
        )),
        other => other,
    };
    match &outcome {
        Ok(detail) => println!(
            "criterion {id:>2} PASS  {name}: {detail} ({:.3}s)",
            elapsed.as_secs_f64()
        ),
        Err(detail) => println!(
            "criterion {id:>2} FAIL  {name}: {detail} ({:.3}s)",
            elapsed.as_secs_f64()
        ),
    }
    outcome.is_ok()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn v(xs: &[f64]) -> Vector {
    Vector::new(xs.to_vec()).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Matrix::new(n, n, data).unwrap()
}

fn random_system(rng: &mut ChaCha8Rng) -> (SwitchedSystem, PeriodicSignal) {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let sys = SwitchedSystem::linear((0..m).map(|_| random_matrix(rng, n)).collect()).unwrap();
    let len = rng.gen_range(2..=6);
    let segments = (0..len)
        .map(|_| Segment::new(rng.gen_range(0..m), rng.gen_range(0.05..1.0)))
        .collect();
    (sys, PeriodicSignal::new(segments).unwrap())
}

fn criterion_01_example_one_common_equilibrium() -> bool {
    report(1, "example 1 common equilibrium", 1.0, || {
        let e = presets::example_one()
            .common_equilibrium(1e-9)
            .map_err(|e| e.to_string())?
            .ok_or("no common equilibrium found")?;
        let err = e.distance(&v(&[0.0, -1.0]));
        ensure(err <= 1e-9, || {
            format!("equilibrium {e:?} is {err:e} from (0,-1)")
        })?;
        Ok(format!("e = {:?}, error {err:.1e}", e.as_slice()))
    })
}

fn criterion_02_example_one_stability() -> bool {
    report(2, "example 1 stable at eta = 1.1 and 1e-3", 5.0, || {
        let sys = presets::example_one();
        let mut radii = Vec::new();
        for eta in [1.1, 1e-3] {
            let r =
                is_ici_stable(&sys, &example_signal(eta).unwrap()).map_err(|e| e.to_string())?;
            ensure(r.is_stable, || {
                format!("rho = {} at eta = {eta}", r.spectral_radius)
            })?;
            radii.push(r.spectral_radius);
        }
        let target = v(&[0.0, -1.0]);
        let signal = example_signal(1.1).unwrap();
        let mut worst: f64 = 0.0;
        for x0 in unit_circle_points(8) {
            let traj = simulate(&sys, &signal, &x0, 60.0, 0.01).map_err(|e| e.to_string())?;
            let last = traj.last().unwrap();
            ensure((last.t - 60.0).abs() < 1e-9, || {
                format!("ended at t = {}", last.t)
            })?;
            worst = worst.max(last.x.distance(&target));
        }
        ensure(worst < 1e-3, || {
            format!("worst distance at t = 60 is {worst:e}")
        })?;
        Ok(format!(
            "rho(1.1) = {:.4}, rho(1e-3) = {:.6}, worst |x(60) - e| = {worst:.1e}",
            radii[0], radii[1]
        ))
    })
}

fn criterion_03_example_two_equilibria() -> bool {
    report(3, "example 2 equilibria", 1.0, || {
        let sys = presets::example_two();
        let eq = sys.equilibria().map_err(|e| e.to_string())?;
        let e2_err = eq[1].distance(&v(&[-3.64, 0.82]));
        ensure(e2_err <= 0.01, || format!("e2 = {:?}", eq[1]))?;
        let avg = sys
            .average_system(&presets::example_weights())
            .and_then(|s| s.equilibrium())
            .map_err(|e| e.to_string())?;
        let avg_err = avg.distance(&v(&[0.0, 3.0]));
        ensure(avg_err <= 1e-9, || format!("average equilibrium {avg:?}"))?;
        Ok(format!(
            "e2 = ({:.4}, {:.4}), average equilibrium error {avg_err:.1e}",
            eq[1][0], eq[1][1]
        ))
    })
}

fn criterion_04_example_two_limit_cycle() -> bool {
    report(4, "example 2 limit cycle", 10.0, || {
        let sys = presets::example_two();
        let signal = example_signal(0.5).unwrap();
        let cycle = limit_cycle(&sys, &signal, 2000).map_err(|e| e.to_string())?;
        ensure(cycle.spectral_radius < 1.0, || {
            format!("rho(M) = {}", cycle.spectral_radius)
        })?;
        let diameter = cycle.diameter();
        ensure(diameter > 1e-3, || format!("orbit diameter {diameter:e}"))?;

        let mut worst: f64 = 0.0;
        for x0 in unit_circle_points(8) {
            let traj = simulate(&sys, &signal, &x0, 60.0, 0.01).map_err(|e| e.to_string())?;
            worst = worst.max(cycle.distance_to(&traj.last().unwrap().x));
        }
        ensure(worst < 1e-3, || {
            format!("worst orbit distance at t = 60 is {worst:e}")
        })?;

        let coarse = cycle.practical_radius.ok_or("no average equilibrium")?;
        let fine = limit_cycle(&sys, &example_signal(0.25).unwrap(), 2000)
            .map_err(|e| e.to_string())?
            .practical_radius
            .ok_or("no average equilibrium")?;
        ensure(fine < coarse, || {
            format!("practical radius {fine} at 0.25 vs {coarse} at 0.5")
        })?;
        Ok(format!(
            "rho(M) = {:.4}, diameter {diameter:.3}, worst distance {worst:.1e}, radius {fine:.3} < {coarse:.3}",
            cycle.spectral_radius
        ))
    })
}

fn criterion_05_average_convergence_order() -> bool {
    report(5, "average-system convergence order", 2.0, || {
        let sys = presets::example_one().linear_part();
        let w = Weights::new(vec![0.5, 0.5], 1.0).unwrap();
        let etas = [0.1, 0.05, 0.025, 0.0125];
        let devs = etas
            .iter()
            .map(|&eta| stability::average_deviation(&sys, &w, eta, 1.0))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let xs: Vec<f64> = etas.iter().map(|e| e.ln()).collect();
        let ys: Vec<f64> = devs.iter().map(|d| d.ln()).collect();
        let mx = xs.iter().sum::<f64>() / 4.0;
        let my = ys.iter().sum::<f64>() / 4.0;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let slope = sxy / sxx;
        ensure(slope >= 0.9, || {
            format!("slope {slope}, deviations {devs:?}")
        })?;
        Ok(format!("slope {slope:.4}, deviations {devs:?}"))
    })
}

fn criterion_06_determinant_oracle() -> bool {
    report(
        6,
        "determinant oracle and permutation invariance",
        10.0,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            let mut worst_oracle: f64 = 0.0;
            let mut worst_perm: f64 = 0.0;
            for _ in 0..120 {
                let (sys, sig) = random_system(&mut rng);
                let det = determinant(&monodromy(&sys, &sig).unwrap()).unwrap();
                let oracle = det_monodromy_oracle(&sys, &sig).unwrap();
                worst_oracle = worst_oracle.max((det - oracle).abs() / oracle.abs());
                let mut perm: Vec<usize> = (0..sig.len()).collect();
                for _ in 0..10 {
                    perm.shuffle(&mut rng);
                    let permuted = sig.permute(&perm).unwrap();
                    let d = determinant(&monodromy(&sys, &permuted).unwrap()).unwrap();
                    worst_perm = worst_perm.max((d - det).abs() / det.abs());
                }
            }
            ensure(worst_oracle <= 1e-10, || {
                format!("oracle relative error {worst_oracle:e}")
            })?;
            ensure(worst_perm <= 1e-10, || {
                format!("permutation relative error {worst_perm:e}")
            })?;
            Ok(format!(
            "120 systems, worst oracle error {worst_oracle:.1e}, worst permutation error {worst_perm:.1e}"
        ))
        },
    )
}

fn criterion_07_cyclic_shift_invariance() -> bool {
    report(
        7,
        "spectrum invariance under rotation and shift",
        5.0,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut cases: Vec<(SwitchedSystem, PeriodicSignal)> = vec![
                (presets::example_one(), example_signal(1.1).unwrap()),
                (presets::example_two(), example_signal(0.5).unwrap()),
            ];
            cases.extend((0..30).map(|_| random_system(&mut rng)));
            let mut worst: f64 = 0.0;
            for (sys, sig) in &cases {
                let base = spectrum(&monodromy(sys, sig).unwrap()).unwrap();
                let mut variants: Vec<PeriodicSignal> =
                    (1..sig.len()).map(|k| sig.rotate(k)).collect();
                for _ in 0..5 {
                    variants.push(sig.shift(rng.gen_range(0.0..sig.period())).unwrap());
                }
                for var in variants {
                    let s = spectrum(&monodromy(sys, &var).unwrap()).unwrap();
                    worst = worst.max(base.distance(&s));
                }
            }
            ensure(worst <= 1e-8, || {
                format!("worst eigenvalue displacement {worst:e}")
            })?;
            Ok(format!(
                "{} systems, worst displacement {worst:.1e}",
                cases.len()
            ))
        },
    )
}

fn criterion_08_lie_product_rate() -> bool {
    report(8, "Lie product first-order rate", 5.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ks: Vec<u32> = (3..=10).map(|p| 1 << p).collect();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for pair in 0..20 {
            let x = random_matrix(&mut rng, 2);
            let y = random_matrix(&mut rng, 2);
            let target = mat_exp(&(&x + &y)).unwrap();
            let devs: Vec<f64> = ks
                .iter()
                .map(|&k| {
                    let kf = f64::from(k);
                    let step = &mat_exp(&x.scaled(1.0 / kf)).unwrap()
                        * &mat_exp(&y.scaled(1.0 / kf)).unwrap();
                    operator_norm_2(&(&step.powi(u64::from(k)).unwrap() - &target)).unwrap()
                })
                .collect();
            for w in devs.windows(2) {
                let ratio = w[0] / w[1];
                lo = lo.min(ratio);
                hi = hi.max(ratio);
                ensure((1.5..=2.5).contains(&ratio), || {
                    format!("pair {pair}: ratio {ratio} in deviations {devs:?}")
                })?;
            }
        }
        Ok(format!("20 pairs, halving ratios in [{lo:.4}, {hi:.4}]"))
    })
}

fn criterion_09_norm_min_stabilisation() -> bool {
    report(9, "norm-minimising policy", 10.0, || {
        let sys = presets::example_one().linear_part();
        let policy = NormMinPolicy::new(1e-3).unwrap();
        let mut worst: f64 = 0.0;
        let mut steps = 0usize;
        for x0 in unit_circle_points(8) {
            let traj = simulate_norm_min(&sys, &x0, 30.0, &policy).map_err(|e| e.to_string())?;
            for s in &traj.samples {
                let rates: Vec<f64> = sys
                    .subsystems()
                    .iter()
                    .map(|sub| s.x.dot(&sub.rate(&s.x)))
                    .collect();
                let best = rates.iter().cloned().fold(f64::INFINITY, f64::min);
                ensure(rates[s.active] <= best, || {
                    format!("t = {}: mode {} chosen with rates {rates:?}", s.t, s.active)
                })?;
            }
            steps += traj.len();
            let last = traj.last().unwrap();
            ensure((last.t - 30.0).abs() < 1e-9, || {
                format!("ended at t = {}", last.t)
            })?;
            worst = worst.max(last.x.norm2());
        }
        ensure(worst < 1e-3, || format!("worst |x(30)| = {worst:e}"))?;
        Ok(format!(
            "worst |x(30)| = {worst:.1e}, argmin verified at {steps} samples"
        ))
    })
}

fn criterion_10_commutator_bound_conservative() -> bool {
    report(10, "commutator bound checker", 5.0, || {
        let sys = presets::example_one().linear_part();
        let w = presets::example_weights();
        let ks = stability::default_k_grid();
        let small =
            stability::lemma4_bound_holds(&sys, &w, 1e-4, &ks).map_err(|e| e.to_string())?;
        ensure(small, || "bound fails at eta = 1e-4".into())?;

        let eta_max = synthesis::default_eta_max(&sys, &w).map_err(|e| e.to_string())?;
        let search =
            synthesis::max_stable_eta(&sys, &w, eta_max, 200, 1e-6).map_err(|e| e.to_string())?;
        let rho_fail = search
            .grid
            .iter()
            .find(|&&(_, rho)| rho >= 1.0)
            .map(|&(eta, _)| eta)
            .ok_or("rho never reaches 1 on the synthesis grid")?;
        let mut bound_fail = None;
        for &(eta, _) in &search.grid {
            if !stability::lemma4_bound_holds(&sys, &w, eta, &ks).map_err(|e| e.to_string())? {
                bound_fail = Some(eta);
                break;
            }
        }
        let bound_fail = bound_fail.ok_or("bound holds on the whole synthesis grid")?;
        ensure(bound_fail <= rho_fail, || {
            format!("bound first fails at eta = {bound_fail}, rho first reaches 1 at {rho_fail}")
        })?;
        Ok(format!(
            "bound holds at 1e-4; first failure eta = {bound_fail:.4} <= rho-failure eta = {rho_fail:.4}"
        ))
    })
}

fn main() {
    let criteria: [fn() -> bool; 10] = [
        criterion_01_example_one_common_equilibrium,
        criterion_02_example_one_stability,
        criterion_03_example_two_equilibria,
        criterion_04_example_two_limit_cycle,
        criterion_05_average_convergence_order,
        criterion_06_determinant_oracle,
        criterion_07_cyclic_shift_invariance,
        criterion_08_lie_product_rate,
        criterion_09_norm_min_stabilisation,
        criterion_10_commutator_bound_conservative,
    ];
    let failed = criteria.iter().filter(|run| !run()).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
