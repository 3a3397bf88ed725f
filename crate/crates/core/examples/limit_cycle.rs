//! Affine modes without a common equilibrium: a periodic signal drives every
//! trajectory onto a closed orbit around the averaged equilibrium (0, 3),
//! which shrinks as the dwell time does.
//!
//! cargo run --example limit_cycle

use switchstab::presets;
use switchstab::signals::example_signal;
use switchstab::simulate::{limit_cycle, simulate, unit_circle_points};

fn main() -> switchstab::Result<()> {
    let system = presets::example_two();
    for (i, e) in system.equilibria()?.iter().enumerate() {
        println!("equilibrium of mode {}: ({:.4}, {:.4})", i + 1, e[0], e[1]);
    }
    let avg = system.average_system(&presets::example_weights())?;
    println!(
        "averaged equilibrium: {:?}\n",
        avg.equilibrium()?.as_slice()
    );

    for eta in [1.0, 0.5, 0.25, 0.1, 0.05] {
        let cycle = limit_cycle(&system, &example_signal(eta)?, 400)?;
        println!(
            "eta = {eta:<5} rho(M) = {:.4}  x* = ({:+.4}, {:+.4})  practical radius {:.4}",
            cycle.spectral_radius,
            cycle.fixed_point[0],
            cycle.fixed_point[1],
            cycle.practical_radius.unwrap_or(f64::NAN)
        );
    }

    let signal = example_signal(0.5)?;
    let cycle = limit_cycle(&system, &signal, 400)?;
    println!("\ndistance to the eta = 0.5 orbit:");
    for x0 in unit_circle_points(4) {
        let traj = simulate(&system, &signal, &x0, 60.0, 0.5)?;
        let at = |t: f64| {
            let s = traj.samples.iter().find(|s| s.t >= t).unwrap();
            cycle.distance_to(&s.x)
        };
        println!(
            "  x0 = ({:+.0}, {:+.0}): t=0 {:.3e}  t=10 {:.3e}  t=60 {:.3e}",
            x0[0],
            x0[1],
            at(0.0),
            at(10.0),
            at(60.0)
        );
    }
    Ok(())
}
