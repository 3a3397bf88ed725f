//! Two unstable affine modes sharing the equilibrium (0, -1), stabilised by
//! alternating between them with dwell 2 * eta.
//!
//! cargo run --example common_equilibrium [eta]

use switchstab::presets;
use switchstab::signals::example_signal;
use switchstab::simulate::{simulate, unit_circle_points};
use switchstab::stability::is_ici_stable_at;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eta: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(1.1);
    let system = presets::example_one();

    for (i, e) in system.equilibria()?.iter().enumerate() {
        println!("equilibrium of mode {}: {:?}", i + 1, e.as_slice());
    }
    let target = system
        .common_equilibrium(1e-9)?
        .ok_or("modes do not share an equilibrium")?;
    println!("common equilibrium: {:?}", target.as_slice());

    let shape = example_signal(1.0)?;
    for scale in [eta, 1e-3, 2.0] {
        let r = is_ici_stable_at(&system, &shape, scale)?;
        println!(
            "eta = {scale:<6} rho(Phi) = {:.6}  ||Phi||_2 = {:.6}  stable: {}",
            r.spectral_radius, r.operator_norm, r.is_stable
        );
    }

    let signal = shape.scale(eta)?;
    println!("\nunit circle after t = 60 at eta = {eta}:");
    for x0 in unit_circle_points(8) {
        let traj = simulate(&system, &signal, &x0, 60.0, 0.01)?;
        let end = &traj.last().unwrap().x;
        println!(
            "  x0 = ({:+.3}, {:+.3})  ->  |x(60) - e| = {:.2e}",
            x0[0],
            x0[1],
            end.distance(&target)
        );
    }
    Ok(())
}
