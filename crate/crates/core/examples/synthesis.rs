//! Finds a Hurwitz convex combination of the mode matrices, builds the
//! periodic signal realising it and locates the largest dwell scale that
//! still stabilises.
//!
//! cargo run --example synthesis

use switchstab::presets;
use switchstab::signals::PeriodicSignal;
use switchstab::synthesis::{default_eta_max, find_stable_combination, max_stable_eta};

fn main() -> switchstab::Result<()> {
    let system = presets::example_one().linear_part();

    let combo = find_stable_combination(&system.matrices(), 0.01, true)?;
    println!(
        "weights {:?}  abscissa {:+.6}  ({} evaluations)",
        combo.weights.alpha(),
        combo.abscissa,
        combo.evaluations
    );
    if !combo.found {
        println!("no stable combination: no periodic signal can stabilise");
        return Ok(());
    }

    let signal = PeriodicSignal::from_weights(&combo.weights, 1.0)?;
    println!("signal shape: {:?}", signal.segments());

    let eta_max = default_eta_max(&system, &combo.weights)?;
    let search = max_stable_eta(&system, &combo.weights, eta_max, 200, 1e-6)?;
    println!(
        "eta_star ~ {:.6} (first unstable grid point {:?})",
        search.eta_star, search.first_unstable
    );
    for (eta, rho) in search.grid.iter().step_by(20) {
        println!("  eta = {eta:>8.4}  rho = {rho:.6}");
    }
    Ok(())
}
