//! Second-order BCH term of the one-period monodromy, the sufficient
//! commutator bound on the dwell scale, and how far the switched flow strays
//! from the averaged flow.
//!
//! cargo run --example commutator_bound

use switchstab::linalg::mat_exp;
use switchstab::linalg::operator_norm_2;
use switchstab::presets;
use switchstab::signals::PeriodicSignal;
use switchstab::stability::{
    self, average_deviation, bch_c2, bch_series, default_k_grid, lemma4_bound_holds, monodromy,
};
use switchstab::Weights;

fn main() -> switchstab::Result<()> {
    let system = presets::example_one().linear_part();
    let w = presets::example_weights();

    let c2 = bch_c2(&system, &w, &[0, 1])?;
    println!("C2 = {:?}", c2.to_rows());

    // log Phi ~ h Z1 + h^2 Z2 + h^3 Z3; the truncation error falls as h^4.
    let shape = PeriodicSignal::from_weights(&w.with_period(1.0)?, 1.0)?;
    let z = bch_series(&system, &shape, 3)?;
    for h in [0.2, 0.1, 0.05] {
        let mut log = z[0].scaled(h);
        log = &log + &z[1].scaled(h * h);
        log = &log + &z[2].scaled(h * h * h);
        let err = operator_norm_2(&(&monodromy(&system, &shape.scale(h)?)? - &mat_exp(&log)?))?;
        println!("h = {h:<5} |Phi - exp(BCH_3)| = {err:.3e}");
    }

    let ks = default_k_grid();
    println!("\ncommutator bound over k in {ks:?}:");
    for eta in [1e-4, 0.1, 0.3, 0.5, 0.6, 1.0] {
        let rho =
            stability::is_ici_stable_at(&system, &PeriodicSignal::from_weights(&w, 1.0)?, eta)?
                .spectral_radius;
        println!(
            "  eta = {eta:<6} bound holds: {:<5}  rho(Phi) = {rho:.4}",
            lemma4_bound_holds(&system, &w, eta, &ks)?
        );
    }

    let unit = Weights::new(vec![0.5, 0.5], 1.0)?;
    println!("\n|Phi(1) - exp(A)| against eta:");
    for eta in [0.1, 0.05, 0.025, 0.0125] {
        println!(
            "  eta = {eta:<7} {:.4e}",
            average_deviation(&system, &unit, eta, 1.0)?
        );
    }
    Ok(())
}
