//! Reordering a periodic signal: cyclic rotations and time shifts keep the
//! monodromy spectrum, arbitrary permutations keep only its determinant.
//!
//! cargo run --example signal_algebra

use switchstab::linalg::spectrum;
use switchstab::presets;
use switchstab::signals::PeriodicSignal;
use switchstab::stability::{det_monodromy_oracle, monodromy, permutation_survey};

fn main() -> switchstab::Result<()> {
    let system = presets::example_one().linear_part();
    let signal = PeriodicSignal::from_pairs(&[(0, 0.9), (1, 0.4), (0, 0.3), (1, 1.1)])?;
    println!(
        "period {}, min dwell {}, mean dwell {}",
        signal.period(),
        signal.min_dwell(),
        signal.mean_dwell()
    );
    println!(
        "activation fractions {:?}",
        signal.activation_fractions(2)?.alpha()
    );

    let base = spectrum(&monodromy(&system, &signal)?)?;
    println!("\nspectrum {:?}", base.sorted());
    for k in 1..signal.len() {
        let s = spectrum(&monodromy(&system, &signal.rotate(k))?)?;
        println!("rotate {k}: displacement {:.1e}", base.distance(&s));
    }
    for gamma in [0.25, 1.0, 2.5] {
        let s = spectrum(&monodromy(&system, &signal.shift(gamma)?)?)?;
        println!("shift {gamma}: displacement {:.1e}", base.distance(&s));
    }

    println!(
        "\ndet oracle {:.10}",
        det_monodromy_oracle(&system, &signal)?
    );
    let perms = vec![
        vec![0, 1, 2, 3],
        vec![0, 2, 1, 3],
        vec![1, 0, 3, 2],
        vec![3, 1, 2, 0],
    ];
    for p in permutation_survey(&system, &signal, &perms)? {
        println!(
            "perm {:?}: det {:.10}  rho {:.6}  stable {}",
            p.permutation, p.determinant, p.spectral_radius, p.is_stable
        );
    }
    Ok(())
}
