//! State feedback that always runs the mode decreasing |x| fastest, sampled
//! every `h` time units.
//!
//! cargo run --example norm_min

use switchstab::presets;
use switchstab::signals::NormMinPolicy;
use switchstab::simulate::{simulate_norm_min, unit_circle_points};

fn main() -> switchstab::Result<()> {
    let system = presets::example_one().linear_part();
    let policy = NormMinPolicy::new(1e-3)?;

    for x0 in unit_circle_points(8) {
        let traj = simulate_norm_min(&system, &x0, 30.0, &policy)?;
        let switches = traj
            .samples
            .windows(2)
            .filter(|w| w[0].active != w[1].active)
            .count();
        let mut dwell = vec![0usize; system.len()];
        for s in &traj.samples {
            dwell[s.active] += 1;
        }
        println!(
            "x0 = ({:+.3}, {:+.3})  |x(30)| = {:.2e}  switches {switches:>6}  samples per mode {dwell:?}",
            x0[0],
            x0[1],
            traj.last().unwrap().x.norm2()
        );
    }
    Ok(())
}
