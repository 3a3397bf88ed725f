//! Drives the command-line pipeline from code: writes a system file, runs
//! `analyze` and `cycle` on it and prints the reports.
//!
//! cargo run --example run_from_files [output-dir]

use std::fs;

use switchstab::cli::{run, Command, RunConfig};
use switchstab::io::{SignalSpec, SystemSpec};
use switchstab::presets;
use switchstab::signals::example_signal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "target/run_from_files".into());
    fs::create_dir_all(&dir)?;
    let system_path = format!("{dir}/system.json");
    let signal_path = format!("{dir}/signal.json");
    fs::write(
        &system_path,
        serde_json::to_string_pretty(&SystemSpec::from_system(&presets::example_two()))?,
    )?;
    fs::write(
        &signal_path,
        serde_json::to_string_pretty(&SignalSpec::from_signal(&example_signal(1.0)?, 0.5))?,
    )?;

    for command in [Command::Analyze, Command::Cycle] {
        let mut config = RunConfig::new(command, &dir);
        config.system_path = Some(system_path.clone().into());
        config.signal_path = Some(signal_path.clone().into());
        let outcome = run(&config)?;
        println!(
            "{command:?}: exit {} wrote {:?}",
            outcome.exit_code, outcome.written
        );
    }
    let cycle: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{dir}/cycle.json"))?)?;
    println!("{}", serde_json::to_string_pretty(&cycle["cycle"])?);
    Ok(())
}
