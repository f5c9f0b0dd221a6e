//! Run an experiment descriptor the way the `hfl` binary does and print the report.
//!
//! `cargo run --release --example run_descriptor -- crates/core/examples/descriptors/example2_condition.json`

use hfl::descriptor::ExperimentDescriptor;
use hfl::runner::run;

fn main() -> hfl::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/descriptors/example8_return_set.json").to_string()
    });
    let desc = ExperimentDescriptor::from_json(&std::fs::read_to_string(&path)?)?;
    let report = run(&desc, None)?;
    println!("{}", report.to_json());
    eprintln!("{} in {:.1} ms", report.analysis, report.wall_time_ms);
    Ok(())
}
