//! Runs an experiment configuration through the same path as
//! `itosym run`, then re-emits its tables as JSON lines.
//!
//! `cargo run --example run_experiment -- configs/bm-symbols.toml`

use std::path::PathBuf;

use itosym::experiment::{emit_plot_data, output_root, run_experiment, Format};

fn main() -> itosym::Result<()> {
    let config: PathBuf = std::env::args().nth(1).map_or_else(
        || concat!(env!("CARGO_MANIFEST_DIR"), "/configs/bm-symbols.toml").into(),
        Into::into,
    );
    let (dir, report) = run_experiment(&config, &output_root())?;
    println!("wrote {}", dir.display());
    for p in emit_plot_data(&report, Format::JsonLines, &dir)? {
        println!("  {}", p.display());
    }
    Ok(())
}
