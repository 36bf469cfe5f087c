use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use itosym::experiment::{
    catalog_table, emit_plot_data, output_root, read_report, run_experiment, Format, OUT_ENV,
};
use itosym::Error;

#[derive(Parser)]
#[command(
    name = "itosym",
    version,
    about = "Symbols, indices and path checks for Ito processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitFormat {
    Csv,
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment configuration.
    Run {
        config: PathBuf,
        /// Output root; the run writes into `<out>/<name>`.
        #[arg(long, env = OUT_ENV)]
        out: Option<PathBuf>,
    },
    /// List the built-in model catalog.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Write plot-ready tables from a report.json.
    Emit {
        report: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: EmitFormat,
        /// Target directory; defaults to the report's directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run { config, out } => {
            let (dir, _) = run_experiment(&config, &out.unwrap_or_else(output_root))?;
            println!("{}", dir.display());
        }
        Command::Catalog { json } => {
            let t = catalog_table();
            if json {
                let entries = itosym::model::catalog::entries();
                println!("{}", itosym::experiment::to_pretty_json(&entries)?);
            } else {
                println!("{}", t.headers.join("\t"));
                for row in &t.rows {
                    let cells: Vec<String> = row.iter().map(|c| c.text()).collect();
                    println!("{}", cells.join("\t"));
                }
            }
        }
        Command::Emit {
            report,
            format,
            out,
        } => {
            let r = read_report(&report)?;
            let dir = out.unwrap_or_else(|| {
                report
                    .parent()
                    .map_or_else(|| PathBuf::from("."), PathBuf::from)
            });
            let format = match format {
                EmitFormat::Csv => Format::Csv,
                EmitFormat::JsonLines => Format::JsonLines,
            };
            for p in emit_plot_data(&r, format, &dir)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}
