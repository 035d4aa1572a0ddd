use clap::{Parser, Subcommand};
use docbin::cli::{cmd_bench, cmd_binarize, cmd_compare, cmd_degrade, GridShape, Method, MethodSpec};
use docbin::degrade::DEFAULT_DENSITY;
use docbin::sauvola::SauvolaParams;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "docbin", version, about = "Document image binarization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Binarize a PGM into a PBM and print the threshold(s).
    Binarize {
        /// otsu, otsu-local, sauvola, sauvola-fast, bernsen, bernsen-mod or cooccur
        #[arg(long)]
        method: Method,
        /// Odd window side (default 15 for Sauvola, 31 for Bernsen)
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value_t = SauvolaParams::DEFAULT_K)]
        k: f64,
        #[arg(long, default_value_t = SauvolaParams::DEFAULT_R)]
        r: f64,
        /// Co-occurrence spacing
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Grid for otsu-local and bernsen-mod, as ROWSxCOLS
        #[arg(long, default_value_t = GridShape::default())]
        grid: GridShape,
        input: PathBuf,
        output: PathBuf,
    },
    /// Print the fraction of agreeing pixels between two PBMs.
    Compare { a: PathBuf, b: PathBuf },
    /// Build the 170-image degraded corpus from a directory of PGMs.
    Degrade {
        input_dir: PathBuf,
        output_dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DENSITY)]
        density: f64,
    },
    /// Time naive vs sliding-window Sauvola; CSV on stdout.
    Bench {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [7, 15, 31])]
        windows: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

fn run(cli: Cli) -> Result<(), docbin::cli::CliError> {
    match cli.command {
        Command::Binarize {
            method,
            window,
            k,
            r,
            d,
            grid,
            input,
            output,
        } => {
            let spec = MethodSpec {
                method,
                window,
                k,
                r,
                grid,
                d,
            };
            let out = cmd_binarize(&input, &spec, &output)?;
            if !out.thresholds.is_empty() {
                println!("{}", out.thresholds);
            }
        }
        Command::Compare { a, b } => println!("{:.6}", cmd_compare(&a, &b)?),
        Command::Degrade {
            input_dir,
            output_dir,
            seed,
            density,
        } => {
            let n = cmd_degrade(&input_dir, &output_dir, seed, density)?;
            eprintln!("wrote {n} images to {}", output_dir.display());
        }
        Command::Bench {
            input,
            windows,
            reps,
        } => print!("{}", cmd_bench(&input, &windows, reps)?.to_csv()),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("docbin: {err}");
            ExitCode::FAILURE
        }
    }
}
