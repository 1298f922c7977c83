use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

/// Hide groups of eight grayscale images in one meaningless share, keyed by
/// a comparison image that never leaves your hands.
#[derive(Debug, Parser)]
#[command(name = "msis", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the security key derived from a comparison image.
    Keygen {
        #[arg(long)]
        comparison: PathBuf,
    },
    /// Encode secret images into `<STEM>_NNNN.msis` shares, eight per share.
    Encode {
        #[arg(long)]
        comparison: PathBuf,
        #[arg(long, value_name = "STEM")]
        out: String,
        #[arg(required = true, value_name = "IMG")]
        secrets: Vec<PathBuf>,
    },
    /// Recover the secrets from one or more shares as PGM files.
    Decode {
        #[arg(long)]
        comparison: PathBuf,
        #[arg(long = "share", required = true, num_args = 1.., value_name = "FILE")]
        shares: Vec<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
    },
    /// Compare original and recovered images pairwise (SSIM, PSNR, RMSE).
    Verify {
        #[arg(long, value_name = "DIR")]
        original: PathBuf,
        #[arg(long, value_name = "DIR")]
        recovered: PathBuf,
        /// Fail unless every pair is bit-identical.
        #[arg(long)]
        strict: bool,
    },
    /// Report entropy, histogram spread and bit-plane balance of a share.
    Analyze {
        #[arg(long)]
        share: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let usage = err.use_stderr();
            let _ = err.print();
            return if usage {
                ExitCode::from(commands::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let result = match cli.command {
        Command::Keygen { comparison } => commands::keygen(&comparison),
        Command::Encode {
            comparison,
            out,
            secrets,
        } => commands::encode(&comparison, &out, &secrets),
        Command::Decode {
            comparison,
            shares,
            out_dir,
        } => commands::decode(&comparison, &shares, &out_dir),
        Command::Verify {
            original,
            recovered,
            strict,
        } => commands::verify(&original, &recovered, strict),
        Command::Analyze { share } => commands::analyze(&share),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
