use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dgl_cli::commands::{self, CliError, ExampleName, Target};
use dgl_core::examples::default_max_degree;

/// Mod-p homology Bockstein spectral sequences of DGLs over Z_(p).
#[derive(Parser)]
#[command(name = "dglbss", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the DGL axioms on basis elements.
    Validate { file: PathBuf },
    /// Homology over Z_(p) and F_p.
    Homology {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "lie")]
        target: Target,
        /// Override the file's N_max.
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Pages E^1..E^rmax with β^r.
    Bss {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "lie")]
        target: Target,
        #[arg(long, default_value_t = 2)]
        rmax: u32,
        #[arg(long)]
        nmax: Option<usize>,
        /// Run the primitive and PBW checks on each page of UL.
        #[arg(long)]
        check_theorem3: bool,
    },
    /// Chevalley-Eilenberg cochains and their cohomology.
    Cochains {
        file: PathBuf,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Print a built-in example, optionally writing it with its golden output.
    Examples {
        #[arg(value_enum)]
        name: ExampleName,
        #[arg(long, default_value_t = 3)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        rmax: u32,
        /// Defaults to 2·n·p^rmax + 2.
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a map of enveloping algebras is Hopf, then whether it
    /// comes from a Lie algebra map.
    CheckMorphism {
        source: PathBuf,
        target: PathBuf,
        map: PathBuf,
    },
}

fn emit<T: serde::Serialize>(json: bool, report: &T, text: String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports serialize")
        );
    } else {
        print!("{text}");
    }
}

fn status(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn write_files(dir: &Path, files: &[(String, String)]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    for (name, contents) in files {
        let path = dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let json = cli.json;
    match cli.command {
        Command::Validate { file } => {
            let report = commands::validate(&commands::load(&file)?)?;
            emit(json, &report, report.text());
            Ok(status(report.valid))
        }
        Command::Homology { file, target, nmax } => {
            let l = commands::valid_dgl(&commands::load(&file)?, nmax)?;
            let report = commands::homology(&l, target)?;
            emit(json, &report, report.text());
            Ok(0)
        }
        Command::Bss {
            file,
            target,
            rmax,
            nmax,
            check_theorem3,
        } => {
            let l = commands::valid_dgl(&commands::load(&file)?, nmax)?;
            let report = commands::bss(&l, target, rmax, check_theorem3)?;
            emit(json, &report, report.text());
            Ok(status(report.theorem3_passed()))
        }
        Command::Cochains { file, nmax } => {
            let l = commands::valid_dgl(&commands::load(&file)?, nmax)?;
            let report = commands::cochain_report(&l)?;
            emit(json, &report, report.text());
            Ok(0)
        }
        Command::Examples {
            name,
            prime,
            n,
            rmax,
            nmax,
            out,
        } => {
            let nmax = nmax.unwrap_or_else(|| default_max_degree(prime, n, rmax));
            let result = commands::example(name, prime, n, rmax, nmax)?;
            if let Some(dir) = out {
                let mut files = result.files.clone();
                files.push((
                    format!("{}.expected", name.as_str()),
                    result.expected.clone(),
                ));
                write_files(&dir, &files)?;
            }
            emit(json, &result.json, result.expected.clone());
            Ok(status(result.ok))
        }
        Command::CheckMorphism {
            source,
            target,
            map,
        } => {
            let src = commands::load(&source)?;
            let tgt = commands::load(&target)?;
            let map = commands::load_map(&map, tgt.prime)?;
            let report = commands::morphism(&src, &tgt, &map)?;
            emit(json, &report, report.text());
            Ok(status(report.hopf.is_ok() && report.agree()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
