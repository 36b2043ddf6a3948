use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use cartan_ho_core::AlgebraParams;
use clap::{Parser, Subcommand};

use crate::export::{Document, ExportKind};
use crate::suites::{Lab, Suite, DEFAULT_SEED};

/// Exit codes: 0 all claims hold, 1 some claim failed or a computation
/// errored, 2 usage, configuration or I/O error.
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "cartan-ho-lab", version, about = "Exact computations in the even part of HO(n,n;t) over GF(p)")]
pub struct Cli {
    #[arg(long, default_value_t = 3, global = true)]
    pub n: usize,
    #[arg(long, default_value_t = 5, global = true)]
    pub p: u64,
    /// Comma-separated t_1,...,t_n; defaults to all ones.
    #[arg(long, value_delimiter = ',', global = true)]
    pub t: Vec<u32>,
    /// Comma-separated degrees for the derivation commands; default all.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, global = true)]
    pub degree: Vec<i32>,
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Write the report or export here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions of O, 𝓦 and 𝓗𝓞 with their closed forms.
    Dims,
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Compute Der_m(𝓗𝓞) over the selected degrees.
    Derive,
    /// Write a versioned text export.
    Export {
        #[arg(value_enum)]
        what: ExportKind,
    },
}

impl Cli {
    pub fn params(&self) -> cartan_ho_core::Result<AlgebraParams> {
        let t = if self.t.is_empty() { vec![1; self.n] } else { self.t.clone() };
        AlgebraParams::new(self.n, self.p, &t)
    }
}

pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let params = match cli.params() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let lab = match Lab::new(&params, cli.seed, cli.degree.clone()) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    let (text, passed) = match execute(&cli, &lab) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

/// Output text and whether every claim held.
fn execute(cli: &Cli, lab: &Lab) -> anyhow::Result<(String, bool)> {
    let render = |r: &crate::Report| if cli.json { r.to_json() } else { r.to_text() };
    Ok(match &cli.command {
        Command::Dims => {
            let r = lab.dims();
            (render(&r), r.passed())
        }
        Command::Verify { suite } => {
            let r = lab.run(*suite)?;
            (render(&r), r.passed())
        }
        Command::Derive => {
            let (r, _) = lab.derive()?;
            (render(&r), true)
        }
        Command::Export { what } => {
            let doc = match what {
                ExportKind::StructureConstants => Document::structure_constants(lab.algebra()),
                ExportKind::Basis => Document::basis(lab.algebra(), &cli.degree),
                ExportKind::DerBasis => Document::der_basis(lab.algebra(), &lab.derive()?.1),
            };
            (doc.render(), true)
        }
    })
}
