use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use coamoeba_core::ainfinity::SCHEMA_VERSION;
use coamoeba_core::coamoeba::{
    build_coamoeba, category_of, cover_category, parse_basis, quotient_by_sublattice, CoverKind, CoverWindow, Sublattice,
};
use coamoeba_core::permutohedron::mesh::{export_mesh, MeshFormat};
use coamoeba_core::permutohedron::TorusTessellation;
use coamoeba_core::verify::{build_delta_category, run_verification_with, VerifyOptions};
use coamoeba_core::{beilinson, Error};

#[derive(Parser)]
#[command(name = "coamoeba", version, about = "Tropical coamoebas of the mirror of projective space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Off,
    Obj,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Exterior,
    Coamoeba,
    Delta,
    Cover,
    CoverOneParameter,
}

#[derive(Subcommand)]
enum Command {
    /// Export the torus tessellation as a mesh or face lattice.
    Tessellate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "off")]
        format: Format,
        /// Also draw every tile adjacent to a torus cell.
        #[arg(long)]
        cover_patch: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the comparison pipeline; exit 0 iff everything matches.
    Verify {
        /// A single dimension; otherwise 2..=max-n.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, env = "COAMOEBA_MAX_N")]
        max_n: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_sign_flip: bool,
    },
    /// Quotient of the cover by a sublattice of characters.
    Quotient {
        #[arg(long)]
        n: usize,
        /// Basis vectors separated by `;`, entries by `,`.
        #[arg(long, allow_hyphen_values = true)]
        sublattice: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dump a category as JSON.
    Dump {
        #[arg(long, value_enum)]
        category: Which,
        #[arg(long)]
        n: usize,
        /// Delta objects `0..=2r`; must be at least `n`.
        #[arg(long)]
        window_radius: Option<usize>,
        /// Box radius of cover windows.
        #[arg(long, default_value_t = 1)]
        cover_radius: i64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Mismatch(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::NotFiniteIndex
            | Error::UnsupportedDimension(_)
            | Error::DimensionMismatch(_)
            | Error::WindowTooSmall { .. } => Failure::Mismatch(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Status lines go to stdout when the payload goes to a file.
fn note(output: &Option<PathBuf>, line: &str) {
    if output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn tessellate(n: usize, format: Format, cover_patch: bool, output: &Option<PathBuf>) -> Result<(), Failure> {
    let t = TorusTessellation::build(n)?;
    let format = match format {
        Format::Off => MeshFormat::Off,
        Format::Obj => MeshFormat::Obj,
        Format::Json => MeshFormat::Json,
    };
    let (text, summary) = export_mesh(&t, format, cover_patch)?;
    emit(output, &text)?;
    note(output, &summary.to_string());
    Ok(())
}

fn verify(n: Option<usize>, max_n: Option<usize>, report: &Option<PathBuf>, flip: bool) -> Result<(), Failure> {
    let range: Vec<usize> = match n {
        Some(n) => vec![n],
        None => (2..=max_n.unwrap_or(5)).collect(),
    };
    if range.is_empty() {
        return Err(Failure::Mismatch("empty verification range".into()));
    }
    let opts = VerifyOptions { inject_sign_flip: flip };
    let mut reports = Vec::new();
    let mut all = true;
    for &n in &range {
        let r = run_verification_with(n, &opts)?;
        println!("n={n} {}", r.verdict);
        for c in &r.checks {
            for d in c.diffs.iter().take(10) {
                println!("  {}: {d}", c.name);
            }
        }
        all &= r.passed();
        reports.push(r);
    }
    if let Some(p) = report {
        let doc = serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "verdict": if all { "pass" } else { "fail" },
            "reports": reports,
        });
        std::fs::write(p, serde_json::to_string_pretty(&doc).expect("report serializes") + "\n")?;
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Mismatch("verification failed".into()))
    }
}

fn quotient(n: usize, sublattice: &str, output: &Option<PathBuf>) -> Result<(), Failure> {
    let g = build_coamoeba(n)?;
    let sub = Sublattice::from_generators(&parse_basis(sublattice)?, n)?;
    let (cat, objs) = quotient_by_sublattice(&g, &sub)?;
    emit(output, &(cat.to_json_string() + "\n"))?;
    note(output, &format!("objects={} index={}", objs.len(), sub.index()));
    for (a, x) in objs.iter().enumerate() {
        let row: Vec<String> = (0..objs.len()).map(|b| cat.hom_dim(a, b).to_string()).collect();
        note(output, &format!("{:>12} {}", x.id(), row.join(" ")));
    }
    Ok(())
}

fn dump(which: Which, n: usize, window_radius: Option<usize>, cover_radius: i64, output: &Option<PathBuf>) -> Result<(), Failure> {
    let cat = match which {
        Which::Exterior => beilinson::build_exterior_category(n)?,
        Which::Coamoeba => category_of(&build_coamoeba(n)?)?,
        Which::Delta => {
            let r = window_radius.unwrap_or(n);
            if r < n {
                return Err(Failure::Mismatch(format!("window radius {r} is below n = {n}")));
            }
            build_delta_category(n, 0, 2 * r as i64)?
        }
        Which::Cover | Which::CoverOneParameter => {
            let kind = if matches!(which, Which::Cover) { CoverKind::Full } else { CoverKind::OneParameter };
            cover_category(&build_coamoeba(n)?, &CoverWindow { kind, radius: cover_radius })?.0
        }
    };
    emit(output, &(cat.to_json_string() + "\n"))?;
    note(output, &format!("objects={} constants={}", cat.num_objects(), cat.num_structure_constants()));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tessellate { n, format, cover_patch, output } => tessellate(*n, *format, *cover_patch, output),
        Command::Verify { n, max_n, report, inject_sign_flip } => verify(*n, *max_n, report, *inject_sign_flip),
        Command::Quotient { n, sublattice, output } => quotient(*n, sublattice, output),
        Command::Dump { category, n, window_radius, cover_radius, output } => {
            dump(*category, *n, *window_radius, *cover_radius, output)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(2)
        }
    }
}
