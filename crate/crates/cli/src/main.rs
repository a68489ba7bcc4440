//! `delone-forge`: construct lattice Delone simplices of large relative
//! volume, certify the empty-sphere property with exact arithmetic, and
//! tabulate the known volume bounds.
//!
//! Exit codes: 0 on success (and a Delone verdict), 2 when a requested
//! certification returns a NotDelone verdict (the witness is printed),
//! 1 on input or internal errors. Identical inputs and flags produce
//! byte-identical outputs.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use delone_forge::bounds::{bound_table, table_to_csv};
use delone_forge::delone::{certify_delone_capped, DEFAULT_ENUMERATION_CAP};
use delone_forge::exact::parse_rat;
use delone_forge::hadamard::hadamard_simplex_instance;
use delone_forge::json;
use delone_forge::lattice::VertexSet;
use delone_forge::product::{product_pipeline, ProductFactor, ProductOptions};
use delone_forge::Error;

/// Worker-parallelism cap; 0 or unset selects the automatic pool size.
const THREADS_ENV: &str = "DELONE_FORGE_THREADS";

#[derive(Parser)]
#[command(name = "delone-forge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the Hadamard simplex instance at dimension 2^n - 1.
    Hadamard {
        /// Sylvester exponent; the instance lives in dimension 2^n - 1.
        #[arg(long)]
        n: u32,
        /// Force certification (required for n = 5; n <= 4 certifies by
        /// default).
        #[arg(long, conflicts_with = "no_certify")]
        certify: bool,
        /// Skip certification.
        #[arg(long)]
        no_certify: bool,
        /// Write the instance JSON here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Certify whether a point set is the vertex set of a Delone polytope.
    Certify {
        /// Form JSON file ({"dim": d, "gram": [["p/q", ...], ...]}).
        #[arg(long)]
        form: PathBuf,
        /// Point set JSON file ({"points": [[int, ...], ...]} or a simplex
        /// file with "vertices").
        #[arg(long)]
        points: PathBuf,
        /// Enumeration cap (default 1000000).
        #[arg(long)]
        cap: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the relative volume of a simplex.
    Relvol {
        /// Simplex JSON file ({"vertices": [[int, ...], ...]}).
        #[arg(long)]
        simplex: PathBuf,
    },
    /// List all lattice points inside an ellipsoid, sorted.
    Enumerate {
        #[arg(long)]
        form: PathBuf,
        /// Center as comma-separated rationals, e.g. "1/2,1/2".
        #[arg(long)]
        center: String,
        /// Squared radius as a rational, e.g. "3/4".
        #[arg(long)]
        r2: String,
        /// Enumeration cap (default 1000000).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run the product pipeline on two instances.
    Product {
        /// Left instance JSON file, or "unit" for the unit interval.
        #[arg(long)]
        left: String,
        /// Right instance JSON file, or "unit" for the unit interval.
        #[arg(long)]
        right: String,
        /// Certify every staircase simplex, not just the sample.
        #[arg(long)]
        exhaustive: bool,
        /// Starting epsilon of the halving schedule (default 1/2).
        #[arg(long)]
        eps: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit the bound table for dimensions 1..=dmax.
    Bounds {
        #[arg(long)]
        dmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    init_thread_pool();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn init_thread_pool() {
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value.trim().parse().unwrap_or(0);
        if threads > 0 {
            // A failure here means a pool already exists; keep that one.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Hadamard {
            n,
            certify,
            no_certify,
            output,
        } => cmd_hadamard(n, certify, no_certify, output.as_deref()),
        Command::Certify {
            form,
            points,
            cap,
            output,
        } => cmd_certify(&form, &points, cap, output.as_deref()),
        Command::Relvol { simplex } => cmd_relvol(&simplex),
        Command::Enumerate {
            form,
            center,
            r2,
            cap,
        } => cmd_enumerate(&form, &center, &r2, cap),
        Command::Product {
            left,
            right,
            exhaustive,
            eps,
            output,
        } => cmd_product(&left, &right, exhaustive, eps.as_deref(), output.as_deref()),
        Command::Bounds {
            dmax,
            format,
            output,
        } => cmd_bounds(dmax, format, output.as_deref()),
    }
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_to_string(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_hadamard(
    n: u32,
    certify: bool,
    no_certify: bool,
    output: Option<&Path>,
) -> anyhow::Result<u8> {
    if !(1..=8).contains(&n) {
        bail!("n must be between 1 and 8 (instance dimension 2^n - 1)");
    }
    let should_certify = if no_certify {
        false
    } else if certify {
        if n > 5 {
            bail!("certification is supported up to n = 5 (dimension 31)");
        }
        true
    } else {
        n <= 4
    };
    let instance = hadamard_simplex_instance(n)?;
    let certificate = if should_certify {
        Some(instance.certify()?)
    } else {
        None
    };
    let doc = json::instance_to_json(&instance, certificate.as_ref());
    emit(output, &json::to_canonical_string(&doc))?;
    Ok(0)
}

fn load_points(path: &Path) -> anyhow::Result<VertexSet> {
    let text = read_to_string(path)?;
    if let Ok(points) = json::from_str::<json::VertexSetJson>(&text) {
        return Ok(json::vertex_set_from_json(&points)?);
    }
    let simplex: json::SimplexJson = json::from_str(&text)
        .map_err(|_| anyhow::anyhow!("expected a \"points\" or \"vertices\" document"))?;
    Ok(json::simplex_from_json(&simplex)?.to_vertex_set())
}

fn cmd_certify(
    form_path: &Path,
    points_path: &Path,
    cap: Option<usize>,
    output: Option<&Path>,
) -> anyhow::Result<u8> {
    let form = json::form_from_json(&json::from_str(&read_to_string(form_path)?)?)?;
    let points = load_points(points_path)?;
    let cert = certify_delone_capped(&points, &form, cap.unwrap_or(DEFAULT_ENUMERATION_CAP))?;
    let witness = cert.witness().map(|w| {
        let coords: Vec<String> = w.iter().map(ToString::to_string).collect();
        format!("({})", coords.join(", "))
    });
    emit(output, &json::to_canonical_string(&json::certificate_to_json(&cert)))?;
    match witness {
        Some(w) => {
            eprintln!("not delone: witness {w}");
            Ok(2)
        }
        None => Ok(0),
    }
}

fn cmd_relvol(simplex_path: &Path) -> anyhow::Result<u8> {
    let simplex = json::simplex_from_json(&json::from_str(&read_to_string(simplex_path)?)?)?;
    println!("{}", simplex.relative_volume());
    Ok(0)
}

fn cmd_enumerate(
    form_path: &Path,
    center: &str,
    r2: &str,
    cap: Option<usize>,
) -> anyhow::Result<u8> {
    let form = json::form_from_json(&json::from_str(&read_to_string(form_path)?)?)?;
    let center = center
        .split(',')
        .map(|c| parse_rat(c.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let radius_sq = parse_rat(r2.trim())?;
    let points = delone_forge::delone::enumerate_in_ellipsoid_capped(
        &form,
        &center,
        &radius_sq,
        cap.unwrap_or(DEFAULT_ENUMERATION_CAP),
    )?;
    let mut out = String::new();
    for p in &points {
        let coords: Vec<String> = p.iter().map(ToString::to_string).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    print!("{out}");
    Ok(0)
}

fn load_factor(source: &str) -> anyhow::Result<ProductFactor> {
    if source == "unit" {
        return Ok(ProductFactor::unit_interval());
    }
    let text = read_to_string(Path::new(source))?;
    let instance: json::InstanceJson = json::from_str(&text)?;
    Ok(json::factor_from_instance_json(&instance)?)
}

fn cmd_product(
    left_source: &str,
    right_source: &str,
    exhaustive: bool,
    eps: Option<&str>,
    output: Option<&Path>,
) -> anyhow::Result<u8> {
    let left = load_factor(left_source).context("loading --left")?;
    let right = load_factor(right_source).context("loading --right")?;
    let mut options = ProductOptions {
        exhaustive,
        ..ProductOptions::default()
    };
    if let Some(eps) = eps {
        let eps = parse_rat(eps.trim())?;
        if !num_traits::Signed::is_positive(&eps) {
            bail!("--eps must be positive");
        }
        options.start_epsilon = eps;
    }
    match product_pipeline(&left, &right, &options) {
        Ok(report) => {
            let doc = json::report_to_json(&report, &left, &right);
            emit(output, &json::to_canonical_string(&doc))?;
            Ok(0)
        }
        Err(Error::NotDelone { witness }) => {
            eprintln!("product polytope is not delone: witness {witness}");
            Ok(2)
        }
        Err(err) => Err(err.into()),
    }
}

fn cmd_bounds(dmax: usize, format: Format, output: Option<&Path>) -> anyhow::Result<u8> {
    if dmax < 1 {
        bail!("--dmax must be at least 1");
    }
    if dmax > 256 {
        bail!("--dmax above 256 is not supported");
    }
    let rows = bound_table(dmax);
    let text = match format {
        Format::Csv => table_to_csv(&rows),
        Format::Json => json::to_canonical_string(&json::bound_table_to_json(&rows)),
    };
    emit(output, &text)?;
    Ok(0)
}
