use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abelfourier::formats::{
    class_from_json, emit_class, emit_report_json, emit_report_text, emit_variety, int_matrix_to_json, parse_class,
    parse_variety,
};
use abelfourier::fourier::{beta_from_divisor, NamedClass};
use abelfourier::hodge::{hodge_lattice, voisin_certificate_in};
use abelfourier::suite::{run_suite, Status, SuiteConfig, REGISTRY};
use abelfourier::{AbelianVariety, Int, Multivector, PoincareContext};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] abelfourier::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.code(),
            CliError::Io { .. } => "Io",
            CliError::Usage(_) => "Usage",
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "abelfourier", version, about = "Exact Fourier calculus on abelian varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity checks and emit a report.
    Verify(VerifyArgs),
    /// Apply the Fourier transform (or its inverse) to a class file.
    Fourier(FourierArgs),
    /// Compute a Hodge lattice and optionally certify generators.
    Hodge(HodgeArgs),
    /// Write a named class to a class file.
    Class(ClassArgs),
    /// Write the variety described by --genus/--type as a variety file.
    Variety(VarietyOnly),
    /// List the registered checks.
    Checks,
}

#[derive(Args, Clone)]
struct VarietyArgs {
    /// Variety file (JSON).
    #[arg(long, conflicts_with = "genus")]
    variety: Option<PathBuf>,
    /// Built-in product of Gaussian elliptic curves of this genus.
    #[arg(long)]
    genus: Option<u32>,
    /// Polarization type d1,d2,... for the built-in product.
    #[arg(long = "type", value_delimiter = ',', conflicts_with = "variety")]
    polarization_type: Option<Vec<i64>>,
}

#[derive(Args)]
struct VarietyOnly {
    #[command(flatten)]
    variety: VarietyArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    variety: VarietyArgs,
    /// Comma-separated check names or ids, or `all`.
    #[arg(long, default_value = "all")]
    checks: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample count for randomized checks.
    #[arg(long)]
    samples: Option<u32>,
    /// Genus of the auxiliary factor in the pushforward check.
    #[arg(long, default_value_t = 1)]
    aux_genus: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reverse the orientation of the variety (the checks should then fail).
    #[arg(long)]
    reverse_orientation: bool,
}

#[derive(Args)]
struct FourierArgs {
    #[command(flatten)]
    variety: VarietyArgs,
    #[arg(long)]
    class: PathBuf,
    /// Treat the input as a class on the dual and apply the inverse transform.
    #[arg(long)]
    inverse: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HodgeArgs {
    #[command(flatten)]
    variety: VarietyArgs,
    /// Even cohomological degree 2k.
    #[arg(long)]
    degree: u32,
    /// JSON array of class files' contents to certify against the lattice.
    #[arg(long, conflicts_with = "beta_generators")]
    certify_generators: Option<PathBuf>,
    /// Certify the β-classes of a Hdg² basis (degree must be 2g−2).
    #[arg(long)]
    beta_generators: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassArgs {
    #[command(flatten)]
    variety: VarietyArgs,
    /// theta, exp_theta, ell, ch, R_A, rho_A, sigma_A, gamma_theta, tau, point, fundamental
    #[arg(long)]
    name: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn load_variety(args: &VarietyArgs) -> Result<AbelianVariety> {
    if let Some(path) = &args.variety {
        return Ok(parse_variety(&read(path)?)?);
    }
    match (&args.polarization_type, args.genus) {
        (Some(ty), g) => {
            if let Some(g) = g {
                if g as usize != ty.len() {
                    return Err(CliError::Usage(format!("--type has {} entries but --genus is {g}", ty.len())));
                }
            }
            Ok(AbelianVariety::of_type(ty)?)
        }
        (None, Some(g)) => Ok(AbelianVariety::standard_ppav(g)?),
        (None, None) => Err(CliError::Usage("give --variety FILE or --genus N".into())),
    }
}

fn verify(args: VerifyArgs) -> Result<u8> {
    let mut a = load_variety(&args.variety)?;
    if args.reverse_orientation {
        a = a.with_flipped_orientation();
    }
    let checks = if args.checks.trim() == "all" {
        SuiteConfig::all_checks()
    } else {
        args.checks.split(',').map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect()
    };
    let mut cfg = SuiteConfig::new(checks, vec![a]);
    cfg.seed = args.seed;
    cfg.samples = args.samples;
    cfg.aux_genus = args.aux_genus;
    let report = run_suite(&cfg)?;
    let text = match args.format {
        Format::Json => emit_report_json(&report),
        Format::Text => emit_report_text(&report),
    };
    write_output(args.out.as_deref(), &text)?;
    Ok(if report.status == Status::Pass { 0 } else { 1 })
}

fn fourier(args: FourierArgs) -> Result<u8> {
    let a = load_variety(&args.variety)?;
    let x = parse_class(&read(&args.class)?)?;
    let ctx = PoincareContext::new(&a);
    let y = if args.inverse { ctx.inverse_fourier(&x)? } else { ctx.fourier(&x)? };
    write_output(args.out.as_deref(), &emit_class(&y))?;
    Ok(0)
}

fn classes_from_file(path: &Path) -> Result<Vec<Multivector>> {
    let v: Value = serde_json::from_str(&read(path)?)
        .map_err(|e| abelfourier::Error::Parse(format!("{}: {e}", path.display())))?;
    let items = match &v {
        Value::Array(xs) => xs.clone(),
        Value::Object(o) if o.contains_key("classes") => o["classes"]
            .as_array()
            .cloned()
            .ok_or_else(|| abelfourier::Error::Parse("`classes` must be an array".into()))?,
        _ => vec![v.clone()],
    };
    Ok(items.iter().map(class_from_json).collect::<abelfourier::Result<_>>()?)
}

fn hodge(args: HodgeArgs) -> Result<u8> {
    let a = load_variety(&args.variety)?;
    if args.degree % 2 == 1 {
        return Err(CliError::Usage(format!("degree {} is odd; Hodge lattices live in even degree", args.degree)));
    }
    let k = args.degree / 2;
    let lat = hodge_lattice(&a, k)?;
    let generators = if args.beta_generators {
        if a.genus() == 0 || k != a.genus() - 1 {
            return Err(CliError::Usage(format!("β-classes live in degree {}", 2 * a.genus() - 2)));
        }
        let h2 = hodge_lattice(&a, 1)?;
        Some(h2.basis_classes().iter().map(|d| beta_from_divisor(&a, d)).collect::<abelfourier::Result<Vec<_>>>()?)
    } else {
        args.certify_generators.as_deref().map(classes_from_file).transpose()?
    };
    let cert = generators.as_ref().map(|g| voisin_certificate_in(&lat, &a, g)).transpose()?;
    let saturation: Vec<String> = lat.saturation_invariants().torsion().iter().map(Int::to_string).collect();
    let text = match args.format {
        Format::Json => {
            let mut doc = json!({
                "variety": a.name(),
                "degree": args.degree.to_string(),
                "rank": lat.rank().to_string(),
                "ambient_basis": lat.ambient_basis().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "basis": int_matrix_to_json(lat.basis()),
                "saturation_divisors": saturation,
            });
            if let Some(c) = &cert {
                doc["certificate"] = json!({
                    "generators": generators.as_ref().map_or(0, Vec::len).to_string(),
                    "divisors": c.invariants.torsion().iter().map(Int::to_string).collect::<Vec<_>>(),
                    "free_rank": c.invariants.free_rank.to_string(),
                    "trivial": c.is_trivial(),
                });
            }
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("variety: {}\ndegree: {}\nrank: {}\n", a.name(), args.degree, lat.rank());
            for (i, b) in lat.basis_classes().iter().enumerate() {
                s.push_str(&format!("basis[{i}]: {b}\n"));
            }
            s.push_str(&format!(
                "saturation divisors: {}\n",
                if saturation.is_empty() { "none".to_string() } else { saturation.join(",") }
            ));
            if let Some(c) = &cert {
                if c.is_trivial() {
                    s.push_str("certificate: cokernel trivial\n");
                } else {
                    s.push_str(&format!(
                        "certificate: cokernel divisors {} free rank {}\n",
                        c.invariants.torsion().iter().map(Int::to_string).collect::<Vec<_>>().join(","),
                        c.invariants.free_rank
                    ));
                    if let Some(w) = &c.witness {
                        s.push_str(&format!("witness: {w}\n"));
                    }
                }
            }
            s
        }
    };
    write_output(args.out.as_deref(), &text)?;
    Ok(0)
}

fn class(args: ClassArgs) -> Result<u8> {
    let a = load_variety(&args.variety)?;
    let ctx = PoincareContext::new(&a);
    let x = match args.name.to_ascii_lowercase().as_str() {
        "theta" => a.theta_class(),
        "exp_theta" => a.theta_class().cup_exponential()?,
        "ell" => ctx.ell().clone(),
        "ch" => ctx.chern_character(),
        other => ctx.named_class(NamedClass::parse(other)?)?,
    };
    write_output(args.out.as_deref(), &emit_class(&x))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Verify(a) => verify(a),
        Command::Fourier(a) => fourier(a),
        Command::Hodge(a) => hodge(a),
        Command::Class(a) => class(a),
        Command::Variety(a) => {
            let v = load_variety(&a.variety)?;
            write_output(a.out.as_deref(), &emit_variety(&v))?;
            Ok(0)
        }
        Command::Checks => {
            let text: String = REGISTRY
                .iter()
                .map(|d| format!("{:<4} {:<34} g ≤ {}  {}\n", d.id, d.name, d.max_genus, d.anchor))
                .collect();
            write_output(None, &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(2)
        }
    }
}
