use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mono_core::bar::{SMode, DEFAULT_MAX_DEGREE, DEFAULT_MAX_DIM};
use mono_core::character::central_characters;
use mono_core::rep::{irreducibles, MatrixRep};
use mono_core::{Error, FiniteGroup};

mod commands;
mod text;

#[derive(Parser, Debug)]
#[command(name = "mono", version, about = "Monomial categories, hyperHecke algebras and bar-monomial resolutions of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pairs (H, φ) over each central character, with orbits and stabilizers.
    Poset(Common),
    /// Canonical triples and their multiplication table.
    Hyperhecke(Common),
    /// Monocentre families and their group structure.
    Monocentre(Common),
    /// Build a bar-monomial resolution of a representation and check exactness.
    Resolve(ResolveArgs),
    /// Check that monomial morphisms are given by convolution.
    ConvolveCheck(ConvolveArgs),
    /// Check the double coset isomorphisms for every subgroup and pair.
    DoublecosetCheck(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Builtin name (c1..c12, d4..d16, q8, s3, s4, a4) or a JSON group file.
    #[arg(long)]
    group: String,
    /// Central character: an index, `trivial` or `all`.
    #[arg(long = "central-char")]
    central_char: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Render a human-readable table instead of JSON.
    #[arg(long)]
    text: bool,
}

#[derive(Args, Debug)]
struct ResolveArgs {
    #[command(flatten)]
    common: Common,
    /// `trivial`, `regular`, `irrep:k` or a JSON representation file.
    #[arg(long, default_value = "trivial")]
    rep: String,
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
    degree: usize,
    /// Summands of S: one per pair or one per orbit (default: orbit above order 4).
    #[arg(long = "s-mode", value_enum)]
    s_mode: Option<ModeArg>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ConvolveArgs {
    #[command(flatten)]
    common: Common,
    /// Every canonical triple and every g₁ instead of a sample.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Full,
    Orbit,
}

impl From<ModeArg> for SMode {
    fn from(m: ModeArg) -> SMode {
        match m {
            ModeArg::Full => SMode::Full,
            ModeArg::Orbit => SMode::Orbit,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Central {
    All,
    Index(usize),
}

pub enum RepSource {
    Trivial,
    Regular,
    Irrep(usize),
    File(PathBuf),
}

pub struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "Usage".into(),
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::UnknownGroup(_) | Error::NotAGroup(_) => 2,
            Error::TooLarge { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

fn load_group(spec: &str) -> Result<Arc<FiniteGroup>, Failure> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::from(Error::Parse(format!("cannot read {spec}: {e}"))))?;
        return Ok(Arc::new(FiniteGroup::from_json_str(&text)?));
    }
    Ok(Arc::new(FiniteGroup::builtin(spec)?))
}

fn parse_central(arg: Option<&str>, group: &FiniteGroup, default: Central) -> Result<Central, Failure> {
    let count = central_characters(group).len();
    match arg {
        None => Ok(default),
        Some("all") => Ok(Central::All),
        Some("trivial") => Ok(Central::Index(0)),
        Some(s) => match s.parse::<usize>() {
            Ok(i) if i < count => Ok(Central::Index(i)),
            Ok(i) => Err(Failure::usage(format!(
                "central character {i} out of range: {} has {count}",
                group.name()
            ))),
            Err(_) => Err(Failure::usage(format!("bad --central-char {s:?}: expected an index, trivial or all"))),
        },
    }
}

fn parse_rep(arg: &str) -> Result<RepSource, Failure> {
    match arg {
        "trivial" => Ok(RepSource::Trivial),
        "regular" => Ok(RepSource::Regular),
        _ => {
            if let Some(k) = arg.strip_prefix("irrep:") {
                let k = k
                    .parse()
                    .map_err(|_| Failure::usage(format!("bad irreducible index in {arg:?}")))?;
                return Ok(RepSource::Irrep(k));
            }
            let path = PathBuf::from(arg);
            if path.is_file() {
                Ok(RepSource::File(path))
            } else {
                Err(Failure::usage(format!("--rep {arg:?} is neither a tag nor a readable file")))
            }
        }
    }
}

fn max_dim() -> Result<usize, Failure> {
    match std::env::var("MONO_MAX_DIM") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("MONO_MAX_DIM={s:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

/// The representation and, for `regular`, the central character whose isotypic part it is.
pub fn load_rep(group: &Arc<FiniteGroup>, src: &RepSource, central: Central) -> Result<MatrixRep, Failure> {
    match src {
        RepSource::Trivial => Ok(MatrixRep::trivial(group)),
        RepSource::Regular => {
            let c = match central {
                Central::Index(i) => i,
                Central::All => 0,
            };
            Ok(MatrixRep::regular_isotypic(group, &central_characters(group)[c])?)
        }
        RepSource::Irrep(k) => {
            let mut irr = irreducibles(group)?;
            if *k >= irr.len() {
                return Err(Failure::usage(format!(
                    "irrep:{k} out of range: {} has {} catalogued irreducibles",
                    group.name(),
                    irr.len()
                )));
            }
            Ok(irr.swap_remove(*k))
        }
        RepSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::from(Error::Parse(format!("cannot read {}: {e}", path.display()))))?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::from(Error::Parse(format!("representation json: {e}"))))?;
            Ok(MatrixRep::from_json(group, &v)?)
        }
    }
}

fn run(cli: Cli) -> Result<(Value, Common), Failure> {
    match cli.command {
        Command::Poset(c) => {
            let g = load_group(&c.group)?;
            let central = parse_central(c.central_char.as_deref(), &g, Central::All)?;
            Ok((commands::poset(&g, central)?, c))
        }
        Command::Hyperhecke(c) => {
            let g = load_group(&c.group)?;
            let central = parse_central(c.central_char.as_deref(), &g, Central::All)?;
            Ok((commands::hyperhecke(&g, central)?, c))
        }
        Command::Monocentre(c) => {
            let g = load_group(&c.group)?;
            let central = parse_central(c.central_char.as_deref(), &g, Central::All)?;
            Ok((commands::monocentre(&g, central)?, c))
        }
        Command::Resolve(a) => {
            let c = a.common;
            let g = load_group(&c.group)?;
            let rep = parse_rep(&a.rep)?;
            let limit = max_dim()?;
            let central = parse_central(c.central_char.as_deref(), &g, Central::All)?;
            let v = load_rep(&g, &rep, central)?;
            let opts = commands::ResolveOptions {
                degree: a.degree,
                mode: a.s_mode.map(SMode::from),
                max_dim: limit,
                seed: a.seed,
            };
            Ok((commands::resolve(&g, central, &v, &opts)?, c))
        }
        Command::ConvolveCheck(a) => {
            let c = a.common;
            let g = load_group(&c.group)?;
            let central = parse_central(c.central_char.as_deref(), &g, Central::All)?;
            let sampling = (!a.exhaustive).then_some((a.samples, a.seed));
            Ok((commands::convolve_check(&g, central, sampling)?, c))
        }
        Command::DoublecosetCheck(c) => {
            let g = load_group(&c.group)?;
            Ok((commands::doublecoset_check(&g)?, c))
        }
    }
}

fn emit(rendered: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| Failure {
            code: 1,
            kind: "Io".into(),
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn error_object(f: &Failure) -> String {
    let v = json!({"error": {"kind": f.kind, "message": f.message, "exit_code": f.code}});
    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let f = Failure::usage(e.to_string().trim_end());
            print!("{}", error_object(&f));
            return ExitCode::from(f.code);
        }
    };
    match run(cli) {
        Ok((report, common)) => {
            let rendered = if common.text {
                text::render(&report)
            } else {
                serde_json::to_string_pretty(&report).expect("json values serialize") + "\n"
            };
            if let Err(f) = emit(&rendered, common.out.as_deref()) {
                print!("{}", error_object(&f));
                return ExitCode::from(f.code);
            }
            if report.get("pass") == Some(&Value::Bool(false)) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            print!("{}", error_object(&f));
            ExitCode::from(f.code)
        }
    }
}
