use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dehnlog_core::display::format_lie;
use dehnlog_core::expansion::{generator_names, ExpansionJson};
use dehnlog_core::free_group::AutomorphismJson;
use dehnlog_core::johnson::{
    johnson_component, l_invariant_tensor, sigma_act, verify_dehn_twist_formula, LoopArg,
};
use dehnlog_core::suite;
use dehnlog_core::{
    build_symplectic, AlgebraContext, Certificate, Curve, Error, Expansion, ExpansionKind, FreeAutomorphism,
    GroupWord, Tensor,
};
use serde_json::{json, Value};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "dehnlog", version, about = "Exact symplectic expansions, Dehn twist actions and Johnson maps")]
struct Cli {
    /// Output mode.
    #[arg(long, global = true, value_enum, default_value_t = Output::Pretty)]
    output: Output,
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Build a symplectic expansion degree by degree.
    BuildExpansion {
        #[arg(long)]
        genus: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        degree: u64,
        /// Optional seed expansion (same sources as `--expansion`).
        #[arg(long)]
        seed: Option<String>,
    },
    /// Check that an expansion is group-like and symplectic.
    CheckExpansion {
        /// Expansion JSON file; shorthand for `--expansion file:PATH`.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        src: Source,
    },
    /// Evaluate the expansion (or its logarithm) on a word.
    Eval {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        word: String,
        /// Print the logarithm instead.
        #[arg(long)]
        log: bool,
    },
    /// The loop invariant L(w) = 1/2 N(log theta(w)^2).
    LInvariant {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        word: String,
    },
    /// The Johnson component tau_k of the twist along a curve.
    Johnson {
        #[command(flatten)]
        src: Source,
        /// nonsep | sep:h | conj(t1 t2 ...; base) | conj:FILE
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// The action of a loop (a word, `log w` or `(log w)^k`) on a word.
    Sigma {
        #[command(flatten)]
        src: Source,
        #[arg(long = "loop")]
        loop_arg: String,
        #[arg(long)]
        word: String,
    },
    /// Run the acceptance suite, or the twist formula for one curve.
    Verify {
        /// `all` or a comma-separated list of criterion numbers.
        #[arg(long, conflicts_with = "curve")]
        suite: Option<String>,
        #[arg(long)]
        curve: Option<String>,
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Args, Clone)]
struct Source {
    /// builtin:standard | builtin:exp | fixture:g1 | fixture:g2 | fixture:massuyeau | build | file:PATH
    #[arg(long, default_value = "build")]
    expansion: String,
    #[arg(long)]
    genus: Option<usize>,
    /// Truncation degree; defaults to the fixture's trusted degree, else 4.
    #[arg(long)]
    degree: Option<usize>,
    /// Directory with fixture files overriding the embedded ones.
    #[arg(long, env = "DEHNLOG_DATA_DIR")]
    data_dir: Option<PathBuf>,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<Error>() {
            Some(
                Error::Parse { .. }
                | Error::Json(_)
                | Error::InvalidGenus(_)
                | Error::BasisOutOfRange { .. }
                | Error::TwistOutOfRange { .. }
                | Error::FixtureDegreeExceeded { .. }
                | Error::FixtureUnavailable(_),
            ) => EXIT_USAGE,
            Some(_) => EXIT_FAILURE,
            None if err.downcast_ref::<std::io::Error>().is_some() => EXIT_USAGE,
            None if err.downcast_ref::<serde_json::Error>().is_some() => EXIT_USAGE,
            None => EXIT_FAILURE,
        };
        Failure { code, err }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

impl Source {
    fn load(&self) -> Result<Expansion, Failure> {
        let spec = self.expansion.as_str();
        if let Some(path) = spec.strip_prefix("file:") {
            return load_file(Path::new(path));
        }
        let kind = match spec {
            "builtin:standard" | "standard" => ExpansionKind::Standard,
            "builtin:exp" | "exponential" => ExpansionKind::Exponential,
            "fixture:g1" | "fixture-genus1" => ExpansionKind::FixtureGenus1,
            "fixture:g2" | "fixture-genus2" => ExpansionKind::FixtureGenus2,
            "fixture:massuyeau" | "fixture-massuyeau-partial" => ExpansionKind::FixtureMassuyeauPartial,
            "build" | "built" => ExpansionKind::Built,
            other => {
                return Err(Error::Parse {
                    position: 0,
                    message: format!("unknown expansion source `{other}`"),
                }
                .into())
            }
        };
        let genus = self.genus.unwrap_or(if kind == ExpansionKind::FixtureGenus2 { 2 } else { 1 });
        let degree = self.degree.or(kind.trusted_truncation()).unwrap_or(4);
        let e = match kind {
            ExpansionKind::Standard => Expansion::standard(AlgebraContext::new(genus, degree)?),
            ExpansionKind::Exponential => Expansion::exponential(AlgebraContext::new(genus, degree)?),
            ExpansionKind::Built => build_symplectic(genus, degree, None)?,
            fixture => match &self.data_dir {
                Some(dir) => Expansion::fixture_from_dir(dir, fixture, genus, degree)?,
                None => Expansion::fixture(fixture, genus, degree)?,
            },
        };
        Ok(e)
    }
}

fn load_file(path: &Path) -> Result<Expansion, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let j: ExpansionJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Expansion::from_json(&j)?)
}

fn parse_curve(genus: usize, s: &str) -> Result<Curve, Failure> {
    let Some(path) = s.strip_prefix("conj:") else {
        return Ok(Curve::parse(genus, s)?);
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    // A twist automorphism in JSON conjugates alpha_1; anything else is a descriptor.
    match serde_json::from_str::<AutomorphismJson>(&text) {
        Ok(j) => {
            if j.genus != genus {
                return Err(Error::InvalidGenus(j.genus).into());
            }
            Ok(Curve::conjugated(FreeAutomorphism::from_json(&j)?, Curve::NonSeparating))
        }
        Err(_) => Ok(Curve::parse(genus, text.trim())?),
    }
}

fn emit(cli: &Cli, value: &Value, pretty: impl FnOnce() -> String) -> Result<(), Failure> {
    if let Some(path) = &cli.out {
        let text = serde_json::to_string_pretty(value).map_err(anyhow::Error::from)?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    match cli.output {
        Output::Json => println!("{}", serde_json::to_string_pretty(value).map_err(anyhow::Error::from)?),
        Output::Pretty => print!("{}", pretty()),
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn symplectic_certificate(e: &Expansion) -> Certificate {
    let mut c = Certificate::new("is_symplectic")
        .param("genus", e.genus())
        .param("truncation", e.truncation())
        .param("expansion", e.kind().as_str());
    if let Some(msg) = e.symplectic_failure() {
        c.fail(msg);
    }
    c
}

fn expansion_pretty(e: &Expansion) -> String {
    let mut s = String::new();
    for (i, name) in generator_names(e.genus()).iter().enumerate() {
        if e.is_raw() {
            s += &format!("theta({name}) = {}\n", e.theta(i));
        } else {
            s += &format!("log theta({name}) = {}\n", format_lie(&e.generator_log(i)));
        }
    }
    s
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::BuildExpansion { genus, degree, seed } => {
            let seed = match seed {
                Some(s) => Some(
                    Source {
                        expansion: s.clone(),
                        genus: Some(*genus),
                        degree: None,
                        data_dir: None,
                    }
                    .load()?,
                ),
                None => None,
            };
            let e = build_symplectic(*genus, *degree as usize, seed.as_ref())?;
            let cert = symplectic_certificate(&e);
            if let Some(path) = &cli.out {
                let text = serde_json::to_string_pretty(&e.to_json()).map_err(anyhow::Error::from)?;
                fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            match cli.output {
                Output::Json => println!("{}", serde_json::to_string_pretty(&to_value(&cert)).unwrap()),
                Output::Pretty => println!("{}{cert}", expansion_pretty(&e)),
            }
            Ok(cert.passed())
        }
        Command::CheckExpansion { input, src } => {
            let e = match input {
                Some(p) => load_file(p)?,
                None => src.load()?,
            };
            let cert = symplectic_certificate(&e);
            emit(cli, &to_value(&cert), || format!("{cert}\n"))?;
            Ok(cert.passed())
        }
        Command::Eval { src, word, log } => {
            let e = src.load()?;
            let w = GroupWord::parse(e.genus(), word)?;
            let (t, label) = if *log {
                (e.log_evaluate(&w), "log theta")
            } else {
                (e.evaluate(&w), "theta")
            };
            emit(cli, &to_value(&t.to_json()), || {
                let body = if *log { format_lie(&t) } else { t.to_string() };
                format!("{label}({w}) = {body}\n")
            })?;
            Ok(true)
        }
        Command::LInvariant { src, word } => {
            let e = src.load()?;
            let w = GroupWord::parse(e.genus(), word)?;
            let l: Tensor = l_invariant_tensor(&e, &w);
            let value = json!({ "view": "tensor", "word": w.to_string(), "genus": l.genus(),
                "truncation": l.truncation(), "terms": to_value(&l.to_json())["terms"] });
            emit(cli, &value, || format!("L({w}) = {l}\n"))?;
            Ok(true)
        }
        Command::Johnson { src, curve, k } => {
            let e = src.load()?;
            let c = parse_curve(e.genus(), curve)?;
            let tau = johnson_component(&e, &c.twist(e.genus())?, *k)?;
            let values: Vec<Value> = tau.values.iter().map(|v| to_value(&v.to_json())).collect();
            let value = json!({ "k": k, "curve": c.word(e.genus())?.to_string(), "values": values });
            emit(cli, &value, || tau.to_string())?;
            Ok(true)
        }
        Command::Sigma { src, loop_arg, word } => {
            let e = src.load()?;
            let u = LoopArg::parse(e.genus(), loop_arg)?;
            let v = GroupWord::parse(e.genus(), word)?;
            let t = sigma_act(&e, &u, &v);
            emit(cli, &to_value(&t.to_json()), || format!("theta(sigma({loop_arg}) {v}) = {t}\n"))?;
            Ok(true)
        }
        Command::Verify { suite: which, curve, src } => {
            let certs: Vec<Certificate> = match (which, curve) {
                (_, Some(c)) => {
                    let e = src.load()?;
                    let c = parse_curve(e.genus(), c)?;
                    vec![verify_dehn_twist_formula(&e, &c)?]
                }
                (Some(s), None) => {
                    let ids = parse_ids(s)?;
                    suite::run(&ids).into_iter().map(|(c, _)| c).collect()
                }
                (None, None) => return Err(anyhow!("verify needs --suite or --curve").into()),
            };
            let ok = certs.iter().all(Certificate::passed);
            emit(cli, &to_value(&certs), || certs.iter().map(|c| format!("{c}\n")).collect())?;
            Ok(ok)
        }
    }
}

fn parse_ids(s: &str) -> Result<Vec<usize>, Failure> {
    if s == "all" {
        return Ok(Vec::new());
    }
    let count = suite::criteria().len();
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(id) if (1..=count).contains(&id) => Ok(id),
            _ => Err(Failure {
                code: EXIT_USAGE,
                err: anyhow!("invalid criterion `{t}`; expected `all` or numbers 1..={count}"),
            }),
        })
        .collect()
}
