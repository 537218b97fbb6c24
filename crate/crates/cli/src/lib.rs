//! Command-line front end: expression parsing, printing and one JSON
//! document per invocation.

mod error;
pub mod parse;
pub mod print;

use std::ffi::OsString;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ncsaito_core::cyclic::{canonicalize, cyclic_derivative, Superpotential};
use ncsaito_core::derive::{jordan_chevalley, Derivation};
use ncsaito_core::jacobi::{
    class_in_hh0, finite_dim_certificate, is_quasi_homogeneous, JacobiConfig, DEFAULT_NMAX, DEFAULT_SIZE_GUARD,
};
use ncsaito_core::ncseries::{Series, DEFAULT_TRUNC, MAX_DEGREE, MAX_VARS};
use ncsaito_core::saito::{abelianize, canonical_type, normalize, weights, WeightType};
use ncsaito_core::Rat;

pub use error::CliError;
pub use parse::{parse, parse_images};

pub const TOOL_NAME: &str = "ncsaito";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobConfig {
    pub vars: Vec<String>,
    pub trunc: usize,
    pub nmax: usize,
    pub size_guard: u128,
    pub output: OutputFormat,
}

impl JobConfig {
    pub fn new(vars: &[&str]) -> Self {
        JobConfig {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            trunc: DEFAULT_TRUNC,
            nmax: DEFAULT_NMAX,
            size_guard: DEFAULT_SIZE_GUARD,
            output: OutputFormat::Json,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.vars.is_empty() {
            return bad("--vars must name at least one variable".into());
        }
        if self.vars.len() > MAX_VARS {
            return bad(format!("at most {MAX_VARS} variables are supported"));
        }
        for (i, v) in self.vars.iter().enumerate() {
            let ident = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ident {
                return bad(format!("`{v}` is not a valid variable name"));
            }
            if self.vars[..i].contains(v) {
                return bad(format!("variable `{v}` declared twice"));
            }
        }
        if !(2..=MAX_DEGREE).contains(&self.trunc) {
            return bad(format!("--trunc must lie in 2..={MAX_DEGREE}"));
        }
        if self.size_guard == 0 {
            return bad("--size-guard must be positive".into());
        }
        Ok(())
    }

    fn jacobi(&self) -> JacobiConfig {
        JacobiConfig {
            nmax: self.nmax,
            size_guard: self.size_guard,
        }
    }

    fn echo(&self) -> Value {
        json!({
            "vars": self.vars,
            "trunc": self.trunc,
            "nmax": self.nmax,
            "size_guard": self.size_guard.to_string(),
            "output": match self.output {
                OutputFormat::Json => "json",
                OutputFormat::Text => "text",
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Canonical representative of the superpotential.
    Canon {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Lowest degree of the superpotential.
    Order {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Cyclic derivative with respect to one variable.
    CycDiff {
        #[arg(long)]
        var: String,
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Finite-dimensionality certificate for the Jacobi algebra.
    Jacobi {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Class of THETA in HH_0 of the Jacobi algebra.
    Class {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Whether the superpotential is quasi-homogeneous.
    Quasi {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Weight type of a quasi-homogeneous superpotential.
    Weights {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Weighted-homogeneous normal form with the transforming automorphism.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Jordan-Chevalley decomposition of a derivation "x=EXPR;y=EXPR".
    Jc {
        #[arg(long, allow_hyphen_values = true)]
        derivation: String,
    },
    /// Image in commuting variables.
    Abelianize {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Canon { .. } => "canon",
            Command::Order { .. } => "order",
            Command::CycDiff { .. } => "cyc-diff",
            Command::Jacobi { .. } => "jacobi",
            Command::Class { .. } => "class",
            Command::Quasi { .. } => "quasi",
            Command::Weights { .. } => "weights",
            Command::Normalize { .. } => "normalize",
            Command::Jc { .. } => "jc",
            Command::Abelianize { .. } => "abelianize",
        }
    }

    fn input(&self) -> &str {
        match self {
            Command::Canon { input }
            | Command::Order { input }
            | Command::CycDiff { input, .. }
            | Command::Jacobi { input }
            | Command::Class { input, .. }
            | Command::Quasi { input }
            | Command::Weights { input }
            | Command::Normalize { input }
            | Command::Abelianize { input } => input,
            Command::Jc { derivation } => derivation,
        }
    }

    /// Results are exact modulo `m^k`. Anything built from cyclic
    /// derivatives loses one degree of the input truncation.
    fn certified_mod_degree(&self, trunc: usize) -> usize {
        match self {
            Command::Canon { .. } | Command::Order { .. } | Command::Jc { .. } | Command::Abelianize { .. } => {
                trunc + 1
            }
            _ => trunc,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ncsaito", version, about = "Saito-type normal forms for noncommutative superpotentials")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Ordered, comma-separated variable names; the order fixes the
    /// lexicographic convention.
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Vec<String>,
    /// Work modulo m^(trunc+1).
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNC)]
    trunc: usize,
    /// Highest level tried by the finiteness certificate.
    #[arg(long, global = true, default_value_t = DEFAULT_NMAX)]
    nmax: usize,
    /// Largest monomial basis any step may enumerate (integer or `a^b`).
    #[arg(long, global = true, default_value = "2^22")]
    size_guard: String,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
}

fn parse_guard(s: &str) -> Result<u128, CliError> {
    let bad = || CliError::Config(format!("cannot read size guard `{s}`"));
    match s.split_once('^') {
        Some((b, e)) => {
            let b: u128 = b.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            b.checked_pow(e).ok_or_else(bad)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn rationals(rs: &[Rat]) -> Value {
    Value::Array(rs.iter().map(|r| Value::String(print::rational(r))).collect())
}

fn terms(s: &Series, vars: &[String]) -> Value {
    Value::Array(
        s.terms()
            .map(|(w, c)| json!({"word": print::word(*w, vars), "coeff": print::rational(c)}))
            .collect(),
    )
}

fn images(imgs: &[Series], vars: &[String]) -> Value {
    Value::Array(
        imgs.iter()
            .zip(vars)
            .map(|(s, v)| json!({"var": v, "image": print::series(s, vars)}))
            .collect(),
    )
}

fn weight_fields(out: &mut Map<String, Value>, r: &WeightType) {
    out.insert("weights".into(), rationals(&r.weights));
    out.insert("canonical_type".into(), rationals(&canonical_type(r).weights));
}

fn superpotential(src: &str, cfg: &JobConfig) -> Result<Superpotential, CliError> {
    Ok(canonicalize(&parse(src, &cfg.vars, cfg.trunc)?))
}

fn require_finite(phi: &Superpotential, cfg: &JobConfig) -> Result<ncsaito_core::jacobi::JacobiReport, CliError> {
    let report = finite_dim_certificate(phi, &cfg.jacobi())?;
    if !report.finite {
        return Err(ncsaito_core::Error::NotCertifiedFinite(report.searched_to).into());
    }
    Ok(report)
}

/// Runs one command and returns the command-specific result fields.
pub fn execute(command: &Command, cfg: &JobConfig) -> Result<Map<String, Value>, CliError> {
    cfg.validate()?;
    let vars = &cfg.vars;
    let mut out = Map::new();
    match command {
        Command::Canon { input } => {
            let phi = superpotential(input, cfg)?;
            out.insert("canonical".into(), print::series(phi.rep(), vars).into());
            out.insert("terms".into(), terms(phi.rep(), vars));
            out.insert("is_zero".into(), phi.is_zero().into());
        }
        Command::Order { input } => {
            let phi = superpotential(input, cfg)?;
            out.insert("order".into(), phi.order()?.into());
        }
        Command::CycDiff { var, input } => {
            let i = vars
                .iter()
                .position(|v| v == var)
                .ok_or_else(|| CliError::Config(format!("--var `{var}` is not a declared variable")))?;
            let phi = superpotential(input, cfg)?;
            let d = cyclic_derivative(phi.rep(), i);
            out.insert("var".into(), var.clone().into());
            out.insert("derivative".into(), print::series(&d, vars).into());
            out.insert("terms".into(), terms(&d, vars));
        }
        Command::Jacobi { input } => {
            let phi = superpotential(input, cfg)?;
            let r = finite_dim_certificate(&phi, &cfg.jacobi())?;
            out.insert("finite".into(), r.finite.into());
            out.insert("searched_to".into(), r.searched_to.into());
            out.insert("nil_degree".into(), r.nil_degree.into());
            out.insert("dimension".into(), r.dimension.into());
            out.insert(
                "normal_words".into(),
                r.normal_words.iter().map(|w| print::word(*w, vars)).collect::<Vec<_>>().into(),
            );
        }
        Command::Class { theta, input } => {
            let phi = superpotential(input, cfg)?;
            let th = superpotential(theta, cfg)?;
            let report = require_finite(&phi, cfg)?;
            let class = class_in_hh0(&th, &phi, &report, cfg.size_guard)?;
            out.insert("class".into(), print::series(class.rep(), vars).into());
            out.insert("terms".into(), terms(class.rep(), vars));
            out.insert("is_zero".into(), class.is_zero().into());
        }
        Command::Quasi { input } => {
            let phi = superpotential(input, cfg)?;
            let report = require_finite(&phi, cfg)?;
            out.insert(
                "quasi_homogeneous".into(),
                is_quasi_homogeneous(&phi, &report, cfg.size_guard)?.into(),
            );
        }
        Command::Weights { input } => {
            let phi = superpotential(input, cfg)?;
            weight_fields(&mut out, &weights(&phi, &cfg.jacobi())?);
        }
        Command::Normalize { input } => {
            let phi = superpotential(input, cfg)?;
            let res = normalize(&phi, &cfg.jacobi())?;
            weight_fields(&mut out, &res.weight_type);
            out.insert("transform".into(), images(res.transform.images(), vars));
            out.insert("normal_form".into(), print::series(res.normal_form.rep(), vars).into());
            out.insert("normal_form_terms".into(), terms(res.normal_form.rep(), vars));
            out.insert("euler".into(), images(res.euler.images(), vars));
        }
        Command::Jc { derivation } => {
            let xi = Derivation::new(parse_images(derivation, vars, cfg.trunc)?)?;
            let jc = jordan_chevalley(&xi)?;
            out.insert("semisimple".into(), images(jc.semisimple.images(), vars));
            out.insert("nilpotent".into(), images(jc.nilpotent.images(), vars));
            out.insert("conjugator".into(), images(jc.conjugator.images(), vars));
            out.insert("eigenvalues".into(), rationals(&jc.eigenvalues));
        }
        Command::Abelianize { input } => {
            let phi = superpotential(input, cfg)?;
            let p = abelianize(&phi);
            out.insert("abelianization".into(), print::commutative(&p, vars).into());
            out.insert(
                "terms".into(),
                p.terms
                    .iter()
                    .map(|(e, c)| json!({"exponents": e, "coeff": print::rational(c)}))
                    .collect::<Vec<_>>()
                    .into(),
            );
        }
    }
    Ok(out)
}

fn error_object(e: &CliError) -> Value {
    let mut obj = Map::new();
    obj.insert("code".into(), e.code().into());
    obj.insert("message".into(), e.to_string().into());
    match e {
        CliError::Parse { offset, expected, .. } => {
            obj.insert("offset".into(), (*offset).into());
            obj.insert("expected".into(), expected.clone().into());
        }
        CliError::UnknownVariable { name, offset } => {
            obj.insert("offset".into(), (*offset).into());
            obj.insert("name".into(), name.clone().into());
        }
        _ => {}
    }
    Value::Object(obj)
}

/// Full output document for one job, plus the exit status.
pub fn document(command: &Command, cfg: &JobConfig) -> (Value, i32) {
    let mut doc = Map::new();
    doc.insert("tool".into(), TOOL_NAME.into());
    doc.insert("version".into(), TOOL_VERSION.into());
    doc.insert("command".into(), command.name().into());
    doc.insert("config".into(), cfg.echo());
    doc.insert("input".into(), command.input().into());
    doc.insert("trunc".into(), cfg.trunc.into());
    let code = match execute(command, cfg) {
        Ok(fields) => {
            doc.insert("status".into(), "ok".into());
            doc.insert(
                "certified_mod_degree".into(),
                command.certified_mod_degree(cfg.trunc).into(),
            );
            doc.extend(fields);
            0
        }
        Err(e) => {
            doc.insert("status".into(), "error".into());
            doc.insert("certified_mod_degree".into(), Value::Null);
            doc.insert("error".into(), error_object(&e));
            e.exit_code()
        }
    };
    (Value::Object(doc), code)
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(render_value).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(map) if map.contains_key("var") && map.contains_key("image") => {
            format!("{} -> {}", render_value(&map["var"]), render_value(&map["image"]))
        }
        other => other.to_string(),
    }
}

fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    let Value::Object(map) = doc else {
        return doc.to_string();
    };
    if let Some(Value::Object(err)) = map.get("error") {
        out.push_str(&format!(
            "error[{}]: {}\n",
            render_value(&err["code"]),
            render_value(&err["message"])
        ));
        return out;
    }
    for (k, v) in map {
        if matches!(k.as_str(), "tool" | "version" | "config" | "input" | "status" | "terms" | "normal_form_terms") {
            continue;
        }
        out.push_str(&format!("{k}: {}\n", render_value(v)));
    }
    out
}

/// What one invocation writes and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn usage_failure(e: &CliError) -> Outcome {
    let mut doc = Map::new();
    doc.insert("tool".into(), TOOL_NAME.into());
    doc.insert("version".into(), TOOL_VERSION.into());
    doc.insert("status".into(), "error".into());
    doc.insert("certified_mod_degree".into(), Value::Null);
    doc.insert("error".into(), error_object(e));
    Outcome {
        stdout: format!("{}\n", Value::Object(doc)),
        stderr: format!("{e}\n"),
        code: e.exit_code(),
    }
}

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var("NCSAITO_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("NCSAITO_THREADS must be a positive integer, got `{s}`"))),
        },
        Err(_) => Ok(None),
    }
}

/// Parses command-line arguments (program name first) and runs the job.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    stdout: e.to_string(),
                    stderr: String::new(),
                    code: 0,
                };
            }
            let mut out = usage_failure(&CliError::Usage(e.to_string().trim_end().to_string()));
            out.stderr = e.to_string();
            return out;
        }
    };
    let size_guard = match parse_guard(&args.size_guard) {
        Ok(g) => g,
        Err(e) => return usage_failure(&e),
    };
    let cfg = JobConfig {
        vars: args.vars,
        trunc: args.trunc,
        nmax: args.nmax,
        size_guard,
        output: args.output,
    };
    let job = || document(&args.command, &cfg);
    let (doc, code) = match thread_cap() {
        Err(e) => return usage_failure(&e),
        Ok(None) => job(),
        Ok(Some(n)) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(job),
            Err(e) => return usage_failure(&CliError::Config(format!("cannot start thread pool: {e}"))),
        },
    };
    let stderr = doc
        .get("error")
        .and_then(|e| e.get("message"))
        .and_then(Value::as_str)
        .map(|m| format!("{m}\n"))
        .unwrap_or_default();
    let stdout = match cfg.output {
        OutputFormat::Json => format!("{doc}\n"),
        OutputFormat::Text => render_text(&doc),
    };
    Outcome { stdout, stderr, code }
}
