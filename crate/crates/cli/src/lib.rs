pub mod certify;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use k3lat::cyclo::{build_lp, trace_lattice};
use k3lat::lattice::{
    discriminant_form, finite_form_normal, search_glue, standard_lattice, Lattice,
};
use k3lat::shortvec::{density, short_vectors};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use certify::{
    counts_json, int_json, matrix_json, Certificate, CertifyError, DEFAULT_SEED, PRIMES,
};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "k3lat",
    version,
    about = "Lattice certificates for symplectic automorphisms of K3 surfaces"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct LatticeSource {
    /// Catalog name, e.g. `Omega5`, `U(3)`, `A(2)`.
    #[arg(long, conflicts_with = "file")]
    pub name: Option<String>,
    /// Lattice JSON file `{"label", "rank", "gram"}`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gram matrix and determinant.
    Gram(LatticeSource),
    /// Discriminant form and its normal form when it is homogeneous.
    Discform(LatticeSource),
    /// Counts of short vectors of a definite lattice.
    Shortvec {
        #[command(flatten)]
        source: LatticeSource,
        #[arg(long, default_value_t = 8)]
        bound: u64,
    },
    /// Sphere packing density from the minimum and determinant.
    Density(LatticeSource),
    /// Runs a named group of certificates.
    Verify {
        target: Target,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Weierstrass model of the torsion family of order p.
    Fibration {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Index-p overlattices of <l2> + Omega_p.
    Glue {
        #[arg(long)]
        p: u32,
        /// Norm of the rank-one summand; defaults to 2p.
        #[arg(long)]
        l2: Option<i64>,
    },
    /// Trace lattice of the hermitian lattice over Z[zeta_p].
    Tracelattice {
        #[arg(long)]
        p: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Omega,
    Ns,
    MainTheorem,
    K12,
    Glue,
    Lefschetz,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub status: Status,
    pub payload: Value,
    pub summary: Vec<String>,
}

impl Report {
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            return serde_json::to_string(self).expect("report serializes");
        }
        let status = serde_json::to_value(self.status).expect("status serializes");
        let mut out = format!("{}: {}\n", self.command, status.as_str().unwrap_or("?"));
        for line in &self.summary {
            out.push_str(&format!("  {line}\n"));
        }
        if let Value::Object(map) = &self.payload {
            for (k, v) in map {
                out.push_str(&format!("  {k} = {v}\n"));
            }
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("give exactly one of --name or --file")]
    NoSource,
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("--p must be 3, 5 or 7, got {0}")]
    BadPrime(u32),
    #[error(transparent)]
    Lattice(#[from] k3lat::lattice::LatticeError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

impl CliError {
    fn is_input(&self) -> bool {
        matches!(
            self,
            CliError::NoSource
                | CliError::Io { .. }
                | CliError::BadPrime(_)
                | CliError::Lattice(
                    k3lat::lattice::LatticeError::UnknownName(_)
                        | k3lat::lattice::LatticeError::BadParam(_)
                        | k3lat::lattice::LatticeError::Format(_)
                )
        )
    }
}

struct Outcome {
    status: Status,
    payload: Value,
    summary: Vec<String>,
}

impl Outcome {
    fn info(payload: Map<String, Value>, summary: Vec<String>) -> Self {
        Outcome {
            status: Status::Pass,
            payload: Value::Object(payload),
            summary,
        }
    }

    fn from_certificate(cert: Certificate) -> Self {
        let status = if cert.passed() {
            Status::Pass
        } else {
            Status::Fail
        };
        let total = cert.checks.len();
        let failed: Vec<String> = cert
            .failures()
            .map(|c| match &c.note {
                Some(n) => format!("failed: {}: {n}", c.name),
                None => format!("failed: {}", c.name),
            })
            .collect();
        let mut summary = vec![format!("{} of {total} checks passed", total - failed.len())];
        summary.extend(failed);
        Outcome {
            status,
            payload: Value::Object(cert.payload),
            summary,
        }
    }
}

fn load(source: &LatticeSource) -> Result<Lattice, CliError> {
    match (&source.name, &source.file) {
        (Some(name), None) => Ok(standard_lattice(name)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
            Ok(Lattice::from_json(&text)?)
        }
        _ => Err(CliError::NoSource),
    }
}

fn prime(p: u32) -> Result<u32, CliError> {
    if PRIMES.contains(&p) {
        Ok(p)
    } else {
        Err(CliError::BadPrime(p))
    }
}

fn primes(p: Option<u32>) -> Result<Vec<u32>, CliError> {
    match p {
        Some(p) => Ok(vec![prime(p)?]),
        None => Ok(PRIMES.to_vec()),
    }
}

fn lattice_head(l: &Lattice) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("name".into(), json!(l.label().unwrap_or("")));
    m.insert("rank".into(), json!(l.rank()));
    m.insert("det".into(), int_json(&l.det()));
    m
}

fn gram(source: &LatticeSource) -> Result<Outcome, CliError> {
    let l = load(source)?;
    let mut payload = lattice_head(&l);
    payload.insert("even".into(), json!(l.is_even()));
    payload.insert("gram".into(), matrix_json(l.gram()));
    let summary = vec![format!("rank {}, det {}", l.rank(), l.det())];
    Ok(Outcome::info(payload, summary))
}

fn discform(source: &LatticeSource) -> Result<Outcome, CliError> {
    let l = load(source)?;
    let form = discriminant_form(&l)?;
    let mut payload = lattice_head(&l);
    let orders: Vec<Value> = form.orders().iter().map(int_json).collect();
    let q: Vec<Value> = form
        .q_values()
        .iter()
        .map(|x| json!(x.to_string()))
        .collect();
    payload.insert("orders".into(), Value::Array(orders));
    payload.insert("q".into(), Value::Array(q));
    payload.insert("min_generators".into(), json!(form.min_generators()));
    let normal = finite_form_normal(&form).ok();
    payload.insert(
        "normal_form".into(),
        normal.as_ref().map_or(Value::Null, |n| {
            serde_json::to_value(n).unwrap_or(Value::Null)
        }),
    );
    let mut summary = vec![format!("group order {}", form.order())];
    if let Some(n) = normal {
        let class = serde_json::to_value(n.class).unwrap_or(Value::Null);
        summary.push(format!(
            "(Z/{})^{} with {} class",
            n.prime,
            n.rank,
            class.as_str().unwrap_or("?")
        ));
    }
    Ok(Outcome::info(payload, summary))
}

fn shortvec(source: &LatticeSource, bound: u64) -> Result<Outcome, CliError> {
    let l = load(source)?;
    let r = short_vectors(&l, bound, false).map_err(CertifyError::from)?;
    let mut payload = lattice_head(&l);
    payload.insert("bound".into(), json!(bound));
    payload.insert("counts".into(), counts_json(&r.counts));
    payload.insert("min".into(), json!(r.min));
    let summary = vec![format!("{} vectors with |norm| <= {bound}", r.total())];
    Ok(Outcome::info(payload, summary))
}

fn density_cmd(source: &LatticeSource) -> Result<Outcome, CliError> {
    let l = load(source)?;
    let d = density(&l).map_err(CertifyError::from)?;
    let mut payload = lattice_head(&l);
    payload.insert("density".into(), json!(d));
    Ok(Outcome::info(
        payload,
        vec![format!("density {d:.6} (approximate)")],
    ))
}

fn verify(target: Target, p: Option<u32>, seed: u64) -> Result<Outcome, CliError> {
    let mut cert = Certificate::default();
    let per_prime = |cert: &mut Certificate,
                     f: fn(&mut Certificate, u32) -> certify::Piece|
     -> Result<(), CliError> {
        let ps = primes(p)?;
        if ps.len() == 1 {
            return Ok(f(cert, ps[0])?);
        }
        for q in ps {
            let mut sub = Certificate::default();
            f(&mut sub, q)?;
            cert.checks.extend(sub.checks);
            cert.record(format!("p{q}"), Value::Object(sub.payload));
        }
        Ok(())
    };
    match target {
        Target::Omega => per_prime(&mut cert, certify::omega)?,
        Target::Ns => {
            per_prime(&mut cert, certify::ns)?;
            let mut sub = Certificate::default();
            per_prime(&mut sub, certify::sigma)?;
            cert.checks.extend(sub.checks);
            if primes(p)?.contains(&3) {
                certify::w5(&mut cert)?;
            }
        }
        Target::MainTheorem => per_prime(&mut cert, certify::main_theorem)?,
        Target::K12 => certify::k12(&mut cert)?,
        Target::Glue => certify::glue(&mut cert)?,
        Target::Lefschetz => certify::lefschetz(&mut cert)?,
        Target::All => return Ok(verify_all(seed)),
    }
    Ok(Outcome::from_certificate(cert))
}

fn verify_all(seed: u64) -> Outcome {
    let mut payload = Map::new();
    let mut summary = Vec::new();
    let mut all_pass = true;
    for criterion in certify::criteria() {
        let mut cert = Certificate::default();
        let result = (criterion.run)(&mut cert, seed);
        if let Err(e) = &result {
            cert.check(format!("error: {e}"), false);
        }
        let pass = cert.passed();
        all_pass &= pass;
        summary.push(format!(
            "criterion {} {} {}",
            criterion.id,
            if pass { "PASS" } else { "FAIL" },
            criterion.title
        ));
        for f in cert.failures() {
            summary.push(format!(
                "  failed: {}{}",
                f.name,
                f.note.as_ref().map_or(String::new(), |n| format!(": {n}"))
            ));
        }
        let mut entry = cert.payload;
        entry.insert("pass".into(), json!(pass));
        payload.insert(format!("{:02}", criterion.id), Value::Object(entry));
    }
    Outcome {
        status: if all_pass { Status::Pass } else { Status::Fail },
        payload: Value::Object(payload),
        summary,
    }
}

fn fibration(p: u32, seed: u64) -> Result<Outcome, CliError> {
    let mut cert = Certificate::default();
    certify::fibration(&mut cert, prime(p)?, seed)?;
    Ok(Outcome::from_certificate(cert))
}

fn glue(p: u32, l2: Option<i64>) -> Result<Outcome, CliError> {
    let p = prime(p)?;
    let l_sq = BigInt::from(l2.unwrap_or(2 * p as i64));
    let omega = standard_lattice(&format!("Omega{p}"))?;
    let search = search_glue(&l_sq, &omega, p as i64)?;
    let mut cert = Certificate::default();
    cert.record("l2", int_json(&l_sq));
    cert.record("classes", json!(search.classes));
    cert.record("admissible", json!(search.admissible));
    match &search.witness {
        Some((g, over)) => {
            cert.check("overlattice is even", over.lattice.is_even());
            let p2 = BigInt::from(p * p);
            cert.eq(
                "det * p^2 = host det",
                over.lattice.det() * p2,
                over.host_det.clone(),
            );
            cert.record("v", Value::Array(g.v.iter().map(int_json).collect()));
            cert.record("v_norm", int_json(&omega.norm(&g.v)));
            cert.record("det", int_json(&over.lattice.det()));
            cert.record("gram", matrix_json(over.lattice.gram()));
        }
        None => cert.check("no admissible class", search.admissible == 0),
    }
    Ok(Outcome::from_certificate(cert))
}

fn tracelattice(p: u32) -> Result<Outcome, CliError> {
    let p = prime(p)?;
    let h = build_lp(p).map_err(CertifyError::from)?;
    let t = trace_lattice(&h).map_err(CertifyError::from)?;
    let table = standard_lattice(&format!("Omega{p}"))?;
    let gram = h.trace_gram(&h.generators).map_err(CertifyError::from)?;
    let mut cert = Certificate::default();
    cert.check(
        "generators form a basis",
        t.is_basis(&h, &h.generators).map_err(CertifyError::from)?,
    );
    cert.check(format!("trace Gram = Omega{p}"), &gram == table.gram());
    cert.record("rank", json!(t.lattice.rank()));
    cert.record("det", int_json(&t.lattice.det()));
    cert.record("gram", matrix_json(&gram));
    Ok(Outcome::from_certificate(cert))
}

fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Gram(s) => gram(s),
        Command::Discform(s) => discform(s),
        Command::Shortvec { source, bound } => shortvec(source, *bound),
        Command::Density(s) => density_cmd(s),
        Command::Verify { target, p, seed } => verify(*target, *p, *seed),
        Command::Fibration { p, seed } => fibration(*p, *seed),
        Command::Glue { p, l2 } => glue(*p, *l2),
        Command::Tracelattice { p } => tracelattice(*p),
    }
}

/// Runs one invocation and returns the report and the exit code.
pub fn run_parsed(cli: &Cli, command_echo: String) -> Report {
    let outcome = dispatch(&cli.command).unwrap_or_else(|e| Outcome {
        status: if e.is_input() {
            Status::Error
        } else {
            Status::Fail
        },
        payload: json!({ "error": e.to_string() }),
        summary: vec![e.to_string()],
    });
    Report {
        schema: SCHEMA,
        command: command_echo,
        status: outcome.status,
        payload: outcome.payload,
        summary: outcome.summary,
    }
}

/// Parses `argv` (including the program name) and runs it. Usage errors
/// come back as `Err` with clap's message and exit code.
pub fn run<I, T>(argv: I) -> Result<(Report, bool), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv)?;
    let echo = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    Ok((run_parsed(&cli, echo), cli.json))
}
