//! Command-line front end. [`run`] parses arguments and returns the exit
//! status with everything that would be printed, so it can be tested
//! without spawning a process.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::audit::{audit_tables, AuditOptions};
use crate::code::{first_nonzero_gram_entry, ArtifactJson, CodeArtifact, GeneratorMatrix};
use crate::constructions::{build, Budget, Built, Certificate, Construction, MdsStatus, Request};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::numtheory::{
    dirichlet_search, divisors, is_prime_power, pair_search, prime_power, quadratic_family,
    Progression,
};
use crate::verifier::{
    binomial, check_mds_enumeration, check_mds_rank, quantum_params, MdsVerdict,
    DEFAULT_ENUM_BUDGET, DEFAULT_MINOR_BUDGET,
};

#[derive(Debug, Parser)]
#[command(name = "qmds", version, about = "Hermitian self-orthogonal MDS codes and quantum MDS parameters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub h: Option<u32>,
}

#[derive(Debug, Args)]
pub struct DivisorArgs {
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub m1: Option<u64>,
    #[arg(long)]
    pub m2: Option<u64>,
    #[arg(long)]
    pub m3: Option<u64>,
    /// Comma-separated divisor list, for any number of subgroups.
    #[arg(long, value_delimiter = ',')]
    pub ms: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Largest number of k-column minors to test.
    #[arg(long, default_value_t = DEFAULT_MINOR_BUDGET)]
    pub budget_minors: u128,
    /// Largest number of codewords to enumerate.
    #[arg(long, default_value_t = DEFAULT_ENUM_BUDGET)]
    pub budget_enum: u128,
    /// Skip matrix construction and certify from exponent conditions only.
    #[arg(long)]
    pub condition_only: bool,
}

#[derive(Debug, Args)]
pub struct RequestArgs {
    #[arg(long, value_enum)]
    pub construction: Construction,
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub divisors: DivisorArgs,
    /// Classical dimension; the largest admissible one when omitted.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe the canonical field GF(q^2).
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Build a code and report its certificate.
    Construct {
        #[command(flatten)]
        request: RequestArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Recheck a saved artifact, a text matrix, or a freshly built code.
    Verify {
        /// JSON written by `construct` (or a bare artifact).
        #[arg(long, conflicts_with_all = ["matrix", "construction"])]
        artifact: Option<PathBuf>,
        /// Text matrix, one row per line, tokens `z` or exponents of θ.
        #[arg(long, requires = "q", conflicts_with = "construction")]
        matrix: Option<PathBuf>,
        #[arg(long, value_enum)]
        construction: Option<Construction>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        h: Option<u32>,
        #[command(flatten)]
        divisors: DivisorArgs,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Largest admissible dimension from the exponent conditions.
    Oracle {
        #[arg(long, value_enum)]
        construction: Construction,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        divisors: DivisorArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Every admissible parameter set of one construction over a range of q.
    Sweep {
        #[arg(long, value_enum)]
        construction: Construction,
        #[arg(long, default_value_t = 3)]
        q_min: u64,
        #[arg(long)]
        q_max: u64,
        /// Also build and verify each code at its largest dimension.
        #[arg(long)]
        matrices: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Recompute the printed parameter tables.
    Audit {
        /// Only these tables (repeatable).
        #[arg(long = "table")]
        tables: Vec<u32>,
        /// Skip the sampled checks of the summary formulas.
        #[arg(long)]
        no_formulas: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Integer searches behind the large-q families.
    Search {
        #[command(subcommand)]
        what: Search,
    },
}

#[derive(Debug, Subcommand)]
pub enum Search {
    /// Primes q with m1 | q-1 and m2 | q+1.
    Primes {
        #[arg(long)]
        m1: u64,
        #[arg(long)]
        m2: u64,
        #[arg(long)]
        limit: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Admissible (even m1, odd m2) pairs with both entries up to the limit.
    Pairs {
        #[arg(long)]
        limit: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Members of the q = 16k^2 - 12k + 1 family.
    Family {
        #[arg(long)]
        k_limit: u64,
        #[command(flatten)]
        output: Output,
    },
}

/// Exit status plus the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = Outcome {
        code: 0,
        stdout: String::new(),
        stderr: String::new(),
    };
    match execute(cli.command) {
        Ok((code, text, dest)) => {
            out.code = code;
            match dest {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        out.code = 2;
                        out.stderr = format!("error: cannot write {}: {e}\n", path.display());
                    }
                }
                None => out.stdout = text,
            }
        }
        Err(Failure::Usage(msg)) => {
            out.code = 2;
            out.stderr = format!("error: {msg}\n");
        }
        Err(Failure::Run(e)) => {
            out.code = e.exit_code();
            out.stderr = format!("error: {e}\n");
        }
    }
    out
}

fn resolve_q(q: Option<u64>, p: Option<u64>, h: Option<u32>) -> CliResult<u64> {
    let from_ph = match (p, h) {
        (Some(p), Some(h)) => Some(p.checked_pow(h).ok_or_else(|| usage("p^h overflows"))?),
        (Some(p), None) => Some(p),
        (None, Some(_)) => return Err(usage("--h needs --p")),
        (None, None) => None,
    };
    match (q, from_ph) {
        (Some(q), Some(v)) if q != v => Err(usage(format!("--q {q} disagrees with p^h = {v}"))),
        (Some(q), _) => Ok(q),
        (None, Some(v)) => Ok(v),
        (None, None) => Err(usage("give --q or --p/--h")),
    }
}

fn resolve_divisors(d: &DivisorArgs) -> CliResult<Vec<u64>> {
    let named: Vec<u64> = [d.m1, d.m2, d.m3].into_iter().flatten().collect();
    let groups = [d.m.is_some(), !named.is_empty(), !d.ms.is_empty()];
    if groups.iter().filter(|&&g| g).count() > 1 {
        return Err(usage("use only one of --m, --m1/--m2/--m3, --ms"));
    }
    if d.m3.is_some() && d.m2.is_none() || d.m2.is_some() && d.m1.is_none() {
        return Err(usage("--m2 needs --m1 and --m3 needs --m2"));
    }
    let ds = if let Some(m) = d.m {
        vec![m]
    } else if !named.is_empty() {
        named
    } else {
        d.ms.clone()
    };
    if ds.is_empty() {
        return Err(usage("no divisors given (--m, --m1/--m2/--m3 or --ms)"));
    }
    Ok(ds)
}

fn request_of(construction: Construction, q: u64, ds: Vec<u64>, k: Option<usize>) -> CliResult<Request> {
    let (lo, hi) = construction.arity();
    if ds.len() < lo || ds.len() > hi {
        return Err(usage(format!(
            "{} takes {} divisors, got {}",
            construction.name(),
            if lo == hi { lo.to_string() } else { format!("{lo} to {hi}") },
            ds.len()
        )));
    }
    Ok(Request {
        construction,
        q,
        divisors: ds,
        k,
    })
}

fn budget_of(b: &BudgetArgs) -> Budget {
    let mut budget = Budget {
        minors: b.budget_minors,
        enumeration: b.budget_enum,
        ..Budget::default()
    };
    if b.condition_only {
        budget.field_size = 0;
    }
    budget
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

type Done = (i32, String, Option<PathBuf>);

fn emit<T: Serialize>(output: Output, code: i32, value: &T, text: impl FnOnce() -> String) -> CliResult<Done> {
    let body = match output.format {
        Format::Json => to_json(value),
        Format::Text => text(),
    };
    Ok((code, body, output.out))
}

#[derive(Serialize)]
struct ConstructJson {
    certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    artifact: Option<ArtifactJson>,
}

fn certificate_text(c: &Certificate) -> String {
    let qp = c.quantum_params();
    let mut s = format!(
        "{} q={} m={:?}: [{},{}] over GF({}^2) -> {}\n  largest k {} (closed form {}), {:?}, MDS {}\n",
        c.construction.name(),
        c.params.q,
        c.params.divisors,
        c.n,
        c.k,
        c.params.q,
        qp,
        c.max_k_oracle,
        c.max_k_claimed,
        c.verified_level,
        match c.mds {
            MdsStatus::Minors => "checked by minors",
            MdsStatus::Enumeration => "checked by enumeration",
            MdsStatus::Unverified => "unverified",
        }
    );
    if let Some(h) = c.h_weight {
        s.push_str(&format!("  H = θ^{h}\n"));
    }
    for d in &c.discrepancies {
        s.push_str(&format!("  note: {d}\n"));
    }
    s
}

fn construct_output(built: Built) -> ConstructJson {
    ConstructJson {
        artifact: built.artifact.as_ref().map(CodeArtifact::to_json),
        certificate: built.certificate,
    }
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    n: usize,
    k: usize,
    q: u64,
    self_orthogonal: bool,
    /// First nonzero Gram entry, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    gram_witness: Option<(usize, usize)>,
    mds: MdsStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_weight: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dependent_columns: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quantum: Option<[u64; 3]>,
}

impl VerifyReport {
    fn passed(&self) -> bool {
        self.self_orthogonal && self.dependent_columns.is_none() && self.min_weight.is_none_or(|w| w == self.n - self.k + 1)
    }
}

fn verify_matrix(field: &Field, matrix: &GeneratorMatrix, budget: &Budget) -> Result<VerifyReport> {
    let (n, k) = (matrix.n(), matrix.k());
    let gram_witness = first_nonzero_gram_entry(field, matrix);
    let mut report = VerifyReport {
        n,
        k,
        q: field.q(),
        self_orthogonal: gram_witness.is_none(),
        gram_witness,
        mds: MdsStatus::Unverified,
        min_weight: None,
        dependent_columns: None,
        quantum: None,
    };
    if binomial(n, k) <= budget.minors {
        match check_mds_rank(field, matrix, budget.minors)? {
            MdsVerdict::Mds => report.mds = MdsStatus::Minors,
            MdsVerdict::NotMds { witness } => report.dependent_columns = Some(witness),
        }
    }
    let words = (field.q2() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if words <= budget.enumeration {
        let w = check_mds_enumeration(field, matrix, budget.enumeration)?;
        report.min_weight = Some(w);
        if report.mds == MdsStatus::Unverified && w == n - k + 1 {
            report.mds = MdsStatus::Enumeration;
        }
    }
    if report.self_orthogonal && 2 * k <= n {
        report.quantum = Some(quantum_params(n as u64, k as u64, field.q())?.triple());
    }
    Ok(report)
}

fn verify_text(r: &VerifyReport) -> String {
    let mut s = format!(
        "[{},{}] over GF({}^2): Hermitian Gram {}\n",
        r.n,
        r.k,
        r.q,
        match r.gram_witness {
            None => "is zero".to_string(),
            Some((i, j)) => format!("has a nonzero entry at ({i}, {j})"),
        }
    );
    s.push_str(&format!("MDS: {:?}", r.mds));
    if let Some(w) = r.min_weight {
        s.push_str(&format!(", minimum weight {w}"));
    }
    if let Some(c) = &r.dependent_columns {
        s.push_str(&format!(", dependent columns {c:?}"));
    }
    s.push('\n');
    if let Some([n, kq, d]) = r.quantum {
        s.push_str(&format!("quantum [[{n},{kq},{d}]]_{}\n", r.q));
    }
    s
}

fn load_artifact(path: &PathBuf) -> CliResult<CodeArtifact> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    // accept the whole construct output or just its artifact
    let inner = match value.get("artifact") {
        Some(a) => a.clone(),
        None if value.get("certificate").is_some() => {
            return Err(usage("certificate carries no matrix (CONDITION_ONLY); nothing to recheck"))
        }
        None => value,
    };
    let art: ArtifactJson = serde_json::from_value(inner).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(art.into_artifact()?)
}

#[derive(Serialize)]
struct OracleJson {
    construction: Construction,
    q: u64,
    divisors: Vec<u64>,
    n: u64,
    max_k: usize,
    max_d: usize,
    max_k_claimed: u64,
    conditions: Vec<(u64, u64)>,
}

#[derive(Serialize)]
struct SweepEntry {
    q: u64,
    divisors: Vec<u64>,
    n: u64,
    max_k: usize,
    max_k_claimed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Divisor tuples of `q^2 - 1` the construction accepts, at its smallest
/// arity. The mixed construction takes `[odd, even]`; the others ascending.
fn admissible_tuples(c: Construction, q: u64) -> Vec<Vec<u64>> {
    let ds: Vec<u64> = divisors(q * q - 1).into_iter().filter(|&d| d > 1).collect();
    let (arity, _) = c.arity();
    let mut out = Vec::new();
    if arity == 1 {
        out.extend(ds.iter().map(|&d| vec![d]));
    } else if c == Construction::MixedUnion {
        for &a in &ds {
            for &b in &ds {
                out.push(vec![a, b]);
            }
        }
    } else {
        for (i, &a) in ds.iter().enumerate() {
            for &b in &ds[i + 1..] {
                out.push(vec![a, b]);
            }
        }
    }
    out.retain(|t| c.validate(q, t).is_ok());
    out
}

fn execute(cmd: Command) -> CliResult<Done> {
    match cmd {
        Command::Field { field, output } => {
            let q = resolve_q(field.q, field.p, field.h)?;
            let (p, h) = prime_power(q).ok_or_else(|| Error::HypothesisViolated(format!("q = {q} is not a prime power")))?;
            let f = Field::new(p, h)?;
            #[derive(Serialize)]
            struct FieldJson {
                field: crate::field::FieldSpec,
                q: u64,
                order: u64,
                backend: crate::field::BackendMode,
            }
            let v = FieldJson {
                field: f.spec(),
                q,
                order: f.order(),
                backend: f.mode(),
            };
            emit(output, 0, &v, || {
                format!(
                    "GF({q}^2) = GF({p})[x]/(f), f coefficients low to high {:?}; θ = x has order {}; {:?} backend\n",
                    v.field.modulus, v.order, v.backend
                )
            })
        }
        Command::Construct { request, budget, output } => {
            let q = resolve_q(request.field.q, request.field.p, request.field.h)?;
            let req = request_of(request.construction, q, resolve_divisors(&request.divisors)?, request.k)?;
            let built = build(&req, &budget_of(&budget))?;
            let v = construct_output(built);
            emit(output, 0, &v, || {
                let mut s = certificate_text(&v.certificate);
                if let Some(a) = &v.artifact {
                    s.push_str(&GeneratorMatrix::new(a.matrix.clone()).expect("built").to_text());
                }
                s
            })
        }
        Command::Verify { artifact, matrix, construction, q, p, h, divisors, k, budget, output } => {
            let b = budget_of(&budget);
            let report = if let Some(path) = artifact {
                let art = load_artifact(&path)?;
                verify_matrix(&art.field, &art.matrix, &b)?
            } else if let Some(path) = matrix {
                let q = resolve_q(q, p, h)?;
                let f = Field::for_q(q)?;
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
                verify_matrix(&f, &GeneratorMatrix::from_text(&f, &text)?, &b)?
            } else if let Some(c) = construction {
                let q = resolve_q(q, p, h)?;
                let req = request_of(c, q, resolve_divisors(&divisors)?, k)?;
                let built = build(&req, &Budget { field_size: crate::field::TABLE_MAX_ORDER, ..b })?;
                let art = built.artifact.ok_or_else(|| {
                    usage("parameters exceed the matrix budget; only a CONDITION_ONLY certificate exists")
                })?;
                verify_matrix(&art.field, &art.matrix, &b)?
            } else {
                return Err(usage("give --artifact, --matrix, or construction parameters"));
            };
            let code = if report.passed() { 0 } else { 1 };
            emit(output, code, &report, || verify_text(&report))
        }
        Command::Oracle { construction, field, divisors, output } => {
            let q = resolve_q(field.q, field.p, field.h)?;
            let req = request_of(construction, q, resolve_divisors(&divisors)?, None)?;
            let (c, ds) = (req.construction, &req.divisors);
            let max_k = c.oracle_max_k(q, ds)?;
            let v = OracleJson {
                construction: c,
                q,
                divisors: ds.clone(),
                n: c.length(q, ds)?,
                max_k,
                max_d: max_k + 1,
                max_k_claimed: c.claimed_max_k(q, ds)?,
                conditions: c.condition_terms(q, ds)?,
            };
            emit(output, 0, &v, || {
                format!(
                    "{} q={q} m={:?}: n = {}, largest k = {} (d <= {}), closed form gives k <= {}\n",
                    c.name(), v.divisors, v.n, v.max_k, v.max_d, v.max_k_claimed
                )
            })
        }
        Command::Sweep { construction, q_min, q_max, matrices, output } => {
            if q_max > 1 << 16 {
                return Err(usage("--q-max above 65536 is not supported"));
            }
            let budget = if matrices {
                Budget::default()
            } else {
                Budget { field_size: 0, ..Budget::default() }
            };
            let mut entries = Vec::new();
            let mut code = 0;
            for q in (q_min.max(2)..=q_max).filter(|&q| is_prime_power(q)) {
                for ds in admissible_tuples(construction, q) {
                    let n = construction.length(q, &ds)?;
                    let max_k = construction.oracle_max_k(q, &ds)?;
                    let max_k_claimed = construction.claimed_max_k(q, &ds)?;
                    let (certificate, error) = match build(&Request::new(construction, q, &ds, None), &budget) {
                        Ok(b) => (Some(b.certificate), None),
                        Err(e) => {
                            code = code.max(e.exit_code());
                            (None, Some(e.to_string()))
                        }
                    };
                    entries.push(SweepEntry { q, divisors: ds, n, max_k, max_k_claimed, certificate, error });
                }
            }
            emit(output, code, &entries, || {
                let mut s = String::new();
                for e in &entries {
                    s.push_str(&format!(
                        "q={:<6} m={:<16} n={:<10} k<={:<6} closed form {:<6}{}\n",
                        e.q,
                        format!("{:?}", e.divisors),
                        e.n,
                        e.max_k,
                        e.max_k_claimed,
                        match (&e.certificate, &e.error) {
                            (_, Some(err)) => format!(" error: {err}"),
                            (Some(c), None) => format!(" {:?}", c.verified_level),
                            _ => String::new(),
                        }
                    ));
                }
                s
            })
        }
        Command::Audit { tables, no_formulas, budget, output } => {
            let opts = AuditOptions {
                budget: budget_of(&budget),
                tables,
                formulas: !no_formulas,
            };
            let report = audit_tables(&opts);
            emit(output, report.exit_code(), &report, || report.to_text())
        }
        Command::Search { what } => match what {
            Search::Primes { m1, m2, limit, output } => {
                let prog = Progression::new(m1, m2)?;
                let primes = dirichlet_search(m1, m2, limit)?;
                #[derive(Serialize)]
                struct PrimesJson {
                    progression: Progression,
                    limit: u64,
                    primes: Vec<u64>,
                }
                let v = PrimesJson { progression: prog, limit, primes };
                emit(output, 0, &v, || {
                    format!(
                        "primes q <= {limit}, q = {} (mod {}): {:?}\n",
                        v.progression.start % v.progression.step,
                        v.progression.step,
                        v.primes
                    )
                })
            }
            Search::Pairs { limit, output } => {
                let pairs = pair_search(limit);
                emit(output, 0, &pairs, || {
                    pairs
                        .iter()
                        .map(|c| {
                            format!(
                                "m1={:<5} m2={:<5} m={:<5} l0={:<5} k0={:<5} primes {:?}\n",
                                c.m1, c.m2, c.m, c.l0, c.k0, c.witness_primes
                            )
                        })
                        .collect()
                })
            }
            Search::Family { k_limit, output } => {
                let fam = quadratic_family(k_limit);
                emit(output, 0, &fam, || {
                    fam.iter()
                        .map(|f| {
                            format!(
                                "k={:<4} q={:<10} n={:<14} d<={} (closed form {})\n",
                                f.k, f.q, f.length, f.d_max_oracle, f.d_max_claimed
                            )
                        })
                        .collect()
                })
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("qmds").chain(args.iter().copied()))
    }

    #[test]
    fn construct_subgroup_json() {
        let o = run_args(&["construct", "--construction", "c1", "--q", "8", "--m", "3", "--k", "4"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["certificate"]["quantum"], serde_json::json!([21, 13, 5]));
        assert_eq!(v["certificate"]["verified_level"], "FULL_MATRIX");
        assert_eq!(v["artifact"]["matrix"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn oracle_subgroup() {
        let o = run_args(&["oracle", "--construction", "c1", "--q", "17", "--m", "9"]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["max_k"], 8);
    }

    #[test]
    fn exit_codes() {
        let over = run_args(&["construct", "--construction", "subgroup", "--q", "8", "--m", "3", "--k", "5"]);
        assert_eq!(over.code, 1);
        assert!(over.stderr.contains("exceeds the admissible maximum"));
        let bad = run_args(&["construct", "--construction", "subgroup", "--q", "8"]);
        assert_eq!(bad.code, 2);
        let unknown = run_args(&["construct", "--construction", "nope", "--q", "8", "--m", "3"]);
        assert_eq!(unknown.code, 2);
        let mixed = run_args(&["oracle", "--construction", "c1", "--q", "8", "--m", "3", "--m1", "3"]);
        assert_eq!(mixed.code, 2);
        let pq = run_args(&["field", "--q", "9", "--p", "3", "--h", "1"]);
        assert_eq!(pq.code, 2);
        let not_pp = run_args(&["field", "--q", "6"]);
        assert_eq!(not_pp.code, 1);
    }

    #[test]
    fn field_by_p_and_h() {
        let a = run_args(&["field", "--p", "3", "--h", "2"]);
        let b = run_args(&["field", "--q", "9"]);
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
        assert_eq!(v["order"], 80);
        assert_eq!(v["field"]["theta"], "x");
    }

    #[test]
    fn sweep_lists_admissible_divisors() {
        let o = run_args(&["sweep", "--construction", "subgroup", "--q-min", "8", "--q-max", "8"]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        let ds: Vec<_> = v.as_array().unwrap().iter().map(|e| e["divisors"][0].as_u64().unwrap()).collect();
        assert_eq!(ds, vec![3, 9]);
    }

    #[test]
    fn search_pairs_and_primes() {
        let o = run_args(&["search", "pairs", "--limit", "200"]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        let found: Vec<(u64, u64, u64)> = v
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["m1"].as_u64().unwrap(), c["m2"].as_u64().unwrap(), c["m"].as_u64().unwrap()))
            .collect();
        assert!(found.contains(&(176, 105, 66)));
        assert!(found.contains(&(36, 175, 30)));
        let o = run_args(&["search", "primes", "--m1", "4", "--m2", "3", "--limit", "100"]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert!(v["primes"].as_array().unwrap().contains(&serde_json::json!(5)));
    }
}
