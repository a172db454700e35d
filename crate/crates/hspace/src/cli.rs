//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::fs;

use clap::{Parser, Subcommand, ValueEnum};
use hspace_core::dual::{self, DecompositionOptions};
use hspace_core::num::parse_rational;
use hspace_core::points::{self, Certificate, CertificateKind, HolderCertificate, Point, Slice};
use hspace_core::polyhedral::{self, PolyhedralityReport, Provenance, Verdict};
use hspace_core::{
    norms, Budget, DualVector, Error, Exponent, FamilyRep, FiniteSet, FsVector, MaximalScope, Scalar, Window,
};
use serde_json::{json, Map, Value};

use crate::formats::{self, FormatError};

/// Environment variable overriding the enumeration budget.
pub const MAX_SETS_VAR: &str = "HSPACE_MAX_SETS";

#[derive(Debug, Parser)]
#[command(name = "hspace", version, about = "Exact computations in sequence spaces generated by families of finite sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScopeArg {
    Window,
    Global,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Primal,
    Dual,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Builtin family: singletons, all_subsets, evens_odds, schreier:K, dyadic or dyadic:D.
    #[arg(long, conflicts_with = "family_file", required_unless_present = "family_file")]
    pub family: Option<String>,
    /// JSON family description file.
    #[arg(long)]
    pub family_file: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the family is adequate on the window.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        window: usize,
    },
    /// Norm and achieving sets of a finitely supported vector.
    Norm {
        #[command(flatten)]
        common: Common,
        /// Inline JSON or a file path.
        #[arg(long)]
        vector: String,
        #[arg(long, default_value = "1")]
        p: String,
    },
    /// Maximal members inside the window.
    MaximalSets {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        window: usize,
        #[arg(long, value_enum, default_value_t = ScopeArg::Window)]
        scope: ScopeArg,
    },
    /// Minimal norming sets of a vector.
    NormingSets {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        vector: String,
        #[arg(long, default_value = "1")]
        p: String,
    },
    /// Dual norm; at p = 1 also the optimal fractional covering.
    DualNorm {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dual: String,
        #[arg(long, default_value = "1")]
        p: String,
    },
    /// Signed indicators over maximal sets (p = 1).
    ExtPoints {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        window: usize,
        #[arg(long, value_enum, default_value_t = ScopeArg::Window)]
        scope: ScopeArg,
    },
    /// Convex combination of globally maximal signed indicators (p = 1).
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dual: String,
        /// Largest window tried.
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        verify: bool,
    },
    /// Vector exposing the positive indicator of a globally maximal set (p = 1).
    Expose {
        #[command(flatten)]
        common: Common,
        /// JSON array such as [2,3].
        #[arg(long)]
        set: String,
        #[arg(long)]
        window: usize,
    },
    /// Non-delta certificate for a unit vector (p = 1).
    Certificate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        vector: String,
        #[arg(long)]
        window: usize,
        /// Prefix length of the norming sets to use.
        #[arg(long)]
        prefix: Option<usize>,
        #[arg(long)]
        verify: bool,
    },
    /// Floating-point slice certificate for p > 1.
    HolderCertificate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        vector: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        verify: bool,
    },
    /// Supremum of distances from a point to a slice (p = 1).
    SliceSup {
        #[command(flatten)]
        common: Common,
        /// Side of the point; the functional lives on the other side.
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        vector: Option<String>,
        #[arg(long)]
        dual: Option<String>,
        #[arg(long)]
        functional: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        window: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Dual points of a weak-star slice far from the indicator of a set (p = 1).
    WitnessDelta {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
        #[arg(long)]
        functional: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        window: usize,
    },
    /// Slice certificate bounding the distance from a unit dual vector (p = 1).
    DaugavetBound {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dual: String,
        #[arg(long)]
        window: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Polyhedrality report with provenance per field.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Dual sequence violating the IV property at an index with infinite star (p = 1).
    WitnessIv {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        window: usize,
        #[arg(long)]
        probe: Option<String>,
    },
}

/// Result of one invocation: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Run<T> = Result<T, Failure>;

pub fn run<I, T>(args: I, max_sets: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
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
    let output = cli.command.common().output;
    match budget(max_sets).and_then(|b| execute(&cli.command, &b)) {
        Ok(value) => Outcome { code: 0, stdout: render(&value, output), stderr: String::new() },
        Err(Failure::Usage(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Domain(e)) => {
            let body = json!({"error": {"kind": error_kind(&e), "message": e.to_string()}});
            Outcome { code: 1, stdout: render(&body, output), stderr: String::new() }
        }
    }
}

fn render(value: &Value, output: OutputFormat) -> String {
    match output {
        OutputFormat::Json => format!("{}\n", formats::to_canonical(value)),
        OutputFormat::Text => formats::to_text(value),
    }
}

fn budget(max_sets: Option<&str>) -> Run<Budget> {
    match max_sets {
        None => Ok(Budget::default()),
        Some(text) => text
            .trim()
            .parse::<usize>()
            .map(Budget::new)
            .map_err(|_| Failure::Usage(format!("{MAX_SETS_VAR} must be a positive integer, got `{text}`"))),
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::Capability(_) => "capability",
        Error::Precondition(_) => "precondition",
        Error::Infeasible { .. } => "infeasible",
        Error::HypothesisFailed(_) => "hypothesis_failed",
        Error::Unsupported(_) => "unsupported",
        Error::Parse(_) => "parse",
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Validate { common, .. }
            | Command::Norm { common, .. }
            | Command::MaximalSets { common, .. }
            | Command::NormingSets { common, .. }
            | Command::DualNorm { common, .. }
            | Command::ExtPoints { common, .. }
            | Command::Decompose { common, .. }
            | Command::Expose { common, .. }
            | Command::Certificate { common, .. }
            | Command::HolderCertificate { common, .. }
            | Command::SliceSup { common, .. }
            | Command::WitnessDelta { common, .. }
            | Command::DaugavetBound { common, .. }
            | Command::Classify { common }
            | Command::WitnessIv { common, .. } => common,
        }
    }
}

/// Inline JSON when the argument starts with `{` or `[`, otherwise a file path.
fn json_arg(arg: &str) -> Run<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_owned()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read `{arg}`: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid JSON in `{arg}`: {e}")))
}

fn family(common: &Common) -> Run<FamilyRep> {
    match (&common.family, &common.family_file) {
        (Some(name), _) => Ok(formats::builtin_family(name)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read `{path}`: {e}")))?;
            let value: Value =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid JSON in `{path}`: {e}")))?;
            Ok(formats::family_from_json(&value)?)
        }
        (None, None) => Err(Failure::Usage("one of --family or --family-file is required".into())),
    }
}

fn primal(arg: &str) -> Run<FsVector> {
    Ok(formats::vector_from_json(&json_arg(arg)?)?)
}

fn dual_vector(arg: &str) -> Run<DualVector> {
    Ok(formats::vector_from_json(&json_arg(arg)?)?)
}

fn set_arg(arg: &str) -> Run<FiniteSet> {
    Ok(formats::set_from_json(&json_arg(arg)?)?)
}

fn exponent(arg: &str) -> Run<Exponent> {
    let p = parse_rational(arg).map_err(|e| Failure::Usage(e.to_string()))?;
    Exponent::new(p).map_err(|e| Failure::Usage(e.to_string()))
}

fn rational(arg: &str) -> Run<hspace_core::Rational> {
    parse_rational(arg).map_err(|e| Failure::Usage(e.to_string()))
}

fn window(n: usize) -> Run<Window> {
    Window::new(n).map_err(|_| Failure::Usage("--window must be at least 1".into()))
}

fn scope(s: ScopeArg) -> MaximalScope {
    match s {
        ScopeArg::Window => MaximalScope::Window,
        ScopeArg::Global => MaximalScope::Global,
    }
}

fn scalar(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(r) => formats::rational_to_json(r),
        Scalar::Approx(v) => Value::from(*v),
    }
}

fn sets(list: &[FiniteSet]) -> Value {
    Value::from(list.iter().map(formats::set_to_json).collect::<Vec<_>>())
}

fn execute(command: &Command, budget: &Budget) -> Run<Value> {
    let rep = family(command.common())?;
    let value = match command {
        Command::Validate { window: n, .. } => {
            let report = rep.validate(window(*n)?)?;
            let violations: Vec<Value> = report
                .violations
                .iter()
                .map(|v| match v {
                    hspace_core::Violation::MissingEmpty => json!({"kind": "missing_empty"}),
                    hspace_core::Violation::MissingSingleton(i) => json!({"kind": "missing_singleton", "index": i}),
                    hspace_core::Violation::NotHereditary { set, missing } => json!({
                        "kind": "not_hereditary",
                        "set": formats::set_to_json(set),
                        "missing": formats::set_to_json(missing),
                    }),
                })
                .collect();
            json!({"family": formats::family_to_json(&rep), "valid": report.is_valid(), "violations": violations, "window": n})
        }
        Command::Norm { vector, p, .. } => {
            let result = norms::norm(&primal(vector)?, &rep, &exponent(p)?, budget)?;
            json!({"value": scalar(&result.value), "achieving_sets": sets(&result.achieving_sets)})
        }
        Command::MaximalSets { window: n, scope: s, .. } => {
            let found = rep.maximal_sets(window(*n)?, scope(*s), budget)?;
            json!({"count": found.len(), "sets": sets(&found)})
        }
        Command::NormingSets { vector, p, .. } => {
            let found = norms::norming_sets(&primal(vector)?, &rep, &exponent(p)?, budget)?;
            json!({"sets": sets(&found)})
        }
        Command::DualNorm { dual: y, p, .. } => {
            let y = dual_vector(y)?;
            let p = exponent(p)?;
            if p.is_one() {
                let (value, cover) = dual::covering(&y, &rep, budget)?;
                let cover: Vec<Value> = cover
                    .iter()
                    .map(|(s, w)| json!({"set": formats::set_to_json(s), "weight": formats::rational_to_json(w)}))
                    .collect();
                json!({"value": formats::rational_to_json(&value), "covering": cover})
            } else {
                json!({"value": scalar(&dual::dual_norm_p(&y, &rep, &p, budget)?)})
            }
        }
        Command::ExtPoints { window: n, scope: s, .. } => {
            let found = dual::extreme_points(&rep, window(*n)?, scope(*s), budget)?;
            json!({"count": found.len(), "points": found.iter().map(formats::indicator_to_json).collect::<Vec<_>>()})
        }
        Command::Decompose { dual: y, window: n, verify, .. } => {
            let y = dual_vector(y)?;
            let options = DecompositionOptions { max_window: *n, ..DecompositionOptions::default() };
            let found = dual::convex_decomposition(&y, &rep, &options, budget)?;
            let mut value = formats::decomposition_to_json(&found);
            if *verify {
                let total = found.total_weight();
                insert(&mut value, "verification", json!({
                    "reconstructs": found.reconstruct() == y,
                    "total_weight": formats::rational_to_json(&total),
                }));
            }
            value
        }
        Command::Expose { set, window: n, .. } => {
            let set = set_arg(set)?;
            let g = dual::SignedIndicator::positive(set.clone());
            let x = dual::exposing_vector(&g, &rep)?;
            let w = window(*n)?;
            json!({
                "set": formats::set_to_json(&set),
                "exposing_vector": formats::vector_to_json(&x),
                "exposed": dual::verify_exposed(&g, &x, &rep, w, budget)?,
                "window": n,
            })
        }
        Command::Certificate { vector, window: n, prefix, verify, .. } => {
            let cert = points::non_delta_certificate(&primal(vector)?, &rep, window(*n)?, *prefix, budget)?;
            certificate_json(&cert, *verify, &rep, budget)?
        }
        Command::HolderCertificate { vector, p, verify, .. } => {
            let cert = points::holder_certificate(&primal(vector)?, &rep, &exponent(p)?, budget)?;
            holder_json(&cert, *verify)
        }
        Command::SliceSup { side, vector, dual: y, functional, delta, window: n, verify, .. } => {
            let width = rational(delta)?;
            let (point, slice) = match side {
                SideArg::Primal => {
                    let x = vector.as_deref().ok_or_else(|| Failure::Usage("--vector is required with --side primal".into()))?;
                    (Point::Primal(primal(x)?), Slice::primal(dual_vector(functional)?, width)?)
                }
                SideArg::Dual => {
                    let y = y.as_deref().ok_or_else(|| Failure::Usage("--dual is required with --side dual".into()))?;
                    (Point::Dual(dual_vector(y)?), Slice::dual(primal(functional)?, width)?)
                }
            };
            let w = window(*n)?;
            let sup = points::slice_sup_distance(&point, &slice, &rep, w, budget)?;
            let mut value = json!({"sup_distance": formats::rational_to_json(&sup), "window": n});
            if *verify {
                let check = points::verify_sup_distance(&point, &slice, &rep, w, budget)?;
                insert(&mut value, "verification", verification(&sup, &check));
            }
            value
        }
        Command::WitnessDelta { set, functional, delta, window: n, .. } => {
            let slice = Slice::dual(primal(functional)?, rational(delta)?)?;
            let found = points::delta_witness_sequence(&set_arg(set)?, &rep, &slice, window(*n)?, budget)?;
            let witnesses: Vec<Value> = found
                .witnesses
                .iter()
                .zip(&found.distances)
                .map(|((j, w), d)| json!({"index": j, "point": formats::vector_to_json(w), "distance": formats::rational_to_json(d)}))
                .collect();
            json!({
                "x_star": formats::vector_to_json(&found.x_star),
                "witnesses": witnesses,
                "qualifying_fraction": formats::rational_to_json(&found.qualifying_fraction),
            })
        }
        Command::DaugavetBound { dual: y, window: n, verify, .. } => {
            let cert = points::daugavet_exclusion(&dual_vector(y)?, &rep, window(*n)?, budget)?;
            certificate_json(&cert, *verify, &rep, budget)?
        }
        Command::Classify { .. } => report_json(&polyhedral::classify(&rep)),
        Command::WitnessIv { index, window: n, probe, .. } => {
            let probe = probe.as_deref().map(primal).transpose()?;
            let found = polyhedral::iv_violation_witness(&rep, *index, window(*n)?, probe.as_ref(), budget)?;
            json!({
                "index": found.index,
                "limit_set": formats::set_to_json(&found.limit_set),
                "x_star": formats::vector_to_json(&found.x_star),
                "x": formats::vector_to_json(&found.x),
                "sets": found.sets.iter().map(|(s, w)| json!({"set": formats::set_to_json(s), "window": w.n()})).collect::<Vec<_>>(),
                "sequence": found.sequence.iter().map(formats::vector_to_json).collect::<Vec<_>>(),
                "probe": formats::vector_to_json(&found.probe),
                "pairing_gaps": found.pairing_gaps.iter().map(formats::rational_to_json).collect::<Vec<_>>(),
                "valid": found.is_valid(&rep),
            })
        }
    };
    Ok(value)
}

fn insert(value: &mut Value, key: &str, item: Value) {
    if let Value::Object(map) = value {
        map.insert(key.to_owned(), item);
    }
}

fn verification(constructed: &hspace_core::Rational, checked: &hspace_core::Rational) -> Value {
    json!({"sup_distance": formats::rational_to_json(checked), "matches": constructed == checked})
}

fn slice_json(slice: &Slice) -> Value {
    match slice {
        Slice::Primal { functional, width } => {
            json!({"side": "primal", "functional": formats::vector_to_json(functional), "width": formats::rational_to_json(width)})
        }
        Slice::Dual { functional, width } => {
            json!({"side": "dual", "functional": formats::vector_to_json(functional), "width": formats::rational_to_json(width)})
        }
    }
}

fn point_json(point: &Point) -> Value {
    match point {
        Point::Primal(x) => json!({"side": "primal", "vector": formats::vector_to_json(x)}),
        Point::Dual(y) => json!({"side": "dual", "vector": formats::vector_to_json(y)}),
    }
}

fn certificate_json(cert: &Certificate, verify: bool, rep: &FamilyRep, budget: &Budget) -> Run<Value> {
    let kind = match cert.kind {
        CertificateKind::NonDelta => "non_delta",
        CertificateKind::DaugavetExclusion => "daugavet_exclusion",
    };
    let mut value = json!({
        "kind": kind,
        "slice": slice_json(&cert.slice),
        "point": point_json(&cert.point),
        "window": cert.window.n(),
        "sup_distance": formats::rational_to_json(&cert.sup_distance),
        "bound_claimed": formats::rational_to_json(&cert.bound_claimed),
    });
    if let Some((n, s)) = cert.prefix {
        insert(&mut value, "prefix", json!({"n": n, "s": s}));
    }
    if let Some((weight, g)) = &cert.heaviest {
        let mut term = formats::indicator_to_json(g);
        insert(&mut term, "weight", formats::rational_to_json(weight));
        insert(&mut value, "heaviest", term);
    }
    if verify {
        let checked = cert.verify(rep, budget)?;
        insert(&mut value, "verification", verification(&cert.sup_distance, &checked));
    }
    Ok(value)
}

fn holder_json(cert: &HolderCertificate, verify: bool) -> Value {
    let terms: Vec<Value> = cert
        .terms
        .iter()
        .map(|t| {
            json!({
                "norming_set": formats::set_to_json(&t.norming_set),
                "first": t.first,
                "threshold": t.threshold,
                "delta": t.delta,
            })
        })
        .collect();
    let mut value = json!({
        "point": formats::vector_to_json(&cert.point),
        "exponent": cert.exponent,
        "functional": formats::float_map_to_json(&cert.functional),
        "width": cert.width,
        "terms": terms,
    });
    if verify {
        insert(&mut value, "verification", json!({"margins": cert.margins(), "holds": cert.verify()}));
    }
    value
}

fn verdict_value(v: &Verdict) -> Value {
    v.value.map_or(Value::Null, Value::from)
}

fn report_json(report: &PolyhedralityReport) -> Value {
    let fields = [
        ("finite_sets_only", &report.finite_sets_only),
        ("polyhedral", &report.polyhedral),
        ("V", &report.v),
        ("IV", &report.iv),
        ("I", &report.i),
        ("shrinking_basis", &report.shrinking_basis),
    ];
    let mut value = Map::new();
    let mut provenance = Map::new();
    for (key, verdict) in fields {
        value.insert(key.into(), verdict_value(verdict));
        let tag = match verdict.provenance {
            Provenance::ByComputation => "by_computation",
            Provenance::ByTheorem => "by_theorem",
        };
        provenance.insert(key.into(), tag.into());
    }
    value.insert("provenance".into(), Value::Object(provenance));
    if let Some(set) = &report.c0_hint {
        value.insert("c0_hint".into(), formats::set_to_json(set));
    }
    Value::Object(value)
}
