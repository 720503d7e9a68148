//! Command-line surface.  Every invocation emits exactly one newline-
//! terminated result document on stdout (JSON unless a text format is
//! selected) and exits 0 for verified/degenerate/success, 1 for a refuted
//! relation, 2 for usage or precondition errors (diagnostic on stderr).

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lacunary::document::{format_rational, from_json, to_json, RelationDocument, SourceTriple};
use lacunary::lattice::{compare, UpperHalfPoint};
use lacunary::relations::{
    bernoulli_identity, evaluate_relation, hurwitz_residual, lacunarity_search,
    recurrence_6n2_residual, recurrence_6n4_residual, recurrence_6n_residual, relation_vector,
    render_latex, render_text, RelationSpec, RelationVector,
};
use lacunary::{default_precision, Error};

#[derive(Parser)]
#[command(
    name = "lacunary",
    version,
    about = "Exact verification and discovery of lacunary Eisenstein recurrences"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a relation's residual against the exact q-expansions
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Generate and print relation vectors
    Relation {
        #[command(subcommand)]
        what: RelationCommand,
    },
    /// Enumerate verified relations of one weight, sparsest first
    Search {
        /// Even target weight, at least 8
        #[arg(long)]
        weight: u64,
        #[arg(long, default_value_t = 10)]
        max_results: usize,
        #[arg(long, value_enum, default_value_t = TextOrJson::Json)]
        format: TextOrJson,
    },
    /// Print the Bernoulli number B_k in lowest terms
    Bernoulli {
        #[arg(long)]
        k: u64,
    },
    /// Constant-term identity of a generated relation, as zeta ratios and
    /// Bernoulli numbers
    BernoulliIdentity {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
    },
    /// Compare the truncated lattice sum against the q-expansion value
    Eval {
        /// Even weight, at least 4
        #[arg(long)]
        k: u64,
        /// Point of the upper half-plane as "re,im"
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// One of the named recurrence families
    Builtin {
        #[arg(long, value_enum)]
        name: BuiltinName,
        #[arg(long)]
        n: u64,
        /// q-expansion terms (default: max(weight, 20))
        #[arg(long)]
        precision: Option<usize>,
        #[arg(long, value_enum, default_value_t = TextOrJson::Json)]
        format: TextOrJson,
    },
    /// The relation generated by a parameter triple (r, s, t)
    Triple {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        precision: Option<usize>,
    },
    /// A relation vector read from a JSON document
    Vector {
        #[arg(long)]
        file: String,
        #[arg(long)]
        precision: Option<usize>,
    },
}

#[derive(Subcommand)]
enum RelationCommand {
    /// Print the vector generated by a triple
    Print {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum)]
        format: PrintFormat,
        /// Clear denominators and divide out the common factor first
        #[arg(long)]
        normalize_integer: bool,
    },
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long)]
    r: u64,
    #[arg(long)]
    s: u64,
    #[arg(long)]
    t: u64,
}

impl SpecArgs {
    fn spec(&self) -> Result<RelationSpec, Error> {
        RelationSpec::new(self.r, self.s, self.t)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BuiltinName {
    /// (n-3)(2n-1)(2n+1) G_2n = 3 sum (2p-1)(2q-1) G_2p G_2q, n >= 4
    Hurwitz,
    /// weight 6n+2 sparse recurrence, n >= 1
    G6n2,
    /// weight 6n sparse recurrence, n >= 2
    G6n,
    /// weight 6n+4 sparse recurrence, n >= 1
    G6n4,
}

impl BuiltinName {
    fn label(self) -> &'static str {
        match self {
            BuiltinName::Hurwitz => "hurwitz",
            BuiltinName::G6n2 => "g6n2",
            BuiltinName::G6n => "g6n",
            BuiltinName::G6n4 => "g6n4",
        }
    }

    fn weight(self, n: u64) -> u64 {
        match self {
            BuiltinName::Hurwitz => 2 * n,
            BuiltinName::G6n2 => 6 * n + 2,
            BuiltinName::G6n => 6 * n,
            BuiltinName::G6n4 => 6 * n + 4,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum TextOrJson {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrintFormat {
    Json,
    Latex,
    Text,
}

#[derive(Serialize)]
struct BuiltinOut {
    status: &'static str,
    name: &'static str,
    n: u64,
    weight: u64,
    precision: usize,
}

#[derive(Serialize)]
struct TripleOut {
    status: &'static str,
    r: u64,
    s: u64,
    t: u64,
    weight: u64,
    precision: usize,
    degenerate: bool,
    vector: RelationDocument,
}

#[derive(Serialize)]
struct VectorOut {
    status: &'static str,
    weight: u64,
    precision: usize,
    degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<SourceTriple>,
}

#[derive(Serialize)]
struct SearchOut {
    status: &'static str,
    weight: u64,
    count: usize,
    results: Vec<SearchEntry>,
}

#[derive(Serialize)]
struct SearchEntry {
    r: u64,
    s: u64,
    t: u64,
    sparsity: usize,
    identity: String,
    vector: RelationDocument,
}

#[derive(Serialize)]
struct IdentityOut {
    status: &'static str,
    weight: u64,
    residuals: BTreeMap<usize, String>,
    zeta_form: String,
    bernoulli_form: String,
    identity: String,
}

#[derive(Serialize)]
struct EvalOut {
    status: &'static str,
    k: u64,
    tau: TauOut,
    tolerance: f64,
    difference: f64,
    lattice_cutoff: u64,
    series_terms: usize,
    lattice_bound: f64,
    series_bound: f64,
}

#[derive(Serialize)]
struct TauOut {
    re: f64,
    im: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Residual-based status for a vector whose residual zeroness is `zero`.
fn vector_status(vec: &RelationVector, zero: bool) -> (&'static str, ExitCode) {
    if !zero {
        ("refuted", ExitCode::from(1))
    } else if vec.is_empty() {
        ("degenerate", ExitCode::SUCCESS)
    } else {
        ("verified", ExitCode::SUCCESS)
    }
}

fn emit<T: Serialize>(doc: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string(doc)?);
    Ok(())
}

fn run(cmd: Command) -> anyhow::Result<ExitCode> {
    match cmd {
        Command::Verify { what } => run_verify(what),
        Command::Relation {
            what:
                RelationCommand::Print {
                    spec,
                    format,
                    normalize_integer,
                },
        } => {
            let mut v = relation_vector(spec.spec()?);
            if normalize_integer {
                v = v.reduced();
            }
            match format {
                PrintFormat::Json => println!("{}", to_json(&v)),
                PrintFormat::Latex => println!("{}", render_latex(&v)),
                PrintFormat::Text => println!("{}", render_text(&v)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Search {
            weight,
            max_results,
            format,
        } => {
            let hits = lacunarity_search(weight, max_results)?;
            if format == TextOrJson::Text {
                let lines = hits
                    .iter()
                    .map(|h| {
                        format!(
                            "({}, {}, {}) sparsity={}: {}",
                            h.spec.r(),
                            h.spec.s(),
                            h.spec.t(),
                            h.sparsity,
                            render_text(&h.vector)
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("; ");
                println!("search weight={weight} hits={}: {lines}", hits.len());
            } else {
                let out = SearchOut {
                    status: "verified",
                    weight,
                    count: hits.len(),
                    results: hits
                        .iter()
                        .map(|h| SearchEntry {
                            r: h.spec.r(),
                            s: h.spec.s(),
                            t: h.spec.t(),
                            sparsity: h.sparsity,
                            identity: render_latex(&h.vector),
                            vector: RelationDocument::from_vector(&h.vector),
                        })
                        .collect(),
                };
                emit(&out)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bernoulli { k } => {
            let b = lacunary::exact::bernoulli(k)?;
            println!("{}", format_rational(&b));
            Ok(ExitCode::SUCCESS)
        }
        Command::BernoulliIdentity { r, s, t } => {
            let spec = RelationSpec::new(r, s, t)?;
            let v = relation_vector(spec).reduced();
            let id = bernoulli_identity(&v);
            let ok = id.is_consistent();
            let out = IdentityOut {
                status: if ok { "verified" } else { "refuted" },
                weight: id.weight(),
                residuals: id
                    .residuals()
                    .iter()
                    .map(|(&g, r)| (g, format_rational(r)))
                    .collect(),
                zeta_form: id.zeta_form().to_string(),
                bernoulli_form: id.bernoulli_form().to_string(),
                identity: render_latex(&v),
            };
            emit(&out)?;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Eval { k, tau, tol } => {
            let tau = parse_tau(&tau)?;
            let report = compare(k, tau, tol)?;
            let out = EvalOut {
                status: if report.pass { "verified" } else { "refuted" },
                k,
                tau: TauOut {
                    re: tau.re(),
                    im: tau.im(),
                },
                tolerance: tol,
                difference: report.difference,
                lattice_cutoff: report.lattice_cutoff,
                series_terms: report.series_terms,
                lattice_bound: report.lattice_bound,
                series_bound: report.series_bound,
            };
            emit(&out)?;
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn run_verify(what: VerifyCommand) -> anyhow::Result<ExitCode> {
    match what {
        VerifyCommand::Builtin {
            name,
            n,
            precision,
            format,
        } => {
            let weight = name.weight(n);
            let prec = precision.unwrap_or_else(|| default_precision(weight));
            let residual = match name {
                BuiltinName::Hurwitz => hurwitz_residual(n, prec)?,
                BuiltinName::G6n2 => recurrence_6n2_residual(n, prec)?,
                BuiltinName::G6n => recurrence_6n_residual(n, prec)?,
                BuiltinName::G6n4 => recurrence_6n4_residual(n, prec)?,
            };
            let ok = residual.is_zero();
            let status = if ok { "verified" } else { "refuted" };
            if format == TextOrJson::Text {
                println!(
                    "{status}: {} n={n} weight={weight} (N={prec})",
                    name.label()
                );
            } else {
                emit(&BuiltinOut {
                    status,
                    name: name.label(),
                    n,
                    weight,
                    precision: prec,
                })?;
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        VerifyCommand::Triple { spec, precision } => {
            let spec = spec.spec()?;
            let prec = precision.unwrap_or_else(|| default_precision(spec.weight()));
            let v = relation_vector(spec);
            let zero = evaluate_relation(&v, prec).is_zero();
            let (status, code) = vector_status(&v, zero);
            emit(&TripleOut {
                status,
                r: spec.r(),
                s: spec.s(),
                t: spec.t(),
                weight: spec.weight(),
                precision: prec,
                degenerate: v.is_degenerate(),
                vector: RelationDocument::from_vector(&v),
            })?;
            Ok(code)
        }
        VerifyCommand::Vector { file, precision } => {
            let raw = std::fs::read_to_string(&file)
                .map_err(|e| anyhow::anyhow!("cannot read {file}: {e}"))?;
            let v = from_json(raw.trim())?;
            let prec = precision.unwrap_or_else(|| default_precision(v.weight()));
            let zero = evaluate_relation(&v, prec).is_zero();
            let (status, code) = vector_status(&v, zero);
            emit(&VectorOut {
                status,
                weight: v.weight(),
                precision: prec,
                degenerate: v.is_degenerate(),
                source: v.source().map(|(r, s, t)| SourceTriple { r, s, t }),
            })?;
            Ok(code)
        }
    }
}

fn parse_tau(s: &str) -> Result<UpperHalfPoint, Error> {
    let bad = || Error::BadDocument(format!("tau must be \"re,im\", got {s:?}"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    UpperHalfPoint::new(re, im)
}
