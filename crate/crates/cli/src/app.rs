//! Subcommands. [`execute`] returns the text to print and the exit status,
//! so the binary is a thin wrapper and the commands are testable in-process.

use crate::json::{self, render, AlgebraJson, FormatError, JsonCell};
use associahedra::ainfinity::{check_stasheff, tensor_product, Q};
use associahedra::chain::{compose_k_cells, compose_w_cells, k_cells, w_cells, Chain, TensorChain, TripleChain};
use associahedra::coassoc::{arity4_facts, search_arity4, solve_arity3, Branch};
use associahedra::diagonal::Diagonal;
use associahedra::linalg::Fp;
use associahedra::transfer::Transfer;
use associahedra::tree::{MetricTree, PlanarTree, TreeError};
use associahedra::verify::{self, Report, SUITES};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "associahedra", version, about = "Cellular chains on associahedra, the Saneblidze-Umble diagonal and A∞ tensor products")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComplexArg {
    #[value(name = "K")]
    K,
    #[value(name = "W")]
    W,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Composite,
    Direct,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the cells of K_n or W_n, optionally of one dimension.
    Cells {
        #[arg(long, value_enum)]
        complex: ComplexArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Boundary of one canonically oriented cell.
    Boundary {
        #[arg(long, value_enum)]
        complex: ComplexArg,
        /// Tree literal; W-cells mark non-metric edges with `!`.
        #[arg(long)]
        cell: String,
    },
    /// Operadic composition `left ∘_i right` of two cells.
    Compose {
        #[arg(long, value_enum)]
        complex: ComplexArg,
        #[arg(long)]
        left: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        right: String,
    },
    /// q(c(n), 1) in C_*(W_n).
    Q {
        #[arg(long)]
        n: usize,
    },
    /// p of one cell of W_n.
    P {
        #[arg(long)]
        cell: String,
    },
    /// The Saneblidze-Umble diagonal of the corolla c(n).
    Diagonal {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Composite)]
        method: Method,
    },
    /// Co-commutativity defect Δ(c(n)) - flip Δ(c(n)), or with `--triple`
    /// the co-associativity defect (Δ⊗1 - 1⊗Δ)Δ(c(n)).
    Defect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        triple: bool,
    },
    /// Run invariant suites.
    Verify {
        /// A suite name or `all`.
        #[arg(long)]
        suite: String,
        /// Upper arity bound replacing each suite's default.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Solve arity 3 and certify that no co-associative diagonal extends to arity 4.
    CoassocSearch,
    /// Tensor product of two A∞-algebras given as JSON files.
    Tensor {
        #[arg(long)]
        a: std::path::PathBuf,
        #[arg(long)]
        b: std::path::PathBuf,
        #[arg(long)]
        max_arity: usize,
        /// Also check the Stasheff identities of the product.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Other(String),
}

/// What a command prints and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, code: EXIT_OK }
    }
}

/// Runs a parsed command; usage errors carry exit status 2.
pub fn execute(cli: &Cli) -> Result<Outcome, UsageError> {
    let f = cli.format;
    match &cli.command {
        Command::Cells { complex, n, dim } => cells(f, *complex, *n, *dim),
        Command::Boundary { complex, cell } => match complex {
            ComplexArg::K => Ok(Outcome::ok(chain_out(f, &Chain::basis(PlanarTree::parse(cell)?).boundary()))),
            ComplexArg::W => Ok(Outcome::ok(chain_out(f, &Chain::basis(MetricTree::parse(cell)?).boundary()))),
        },
        Command::Compose { complex, left, i, right } => match complex {
            ComplexArg::K => {
                let (c, s) = compose_k_cells(&PlanarTree::parse(left)?, *i, &PlanarTree::parse(right)?)?;
                Ok(Outcome::ok(chain_out(f, &Chain::term(c, s as i64))))
            }
            ComplexArg::W => {
                let (c, s) = compose_w_cells(&MetricTree::parse(left)?, *i, &MetricTree::parse(right)?)?;
                Ok(Outcome::ok(chain_out(f, &Chain::term(c, s as i64))))
            }
        },
        Command::Q { n } => {
            need_arity(*n)?;
            Ok(Outcome::ok(chain_out(f, &Transfer::new().q_corolla(*n))))
        }
        Command::P { cell } => {
            let t = MetricTree::parse(cell)?;
            Ok(Outcome::ok(chain_out(f, &Transfer::new().p_cell(&t))))
        }
        Command::Diagonal { n, method } => {
            need_arity(*n)?;
            let mut d = Diagonal::new();
            let x = match method {
                Method::Composite => d.su_cell(&PlanarTree::corolla(*n)),
                Method::Direct => d.su_direct(*n).map_err(|e| UsageError::Other(e.to_string()))?,
            };
            Ok(Outcome::ok(tensor_out(f, &x)))
        }
        Command::Defect { n, triple } => {
            need_arity(*n)?;
            let mut d = Diagonal::new();
            let out = if *triple {
                triple_out(f, &d.coassoc_defect(*n).map_err(|e| UsageError::Other(e.to_string()))?)
            } else {
                tensor_out(f, &d.cocomm_defect(*n).map_err(|e| UsageError::Other(e.to_string()))?)
            };
            Ok(Outcome::ok(out))
        }
        Command::Verify { suite, max_n } => verify_cmd(f, suite, *max_n),
        Command::CoassocSearch => coassoc_search(f),
        Command::Tensor { a, b, max_arity, check } => tensor(f, a, b, *max_arity, *check),
    }
}

fn need_arity(n: usize) -> Result<(), UsageError> {
    if n < 2 {
        return Err(UsageError::Other(format!("arity must be at least 2, got {n}")));
    }
    Ok(())
}

fn chain_out<C: JsonCell>(f: Format, x: &Chain<C>) -> String {
    match f {
        Format::Text => format!("{x}\n"),
        Format::Json => render(&json::chain_to_json(x)),
    }
}

fn tensor_out<C: JsonCell>(f: Format, x: &TensorChain<C>) -> String {
    match f {
        Format::Text => format!("{x}\n"),
        Format::Json => render(&json::tensor_to_json(x)),
    }
}

fn triple_out<C: JsonCell>(f: Format, x: &TripleChain<C>) -> String {
    match f {
        Format::Text => format!("{x}\n"),
        Format::Json => render(&json::triple_to_json(x)),
    }
}

#[derive(Serialize)]
struct CellsJson {
    complex: &'static str,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    count: usize,
    cells: Vec<json::CellJson>,
}

fn cells(f: Format, complex: ComplexArg, n: usize, dim: Option<usize>) -> Result<Outcome, UsageError> {
    need_arity(n)?;
    if let Some(d) = dim {
        if d > n - 2 {
            return Err(UsageError::Other(format!("dimension {d} exceeds {} for n = {n}", n - 2)));
        }
    }
    let keep = |d: usize| dim.map_or(true, |want| want == d);
    let (name, literals, mut list): (&'static str, Vec<String>, Vec<json::CellJson>) = match complex {
        ComplexArg::K => {
            let v: Vec<PlanarTree> = k_cells(n).into_iter().filter(|c| keep(c.dim())).collect();
            ("K", v.iter().map(|c| c.literal()).collect(), v.iter().map(JsonCell::to_json).collect())
        }
        ComplexArg::W => {
            let v: Vec<MetricTree> = w_cells(n).into_iter().filter(|c| keep(c.dim())).collect();
            ("W", v.iter().map(|c| c.literal()).collect(), v.iter().map(JsonCell::to_json).collect())
        }
    };
    let out = match f {
        Format::Text => {
            let mut s = String::new();
            for l in &literals {
                s.push_str(l);
                s.push('\n');
            }
            s
        }
        Format::Json => {
            list.sort();
            render(&CellsJson { complex: name, n, dim, count: list.len(), cells: list })
        }
    };
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    ok: bool,
    detail: &'a str,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    suite: &'a str,
    passed: bool,
    checks: Vec<CheckJson<'a>>,
    notes: &'a [String],
}

fn report_json(r: &Report) -> ReportJson<'_> {
    ReportJson {
        suite: r.suite,
        passed: r.passed(),
        checks: r.checks.iter().map(|c| CheckJson { name: &c.name, ok: c.ok, detail: &c.detail }).collect(),
        notes: &r.notes,
    }
}

/// One line per check, then the notes, then a suite verdict.
pub fn report_text(r: &Report) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let _ = writeln!(s, "{} {}: {} ({})", if c.ok { "PASS" } else { "FAIL" }, r.suite, c.name, c.detail);
    }
    for n in &r.notes {
        let _ = writeln!(s, "note {}: {n}", r.suite);
    }
    s
}

fn verify_cmd(f: Format, suite: &str, max_n: Option<usize>) -> Result<Outcome, UsageError> {
    if max_n.is_some_and(|n| n < 2) {
        return Err(UsageError::Other(String::from("--max-n must be at least 2")));
    }
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut reports = Vec::new();
    for name in names {
        let r = verify::run(name, max_n)
            .map_err(|e| UsageError::Other(format!("{e}; known suites: all, {}", SUITES.join(", "))))?;
        reports.push(r);
    }
    let passed = reports.iter().all(Report::passed);
    let stdout = match f {
        Format::Text => {
            let mut s: String = reports.iter().map(report_text).collect();
            let _ = writeln!(s, "{}", if passed { "all checks passed" } else { "some checks FAILED" });
            s
        }
        Format::Json => render(&reports.iter().map(report_json).collect::<Vec<_>>()),
    };
    Ok(Outcome { stdout, code: if passed { EXIT_OK } else { EXIT_FAILED } })
}

#[derive(Serialize)]
struct SearchJson {
    arity3_solutions: Vec<Vec<String>>,
    certificates: Vec<json::CertificateJson>,
    infeasible: bool,
    characteristic_two: Vec<String>,
}

fn coassoc_search(f: Format) -> Result<Outcome, UsageError> {
    let solver = |e: associahedra::linalg::SolveError| UsageError::Other(e.to_string());
    let sols: Vec<Vec<String>> =
        solve_arity3().map_err(solver)?.iter().map(|s| s.iter().map(json::rational_to_string).collect()).collect();
    let mut certs = Vec::new();
    let mut infeasible = sols.len() == 2;
    let mut text = format!("arity 3: (a, b, c, d) ∈ {sols:?}\n");
    let mut char2 = Vec::new();
    for branch in Branch::ALL {
        let (cert, verdict) = search_arity4::<Q>(branch).map_err(solver)?;
        let replayed = cert.check().is_ok_and(|v| v.infeasible());
        infeasible &= verdict.infeasible() && replayed;
        let facts = arity4_facts(branch).map_err(solver)?;
        let _ = writeln!(
            text,
            "\n{}\nverdict: {}; replay: {}; ansatz dimension {}, cycle rank {}",
            cert.render(),
            if verdict.infeasible() { "infeasible" } else { "feasible" },
            if replayed { "confirmed" } else { "FAILED" },
            facts.ansatz_dim,
            facts.cycle_rank
        );
        let (_, v2) = search_arity4::<Fp<2>>(branch).map_err(solver)?;
        let line = format!(
            "{} over Z/2: {}",
            branch.name(),
            if v2.infeasible() { String::from("infeasible") } else { format!("{} solution families", v2.solutions.len()) }
        );
        let _ = writeln!(text, "{line}");
        char2.push(line);
        certs.push(json::certificate_to_json(&cert));
    }
    let stdout = match f {
        Format::Text => {
            let _ = writeln!(text, "\nno co-associative diagonal in arity 4: {}", if infeasible { "certified" } else { "NOT certified" });
            text
        }
        Format::Json => render(&SearchJson { arity3_solutions: sols, certificates: certs, infeasible, characteristic_two: char2 }),
    };
    Ok(Outcome { stdout, code: if infeasible { EXIT_OK } else { EXIT_FAILED } })
}

fn read_algebra(path: &std::path::Path) -> Result<associahedra::ainfinity::AInfAlgebra, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError::Other(format!("{}: {e}", path.display())))?;
    let j: AlgebraJson = serde_json::from_str(&text).map_err(FormatError::from)?;
    Ok(json::algebra_from_json(&j)?)
}

/// Text form of an algebra: one line per nonzero entry.
pub fn algebra_text(a: &associahedra::ainfinity::AInfAlgebra) -> String {
    let mut s = String::new();
    let basis: Vec<String> = a.names().iter().zip(a.degrees()).map(|(n, d)| format!("{n}:{d}")).collect();
    let _ = writeln!(s, "basis {}", basis.join(" "));
    for k in 1..=a.cap() {
        for (i, o, c) in a.op(k).expect("k within cap").entries() {
            let ins: Vec<&str> = i.iter().map(|&x| a.names()[x].as_str()).collect();
            let _ = writeln!(s, "m{k}({}) ∋ {c} {}", ins.join(", "), a.names()[o]);
        }
    }
    s
}

#[derive(Serialize)]
struct TensorJson {
    product: AlgebraJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    stasheff: Option<StasheffJson>,
}

#[derive(Serialize)]
struct StasheffJson {
    max_arity: usize,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
}

fn tensor(f: Format, a: &std::path::Path, b: &std::path::Path, max_arity: usize, check: bool) -> Result<Outcome, UsageError> {
    let (a, b) = (read_algebra(a)?, read_algebra(b)?);
    if max_arity == 0 {
        return Err(UsageError::Other(String::from("--max-arity must be positive")));
    }
    let p = tensor_product(&a, &b, max_arity).map_err(|e| UsageError::Other(e.to_string()))?;
    let stasheff = if check {
        let r = check_stasheff(&p, max_arity).map_err(|e| UsageError::Other(e.to_string()))?;
        let failure = r.failure.as_ref().map(|x| {
            format!("m{} on {:?} -> {}: expected {}, got {}", x.arity, x.inputs, x.output, x.expected, x.actual)
        });
        Some(StasheffJson { max_arity, passed: r.passed(), failure })
    } else {
        None
    };
    let code = if stasheff.as_ref().is_some_and(|s| !s.passed) { EXIT_FAILED } else { EXIT_OK };
    let stdout = match f {
        Format::Text => {
            let mut s = algebra_text(&p);
            if let Some(st) = &stasheff {
                match &st.failure {
                    None => {
                        let _ = writeln!(s, "Stasheff identities hold through arity {}", st.max_arity);
                    }
                    Some(why) => {
                        let _ = writeln!(s, "Stasheff identities FAIL: {why}");
                    }
                }
            }
            s
        }
        Format::Json => render(&TensorJson { product: json::algebra_to_json(&p), stasheff }),
    };
    Ok(Outcome { stdout, code })
}
