//! Front end for `hnquiver`: problem-file parsing and the subcommands.
//!
//! Every subcommand renders into an [`Outcome`] instead of printing, so the
//! binary and the tests share one code path.

pub mod problem;
mod render;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use hnquiver_core::counting::{
    is_coprime, moduli_count_poly, rep_count_poly, torsor_orbit_count, SemistableCounter,
};
use hnquiver_core::ffield::{prime_powers_up_to, ABSOLUTE_MAX_Q};
use hnquiver_core::rep::{enumerate_reps, SubspaceCatalog};
use hnquiver_core::strata::{classify_representations, closure_consistency};
use hnquiver_core::{
    purity, Analyzer, CountSamples, Error, FieldTable, PrimePower,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

pub use problem::{parse_problem, parse_rep_literal, ParseError, ProblemFile};
use render::{dims_json, poly_json, report_json, type_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_NOT_COPRIME: i32 = 4;
pub const EXIT_THEOREM: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "hnquiver", version, about = "Exact point counts for quiver moduli over finite fields")]
pub struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for exhaustive phases (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Size of the representation space, optionally checked by enumeration.
    CountReps {
        problem: PathBuf,
        #[arg(long, value_name = "Q")]
        brute: Option<u64>,
    },
    /// HN filtration and type of one representation.
    Hn {
        problem: PathBuf,
        #[arg(long, value_name = "FILE")]
        rep: PathBuf,
        #[arg(long)]
        q: u64,
    },
    /// Exhaustive HN stratification over F_q, checked against the stratum formulas.
    Stratify {
        problem: PathBuf,
        #[arg(long)]
        q: u64,
    },
    /// Point count of the moduli space of stables as a polynomial in q.
    ModuliPoly { problem: PathBuf },
    /// Every cross-check for every prime power up to Q.
    Verify {
        problem: PathBuf,
        #[arg(long, value_name = "Q")]
        qmax: u64,
    },
    /// Fit point counts over extensions by polynomials in q^n.
    PurityFit {
        #[arg(long, value_name = "FILE")]
        samples: PathBuf,
        #[arg(long, value_name = "N", default_value_t = 1)]
        period: u32,
        #[arg(long, value_name = "D")]
        degree: usize,
    },
}

impl Command {
    pub fn problem_path(&self) -> Option<&Path> {
        match self {
            Command::CountReps { problem, .. }
            | Command::Hn { problem, .. }
            | Command::Stratify { problem, .. }
            | Command::ModuliPoly { problem }
            | Command::Verify { problem, .. } => Some(problem),
            Command::PurityFit { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Flags {
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::NotCoprime { .. } => EXIT_NOT_COPRIME,
        Error::TheoremViolation(_) => EXIT_THEOREM,
        _ => EXIT_PARSE,
    }
}

/// Text and JSON renderings of one run, plus any failed checks.
struct Report {
    text: String,
    json: Value,
    failures: Vec<String>,
}

enum Failure {
    Core(Error),
    Io(String),
    Parse(ParseError),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn field(q: u64) -> Result<FieldTable, Error> {
    FieldTable::with_limit(PrimePower::new(q)?, ABSOLUTE_MAX_Q)
}

/// Reads the problem file (if the subcommand takes one) and runs it.
pub fn run(cli: &Cli) -> Outcome {
    let flags = Flags { json: cli.json };
    let problem = match cli.command.problem_path() {
        Some(path) => match read(path).and_then(|t| Ok(parse_problem(&t)?)) {
            Ok(p) => Some(p),
            Err(f) => return failure_outcome(f, Some(path)),
        },
        None => None,
    };
    run_command(&cli.command, problem.as_ref(), &flags)
}

fn failure_outcome(f: Failure, path: Option<&Path>) -> Outcome {
    match f {
        Failure::Core(e) => Outcome::error(exit_code(&e), e),
        Failure::Io(msg) => Outcome::error(EXIT_IO, msg),
        Failure::Parse(e) => match path {
            Some(p) => Outcome::error(EXIT_PARSE, format!("{}: {e}", p.display())),
            None => Outcome::error(EXIT_PARSE, e),
        },
    }
}

pub fn run_command(cmd: &Command, problem: Option<&ProblemFile>, flags: &Flags) -> Outcome {
    let result = match (cmd, problem) {
        (Command::PurityFit { samples, period, degree }, _) => purity_fit(samples, *period, *degree),
        (_, None) => return Outcome::error(EXIT_PARSE, "this subcommand needs a problem file"),
        (Command::CountReps { brute, .. }, Some(p)) => count_reps(p, *brute),
        (Command::Hn { rep, q, .. }, Some(p)) => hn(p, rep, *q),
        (Command::Stratify { q, .. }, Some(p)) => stratify(p, *q),
        (Command::ModuliPoly { .. }, Some(p)) => moduli(p),
        (Command::Verify { qmax, .. }, Some(p)) => verify(p, *qmax),
    };
    match result {
        Ok(report) => {
            let stdout = if flags.json {
                let mut s = serde_json::to_string_pretty(&report.json).expect("json values serialize");
                s.push('\n');
                s
            } else {
                report.text
            };
            let (code, stderr) = if report.failures.is_empty() {
                (EXIT_OK, String::new())
            } else {
                let msg: String = report.failures.iter().map(|f| format!("check failed: {f}\n")).collect();
                (EXIT_THEOREM, msg)
            };
            Outcome { code, stdout, stderr }
        }
        Err(f) => failure_outcome(f, None),
    }
}

fn count_reps(p: &ProblemFile, brute: Option<u64>) -> Result<Report, Failure> {
    p.quiver.check_dims(&p.dims)?;
    let dim = p.quiver.rep_space_dim(&p.dims);
    let poly = rep_count_poly(&p.quiver, &p.dims);
    let mut text = format!("rep-space-dim {dim}\ncount {poly}\n");
    let mut json = json!({
        "command": "count-reps",
        "dims": dims_json(&p.dims),
        "rep_space_dim": dim,
        "count": poly_json(&poly),
    });
    let mut failures = Vec::new();
    if let Some(q) = brute {
        let f = field(q)?;
        let counted = enumerate_reps(&p.quiver, &p.dims, &f, &p.budgets)?.iter().count() as u64;
        let expected = poly.eval_integer(q as i64)?;
        let ok = BigInt::from(counted) == expected;
        if !ok {
            failures.push(format!("enumerated {counted} points over F_{q}, expected {expected}"));
        }
        writeln!(text, "brute F_{q} {counted} {}", if ok { "ok" } else { "FAIL" }).unwrap();
        json["brute"] = json!({ "q": q, "count": counted, "expected": expected.to_string(), "ok": ok });
    }
    Ok(Report { text, json, failures })
}

fn hn(p: &ProblemFile, rep_path: &Path, q: u64) -> Result<Report, Failure> {
    let f = field(q)?;
    let text_in = read(rep_path)?;
    let m = parse_rep_literal(&text_in, &p.quiver, &p.dims, &f)?;
    let catalog = SubspaceCatalog::for_dims(&f, &p.dims, &p.budgets)?;
    let analyzer = Analyzer::new(&f, &p.theta, &catalog, p.budgets);
    let (filtration, ty) = analyzer.hn_filtration(&m)?;

    let slopes = ty.slopes(&p.theta);
    let mut text = format!("field F_{q}\ntype {ty}\nslopes");
    for s in &slopes {
        write!(text, " {s}").unwrap();
    }
    writeln!(text, "\nsemistable {}", ty.is_trivial()).unwrap();
    let mut steps = Vec::new();
    for (k, step) in filtration.steps().iter().enumerate().skip(1) {
        writeln!(text, "step {k} dims {}", step.dims()).unwrap();
        let mut bases = Vec::new();
        for (v, space) in step.spaces().iter().enumerate() {
            let rows: Vec<Vec<u64>> = space
                .basis_rows()
                .map(|r| r.iter().map(|&x| x as u64).collect())
                .collect();
            let shown = if rows.is_empty() {
                "0".to_string()
            } else {
                rows.iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                    .collect::<Vec<_>>()
                    .join(" | ")
            };
            writeln!(text, "  v{v}: {shown}").unwrap();
            bases.push(rows);
        }
        steps.push(json!({ "dims": dims_json(&step.dims()), "bases": bases }));
    }
    let json = json!({
        "command": "hn",
        "q": q,
        "type": type_json(&ty),
        "slopes": slopes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "semistable": ty.is_trivial(),
        "steps": steps,
    });
    Ok(Report { text, json, failures: Vec::new() })
}

/// Classification over one field with every check that applies to it.
struct FieldCheck {
    text: String,
    json: Value,
    failures: Vec<String>,
}

fn check_field(
    p: &ProblemFile,
    counter: &mut SemistableCounter<'_>,
    q: PrimePower,
    torsor: bool,
) -> Result<FieldCheck, Error> {
    let f = FieldTable::with_limit(q, ABSOLUTE_MAX_Q)?;
    let q = q.q();
    let mut text = String::new();
    let mut failures = Vec::new();
    let table = match classify_representations(&p.quiver, &p.dims, &p.theta, &f, &p.budgets) {
        Ok(t) => t,
        Err(Error::TheoremViolation(msg)) => {
            writeln!(text, "  classification FAIL {msg}").unwrap();
            failures.push(format!("F_{q}: {msg}"));
            return Ok(FieldCheck {
                text,
                json: json!({ "q": q, "classification": { "ok": false, "message": msg } }),
                failures,
            });
        }
        Err(e) => return Err(e),
    };

    let ok = table.total() == table.expected_total();
    writeln!(
        text,
        "  partition {} {} = {q}^{}",
        if ok { "ok" } else { "FAIL" },
        table.total(),
        table.rep_space_dim()
    )
    .unwrap();
    if !ok {
        failures.push(format!("F_{q}: strata sum to {}, expected {}", table.total(), table.expected_total()));
    }
    let partition = json!({ "ok": ok, "total": table.total().to_string(), "expected": table.expected_total().to_string() });

    let mut strata = Vec::new();
    for formula in counter.stratum_formulas(&p.dims)? {
        let predicted = formula.poly().eval_integer(q as i64)?;
        let observed = table.count(&formula.beta);
        let ok = predicted == BigInt::from(observed);
        writeln!(
            text,
            "  stratum {} count {observed} formula {predicted} {}",
            formula.beta,
            if ok { "ok" } else { "FAIL" }
        )
        .unwrap();
        if !ok {
            failures.push(format!("F_{q}: stratum {} has {observed} points, formula gives {predicted}", formula.beta));
        }
        strata.push(json!({
            "type": type_json(&formula.beta),
            "count": observed,
            "formula": predicted.to_string(),
            "ok": ok,
        }));
    }

    let closure = closure_consistency(&table, &p.theta)?;
    let minimal: Vec<String> = closure.minimal_nonempty.iter().map(|t| t.to_string()).collect();
    writeln!(text, "  closure minimal {} acyclic {}", minimal.join(" "), closure.acyclic).unwrap();
    for flag in &closure.flags {
        writeln!(text, "  closure note {flag}").unwrap();
    }
    let closure_json = json!({
        "acyclic": closure.acyclic,
        "minimal_nonempty": closure.minimal_nonempty.iter().map(type_json).collect::<Vec<_>>(),
        "edges": closure.edges.iter().map(|(a, b)| json!([type_json(a), type_json(b)])).collect::<Vec<_>>(),
        "notes": closure.flags,
    });

    let mut json = json!({
        "q": q,
        "partition": partition,
        "strata": strata,
        "closure": closure_json,
    });

    if torsor {
        match torsor_orbit_count(&p.quiver, &p.dims, &p.theta, &f, &p.budgets) {
            Ok(t) => {
                let moduli = moduli_count_poly(&p.quiver, &p.dims, &p.theta)?.eval_integer(q as i64)?;
                let ok = moduli == BigInt::from(t.orbits);
                writeln!(
                    text,
                    "  torsor {} stable {} pg {} orbits {} moduli {moduli}",
                    if ok { "ok" } else { "FAIL" },
                    t.stable,
                    t.projective_group_order,
                    t.orbits
                )
                .unwrap();
                if !ok {
                    failures.push(format!("F_{q}: {} orbits of stables, moduli polynomial gives {moduli}", t.orbits));
                }
                json["torsor"] = json!({
                    "ok": ok,
                    "stable": t.stable,
                    "projective_group_order": t.projective_group_order,
                    "orbits": t.orbits,
                    "moduli": moduli.to_string(),
                });
            }
            Err(Error::TheoremViolation(msg)) => {
                writeln!(text, "  torsor FAIL {msg}").unwrap();
                failures.push(format!("F_{q}: {msg}"));
                json["torsor"] = json!({ "ok": false, "message": msg });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(FieldCheck { text, json, failures })
}

fn stratify(p: &ProblemFile, q: u64) -> Result<Report, Failure> {
    let q = PrimePower::new(q)?;
    let mut counter = SemistableCounter::new(&p.quiver, &p.theta);
    let formulas = counter.stratum_formulas(&p.dims)?;
    let check = check_field(p, &mut counter, q, false)?;
    let mut text = format!("dims {} theta {} field F_{}\n", p.dims, p.theta, q.q());
    text.push_str(&check.text);
    text.push_str("formulas\n");
    for formula in &formulas {
        writeln!(text, "  {} {}", formula.beta, formula.poly()).unwrap();
    }
    let mut json = check.json;
    json["command"] = json!("stratify");
    json["dims"] = dims_json(&p.dims);
    json["theta"] = json!(p.theta.weights());
    json["formulas"] = formulas
        .iter()
        .map(|f| json!({ "type": type_json(&f.beta), "poly": poly_json(&f.poly()) }))
        .collect();
    Ok(Report { text, json, failures: check.failures })
}

fn moduli(p: &ProblemFile) -> Result<Report, Failure> {
    let poly = moduli_count_poly(&p.quiver, &p.dims, &p.theta)?;
    let json = json!({
        "command": "moduli-poly",
        "dims": dims_json(&p.dims),
        "theta": p.theta.weights(),
        "moduli": poly_json(&poly),
    });
    Ok(Report { text: format!("{poly}\n"), json, failures: Vec::new() })
}

fn verify(p: &ProblemFile, qmax: u64) -> Result<Report, Failure> {
    p.quiver.check_dims(&p.dims)?;
    p.quiver.check_theta(&p.theta)?;
    let coprime = is_coprime(&p.dims, &p.theta);
    let mut counter = SemistableCounter::new(&p.quiver, &p.theta);
    let ss = counter.count(&p.dims)?;
    let moduli = if coprime {
        Some(moduli_count_poly(&p.quiver, &p.dims, &p.theta)?)
    } else {
        None
    };
    let mut text = format!("dims {} theta {} coprime {coprime}\nsemistable {ss}\n", p.dims, p.theta);
    if let Some(m) = &moduli {
        writeln!(text, "moduli {m}").unwrap();
    }
    let qs: Vec<PrimePower> = prime_powers_up_to(qmax.min(ABSOLUTE_MAX_Q))
        .into_iter()
        .filter(|q| p.qs.as_ref().is_none_or(|list| list.contains(q)))
        .collect();
    let mut fields = Vec::new();
    let mut failures = Vec::new();
    for q in qs {
        writeln!(text, "q {}", q.q()).unwrap();
        let check = check_field(p, &mut counter, q, coprime)?;
        text.push_str(&check.text);
        fields.push(check.json);
        failures.extend(check.failures);
    }
    let ok = failures.is_empty();
    writeln!(text, "result {}", if ok { "ok" } else { "FAIL" }).unwrap();
    let json = json!({
        "command": "verify",
        "dims": dims_json(&p.dims),
        "theta": p.theta.weights(),
        "coprime": coprime,
        "semistable": poly_json(&ss),
        "moduli": moduli.as_ref().map(poly_json),
        "fields": fields,
        "ok": ok,
    });
    Ok(Report { text, json, failures })
}

fn purity_fit(samples: &Path, period: u32, degree: usize) -> Result<Report, Failure> {
    let samples = CountSamples::parse(&read(samples)?)?;
    let strong = purity::strong_purity_check(&samples, degree)?;
    let periodic = purity::weak_purity_periodic_fit(&samples, period, degree)?;
    let text = format!(
        "base_q {}\nstrong\n{strong}periodic period {period}\n{periodic}",
        samples.base_q()
    );
    let json = json!({
        "command": "purity-fit",
        "base_q": samples.base_q(),
        "strong": report_json(&strong),
        "periodic": report_json(&periodic),
    });
    Ok(Report { text, json, failures: Vec::new() })
}
