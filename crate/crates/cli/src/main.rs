//! `pottsloop`: solve the disk amplitudes and run the checks from the shell.
//!
//! Exit status: 0 when every requested check passes, 1 when one fails,
//! 2 for usage errors and anything that stops a check from running.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use pottsloop::curve::{self, MomentVariant, Shift, MOMENT_WORDS};
use pottsloop::freealg::Word;
use pottsloop::loopcat::{self, Form, LoopTruncation, Nonzero};
use pottsloop::oracle::{self, integer_poly};
use pottsloop::ring::{parse_rational, RationalFunction, Ring};
use pottsloop::solver::{self, AmplitudeMap, ModelKind, ModelSpec, Recorder};
use pottsloop::{CPoly, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "pottsloop", version, about = "Potts-on-random-surfaces disk amplitudes and their checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    Potts,
    Gravity,
}

impl Model {
    fn kind(self) -> ModelKind {
        match self {
            Model::Potts => ModelKind::Potts3,
            Model::Gravity => ModelKind::PureGravity,
        }
    }
}

/// `symbolic`, or a rational value away from the propagator poles.
#[derive(Clone, Debug, PartialEq)]
enum Coupling {
    Symbolic,
    Rational(BigRational),
}

fn parse_coupling(s: &str) -> std::result::Result<Coupling, String> {
    if s == "symbolic" {
        return Ok(Coupling::Symbolic);
    }
    let q = parse_rational(s).map_err(|e| e.to_string())?;
    let d = BigRational::from_integer(1.into()) + &q - BigRational::from_integer(2.into()) * &q * &q;
    if d == BigRational::from_integer(0.into()) {
        return Err(format!("c = {q} is a pole of the propagator (1 + c - 2c^2 = 0)"));
    }
    Ok(Coupling::Rational(q))
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Highest order in g.
    #[arg(long, default_value_t = 4)]
    ng: usize,
    /// Coupling: `symbolic` or a rational such as `1/4`.
    #[arg(long, default_value = "symbolic", value_parser = parse_coupling)]
    c: Coupling,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the generating equation and emit the amplitude table.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Longest boundary word.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        lmax: u64,
    },
    /// Evaluate the loop-equation catalog on the solved amplitudes.
    CheckLoops {
        #[command(flatten)]
        common: Common,
        /// Order in the resolvent variable.
        #[arg(long, default_value_t = 6)]
        nx: usize,
        /// Use the printed forms, including the two that do not vanish.
        #[arg(long)]
        printed: bool,
    },
    /// Evaluate the Schwinger–Dyson reparameterisation identities.
    CheckSd {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        nx: usize,
    },
    /// Substitute the solved series into the quintic spectral curve.
    CheckCurve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        nx: usize,
        /// Moment standing in for the fourth-order symbol; both when omitted,
        /// in which case one passing variant suffices.
        #[arg(long, value_parser = parse_variant)]
        moment_variant: Option<MomentVariant>,
        /// Use the printed constant shift 1/(1-c) instead of the corrected 1/((1-c)x).
        #[arg(long)]
        printed: bool,
    },
    /// Check the three moment recurrences.
    CheckRecurrences {
        #[command(flatten)]
        common: Common,
    },
    /// Planar Wick-contraction value of one amplitude coefficient.
    Oracle {
        #[arg(long)]
        word: String,
        /// Number of cubic vertices (the order in g).
        #[arg(long)]
        nvertices: usize,
        #[arg(long, default_value = "symbolic", value_parser = parse_coupling)]
        c: Coupling,
        #[arg(long, value_enum, default_value_t = Model::Potts)]
        model: Model,
    },
    /// Solver against the Wick-contraction oracle, word by word.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        lmax: usize,
        #[arg(long, value_enum, default_value_t = Model::Potts)]
        model: Model,
    },
    /// CSV of the moment series entering the curve.
    Export {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_variant(s: &str) -> std::result::Result<MomentVariant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Scalars the CLI can run at: polynomials in `c`, or rationals.
trait Scalar: Ring + Display + 'static {
    /// The oracle's value, a polynomial in `c`, in this ring.
    fn project(f: &RationalFunction, c: &Self) -> Result<Self>;
}

impl Scalar for CPoly {
    fn project(f: &RationalFunction, _: &Self) -> Result<Self> {
        integer_poly(f)
    }
}

impl Scalar for BigRational {
    fn project(f: &RationalFunction, c: &Self) -> Result<Self> {
        Ok(f.eval(c)?)
    }
}

/// Run `$body` with `$c` bound to the coupling in its scalar ring.
macro_rules! at_coupling {
    ($mode:expr, $c:ident => $body:expr) => {
        match $mode {
            Coupling::Symbolic => {
                let $c = CPoly::var();
                $body
            }
            Coupling::Rational(q) => {
                let $c = q.clone();
                $body
            }
        }
    };
}

struct Outcome {
    passed: bool,
    json: Value,
    text: String,
}

fn nonzero_json<R: Display>(n: &Option<Nonzero<R>>) -> Value {
    match n {
        None => Value::Null,
        Some(n) => json!({ "x": n.x_power, "g": n.g_power, "value": n.value.to_string() }),
    }
}

fn nonzero_text<R: Display>(n: &Option<Nonzero<R>>) -> String {
    match n {
        None => "-".into(),
        Some(n) => format!("x^{} g^{}: {}", n.x_power, n.g_power, n.value),
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn form_name(f: Form) -> &'static str {
    match f {
        Form::Printed => "printed",
        Form::Erratum => "corrected",
    }
}

fn c_label(mode: &Coupling) -> String {
    match mode {
        Coupling::Symbolic => "symbolic".into(),
        Coupling::Rational(q) => q.to_string(),
    }
}

fn solve<R: Scalar>(c: R, ng: usize, lmax: usize) -> Result<Outcome> {
    let table = solver::solve_series(&ModelSpec::potts(c, ng, lmax)?)?;
    let phi = table.reported();
    let mut out: BTreeMap<String, BTreeMap<usize, String>> = BTreeMap::new();
    let mut text = String::new();
    for (w, gs) in phi.sorted() {
        for (n, v) in gs.coeffs().iter().enumerate().take(ng + 1) {
            if !v.is_zero() {
                out.entry(w.to_string()).or_default().insert(n, v.to_string());
                writeln!(text, "{:<8} g^{:<2} {}", w.to_string(), n, v).unwrap();
            }
        }
    }
    Ok(Outcome { passed: true, json: json!(out), text })
}

fn check_loops<R: Scalar>(c: R, ng: usize, nx: usize, printed: bool) -> Result<Outcome> {
    let eqs: Vec<_> = if printed {
        loopcat::catalog().iter().filter(|e| e.form == Form::Printed).collect()
    } else {
        loopcat::acceptance_equations()
    };
    let reports = loopcat::check_catalog(&ModelSpec::potts(c, ng, 0)?, &eqs, LoopTruncation::new(nx, ng))?;
    let passed = reports.iter().filter(|r| r.passed()).count();
    let mut text = String::new();
    for r in &reports {
        writeln!(text, "{:<6} {:<10} {}  {}", r.id, form_name(r.form), verdict(r.passed()), nonzero_text(&r.first_nonzero)).unwrap();
    }
    writeln!(text, "{passed}/{} PASS", reports.len()).unwrap();
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "id": r.id, "form": form_name(r.form), "passed": r.passed(), "first_nonzero": nonzero_json(&r.first_nonzero) }))
        .collect();
    Ok(Outcome {
        passed: passed == reports.len(),
        json: json!({ "nx": nx, "ng": ng, "equations": rows, "passed": passed, "total": reports.len() }),
        text,
    })
}

fn check_sd<R: Scalar>(c: R, ng: usize, nx: usize) -> Result<Outcome> {
    let descs: Vec<_> = loopcat::descriptors().iter().collect();
    let reports = loopcat::check_descriptors(&ModelSpec::potts(c, ng, 0)?, &descs, LoopTruncation::new(nx, ng))?;
    let passed = reports.iter().filter(|r| r.passed()).count();
    let mut text = String::new();
    for (r, d) in reports.iter().zip(&descs) {
        writeln!(
            text,
            "{:>2} {:<28} -> {:<5} {}  residual {}  vs catalog {}",
            r.index,
            d.text,
            r.pairs_with,
            verdict(r.passed()),
            nonzero_text(&r.residual),
            nonzero_text(&r.formal_mismatch)
        )
        .unwrap();
    }
    writeln!(text, "{passed}/{} PASS", reports.len()).unwrap();
    let rows: Vec<Value> = reports
        .iter()
        .zip(&descs)
        .map(|(r, d)| {
            json!({
                "index": r.index,
                "variation": d.text,
                "pairs_with": r.pairs_with,
                "passed": r.passed(),
                "residual": nonzero_json(&r.residual),
                "formal_mismatch": nonzero_json(&r.formal_mismatch),
            })
        })
        .collect();
    Ok(Outcome {
        passed: passed == reports.len(),
        json: json!({ "nx": nx, "ng": ng, "descriptors": rows, "passed": passed, "total": reports.len() }),
        text,
    })
}

fn check_curve<R: Scalar>(c: R, ng: usize, nx: usize, variant: Option<MomentVariant>, printed: bool) -> Result<Outcome> {
    let variants = variant.map(|v| vec![v]).unwrap_or_else(|| MomentVariant::ALL.to_vec());
    let shift = if printed { Shift::Printed } else { Shift::Corrected };
    let reports = curve::check_curve(&ModelSpec::potts(c, ng, 0)?, LoopTruncation::new(nx, ng), &variants, shift)?;
    let passing = reports.iter().find(|r| r.passed()).map(|r| r.variant.word());
    let passed = if variant.is_some() { reports.iter().all(|r| r.passed()) } else { passing.is_some() };
    let shift_name = if printed { "printed" } else { "corrected" };
    let mut text = String::new();
    for r in &reports {
        writeln!(text, "variant {}  shift {shift_name}  {}  {}", r.variant.word(), verdict(r.passed()), nonzero_text(&r.first_nonzero)).unwrap();
    }
    writeln!(text, "{}: passing variant {}", verdict(passed), passing.unwrap_or("none")).unwrap();
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "variant": r.variant.word(),
                "shift": shift_name,
                "passed": r.passed(),
                "known_through_x": r.known_through,
                "first_nonzero": nonzero_json(&r.first_nonzero),
            })
        })
        .collect();
    Ok(Outcome {
        passed,
        json: json!({ "nx": nx, "ng": ng, "variants": rows, "passing_variant": passing, "passed": passed }),
        text,
    })
}

fn moments<R: Scalar>(c: R, ng: usize) -> Result<(R, curve::MomentSet<R>)> {
    let spec = ModelSpec::potts(c, ng, 0)?;
    let rec = Recorder::new(ng);
    let _: curve::MomentSet<R> = curve::compute_moments(&rec, ng)?;
    let amps = AmplitudeMap::solve(&spec, rec.requests())?;
    Ok((spec.c.clone(), curve::compute_moments(&amps, ng)?))
}

fn check_recurrences<R: Scalar>(c: R, ng: usize) -> Result<Outcome> {
    let (c, m) = moments(c, ng)?;
    let reports = curve::check_recurrences(&c, &m);
    let mut text = String::new();
    let mut rows = Vec::new();
    for r in &reports {
        let first = r.first_offending.as_ref().map(|(n, v)| format!("g^{n}: {v}")).unwrap_or_else(|| "-".into());
        writeln!(text, "{:<4} {:<64} {}  {first}", r.id, r.text, verdict(r.passed())).unwrap();
        rows.push(json!({
            "id": r.id,
            "relation": r.text,
            "passed": r.passed(),
            "first_offending": r.first_offending.as_ref().map(|(n, v)| json!({ "g": n, "value": v.to_string() })),
        }));
    }
    let passed = reports.iter().all(|r| r.passed());
    Ok(Outcome { passed, json: json!({ "ng": ng, "recurrences": rows, "passed": passed }), text })
}

fn run_oracle(word: &str, n: usize, mode: &Coupling, model: Model) -> Result<Outcome> {
    let w: Word = word.parse()?;
    let f = oracle::planar_moment(model.kind(), &w, n)?;
    let value = match mode {
        Coupling::Symbolic => f.to_string(),
        Coupling::Rational(q) => f.eval(q)?.to_string(),
    };
    Ok(Outcome {
        passed: true,
        json: json!({ "word": w.to_string(), "nvertices": n, "c": c_label(mode), "value": value }),
        text: format!("{value}\n"),
    })
}

fn compare<R: Scalar>(c: R, ng: usize, lmax: usize, model: Model) -> Result<Outcome> {
    let spec = match model {
        Model::Potts => ModelSpec::potts(c, ng, lmax)?,
        Model::Gravity => ModelSpec::pure_gravity(ng, lmax),
    };
    let requests = (1..=lmax).flat_map(Word::all_of_len).flat_map(|w| (0..=ng).map(move |n| (w, n)));
    let table = AmplitudeMap::solve(&spec, requests)?;
    let cv = spec.c.clone();
    let report = oracle::compare_at(model.kind(), &table, ng, lmax, |f| R::project(f, &cv))?;
    let mut text = String::new();
    for m in &report.mismatches {
        writeln!(text, "{:<8} g^{:<2} oracle {}  table {}", m.word.to_string(), m.order, m.oracle, m.table).unwrap();
    }
    writeln!(text, "{}: {} coefficients, {} mismatches", verdict(report.passed()), report.checked, report.mismatches.len()).unwrap();
    Ok(Outcome {
        passed: report.passed(),
        json: json!({ "ng": ng, "lmax": lmax, "checked": report.checked, "mismatches": report.mismatches, "passed": report.passed() }),
        text,
    })
}

fn export<R: Scalar>(c: R, ng: usize) -> Result<String> {
    let (_, m) = moments(c, ng)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
    w.write_record(["moment", "order", "value"]).map_err(io)?;
    for name in MOMENT_WORDS {
        let s = m.get(name).expect("listed moment");
        for n in 0..=ng {
            w.write_record([format!("p{name}"), n.to_string(), s.coeff(n).to_string()]).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn run(cli: &Cli) -> Result<(bool, String)> {
    let rendered = |o: Outcome| -> (bool, String) {
        let body = match cli.format {
            Format::Json => serde_json::to_string_pretty(&o.json).expect("json") + "\n",
            Format::Text => o.text,
        };
        (o.passed, body)
    };
    let outcome = match &cli.command {
        Command::Solve { common, lmax } => at_coupling!(&common.c, c => solve(c, common.ng, *lmax as usize)),
        Command::CheckLoops { common, nx, printed } => at_coupling!(&common.c, c => check_loops(c, common.ng, *nx, *printed)),
        Command::CheckSd { common, nx } => at_coupling!(&common.c, c => check_sd(c, common.ng, *nx)),
        Command::CheckCurve { common, nx, moment_variant, printed } => {
            at_coupling!(&common.c, c => check_curve(c, common.ng, *nx, *moment_variant, *printed))
        }
        Command::CheckRecurrences { common } => at_coupling!(&common.c, c => check_recurrences(c, common.ng)),
        Command::Oracle { word, nvertices, c, model } => run_oracle(word, *nvertices, c, *model),
        Command::Compare { common, lmax, model } => at_coupling!(&common.c, c => compare(c, common.ng, *lmax, *model)),
        Command::Export { common } => return Ok((true, at_coupling!(&common.c, c => export(c, common.ng))?)),
    }?;
    Ok(rendered(outcome))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((passed, body)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &body).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
