use std::process::ExitCode;

use brackets_core::algebra::rational::{self, Rational};
use brackets_core::derivation::TraceRecord;
use brackets_core::pipeline::{
    compare_all, derive, run_pipeline, CompareReport, MellinParams, PipelineId, PipelineReport, RunConfig,
};
use brackets_core::representations::{catalog_entries, catalog_get};
use brackets_core::{derivation::Derivation, Error};
use clap::{Parser, Subcommand};
use serde_json::json;

/// Exit codes beyond 0 (success) and 1 (usage or other errors).
const EXIT_NO_ASSIGNMENT: u8 = 2;
const EXIT_DIVERGENT: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

/// Pairwise agreement required between pipelines in `compare`.
const PAIR_TOL: f64 = 1e-10;
/// Agreement required between a closed form and quadrature in `compare`.
const QUAD_TOL: f64 = 1e-3;

// A closed pipe (`brackets list-reps | head`) ends the program quietly
// instead of panicking.
macro_rules! println {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "brackets",
    version,
    about = "Method-of-brackets derivations of a Bessel/exponential-integral double integral"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one derivation pipeline.
    Run {
        /// direct3, divergent-divergent, divergent-null, mellin-param,
        /// mellin-barnes, mixed-mb-divergent or mixed-bracketized-gamma
        pipeline: String,
        /// Exact value for alpha (`5`, `7/2`, `2.5`); symbolic when omitted.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Check the closed form against direct 2D quadrature.
        #[arg(long)]
        verify: bool,
        /// Relative tolerance for the quadrature check.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Generator parameters `a,b,A,B` for mellin-param.
        #[arg(long, allow_hyphen_values = true)]
        mellin_params: Option<String>,
        #[arg(long)]
        json: bool,
        /// Include the rule-by-rule trace.
        #[arg(long)]
        explain: bool,
    },
    /// Run several pipelines and compare their results.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Comma-separated subset; all seven by default.
        #[arg(long, value_delimiter = ',')]
        pipelines: Option<Vec<String>>,
        /// Relative tolerance for the quadrature column.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        no_quadrature: bool,
        #[arg(long)]
        json: bool,
    },
    /// List the representation catalog.
    ListReps {
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Run { pipeline, alpha, beta, verify, tol, mellin_params, json, explain } => {
            run(&pipeline, alpha, beta, verify, tol, mellin_params, json, explain)
        }
        Command::Compare { alpha, beta, pipelines, tol, no_quadrature, json } => {
            compare(alpha, beta, pipelines, tol, no_quadrature, json)
        }
        Command::ListReps { json } => list_reps(json),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NoAssignment(_) => EXIT_NO_ASSIGNMENT,
                _ => 1,
            })
        }
    }
}

fn parse_point(alpha: Option<String>, beta: Option<String>) -> Result<Option<(Rational, Rational)>, Error> {
    let parse = |s: Option<String>| -> Result<Option<Rational>, Error> {
        match s.as_deref() {
            None | Some("symbolic") => Ok(None),
            Some(t) => rational::parse(t).map(Some),
        }
    };
    match (parse(alpha)?, parse(beta)?) {
        (Some(a), Some(b)) => Ok(Some((a, b))),
        (None, None) => Ok(None),
        _ => Err(Error::InvalidArgument("give both --alpha and --beta or neither".into())),
    }
}

fn parse_mellin(text: Option<String>) -> Result<MellinParams, Error> {
    let Some(text) = text else {
        return Ok(MellinParams::default());
    };
    let parts: Vec<Rational> = text.split(',').map(rational::parse).collect::<Result<_, _>>()?;
    let [a, b, big_a, big_b] = <[Rational; 4]>::try_from(parts)
        .map_err(|_| Error::InvalidArgument(format!("expected four values a,b,A,B, got `{text}`")))?;
    MellinParams::new(a, b, big_a, big_b)
}

#[allow(clippy::too_many_arguments)]
fn run(
    pipeline: &str,
    alpha: Option<String>,
    beta: Option<String>,
    verify: bool,
    tol: f64,
    mellin_params: Option<String>,
    json: bool,
    explain: bool,
) -> Result<u8, Error> {
    let mut cfg = RunConfig::new(pipeline.parse::<PipelineId>()?);
    if let Some((a, b)) = parse_point(alpha, beta)? {
        cfg = cfg.at(a, b);
    }
    cfg.verify = verify;
    cfg.tol = tol;
    cfg.mellin = parse_mellin(mellin_params)?;
    let mut report = match run_pipeline(&cfg) {
        Ok(r) => r,
        Err(e) => {
            if explain {
                // Show how far the derivation got, including any singular system.
                let (_, trace) = derive(cfg.pipeline, &cfg.mellin);
                if json {
                    let out = json!({ "error": e.to_string(), "trace": trace });
                    println!("{}", serde_json::to_string_pretty(&out).expect("trace serializes"));
                } else {
                    for (i, rec) in trace.iter().enumerate() {
                        print_record(i + 1, rec);
                    }
                }
            }
            return Err(e);
        }
    };
    if !explain {
        report.trace.clear();
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print_report(&report);
    }
    Ok(if report.mismatch() {
        EXIT_MISMATCH
    } else if report.divergent {
        EXIT_DIVERGENT
    } else {
        0
    })
}

fn print_report(r: &PipelineReport) {
    if !r.trace.is_empty() {
        for (i, rec) in r.trace.iter().enumerate() {
            print_record(i + 1, rec);
        }
        println!();
    }
    println!("pipeline:    {}", r.pipeline);
    if let Some(p) = &r.mellin_params {
        println!("parameters:  a,b,A,B = {p}");
    }
    println!("closed form: {}", r.closed_form);
    if let (Some(a), Some(b)) = (&r.alpha, &r.beta) {
        println!("at alpha = {a}, beta = {b}:");
        if let Some(p) = &r.at_point {
            println!("  exact:     {p}");
        }
        match r.value {
            Some(v) => println!("  value:     {v:.15e}"),
            None => println!("  value:     divergent"),
        }
    }
    if let Some(v) = &r.verification {
        let q = &v.quadrature;
        println!(
            "  quadrature: {:.15e} (error {:.1e}, {} evaluations{})",
            q.value,
            q.error,
            q.evals,
            if q.converged { "" } else { ", not converged" }
        );
        println!(
            "  relative difference {:.2e}: {}",
            v.relative_difference,
            if v.agrees { "agrees" } else { "MISMATCH" }
        );
    }
}

fn print_record(step: usize, rec: &TraceRecord) {
    let note = if rec.note.is_empty() { String::new() } else { format!(" [{}]", rec.note) };
    println!("{step:>2}. {}{note}", rec.rule.name());
    println!("    => {}", rec.output);
    if let Some(sys) = &rec.system {
        println!("    unknowns: {}", sys.unknowns.join(", "));
        for (row, rhs) in sys.matrix.iter().zip(&sys.rhs) {
            println!("      [{}] = {rhs}", row.join(" "));
        }
        for (v, f) in &sys.solution {
            println!("    {v}* = {f}");
        }
    }
}

fn compare(
    alpha: Option<String>,
    beta: Option<String>,
    pipelines: Option<Vec<String>>,
    tol: f64,
    no_quadrature: bool,
    json: bool,
) -> Result<u8, Error> {
    let point = parse_point(alpha, beta)?;
    let ids: Vec<PipelineId> = match pipelines {
        Some(names) => names.iter().map(|n| n.trim().parse()).collect::<Result<_, _>>()?,
        None => PipelineId::ALL.to_vec(),
    };
    let quad_tol = match &point {
        Some((a, b))
            if !no_quadrature
                && brackets_core::reference::in_validated_region(rational::to_f64(a), rational::to_f64(b)) =>
        {
            Some(tol)
        }
        _ => None,
    };
    let report = compare_all(&ids, point, quad_tol, &MellinParams::default())?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print_compare(&report);
    }
    if report.rows.iter().any(|r| r.error.is_some()) {
        return Ok(1);
    }
    let pair_bad = report.worst_agreement().is_some_and(|w| w > PAIR_TOL);
    let symbolic_bad = report.alpha.is_none() && report.symbolic_equal.iter().flatten().any(|e| !e);
    let quad_bad = report.rows.iter().any(|r| r.quadrature_difference.is_some_and(|d| d > QUAD_TOL));
    Ok(if pair_bad || symbolic_bad || quad_bad { EXIT_MISMATCH } else { 0 })
}

fn print_compare(r: &CompareReport) {
    for row in &r.rows {
        let value = match (row.value, &row.error) {
            (Some(v), _) => format!("{v:.15e}"),
            (None, Some(e)) => format!("error: {e}"),
            (None, None) => row.closed_form.clone().unwrap_or_default(),
        };
        let quad = row.quadrature_difference.map(|d| format!("  quad {d:.1e}")).unwrap_or_default();
        println!("{:<24} {value}{quad}", row.pipeline.name());
    }
    if let Some(w) = r.worst_agreement() {
        println!("worst pairwise relative difference: {w:.2e}");
    }
    let all_equal = r.symbolic_equal.iter().flatten().all(|e| *e);
    println!("closed forms canonically equal: {}", if all_equal { "all" } else { "no" });
    if let Some(q) = &r.quadrature {
        println!("quadrature: {:.15e} (error {:.1e})", q.value, q.error);
    }
}

fn list_reps(json: bool) -> Result<u8, Error> {
    let mut entries = Vec::new();
    for (function, kind) in catalog_entries() {
        let rep = catalog_get(&mut Derivation::new(), function, kind)?;
        let series = rep.series.with_coefficient(rep.series.coefficient().simplify()).to_string();
        if json {
            entries.push(json!({
                "function": function.to_string(),
                "kind": kind.name(),
                "complexity": rep.series.indices().len() as i64 - rep.series.brackets().len() as i64,
                "series": series,
            }));
        } else {
            println!("{function:<3} {:<18} {series}", kind.name());
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&entries).expect("catalog serializes"));
    }
    Ok(0)
}
