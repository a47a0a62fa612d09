//! The `torbit` command line.
//!
//! Every verb builds a JSON value first. `--json` prints it pretty with
//! sorted keys; otherwise a text view is rendered from the same value.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::classify::{
    classify_pseudomanifold, classify_structural, independence_complex, OrbitVerdict, VerdictKind,
};
use crate::leontief::{
    check_leontief, enumerate_vertices, lp_from_json, nerve_complex, restrict_standard_weights,
    LeontiefStatus, LeontiefSystem,
};
use crate::poset::{face_poset, face_type_census, poset_cardinality, product_structure_check};
use crate::verify::{selfcheck, Fault};
use crate::weights::{complexity, weights_from_json, WeightSystem};

/// Exit code for bad input or any module error.
pub const EXIT_ERROR: i32 = 3;
/// Exit code when the two classifier routes disagree.
pub const EXIT_ROUTE_DISAGREEMENT: i32 = 70;

#[derive(Debug, Parser)]
#[command(
    name = "torbit",
    version,
    about = "Orbit spaces of compact torus representations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Read the input document from FILE instead of stdin.
    #[arg(long, global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Inline JSON document, or a path. Falls back to --input, then stdin.
    pub source: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the orbit space of a weight system by both routes.
    Analyze(Source),
    /// Leontief decomposition of a weight system.
    Decompose(Source),
    /// Face poset (lattice of flats) and its product encoding.
    Faces(Source),
    /// Independence complex and its reduced homology.
    Homology(Source),
    /// Polyhedron, Leontief status and nerve of `Ax = b, x >= 0`.
    Lp(Source),
    /// LP status against the orbit space of the restricted standard representation.
    Bridge(Source),
    /// Run the built-in invariant suites and route sweep.
    Selfcheck {
        /// Time budget in seconds.
        #[arg(long, default_value_t = 60.0)]
        budget: f64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// What a run printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Entry point for the binary: real arguments, real stdin.
pub fn run() -> i32 {
    let out = run_with(std::env::args_os(), || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    });
    // A closed pipe downstream is not an error worth reporting.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.code
}

pub fn run_with<I, T>(args: I, stdin: impl FnOnce() -> std::io::Result<String>) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: EXIT_ERROR,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    execute(&cli, stdin)
}

struct Failure {
    module: &'static str,
    message: String,
    input: String,
}

fn fail(module: &'static str, e: impl ToString, input: &str) -> Failure {
    Failure {
        module,
        message: e.to_string(),
        input: input.to_string(),
    }
}

pub fn execute(cli: &Cli, stdin: impl FnOnce() -> std::io::Result<String>) -> Output {
    let result = match &cli.command {
        Command::Selfcheck {
            budget,
            inject_fault,
        } => Ok(run_selfcheck(*budget, *inject_fault)),
        Command::Analyze(src)
        | Command::Decompose(src)
        | Command::Faces(src)
        | Command::Homology(src)
        | Command::Lp(src)
        | Command::Bridge(src) => read_source(src, cli.input.as_ref(), stdin)
            .and_then(|raw| dispatch(&cli.command, &raw, cli.verbose)),
    };
    match result {
        Ok((code, value, stderr)) => Output {
            code,
            stdout: if cli.json {
                to_pretty(&value)
            } else {
                render_text(&cli.command, &value)
            },
            stderr,
        },
        Err(f) => {
            let echo = truncate(f.input.trim(), 2000);
            let value =
                json!({ "error": { "module": f.module, "message": f.message, "input": echo } });
            let stderr = if cli.json {
                to_pretty(&value)
            } else {
                format!("error [{}]: {}\ninput: {}\n", f.module, f.message, echo)
            };
            Output {
                code: EXIT_ERROR,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn truncate(s: &str, max: usize) -> String {
    match s.char_indices().nth(max) {
        Some((i, _)) => format!("{}...", &s[..i]),
        None => s.to_string(),
    }
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_source(
    src: &Source,
    input: Option<&PathBuf>,
    stdin: impl FnOnce() -> std::io::Result<String>,
) -> Result<String, Failure> {
    let read_file = |p: &PathBuf| {
        std::fs::read_to_string(p)
            .map_err(|e| fail("cli", format!("cannot read {}: {e}", p.display()), ""))
    };
    match (&src.source, input) {
        (Some(s), _) if s.trim_start().starts_with('{') => Ok(s.clone()),
        (Some(s), _) => read_file(&PathBuf::from(s)),
        (None, Some(p)) => read_file(p),
        (None, None) => stdin().map_err(|e| fail("cli", format!("cannot read stdin: {e}"), "")),
    }
}

type Reply = (i32, Value, String);

fn dispatch(cmd: &Command, raw: &str, verbose: bool) -> Result<Reply, Failure> {
    let doc: Value =
        serde_json::from_str(raw).map_err(|e| fail("cli", format!("invalid JSON: {e}"), raw))?;
    match cmd {
        Command::Lp(_) => {
            let sys = lp_from_json(&doc).map_err(|e| fail("leontief", e, raw))?;
            lp(&sys, raw).map(|v| (0, v, String::new()))
        }
        Command::Bridge(_) => {
            let sys = lp_from_json(&doc).map_err(|e| fail("leontief", e, raw))?;
            bridge(&sys, raw)
        }
        _ => {
            let ws = weights_from_json(&doc).map_err(|e| fail("weights", e, raw))?;
            match cmd {
                Command::Analyze(_) => analyze(&ws, raw, verbose),
                Command::Decompose(_) => decompose(&ws, raw).map(|v| (0, v, String::new())),
                Command::Faces(_) => faces(&ws, raw, verbose).map(|v| (0, v, String::new())),
                Command::Homology(_) => homology(&ws, raw).map(|v| (0, v, String::new())),
                _ => unreachable!("handled above"),
            }
        }
    }
}

/// Both routes, or the bug-report reply when they disagree.
fn both_routes(
    ws: &WeightSystem,
    raw: &str,
) -> Result<Result<(OrbitVerdict, OrbitVerdict), Reply>, Failure> {
    let structural = classify_structural(ws).map_err(|e| fail("classify", e, raw))?;
    let pseudo = classify_pseudomanifold(ws).map_err(|e| fail("classify", e, raw))?;
    if (structural.kind, structural.model_dim) == (pseudo.kind, pseudo.model_dim) {
        return Ok(Ok((structural, pseudo)));
    }
    let dump = json!({
        "bug_report": {
            "reason": "classifier routes disagree",
            "input": ws.to_json(),
            "structural": structural.to_json(),
            "pseudomanifold": pseudo.to_json(),
            "version": env!("CARGO_PKG_VERSION"),
        }
    });
    Ok(Err((
        EXIT_ROUTE_DISAGREEMENT,
        dump.clone(),
        to_pretty(&dump),
    )))
}

fn exit_code(kind: VerdictKind) -> i32 {
    match kind {
        VerdictKind::ClosedManifold => 0,
        VerdictKind::ManifoldWithBoundary => 1,
        VerdictKind::NotManifold => 2,
    }
}

fn analyze(ws: &WeightSystem, raw: &str, verbose: bool) -> Result<Reply, Failure> {
    let (structural, pseudo) = match both_routes(ws, raw)? {
        Ok(pair) => pair,
        Err(reply) => return Ok(reply),
    };
    let mut value = json!({
        "input": ws.to_json(),
        "verdict": structural.to_json(),
        "routes": {
            "agree": true,
            "structural": structural.kind.to_string(),
            "pseudomanifold": pseudo.kind.to_string(),
            "ridge_witness": pseudo.witness,
        },
    });
    if verbose {
        let k = independence_complex(ws).map_err(|e| fail("classify", e, raw))?;
        value["independence_complex"] = k.to_json();
    }
    Ok((exit_code(structural.kind), value, String::new()))
}

fn decompose(ws: &WeightSystem, raw: &str) -> Result<Value, Failure> {
    let v = classify_structural(ws).map_err(|e| fail("classify", e, raw))?;
    let Some(lt) = &v.leontief else {
        let w = v
            .witness
            .as_ref()
            .map(|w| format!(" (component through {:?})", w.flat))
            .unwrap_or_default();
        return Err(fail(
            "classify",
            format!("not a Leontief representation{w}"),
            raw,
        ));
    };
    let mut value = lt.to_json();
    value["input"] = ws.to_json();
    value["totally"] = json!(lt.is_totally());
    value["model_dim"] = json!(v.model_dim);
    value["kind"] = json!(v.kind.to_string());
    value["complexity"] = json!(complexity(ws));
    value["effective_reduction"] = json!(v.reduction);
    Ok(value)
}

fn faces(ws: &WeightSystem, raw: &str, verbose: bool) -> Result<Value, Failure> {
    let poset = face_poset(ws).map_err(|e| fail("poset", e, raw))?;
    let verdict = classify_structural(ws).map_err(|e| fail("classify", e, raw))?;
    let mut value = json!({
        "input": ws.to_json(),
        "cardinality": poset.len(),
        "leontief": null,
        "face_types": null,
    });
    let encoding = match &verdict.leontief {
        Some(lt) => {
            let iso = product_structure_check(ws, lt).map_err(|e| fail("poset", e, raw))?;
            let census = face_type_census(ws, lt).map_err(|e| fail("poset", e, raw))?;
            value["leontief"] = lt.to_json();
            let product = poset_cardinality(lt);
            value["product_cardinality"] =
                u64::try_from(product).map_or_else(|_| json!(product.to_string()), |n| json!(n));
            value["face_types"] = census
                .into_iter()
                .map(|((d, blocks, l), count)| json!({ "d": d, "blocks": blocks, "l": l, "count": count }))
                .collect();
            Some(iso)
        }
        None => None,
    };
    value["poset"] = poset.to_json(encoding.as_ref());
    if !verbose {
        value["poset"]
            .as_object_mut()
            .expect("object")
            .remove("covers");
    }
    Ok(value)
}

fn homology(ws: &WeightSystem, raw: &str) -> Result<Value, Failure> {
    let k = independence_complex(ws).map_err(|e| fail("classify", e, raw))?;
    let pm = k
        .pseudomanifold_status()
        .map_err(|e| fail("complex", e, raw))?;
    Ok(json!({
        "input": ws.to_json(),
        "complex": k.to_json(),
        "reduced_homology": k.reduced_homology(),
        "pseudomanifold": pm,
        "minimal_non_faces": k.minimal_non_faces(),
    }))
}

fn lp(sys: &LeontiefSystem, raw: &str) -> Result<Value, Failure> {
    let status = check_leontief(sys).map_err(|e| fail("leontief", e, raw))?;
    let report = enumerate_vertices(sys).map_err(|e| fail("leontief", e, raw))?;
    let mut value = json!({
        "input": sys.to_json(),
        "leontief": status,
        "polyhedron": report.to_json(),
        "nerve": null,
    });
    if report.feasible {
        match nerve_complex(sys) {
            Ok(n) => value["nerve"] = json!(n.facets()),
            Err(e) => value["nerve_error"] = json!(e.to_string()),
        }
    }
    Ok(value)
}

fn bridge(sys: &LeontiefSystem, raw: &str) -> Result<Reply, Failure> {
    let status = check_leontief(sys).map_err(|e| fail("leontief", e, raw))?;
    let report = enumerate_vertices(sys).map_err(|e| fail("leontief", e, raw))?;
    let ws = restrict_standard_weights(sys);
    let (verdict, _) = match both_routes(&ws, raw)? {
        Ok(pair) => pair,
        Err(reply) => return Ok(reply),
    };
    let agreement =
        (status == LeontiefStatus::Totally) == (verdict.kind == VerdictKind::ClosedManifold);
    let value = json!({
        "input": sys.to_json(),
        "leontief": status,
        "restricted_weights": ws.to_json(),
        "orbit_verdict": verdict.to_json(),
        "agreement": agreement,
        "nondegenerate": report.feasible && report.simple,
    });
    Ok((0, value, String::new()))
}

fn run_selfcheck(budget: f64, inject_fault: bool) -> Reply {
    let fault = if inject_fault {
        Fault::MislabelClosed
    } else {
        Fault::None
    };
    let budget = Duration::from_secs_f64(budget.max(0.0));
    let report = selfcheck(budget, fault);
    let code = if report.passed() { 0 } else { 1 };
    let value = json!({
        "passed": report.passed(),
        "coverage": report.coverage,
        "complete": report.complete,
        "sweep": report.sweep,
        "suites": report.suites,
    });
    (code, value, String::new())
}

fn headline(cmd: &Command, v: &Value) -> Option<String> {
    let s = |x: &Value| x.as_str().map(str::to_string);
    match cmd {
        _ if v.get("bug_report").is_some() => Some("BUG: classifier routes disagree".into()),
        Command::Analyze(_) => s(&v["verdict"]["model"]),
        Command::Decompose(_) => Some(format!(
            "Leontief type d = {}, blocks = {}, l = {}",
            v["d"], v["blocks"], v["l"]
        )),
        Command::Faces(_) => Some(format!("{} faces", v["cardinality"])),
        Command::Homology(_) => {
            let groups: Vec<String> = v["reduced_homology"]
                .as_array()?
                .iter()
                .filter(|g| {
                    g["free_rank"] != 0 || g["torsion"].as_array().is_some_and(|t| !t.is_empty())
                })
                .map(|g| {
                    let mut parts = Vec::new();
                    if g["free_rank"] != 0 {
                        parts.push(format!("Z^{}", g["free_rank"]));
                    }
                    for t in g["torsion"].as_array().into_iter().flatten() {
                        parts.push(format!("Z/{t}"));
                    }
                    format!("H~_{} = {}", g["degree"], parts.join(" + "))
                })
                .collect();
            Some(if groups.is_empty() {
                "reduced homology vanishes".into()
            } else {
                groups.join(", ")
            })
        }
        Command::Lp(_) => s(&v["leontief"]["status"]).map(|st| format!("Leontief status: {st}")),
        Command::Bridge(_) => Some(format!(
            "{} vs {}: {}",
            v["leontief"]["status"].as_str().unwrap_or("?"),
            v["orbit_verdict"]["kind"].as_str().unwrap_or("?"),
            if v["agreement"] == true {
                "agree"
            } else {
                "DISAGREE"
            }
        )),
        Command::Selfcheck { .. } => Some(format!(
            "selfcheck {} (sweep coverage {:.4}{})",
            if v["passed"] == true {
                "passed"
            } else {
                "FAILED"
            },
            v["coverage"].as_f64().unwrap_or(0.0),
            if v["complete"] == true {
                ", complete"
            } else {
                ", truncated"
            }
        )),
    }
}

fn render_text(cmd: &Command, v: &Value) -> String {
    let mut out = String::new();
    if let Some(h) = headline(cmd, v) {
        out.push_str(&h);
        out.push('\n');
    }
    render_value(v, 0, &mut out);
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.is_empty(),
        Value::Array(a) => a.iter().all(|x| !x.is_object()) && a.len() <= 40,
        _ => true,
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_flat(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_value(x, indent + 1, out);
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_value(x, indent + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str], input: &str) -> Output {
        let input = input.to_string();
        run_with(
            std::iter::once("torbit").chain(args.iter().copied()),
            move || Ok(input),
        )
    }

    const TRIANGLE: &str =
        r#"{"lattice_rank": 2, "weights": [[1,0],[0,1],[1,1]], "trivial_dim": 0}"#;

    #[test]
    fn analyze_exit_codes() {
        let out = run(&["analyze"], TRIANGLE);
        assert_eq!(out.code, 0);
        assert!(
            out.stdout.starts_with("closed manifold ℝ⁴\n"),
            "{}",
            out.stdout
        );
        let basis = r#"{"lattice_rank": 2, "weights": [[1,0],[0,1]], "trivial_dim": 0}"#;
        assert_eq!(run(&["analyze"], basis).code, 1);
        let u24 = r#"{"lattice_rank": 2, "weights": [[1,0],[0,1],[1,1],[1,2]], "trivial_dim": 0}"#;
        let out = run(&["--json", "analyze"], u24);
        assert_eq!(out.code, 2);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert!(v["verdict"]["witness"].is_object());
    }

    #[test]
    fn inline_source_and_errors() {
        assert_eq!(run(&["analyze", TRIANGLE], "").code, 0);
        let out = run(
            &["decompose"],
            r#"{"lattice_rank": 1, "weights": [[1,2]], "trivial_dim": 0}"#,
        );
        assert_eq!(out.code, EXIT_ERROR);
        assert!(
            out.stderr.contains("[weights]") && out.stderr.contains("input:"),
            "{}",
            out.stderr
        );
        assert_eq!(run(&["bogus"], "").code, EXIT_ERROR);
        assert_eq!(run(&["--help"], "").code, 0);
    }

    #[test]
    fn json_output_is_stable() {
        let a = run(&["--json", "faces"], TRIANGLE);
        let b = run(&["--json", "faces"], TRIANGLE);
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a.stdout).unwrap();
        assert_eq!(v["cardinality"], 5);
    }
}
