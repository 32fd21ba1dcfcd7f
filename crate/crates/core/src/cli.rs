//! Command-line front end. [`run`] takes the argument list and output
//! streams so it can be driven in-process by tests.
//!
//! Exit codes: `0` success, `2` bad input or unmet precondition, `3` two
//! methods that must agree did not.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::betti::{
    betti_recursive, invert_graded, invert_multigraded, multigraded_betti_closed, BettiJson,
    BettiTable, GradedBetti,
};
use crate::code::{parse_code, NeuralCode, MAX_NEURONS};
use crate::error::Error;
use crate::graphs::{
    all_elimination_orderings, chordality, chordless_cycle, parse_graph, relationship_graph,
    MAX_ENUMERATION_VERTICES,
};
use crate::oracle::{betti_table_oracle_with, OracleOptions};
use crate::piercing::{
    build_code, is_inductively_pierced, is_inductively_pierced_fast, parse_order,
    piercing_profile, random_pierced_code, Certificate, PiercingOrder, PiercingProfile,
};
use crate::polarize::{parse_ideal, polarized_ideal, SquarefreeIdeal};
use crate::pseudomonomial::canonical_form;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pierce", version, about = "Neural codes, piercings and Betti numbers")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Wrap the output in a report with the command, an input digest and
    /// warnings.
    #[arg(long, global = true)]
    pub report: bool,
    /// Worker threads for the homology sweep.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for `generate`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Reject inputs with more neurons than this.
    #[arg(long = "max-n", global = true, default_value_t = MAX_NEURONS)]
    pub max_n: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical form of the neural ideal.
    Cf { file: PathBuf },
    /// Polarized neural ideal.
    Polarize { file: PathBuf },
    /// General relationship graph (quadratic canonical forms only).
    Graph {
        file: PathBuf,
        /// Graphviz output.
        #[arg(long)]
        dot: bool,
    },
    /// Decide inductive piercedness and report an order and its profile.
    Pierced {
        file: PathBuf,
        /// Cross-check the definitional search against the canonical-form
        /// and chordality test.
        #[arg(long)]
        certify: bool,
    },
    /// Betti table of the polarized neural ideal.
    Betti {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        /// Read a monomial list instead of a code (oracle only).
        #[arg(long)]
        ideal: bool,
    },
    /// Piercing counts from a Betti table (JSON, or a plain list of
    /// `β_{w,w+1}` for `w = 1, 2, ...` with `--n`).
    Invert {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Chordality and simplicial-degree profiles of a graph.
    Chordal { file: PathBuf },
    /// A random inductively pierced code, or the replay of a step file.
    Generate {
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long)]
        steps: Option<PathBuf>,
    },
    /// Parse a code and report silent or duplicate neurons.
    Validate { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Formula,
    Recursion,
    Oracle,
    All,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Mismatch(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Outcome {
    text: String,
    json: Value,
    warnings: Vec<String>,
}

/// Deterministic record of one invocation.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub output: Value,
    pub warnings: Vec<String>,
}

struct Context {
    opts: Cli,
    inputs: Vec<u8>,
}

impl Context {
    fn read(&mut self, path: &Path) -> CliResult<String> {
        let mut text = String::new();
        if path == Path::new("-") {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        } else {
            text = fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        }
        self.inputs.extend_from_slice(text.as_bytes());
        self.inputs.push(0);
        Ok(text)
    }

    fn check_n(&self, n: usize) -> CliResult<()> {
        if n > self.opts.max_n {
            return Err(CliError::Input(format!(
                "{n} neurons exceeds --max-n {}",
                self.opts.max_n
            )));
        }
        Ok(())
    }

    fn load_code(&mut self, path: &Path, warnings: &mut Vec<String>) -> CliResult<NeuralCode> {
        let text = self.read(path)?;
        let parsed = parse_code(&text)?;
        if parsed.inserted_empty {
            warnings.push("added the empty codeword".into());
        }
        self.check_n(parsed.code.n())?;
        Ok(parsed.code)
    }

    fn oracle_options(&self) -> OracleOptions {
        OracleOptions {
            threads: self.opts.threads,
            ..OracleOptions::default()
        }
    }
}

/// Parses `args` (including the program name), runs the command, and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let opts = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let name = command_name(&opts.command).to_string();
    let (json, wrap) = (opts.json, opts.report);
    let mut ctx = Context {
        opts,
        inputs: Vec::new(),
    };
    let result = dispatch(&mut ctx);
    match result {
        Ok(outcome) => {
            if wrap {
                let report = RunReport {
                    command: name,
                    inputs_digest: format!("{:x}", Sha256::digest(&ctx.inputs)),
                    output: outcome.json,
                    warnings: outcome.warnings,
                };
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                for w in &outcome.warnings {
                    let _ = writeln!(err, "warning: {w}");
                }
                if json {
                    let _ = writeln!(out, "{}", serde_json::to_string(&outcome.json).unwrap());
                } else {
                    let _ = write!(out, "{}", outcome.text);
                }
            }
            EXIT_OK
        }
        Err(CliError::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(CliError::Mismatch(msg)) => {
            let _ = writeln!(err, "mismatch: {msg}");
            EXIT_MISMATCH
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Cf { .. } => "cf",
        Command::Polarize { .. } => "polarize",
        Command::Graph { .. } => "graph",
        Command::Pierced { .. } => "pierced",
        Command::Betti { .. } => "betti",
        Command::Invert { .. } => "invert",
        Command::Chordal { .. } => "chordal",
        Command::Generate { .. } => "generate",
        Command::Validate { .. } => "validate",
    }
}

fn dispatch(ctx: &mut Context) -> CliResult<Outcome> {
    let command = std::mem::replace(&mut ctx.opts.command, Command::Validate { file: PathBuf::new() });
    match command {
        Command::Cf { file } => cmd_cf(ctx, &file),
        Command::Polarize { file } => cmd_polarize(ctx, &file),
        Command::Graph { file, dot } => cmd_graph(ctx, &file, dot),
        Command::Pierced { file, certify } => cmd_pierced(ctx, &file, certify),
        Command::Betti { file, method, ideal } => cmd_betti(ctx, &file, method, ideal),
        Command::Invert { file, n } => cmd_invert(ctx, &file, n),
        Command::Chordal { file } => cmd_chordal(ctx, &file),
        Command::Generate { n, kmax, steps } => cmd_generate(ctx, n, kmax, steps.as_deref()),
        Command::Validate { file } => cmd_validate(ctx, &file),
    }
}

fn lines(items: &[String]) -> String {
    items.iter().map(|s| format!("{s}\n")).collect()
}

fn cmd_cf(ctx: &mut Context, file: &Path) -> CliResult<Outcome> {
    let mut warnings = Vec::new();
    let code = ctx.load_code(file, &mut warnings)?;
    let rendered = canonical_form(&code).render();
    Ok(Outcome {
        text: lines(&rendered),
        json: json!(rendered),
        warnings,
    })
}

fn cmd_polarize(ctx: &mut Context, file: &Path) -> CliResult<Outcome> {
    let mut warnings = Vec::new();
    let code = ctx.load_code(file, &mut warnings)?;
    let ideal = polarized_ideal(&canonical_form(&code));
    Ok(Outcome {
        text: format!("{}\n", ideal.render()),
        json: json!(ideal.render_list()),
        warnings,
    })
}

fn cmd_graph(ctx: &mut Context, file: &Path, dot: bool) -> CliResult<Outcome> {
    let mut warnings = Vec::new();
    let code = ctx.load_code(file, &mut warnings)?;
    let graph = relationship_graph(&polarized_ideal(&canonical_form(&code)))?;
    Ok(Outcome {
        text: if dot { graph.to_dot() } else { graph.to_edge_list() },
        json: json!({ "n": graph.n(), "edges": graph.edges() }),
        warnings,
    })
}

fn order_labels(order: &PiercingOrder) -> String {
    let labels: Vec<String> = order.neurons().iter().map(|i| i.to_string()).collect();
    labels.join(",")
}

fn profile_json(profile: &PiercingProfile) -> Value {
    let jkl: Vec<[u64; 3]> = profile
        .entries()
        .into_iter()
        .map(|((k, l), c)| [k as u64, l as u64, c])
        .collect();
    json!({ "jk": profile.jk(), "jkl": jkl })
}

fn certificate_text(c: &Certificate) -> String {
    match c {
        Certificate::NotQuadratic(bad) => {
            let items: Vec<String> = bad.iter().map(|f| f.to_string()).collect();
            format!("canonical form not quadratic: {}", items.join(", "))
        }
        Certificate::ChordlessCycle(cycle) => {
            let items: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
            format!("chordless {}-cycle {}", cycle.len(), items.join("-"))
        }
        Certificate::Chordal(ord) => {
            let items: Vec<String> = ord.ordering.iter().map(|v| v.to_string()).collect();
            format!("chordal, elimination order {}", items.join(","))
        }
    }
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::NotQuadratic(bad) => {
            json!({ "not_quadratic": bad.iter().map(|f| f.to_string()).collect::<Vec<_>>() })
        }
        Certificate::ChordlessCycle(cycle) => json!({ "chordless_cycle": cycle }),
        Certificate::Chordal(ord) => {
            json!({ "elimination_order": ord.ordering, "simplicial_degrees": ord.degrees })
        }
    }
}

fn cmd_pierced(ctx: &mut Context, file: &Path, certify: bool) -> CliResult<Outcome> {
    let mut warnings = Vec::new();
    let code = ctx.load_code(file, &mut warnings)?;
    let order = is_inductively_pierced(&code)?;
    let fast = is_inductively_pierced_fast(&code)?;
    if certify {
        if fast.pierced != order.is_some() {
            return Err(CliError::Mismatch(format!(
                "search says {}, canonical form and graph say {}",
                order.is_some(),
                fast.pierced
            )));
        }
        if let Some(order) = &order {
            let rebuilt = build_code(&order.steps)?;
            if rebuilt.words() != code.words() {
                return Err(CliError::Mismatch("replaying the order does not rebuild the code".into()));
            }
        }
    }
    let Some(order) = order else {
        let reason = certificate_text(&fast.certificate);
        return Ok(Outcome {
            text: format!("not inductively pierced ({reason})\n"),
            json: json!({
                "pierced": false,
                "certificate": certificate_json(&fast.certificate),
            }),
            warnings,
        });
    };
    let profile = piercing_profile(&order)?;
    let head = if order.is_empty() {
        "inductively pierced (trivial code)\n".to_string()
    } else {
        format!(
            "inductively pierced; order {}; {}\n",
            order_labels(&order),
            profile.render_marginals()
        )
    };
    let mut text = head;
    text.push_str(&order.render());
    if !order.is_empty() {
        text.push_str(&format!("profile: {}\n", profile.render_table()));
    }
    Ok(Outcome {
        text,
        json: json!({
            "pierced": true,
            "order": order.steps,
            "profile": profile_json(&profile),
            "certificate": certificate_json(&fast.certificate),
        }),
        warnings,
    })
}

fn render_betti(table: &BettiTable, methods: &[&str]) -> String {
    let mut text = format!("methods: {}\n", methods.join(", "));
    text.push_str(&table.graded().render_triangle());
    text.push_str("multigraded:\n");
    for ((w, u, v), c) in table.entries() {
        text.push_str(&format!("  b[{w};{u},{v}] = {c}\n"));
    }
    text
}

fn betti_outcome(table: BettiTable, methods: &[&str], warnings: Vec<String>) -> Outcome {
    Outcome {
        text: render_betti(&table, methods),
        json: serde_json::to_value(table.to_json()).expect("table serializes"),
        warnings,
    }
}

fn cmd_betti(ctx: &mut Context, file: &Path, method: Method, ideal_input: bool) -> CliResult<Outcome> {
    let mut warnings = Vec::new();
    if ideal_input {
        if !matches!(method, Method::Oracle | Method::All) {
            return Err(CliError::Input("formulas need a code; use --method oracle".into()));
        }
        let text = ctx.read(file)?;
        let ideal: SquarefreeIdeal = parse_ideal(&text)?;
        ctx.check_n(ideal.n())?;
        let table = betti_table_oracle_with(&ideal, &ctx.oracle_options())?;
        return Ok(betti_outcome(table, &["oracle"], warnings));
    }

    let code = ctx.load_code(file, &mut warnings)?;
    let ideal = polarized_ideal(&canonical_form(&code));
    let wants_formula = method != Method::Oracle;
    let order = if wants_formula {
        let found = match code.validate().into_result() {
            Ok(()) => is_inductively_pierced(&code)?,
            Err(e) if method == Method::All => {
                warnings.push(format!("formulas skipped: {e}"));
                return finish_betti(ctx, &ideal, Vec::new(), warnings);
            }
            Err(e) => return Err(e.into()),
        };
        if found.is_none() {
            if method != Method::All {
                return Err(CliError::Input(
                    "code is not inductively pierced; only --method oracle applies".into(),
                ));
            }
            warnings.push("formulas skipped: code is not inductively pierced".into());
        }
        found
    } else {
        None
    };

    let mut results: Vec<(&'static str, BettiTable)> = Vec::new();
    if let Some(order) = &order {
        if matches!(method, Method::Formula | Method::All) {
            results.push(("formula", multigraded_betti_closed(&piercing_profile(order)?)?));
        }
        if matches!(method, Method::Recursion | Method::All) {
            results.push(("recursion", betti_recursive(order)?));
        }
    }
    if matches!(method, Method::Oracle | Method::All) {
        return finish_betti(ctx, &ideal, results, warnings);
    }
    finish_tables(results, warnings)
}

fn finish_betti(
    ctx: &Context,
    ideal: &SquarefreeIdeal,
    mut results: Vec<(&'static str, BettiTable)>,
    warnings: Vec<String>,
) -> CliResult<Outcome> {
    results.push(("oracle", betti_table_oracle_with(ideal, &ctx.oracle_options())?));
    finish_tables(results, warnings)
}

fn finish_tables(mut results: Vec<(&'static str, BettiTable)>, warnings: Vec<String>) -> CliResult<Outcome> {
    let (first_name, first) = &results[0];
    for (name, table) in &results[1..] {
        if table != first {
            return Err(CliError::Mismatch(format!(
                "{first_name} and {name} disagree:\n{}\n{}",
                render_betti(first, &[first_name]),
                render_betti(table, &[name])
            )));
        }
    }
    let names: Vec<&str> = results.iter().map(|(n, _)| *n).collect();
    let table = results.swap_remove(0).1;
    Ok(betti_outcome(table, &names, warnings))
}

fn parse_strand(text: &str) -> CliResult<Vec<u64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| CliError::Input(format!("not a count: {t:?}")))
        })
        .collect()
}

fn jk_text(jk: &[u64]) -> String {
    let items: Vec<String> = jk.iter().map(|c| c.to_string()).collect();
    format!("j=({})", items.join(","))
}

fn cmd_invert(ctx: &mut Context, file: &Path, n: Option<usize>) -> CliResult<Outcome> {
    let text = ctx.read(file)?;
    let trimmed = text.trim_start();
    let warnings = Vec::new();
    if trimmed.starts_with('{') {
        let parsed: BettiJson = serde_json::from_str(trimmed)
            .map_err(|e| CliError::Input(format!("Betti JSON: {e}")))?;
        if let Some(n) = n {
            if n != parsed.n {
                return Err(CliError::Input(format!("--n {n} disagrees with n={} in the file", parsed.n)));
            }
        }
        ctx.check_n(parsed.n)?;
        if !parsed.multigraded.is_empty() {
            let profile = invert_multigraded(&parsed.multigraded_table())?;
            let graded = invert_graded(&parsed.multigraded_table().graded(), parsed.n)?;
            if graded != profile.jk() {
                return Err(CliError::Mismatch(format!(
                    "graded inversion gives {graded:?}, multigraded gives {:?}",
                    profile.jk()
                )));
            }
            return Ok(Outcome {
                text: format!("{}\n{}\n", jk_text(&profile.jk()), profile.render_table()),
                json: profile_json(&profile),
                warnings,
            });
        }
        let jk = invert_graded(&parsed.graded_table(), parsed.n)?;
        return Ok(Outcome {
            text: format!("{}\n", jk_text(&jk)),
            json: json!({ "jk": jk }),
            warnings,
        });
    }
    let n = n.ok_or_else(|| CliError::Input("a plain list of Betti numbers needs --n".into()))?;
    ctx.check_n(n)?;
    let strand = parse_strand(&text)?;
    let jk = invert_graded(&GradedBetti::from_linear_strand(n, &strand), n)?;
    Ok(Outcome {
        text: format!("{}\n", jk_text(&jk)),
        json: json!({ "jk": jk }),
        warnings,
    })
}

fn multiset_text(d: &[usize]) -> String {
    let items: Vec<String> = d.iter().map(|c| c.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn cmd_chordal(ctx: &mut Context, file: &Path) -> CliResult<Outcome> {
    let text = ctx.read(file)?;
    let graph = parse_graph(&text)?;
    let warnings = Vec::new();
    let Some(ord) = chordality(&graph) else {
        let cycle = chordless_cycle(&graph).unwrap_or_default();
        let items: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
        return Ok(Outcome {
            text: format!("not chordal (chordless cycle {})\n", items.join("-")),
            json: json!({ "chordal": false, "chordless_cycle": cycle }),
            warnings,
        });
    };
    let profile = ord.degree_multiset();
    if graph.n() > MAX_ENUMERATION_VERTICES {
        return Ok(Outcome {
            text: format!(
                "chordal; profile {} (orderings not enumerated above {MAX_ENUMERATION_VERTICES} vertices)\n",
                multiset_text(&profile)
            ),
            json: json!({ "chordal": true, "profile": profile, "orderings": Value::Null }),
            warnings,
        });
    }
    let mut count = 0usize;
    let mut seen = BTreeSet::new();
    for o in all_elimination_orderings(&graph)? {
        count += 1;
        seen.insert(o.degree_multiset());
    }
    if seen.len() != 1 || !seen.contains(&profile) {
        let all: Vec<String> = seen.iter().map(|d| multiset_text(d)).collect();
        return Err(CliError::Mismatch(format!(
            "elimination orderings give different profiles: {}",
            all.join(" ")
        )));
    }
    Ok(Outcome {
        text: format!(
            "chordal; profile {} across all {count} orderings\n",
            multiset_text(&profile)
        ),
        json: json!({ "chordal": true, "profile": profile, "orderings": count }),
        warnings,
    })
}

fn code_json(code: &NeuralCode) -> Value {
    let words: Vec<Vec<usize>> = code
        .display_order()
        .iter()
        .map(|w| w.neurons().collect())
        .collect();
    json!({ "n": code.n(), "codewords": words })
}

fn cmd_generate(ctx: &mut Context, n: Option<usize>, kmax: usize, steps: Option<&Path>) -> CliResult<Outcome> {
    let (order, code) = match (steps, n) {
        (Some(path), _) => {
            let text = ctx.read(path)?;
            let order = parse_order(&text)?;
            let code = build_code(&order.steps)?;
            (order, code)
        }
        (None, Some(n)) => {
            ctx.check_n(n)?;
            random_pierced_code(n, kmax, ctx.opts.seed)?
        }
        (None, None) => return Err(CliError::Input("give a neuron count or --steps".into())),
    };
    ctx.check_n(code.n())?;
    let mut text = code.to_code_file();
    for step in &order.steps {
        text.push_str(&format!("# {step}\n"));
    }
    Ok(Outcome {
        text,
        json: json!({ "code": code_json(&code), "order": order.steps }),
        warnings: Vec::new(),
    })
}

fn cmd_validate(ctx: &mut Context, file: &Path) -> CliResult<Outcome> {
    let mut warnings = Vec::new();
    let code = ctx.load_code(file, &mut warnings)?;
    let diag = code.validate();
    let mut text = format!("n={} codewords={}\n", code.n(), code.len());
    if !diag.silent_neurons.is_empty() {
        let items: Vec<String> = diag.silent_neurons.iter().map(|i| i.to_string()).collect();
        text.push_str(&format!("silent neurons: {}\n", items.join(",")));
    }
    if !diag.duplicate_pairs.is_empty() {
        let items: Vec<String> = diag
            .duplicate_pairs
            .iter()
            .map(|(a, b)| format!("{a}={b}"))
            .collect();
        text.push_str(&format!("duplicate neurons: {}\n", items.join(" ")));
    }
    if diag.is_clean() {
        text.push_str("ok\n");
        Ok(Outcome {
            text,
            json: json!({ "n": code.n(), "codewords": code.len(), "silent": [], "duplicates": [] }),
            warnings,
        })
    } else {
        Err(CliError::Input(text.trim_end().replace('\n', "; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["pierce"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&[]).0, EXIT_INPUT);
        assert_eq!(run_args(&["cf", "/nonexistent/file.code"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn generate_one_neuron() {
        let (code, out, _) = run_args(&["generate", "1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("n=1\n0\n1\n"), "{out}");
    }
}
