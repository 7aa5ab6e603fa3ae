//! Command-line front end: parse → cone → basis → levelize → bound → verify.
//!
//! Results go to standard output (JSON with `--json`, an indented text
//! rendering of the same value otherwise); diagnostics go to standard
//! error.  Exit codes: 0 success, 1 validation failure, 2 usage error,
//! 3 resource budget exceeded.  The input path `-` reads standard input.

use std::io::Read as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::bounds::{per_polymer_bound, tbn_bound, BoundMethod};
use crate::hilbert::{build_cone, hilbert_basis, GeneratingSet, HilbertConfig, HilbertError};
use crate::levelize::{check_stable, concentrations, levelize, LevelAssignment, LevelizeError};
use crate::model::{check_on_target, OnTargetSpec, System};
use crate::parse::parse;
use crate::ratio::{parse_ratio, pow_decimal, render_ratio, to_f64};
use crate::scenarios::{
    gen_and_gate, gen_example_51, gen_translator, translator_leak_bound, AndGateInputs,
    TranslatorMode, TranslatorParams,
};
use crate::verify::{check_balance, enumerate_canonical, numeric_equilibrium, VerifyError};

/// Parsed invocation: one subcommand plus the shared output toggle.
#[derive(Debug, Parser)]
#[command(
    name = "eqc",
    version,
    about = "Exact equilibrium-exponent toolkit for monomer-polymer systems"
)]
pub struct RunConfig {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON instead of indented text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a system file and its on-target declarations.
    Check {
        /// System file, or `-` for standard input.
        input: String,
    },
    /// Print the generating set of the canonical-reaction cone.
    Hilbert {
        input: String,
    },
    /// Run the level sweep and print the extended exponent map.
    Levelize {
        input: String,
    },
    /// Per-polymer lower bound on an exponent, or the entropy bound with --tbn.
    Bound {
        input: String,
        /// Off-target polymer to bound (required unless --tbn).
        #[arg(long)]
        polymer: Option<String>,
        /// basis | lp | enum
        #[arg(long, default_value = "basis")]
        method: String,
        /// Level at which to bound (1 = first round).
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Total generator-combination size for the enum method.
        #[arg(long, default_value_t = 4)]
        max_combination: u64,
        /// Whole-system entropy bound instead of a per-polymer one.
        #[arg(long)]
        tbn: bool,
    },
    /// Exact concentration table at a rational base.
    Concentrations {
        input: String,
        /// Base c in (0,1), e.g. `1/100` or `0.01`.
        #[arg(long)]
        base: String,
        /// Significant digits for the decimal renderings.
        #[arg(long, default_value_t = 12)]
        digits: u32,
    },
    /// Verify detailed balance symbolically; add --numeric to also recover
    /// the equilibrium from conserved totals.
    Verify {
        input: String,
        /// Base c in (0,1); required with --numeric.
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        numeric: bool,
        /// Relative tolerance for the numeric recovery.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Emit a ready-made scenario in the system file format.
    Gen {
        #[command(subcommand)]
        scenario: GenScenario,
    },
    /// Enumerate canonical reactions by brute force.
    Oracle {
        input: String,
        /// Cap on the total number of reactant polymers.
        #[arg(long, default_value_t = 4)]
        max_reactants: u64,
    },
    /// Closed-form leak bound for the with-input translator regime.
    LeakBound {
        /// Redundancy N (signal domains per fuel).
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        layers: u64,
        /// Base concentration c in (0,1).
        #[arg(long)]
        base: f64,
        /// Fuel excess y in (0, c/4].
        #[arg(long)]
        excess: f64,
    },
}

#[derive(Debug, Subcommand)]
enum GenScenario {
    /// Three-species cascade with off-target exponents 2, 3, 4.
    Example51 {
        /// Write to this path (plus a `.meta.json` sidecar) instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// AND gate computing C from X, Y, Z.
    AndGate {
        /// none | b
        #[arg(long, default_value = "none")]
        inputs: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Catalytic translator cascade with redundancy N.
    Translator {
        /// Redundancy N (at least 2).
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        layers: u64,
        /// uniform | with_input
        #[arg(long, default_value = "uniform")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    /// Exit 1: the input is well-formed but fails a semantic check.
    Validation(String),
    /// Exit 2: the invocation itself is wrong.
    Usage(String),
    /// Exit 3: a configured resource budget was exhausted.
    Budget(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Usage(m) | CliError::Budget(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<HilbertError> for CliError {
    fn from(e: HilbertError) -> Self {
        CliError::Budget(e.to_string())
    }
}

impl From<LevelizeError> for CliError {
    fn from(e: LevelizeError) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Entry point: parse arguments, dispatch, translate errors to exit codes.
pub fn run() {
    let cfg = RunConfig::parse();
    if let Err(e) = dispatch(&cfg) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}

fn dispatch(cfg: &RunConfig) -> Result<(), CliError> {
    match &cfg.command {
        Command::Check { input } => cmd_check(cfg, input),
        Command::Hilbert { input } => cmd_hilbert(cfg, input),
        Command::Levelize { input } => cmd_levelize(cfg, input),
        Command::Bound { input, polymer, method, level, max_combination, tbn } => {
            cmd_bound(cfg, input, polymer.as_deref(), method, *level, *max_combination, *tbn)
        }
        Command::Concentrations { input, base, digits } => {
            cmd_concentrations(cfg, input, base, *digits)
        }
        Command::Verify { input, base, numeric, tol } => {
            cmd_verify(cfg, input, base.as_deref(), *numeric, *tol)
        }
        Command::Gen { scenario } => cmd_gen(cfg, scenario),
        Command::Oracle { input, max_reactants } => cmd_oracle(cfg, input, *max_reactants),
        Command::LeakBound { n, layers, base, excess } => {
            cmd_leak_bound(cfg, *n, *layers, *base, *excess)
        }
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Validation(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("reading {path}: {e}")))
    }
}

fn load(path: &str) -> Result<(System, OnTargetSpec), CliError> {
    let text = read_input(path)?;
    let file = parse(&text).map_err(|e| CliError::Validation(e.to_string()))?;
    let spec = file
        .spec
        .ok_or_else(|| CliError::Validation("input has no on-target declarations".to_string()))?;
    Ok((file.system, spec))
}

/// The basis-vector cap, overridable through `EQC_BASIS_BUDGET`.
fn basis_config() -> Result<HilbertConfig, CliError> {
    let mut config = HilbertConfig::default();
    if let Ok(raw) = std::env::var("EQC_BASIS_BUDGET") {
        config.max_vectors = raw.trim().parse().map_err(|_| {
            CliError::Usage(format!("EQC_BASIS_BUDGET must be a positive integer, got `{raw}`"))
        })?;
    }
    Ok(config)
}

fn compute_basis(system: &System, spec: &OnTargetSpec) -> Result<GeneratingSet, CliError> {
    let cone = build_cone(system, spec);
    Ok(hilbert_basis(&cone, &basis_config()?)?)
}

/// Renders a JSON value as indented `key: value` text.  Both output modes
/// draw from the same serialized value.
fn render_text(value: &serde_json::Value) -> String {
    fn scalar(v: &serde_json::Value) -> Option<String> {
        match v {
            serde_json::Value::Null => Some("null".to_string()),
            serde_json::Value::Bool(b) => Some(b.to_string()),
            serde_json::Value::Number(n) => Some(n.to_string()),
            serde_json::Value::String(s) => Some(s.clone()),
            _ => None,
        }
    }
    fn walk(v: &serde_json::Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            serde_json::Value::Object(map) => {
                for (k, val) in map {
                    match scalar(val) {
                        Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            walk(val, indent + 1, out);
                        }
                    }
                }
            }
            serde_json::Value::Array(items) => {
                for val in items {
                    match scalar(val) {
                        Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}-\n"));
                            walk(val, indent + 1, out);
                        }
                    }
                }
                if items.is_empty() {
                    out.push_str(&format!("{pad}(empty)\n"));
                }
            }
            other => {
                if let Some(s) = scalar(other) {
                    out.push_str(&format!("{pad}{s}\n"));
                }
            }
        }
    }
    let mut out = String::new();
    walk(value, 0, &mut out);
    out
}

fn emit(cfg: &RunConfig, value: &serde_json::Value) {
    if cfg.json {
        println!("{}", serde_json::to_string(value).expect("JSON values serialize"));
    } else {
        print!("{}", render_text(value));
    }
}

fn cmd_check(cfg: &RunConfig, input: &str) -> Result<(), CliError> {
    let (system, spec) = load(input)?;
    let basis = compute_basis(&system, &spec)?;
    let report = check_on_target(&system, &spec, basis.vectors());
    let value = json!({
        "pass": report.pass(),
        "producible": report.producible,
        "unproducible": report
            .unproducible
            .iter()
            .map(|&j| system.polymer_name(j))
            .collect::<Vec<_>>(),
        "balanced_within": report.balanced_within,
        "violating_kernel_vector": report
            .violating_kernel_vector
            .as_ref()
            .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        "violation_value": report.violation_value.as_ref().map(render_ratio),
        "generators": basis.len(),
    });
    emit(cfg, &value);
    if report.pass() {
        Ok(())
    } else {
        Err(CliError::Validation("on-target conditions violated".to_string()))
    }
}

fn cmd_hilbert(cfg: &RunConfig, input: &str) -> Result<(), CliError> {
    let (system, spec) = load(input)?;
    let basis = compute_basis(&system, &spec)?;
    let value = json!({
        "count": basis.len(),
        "generators": basis
            .vectors()
            .iter()
            .map(|v| json!({"reaction": v.render(&system), "net": v.net()}))
            .collect::<Vec<_>>(),
    });
    emit(cfg, &value);
    Ok(())
}

fn level_assignment(
    system: &System,
    spec: &OnTargetSpec,
    basis: &GeneratingSet,
) -> Result<LevelAssignment, CliError> {
    Ok(levelize(system, spec, basis.vectors())?)
}

fn cmd_levelize(cfg: &RunConfig, input: &str) -> Result<(), CliError> {
    let (system, spec) = load(input)?;
    let basis = compute_basis(&system, &spec)?;
    let assignment = level_assignment(&system, &spec, &basis)?;
    let one = BigRational::one();
    let floor_violations: Vec<&str> = (0..system.polymer_count())
        .filter(|&j| !spec.contains(j))
        .filter(|&j| assignment.mu_tilde(j).map_or(false, |mu| *mu <= one))
        .map(|j| system.polymer_name(j))
        .collect();
    if floor_violations.is_empty() {
        emit(cfg, &assignment.to_json(&system));
        return Ok(());
    }
    let stability = check_stable(&spec, basis.vectors());
    let value = json!({
        "floor_violation": true,
        "polymers_at_or_below_one": floor_violations,
        "stability": {
            "stable": stability.stable,
            "min_ratio": stability.min_ratio.as_ref().map(render_ratio),
            "witness": stability.witness.as_ref().map(|w| w.render(&system)),
        },
        "levelize": assignment.to_json(&system),
    });
    emit(cfg, &value);
    Err(CliError::Validation(
        "off-target exponents do not stay above 1; the on-target set is not stable".to_string(),
    ))
}

#[allow(clippy::too_many_arguments)]
fn cmd_bound(
    cfg: &RunConfig,
    input: &str,
    polymer: Option<&str>,
    method: &str,
    level: usize,
    max_combination: u64,
    tbn: bool,
) -> Result<(), CliError> {
    let (system, spec) = load(input)?;
    let basis = compute_basis(&system, &spec)?;
    if tbn {
        let report = tbn_bound(&spec, basis.vectors());
        emit(cfg, &report.to_json(&system));
        return Ok(());
    }
    let name = polymer
        .ok_or_else(|| CliError::Usage("--polymer is required unless --tbn is given".to_string()))?;
    let method: BoundMethod = method
        .parse()
        .map_err(|e: String| CliError::Usage(e))?;
    let j = system
        .polymer_index(name)
        .ok_or_else(|| CliError::Validation(format!("unknown polymer `{name}`")))?;
    let assignment = level_assignment(&system, &spec, &basis)?;
    let report = per_polymer_bound(
        &system,
        &spec,
        &assignment,
        basis.vectors(),
        j,
        level,
        method,
        max_combination,
    )
    .map_err(|e| CliError::Validation(e.to_string()))?;
    emit(cfg, &report.to_json());
    Ok(())
}

fn parse_base(raw: &str) -> Result<BigRational, CliError> {
    let base = parse_ratio(raw)
        .map_err(|e| CliError::Usage(format!("--base: {e}")))?;
    if base <= BigRational::zero() || base >= BigRational::one() {
        return Err(CliError::Validation(format!(
            "base must lie strictly between 0 and 1, got {raw}"
        )));
    }
    Ok(base)
}

fn cmd_concentrations(
    cfg: &RunConfig,
    input: &str,
    base: &str,
    digits: u32,
) -> Result<(), CliError> {
    let (system, spec) = load(input)?;
    let basis = compute_basis(&system, &spec)?;
    let assignment = level_assignment(&system, &spec, &basis)?;
    let base = parse_base(base)?;
    let table = concentrations(&system, &assignment, &base, digits)?;
    emit(cfg, &table.to_json());
    Ok(())
}

fn cmd_verify(
    cfg: &RunConfig,
    input: &str,
    base: Option<&str>,
    numeric: bool,
    tol: f64,
) -> Result<(), CliError> {
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let (system, spec) = load(input)?;
    let basis = compute_basis(&system, &spec)?;
    let assignment = level_assignment(&system, &spec, &basis)?;
    let mu = assignment.mu_vector();
    let cert = check_balance(&system, &mu, basis.vectors());
    let mut pass = cert.pass();

    let numeric_value = if numeric {
        let raw = base.ok_or_else(|| {
            CliError::Usage("--numeric requires --base".to_string())
        })?;
        let c = parse_base(raw)?;
        let x_true: Vec<f64> = mu
            .iter()
            .map(|m| {
                pow_decimal(&c, m, 30)
                    .map(|v| to_f64(&v))
                    .map_err(|e| CliError::Validation(e.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let x0 = system.monomer_totals_f64(&x_true);
        let solver_tol = (tol * 1e-6).max(1e-14);
        match numeric_equilibrium(&system, &x0, solver_tol, 300) {
            Ok(x) => {
                let max_rel = x
                    .iter()
                    .zip(&x_true)
                    .map(|(got, want)| ((got - want) / want).abs())
                    .fold(0.0f64, f64::max);
                let ok = max_rel <= tol;
                pass = pass && ok;
                json!({
                    "converged": true,
                    "base": render_ratio(&c),
                    "max_rel_error": max_rel,
                    "within_tolerance": ok,
                })
            }
            Err(VerifyError::BudgetExceeded(n)) => {
                return Err(CliError::Budget(format!("numeric budget exceeded after {n} steps")));
            }
            Err(e) => {
                pass = false;
                json!({"converged": false, "base": render_ratio(&c), "error": e.to_string()})
            }
        }
    } else {
        serde_json::Value::Null
    };

    let status = if pass { "PASS" } else { "FAIL" };
    let value = json!({
        "status": status,
        "symbolic": cert.to_json(&system),
        "numeric": numeric_value,
    });
    if cfg.json {
        emit(cfg, &value);
    } else {
        // Lead the text rendering with the verdict itself.
        println!("{status}");
        let mut rest = value.clone();
        rest.as_object_mut().expect("object").remove("status");
        print!("{}", render_text(&rest));
    }
    if pass {
        Ok(())
    } else {
        Err(CliError::Validation("equilibrium verification failed".to_string()))
    }
}

fn write_generated(
    out: Option<&PathBuf>,
    text: &str,
    meta: &serde_json::Value,
) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let meta_path = format!("{}.meta.json", path.display());
            std::fs::write(path, text)
                .map_err(|e| CliError::Validation(format!("writing {}: {e}", path.display())))?;
            std::fs::write(
                &meta_path,
                format!("{}\n", serde_json::to_string(meta).expect("JSON values serialize")),
            )
            .map_err(|e| CliError::Validation(format!("writing {meta_path}: {e}")))?;
            eprintln!("wrote {} and {meta_path}", path.display());
            Ok(())
        }
    }
}

fn cmd_gen(_cfg: &RunConfig, scenario: &GenScenario) -> Result<(), CliError> {
    match scenario {
        GenScenario::Example51 { out } => {
            let (system, spec) = gen_example_51();
            let meta = json!({"scenario": "example51"});
            write_generated(out.as_ref(), &system.render_with_spec(&spec), &meta)
        }
        GenScenario::AndGate { inputs, out } => {
            let inputs: AndGateInputs =
                inputs.parse().map_err(|e: String| CliError::Usage(e))?;
            let (system, spec) = gen_and_gate(inputs);
            let meta = json!({
                "scenario": "and_gate",
                "inputs": match inputs {
                    AndGateInputs::None => "none",
                    AndGateInputs::BOnly => "b_only",
                },
            });
            write_generated(out.as_ref(), &system.render_with_spec(&spec), &meta)
        }
        GenScenario::Translator { n, layers, mode, out } => {
            let mode: TranslatorMode = mode.parse().map_err(|e: String| CliError::Usage(e))?;
            let params = TranslatorParams::new(*n, *layers)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let scenario = gen_translator(params, mode)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let mut meta = scenario.metadata_json();
            meta["scenario"] = json!("translator");
            let text = match mode {
                TranslatorMode::Uniform => {
                    let spec = scenario
                        .exact_spec()
                        .map_err(|e| CliError::Validation(e.to_string()))?;
                    scenario.system.render_with_spec(spec)
                }
                // With-input exponents are irrational, so the file carries no
                // exact on-target lines; the sidecar lists the intended set.
                TranslatorMode::WithInput => {
                    meta["on_target"] = json!(scenario
                        .on_target
                        .iter()
                        .map(|&j| scenario.system.polymer_name(j))
                        .collect::<Vec<_>>());
                    scenario.system.render()
                }
            };
            write_generated(out.as_ref(), &text, &meta)
        }
    }
}

fn cmd_oracle(cfg: &RunConfig, input: &str, max_reactants: u64) -> Result<(), CliError> {
    let (system, spec) = load(input)?;
    let reactions = match enumerate_canonical(&system, &spec, max_reactants) {
        Ok(r) => r,
        Err(VerifyError::BudgetExceeded(n)) => {
            return Err(CliError::Budget(format!(
                "canonical enumeration budget exceeded after {n} states"
            )));
        }
        Err(e) => return Err(CliError::Validation(e.to_string())),
    };
    let partial = crate::levelize::PartialAssignment::from_spec(&spec);
    let mut min_ratio: Option<BigRational> = None;
    for v in &reactions {
        let (k, l) = crate::levelize::imbalance_novelty(v, &partial);
        if l == 0 {
            continue;
        }
        let ratio = k / BigRational::from(num_bigint::BigInt::from(l));
        if min_ratio.as_ref().map_or(true, |m| ratio < *m) {
            min_ratio = Some(ratio);
        }
    }
    let value = json!({
        "max_reactants": max_reactants,
        "count": reactions.len(),
        "min_ratio": min_ratio.as_ref().map(render_ratio),
        "reactions": reactions.iter().map(|v| v.render(&system)).collect::<Vec<_>>(),
    });
    emit(cfg, &value);
    Ok(())
}

fn cmd_leak_bound(
    cfg: &RunConfig,
    n: u64,
    layers: u64,
    base: f64,
    excess: f64,
) -> Result<(), CliError> {
    let params =
        TranslatorParams::new(n, layers).map_err(|e| CliError::Usage(e.to_string()))?;
    let bound = translator_leak_bound(params, base, excess)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    emit(cfg, &bound.to_json());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arguments_parse() {
        let cfg = RunConfig::try_parse_from(["eqc", "levelize", "sys.tbn", "--json"]).unwrap();
        assert!(cfg.json);
        assert!(matches!(cfg.command, Command::Levelize { .. }));

        let cfg = RunConfig::try_parse_from([
            "eqc", "bound", "-", "--polymer", "Z", "--method", "lp", "--level", "2",
        ])
        .unwrap();
        match cfg.command {
            Command::Bound { input, polymer, method, level, tbn, .. } => {
                assert_eq!(input, "-");
                assert_eq!(polymer.as_deref(), Some("Z"));
                assert_eq!(method, "lp");
                assert_eq!(level, 2);
                assert!(!tbn);
            }
            other => panic!("unexpected command {other:?}"),
        }

        assert!(RunConfig::try_parse_from(["eqc", "unknown"]).is_err());
    }

    #[test]
    fn gen_arguments_parse() {
        let cfg = RunConfig::try_parse_from([
            "eqc", "gen", "translator", "--n", "3", "--layers", "2", "--mode", "uniform",
        ])
        .unwrap();
        match cfg.command {
            Command::Gen { scenario: GenScenario::Translator { n, layers, mode, out } } => {
                assert_eq!((n, layers), (3, 2));
                assert_eq!(mode, "uniform");
                assert!(out.is_none());
            }
            other => panic!("unexpected command {other:?}"),
        }
    }

    #[test]
    fn text_rendering_is_stable() {
        let value = json!({
            "b": [1, 2],
            "a": {"x": "1/2", "y": null},
            "c": "PASS",
            "d": [],
        });
        let text = render_text(&value);
        assert_eq!(
            text,
            "a:\n  x: 1/2\n  y: null\nb:\n  - 1\n  - 2\nc: PASS\nd:\n  (empty)\n"
        );
    }

    #[test]
    fn base_parsing_bounds() {
        assert!(parse_base("1/100").is_ok());
        assert!(parse_base("0.5").is_ok());
        assert!(matches!(parse_base("3/2"), Err(CliError::Validation(_))));
        assert!(matches!(parse_base("0"), Err(CliError::Validation(_))));
        assert!(matches!(parse_base("nope"), Err(CliError::Usage(_))));
    }
}
