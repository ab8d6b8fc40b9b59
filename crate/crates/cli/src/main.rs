//! `finlin`: command-line front end for the finite-linear-order engines.
//!
//! Every command prints a human verdict line followed by a machine-readable
//! `key=value` block (`--format kv` prints only the block). Exit codes:
//! 0 decided/positive, 1 negative decision, 2 error, 3 state budget
//! exceeded.

mod report;

use clap::{Parser, Subcommand, ValueEnum};
use finlin_core::automata::{
    decide_fmp_with_acceptor, AutomataError, CompileOptions, Compiler, Verdict,
};
use finlin_core::relational::parse_rel;
use finlin_core::semantics::{eval_sentence, find_finite_model, WordModel};
use finlin_core::shrink::{minimal_model_bound, shrink_to_core_with};
use finlin_core::split::{sentence_components, split_decompose, SplitContext};
use finlin_core::structure::FinStructure;
use finlin_core::syntax::{parse, Signature, VarPartition};
use finlin_core::witness::build_theory_with;
use finlin_core::{interp, tis};
use report::Report;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "finlin", version, about = "Finite-model analysis over linear orders with unary predicates")]
struct Cli {
    /// Comma-separated unary predicate names; inferred from the input
    /// when omitted.
    #[arg(long, global = true, value_name = "P,Q")]
    sig: Option<String>,

    /// Output format: human text plus key=value block, or the block only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a sentence has a finite word model.
    Decide {
        #[command(flatten)]
        input: FormulaInput,
        /// Maximum automaton states per construction step
        /// (default: FINLIN_BUDGET or 1000000).
        #[arg(long, value_name = "N")]
        budget: Option<usize>,
        /// Write the final acceptor in DOT format to this file.
        #[arg(long, value_name = "FILE")]
        emit_dot: Option<PathBuf>,
        /// Include per-stage state counts in the report.
        #[arg(long)]
        stats: bool,
    },
    /// Search for a satisfying word up to a length bound.
    FindModel {
        #[command(flatten)]
        input: FormulaInput,
        /// Maximum word length to search.
        #[arg(long, value_name = "N", default_value_t = 6)]
        max_len: usize,
    },
    /// Shrink a satisfying word to a core with pairwise distinct
    /// witness types.
    Shrink {
        #[command(flatten)]
        input: FormulaInput,
        /// The word to shrink, e.g. `{P};{};{P}`.
        #[arg(value_name = "WORD")]
        word: Option<String>,
    },
    /// Print the prefix/suffix decomposition of a formula.
    Split {
        #[command(flatten)]
        input: FormulaInput,
        /// Prefix-part variables (comma separated).
        #[arg(long, value_name = "x,y", default_value = "")]
        left: String,
        /// Suffix-part variables (comma separated).
        #[arg(long, value_name = "x,y", default_value = "")]
        right: String,
    },
    /// Print the finite companion theory of a sentence.
    Theory {
        #[command(flatten)]
        input: FormulaInput,
    },
    /// Compile a formula to a finite-word acceptor.
    Compile {
        #[command(flatten)]
        input: FormulaInput,
        /// Ordered free-variable context (comma separated).
        #[arg(long, value_name = "x,y", default_value = "")]
        vars: String,
        #[arg(long, value_name = "N")]
        budget: Option<usize>,
        #[arg(long, value_name = "FILE")]
        emit_dot: Option<PathBuf>,
        #[arg(long)]
        stats: bool,
    },
    /// Check the tiny-set-theory axioms on a finite structure.
    TisCheck {
        #[command(flatten)]
        input: StructureInput,
        /// Check the starred (extensional-equivalence) axioms instead.
        #[arg(long)]
        star: bool,
    },
    /// Classify a model as the powerset of a transitive set.
    TisClassify {
        #[command(flatten)]
        input: StructureInput,
    },
    /// Pad a starred model by duplicating an equivalence class.
    TisPad {
        #[command(flatten)]
        input: StructureInput,
        /// Number of elements to add.
        #[arg(short = 'k', long = "count", value_name = "N")]
        k: usize,
        /// Element whose class is duplicated (default: an empty set).
        #[arg(long, value_name = "I")]
        target: Option<usize>,
    },
    /// Evaluate a lifted sentence in a target structure under parameters.
    InterpVerify {
        /// Translation file.
        #[arg(long, value_name = "FILE")]
        translation: PathBuf,
        /// Target structure file.
        #[arg(long, value_name = "FILE")]
        target: PathBuf,
        /// Comma-separated parameter values (target elements).
        #[arg(long, value_name = "0,1", default_value = "")]
        params: String,
        /// Sentence over the source signature: inline text or a file.
        #[arg(short = 'e', long = "expr", value_name = "FORMULA")]
        expr: Option<String>,
        #[arg(value_name = "FILE")]
        file: Option<PathBuf>,
    },
    /// Run the decision engines over a directory of formula files.
    Corpus {
        /// Directory of `.fol` formula files.
        #[arg(value_name = "DIR")]
        dir: PathBuf,
        #[arg(long, value_name = "N")]
        budget: Option<usize>,
        /// Length bound for the exhaustive cross-check.
        #[arg(long, value_name = "N", default_value_t = 6)]
        max_len: usize,
    },
}

/// A formula given inline (`-e`) or as a file path.
#[derive(clap::Args)]
struct FormulaInput {
    /// Inline formula text.
    #[arg(short = 'e', long = "expr", value_name = "FORMULA")]
    expr: Option<String>,
    /// Formula file.
    #[arg(value_name = "FILE")]
    file: Option<PathBuf>,
}

#[derive(clap::Args)]
struct StructureInput {
    /// Inline structure text, e.g. `n=2; edges=(0,1)`.
    #[arg(short = 'e', long = "expr", value_name = "STRUCTURE")]
    expr: Option<String>,
    /// Structure file.
    #[arg(value_name = "FILE")]
    file: Option<PathBuf>,
}

#[derive(Debug)]
struct CliError {
    message: String,
    exit: u8,
}

impl CliError {
    fn new(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            exit: EXIT_ERROR,
        }
    }

    fn budget(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            exit: EXIT_BUDGET,
        }
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::new(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            report.print(format == Format::Kv);
            ExitCode::from(report.exit)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit)
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display())))
}

fn formula_text(expr: &Option<String>, file: &Option<PathBuf>) -> Result<String, CliError> {
    match (expr, file) {
        (Some(text), None) => Ok(text.clone()),
        (None, Some(path)) => Ok(read_to_string(path)?),
        (Some(_), Some(_)) => Err(CliError::new("give either -e or a file, not both")),
        (None, None) => Err(CliError::new("no formula given; use -e or a file")),
    }
}

/// Predicate names are inferred from applied occurrences (`P(`), in order
/// of first appearance.
fn infer_signature(text: &str) -> Result<Signature, CliError> {
    let bytes = text.as_bytes();
    let mut names: Vec<String> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            let ident = &text[start..i];
            let mut j = i;
            while j < bytes.len() && (bytes[j] as char).is_ascii_whitespace() {
                j += 1;
            }
            if ident.chars().next().is_some_and(|c| c.is_ascii_uppercase())
                && ident != "A"
                && ident != "E"
                && bytes.get(j) == Some(&b'(')
                && !names.iter().any(|n| n == ident)
            {
                names.push(ident.to_string());
            }
        } else {
            i += 1;
        }
    }
    Ok(Signature::new(names)?)
}

fn signature_for(cli_sig: &Option<String>, formula_text: &str) -> Result<Signature, CliError> {
    match cli_sig {
        Some(spec) => {
            let names: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            Ok(Signature::new(names)?)
        }
        None => infer_signature(formula_text),
    }
}

fn budget_options(flag: Option<usize>) -> CompileOptions {
    let from_env = std::env::var("FINLIN_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok());
    CompileOptions {
        max_states: flag.or(from_env).unwrap_or(1_000_000),
    }
}

fn parse_vars(list: &str) -> Vec<String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Decide {
            input,
            budget,
            emit_dot,
            stats,
        } => {
            let text = formula_text(&input.expr, &input.file)?;
            let sig = signature_for(&cli.sig, &text)?;
            let alpha = parse(&text, &sig)?;
            let opts = budget_options(budget);
            let (result, acceptor) = match decide_fmp_with_acceptor(&sig, &alpha, opts) {
                Ok(pair) => pair,
                Err(AutomataError::BudgetExceeded { limit }) => {
                    let mut r = Report::new("BUDGET", EXIT_BUDGET);
                    r.kv("verdict", "BUDGET");
                    r.kv("budget", limit);
                    return Ok(r);
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(path) = emit_dot {
                std::fs::write(&path, acceptor.to_dot(&sig))
                    .map_err(|e| CliError::new(format!("cannot write {}: {e}", path.display())))?;
            }
            let mut r = match &result.verdict {
                Verdict::HasFiniteModel { minimal } => {
                    let mut r = Report::new(format!("SAT-FIN {minimal}"), EXIT_OK);
                    r.kv("verdict", "SAT-FIN");
                    r.kv("model", minimal);
                    r.kv("model_len", minimal.len());
                    r.kv("empty_model_only", result.empty_model_only);
                    r
                }
                Verdict::NoFiniteModel => {
                    let mut r = Report::new("UNSAT-FIN", EXIT_NEGATIVE);
                    r.kv("verdict", "UNSAT-FIN");
                    r
                }
            };
            r.kv("budget", opts.max_states);
            if stats {
                for (i, s) in result.stats.iter().enumerate() {
                    r.kv(format!("stage.{i}.op"), &s.operation);
                    r.kv(format!("stage.{i}.states"), s.states);
                }
            }
            Ok(r)
        }

        Command::FindModel { input, max_len } => {
            let text = formula_text(&input.expr, &input.file)?;
            let sig = signature_for(&cli.sig, &text)?;
            let alpha = parse(&text, &sig)?;
            match find_finite_model(&sig, &alpha, max_len)? {
                Some(w) => {
                    let mut r = Report::new(format!("MODEL {w}"), EXIT_OK);
                    r.kv("found", "yes");
                    r.kv("model", &w);
                    r.kv("model_len", w.len());
                    r.kv("max_len", max_len);
                    Ok(r)
                }
                None => {
                    let mut r = Report::new(format!("NO-MODEL up to length {max_len}"), EXIT_NEGATIVE);
                    r.kv("found", "no");
                    r.kv("max_len", max_len);
                    Ok(r)
                }
            }
        }

        Command::Shrink { mut input, word } => {
            // with -e, the single positional is the word
            let word_text = match (input.expr.is_some(), word, input.file.take()) {
                (true, None, Some(w)) => w.display().to_string(),
                (_, Some(w), f) => {
                    input.file = f;
                    w
                }
                _ => return Err(CliError::new("no word given")),
            };
            let text = formula_text(&input.expr, &input.file)?;
            let sig = signature_for(&cli.sig, &text)?;
            let alpha = parse(&text, &sig)?;
            let w = WordModel::parse(&word_text, &sig)?;
            let components = sentence_components(&alpha)?;
            let (core, trace) = shrink_to_core_with(&components, &w, &alpha)?;
            let mut r = Report::new(format!("CORE {core}"), EXIT_OK);
            for (i, s) in trace.steps.iter().enumerate() {
                r.line(format!(
                    "step {i}: removed ({}, {}] with witness type {} ({} -> {} letters)",
                    s.start, s.end, s.witness, s.before_len, s.after_len
                ));
            }
            r.kv("core", &core);
            r.kv("core_len", core.len());
            r.kv("steps", trace.steps.len());
            r.kv("ell", components.ell());
            Ok(r)
        }

        Command::Split { input, left, right } => {
            let text = formula_text(&input.expr, &input.file)?;
            let sig = signature_for(&cli.sig, &text)?;
            let phi = parse(&text, &sig)?;
            let partition = VarPartition::new(parse_vars(&left), parse_vars(&right))?;
            let form = split_decompose(&phi, &SplitContext::new(partition))?;
            let mut r = Report::new(format!("SPLIT {} pairs", form.pairs.len()), EXIT_OK);
            r.line("prefix || suffix");
            for pair in &form.pairs {
                r.line(format!("{} || {}", pair.prefix, pair.suffix));
            }
            r.kv("pairs", form.pairs.len());
            for (i, pair) in form.pairs.iter().enumerate() {
                r.kv(format!("pair.{i}.prefix"), &pair.prefix);
                r.kv(format!("pair.{i}.suffix"), &pair.suffix);
            }
            Ok(r)
        }

        Command::Theory { input } => {
            let text = formula_text(&input.expr, &input.file)?;
            let sig = signature_for(&cli.sig, &text)?;
            let alpha = parse(&text, &sig)?;
            let components = sentence_components(&alpha)?;
            let theory = build_theory_with(&alpha, components.suffix_sentences)?;
            let axioms = theory.axioms();
            let mut r = Report::new(
                format!("THEORY {} axioms (ell = {})", axioms.len(), theory.ell()),
                EXIT_OK,
            );
            for ax in &axioms {
                r.line(format!("{ax}"));
            }
            r.kv("axioms", axioms.len());
            r.kv("ell", theory.ell());
            for (i, ax) in axioms.iter().enumerate() {
                r.kv(format!("axiom.{i}"), ax);
            }
            Ok(r)
        }

        Command::Compile {
            input,
            vars,
            budget,
            emit_dot,
            stats,
        } => {
            let text = formula_text(&input.expr, &input.file)?;
            let sig = signature_for(&cli.sig, &text)?;
            let phi = parse(&text, &sig)?;
            let ctx = parse_vars(&vars);
            let opts = budget_options(budget);
            let mut compiler = Compiler::with_options(&sig, opts);
            let acceptor = match compiler.compile(&phi, &ctx) {
                Ok(a) => a,
                Err(AutomataError::BudgetExceeded { limit }) => {
                    return Err(CliError::budget(format!("state budget of {limit} exceeded")))
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(path) = emit_dot {
                std::fs::write(&path, acceptor.to_dot(&sig))
                    .map_err(|e| CliError::new(format!("cannot write {}: {e}", path.display())))?;
            }
            let mut r = Report::new(
                format!("ACCEPTOR {} states", acceptor.state_count()),
                EXIT_OK,
            );
            r.kv("states", acceptor.state_count());
            r.kv("deterministic", acceptor.is_deterministic());
            r.kv("markers", acceptor.marker_vars().join(","));
            if stats {
                for (i, s) in compiler.stats().iter().enumerate() {
                    r.kv(format!("stage.{i}.op"), &s.operation);
                    r.kv(format!("stage.{i}.states"), s.states);
                }
            }
            Ok(r)
        }

        Command::TisCheck { input, star } => {
            let text = formula_text(&input.expr, &input.file)?;
            let m = FinStructure::parse(&text)?;
            let report = if star {
                tis::check_tis_star(&m)?
            } else {
                tis::check_tis(&m)?
            };
            let ok = report.all();
            let mut r = Report::new(
                if ok { "TIS-MODEL yes" } else { "TIS-MODEL no" },
                if ok { EXIT_OK } else { EXIT_NEGATIVE },
            );
            r.kv("model", ok);
            r.kv("star", star);
            r.kv(
                if star { "congruence" } else { "extensionality" },
                report.first,
            );
            r.kv("adjunction", report.adjunction);
            r.kv("foundation", report.foundation);
            Ok(r)
        }

        Command::TisClassify { input } => {
            let text = formula_text(&input.expr, &input.file)?;
            let m = FinStructure::parse(&text)?;
            let c = tis::classify_tis(&m)?;
            let mut r = Report::new(format!("X = {}", c.transitive_set), EXIT_OK);
            for (i, h) in c.image.iter().enumerate() {
                r.line(format!("{i} -> {h}"));
            }
            r.kv("transitive_set", &c.transitive_set);
            r.kv("size", m.size());
            for (i, h) in c.image.iter().enumerate() {
                r.kv(format!("image.{i}"), h);
            }
            Ok(r)
        }

        Command::TisPad { input, k, target } => {
            let text = formula_text(&input.expr, &input.file)?;
            let m = FinStructure::parse(&text)?;
            let padded = match target {
                Some(t) => tis::pad_model_at(&m, k, t)?,
                None => tis::pad_model(&m, k)?,
            };
            let mut r = Report::new(format!("PADDED {padded}"), EXIT_OK);
            r.kv("structure", &padded);
            r.kv("size", padded.size());
            r.kv("added", k);
            Ok(r)
        }

        Command::InterpVerify {
            translation,
            target,
            params,
            expr,
            file,
        } => {
            let tau = interp::Translation::parse(&read_to_string(&translation)?)?;
            let target_model = FinStructure::parse(&read_to_string(&target)?)?;
            let assignment: Vec<usize> = params
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse()
                        .map_err(|_| CliError::new(format!("bad parameter `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            let beta_text = formula_text(&expr, &file)?;
            let beta = parse_rel(&beta_text)?;
            let witness = interp::InterpretationWitness {
                translation: tau,
                target_model,
                parameter_assignment: assignment,
            };
            let ok = interp::verify_interpretation(&witness, &beta)?;
            let mut r = Report::new(
                if ok { "VERIFIED yes" } else { "VERIFIED no" },
                if ok { EXIT_OK } else { EXIT_NEGATIVE },
            );
            r.kv("verified", ok);
            r.kv("params", witness.parameter_assignment.len());
            Ok(r)
        }

        Command::Corpus {
            dir,
            budget,
            max_len,
        } => corpus_run(&dir, &cli.sig, budget, max_len),
    }
}

fn corpus_run(
    dir: &Path,
    cli_sig: &Option<String>,
    budget: Option<usize>,
    max_len: usize,
) -> Result<Report, CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::new(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "fol"))
        .collect();
    files.sort();
    let opts = budget_options(budget);

    let mut r = Report::new(format!("CORPUS {} formulas", files.len()), EXIT_OK);
    r.line("file | verdict | model | ell | bound | core | agree");
    let mut any_budget = false;
    let mut any_error = false;

    for (row, path) in files.iter().enumerate() {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let outcome = corpus_row(path, cli_sig, opts, max_len);
        match outcome {
            Ok(cells) => {
                r.line(format!(
                    "{name} | {} | {} | {} | {} | {} | {}",
                    cells.verdict, cells.model, cells.ell, cells.bound, cells.core, cells.agree
                ));
                if cells.verdict == "BUDGET" {
                    any_budget = true;
                }
                r.kv(format!("row.{row}.file"), &name);
                r.kv(format!("row.{row}.verdict"), &cells.verdict);
                r.kv(format!("row.{row}.agree"), &cells.agree);
            }
            Err(e) => {
                any_error = true;
                r.line(format!("{name} | ERROR {} | - | - | - | - | -", e.message));
                r.kv(format!("row.{row}.file"), &name);
                r.kv(format!("row.{row}.verdict"), "ERROR");
            }
        }
    }
    r.kv("rows", files.len());
    if any_budget {
        r.exit = EXIT_BUDGET;
    } else if any_error {
        r.exit = EXIT_ERROR;
    }
    Ok(r)
}

struct CorpusCells {
    verdict: String,
    model: String,
    ell: String,
    bound: String,
    core: String,
    agree: String,
}

fn corpus_row(
    path: &Path,
    cli_sig: &Option<String>,
    opts: CompileOptions,
    max_len: usize,
) -> Result<CorpusCells, CliError> {
    let text = read_to_string(path)?;
    let sig = signature_for(cli_sig, &text)?;
    let alpha = parse(&text, &sig)?;
    let components = sentence_components(&alpha)?;
    let ell = components.ell();
    let bound = minimal_model_bound(&alpha)?;

    let decision = match finlin_core::automata::decide_fmp(&sig, &alpha, opts) {
        Ok(d) => Some(d),
        Err(AutomataError::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let search = find_finite_model(&sig, &alpha, max_len)?;

    let (verdict, model, core) = match &decision {
        None => ("BUDGET".to_string(), "-".to_string(), "-".to_string()),
        Some(d) => match &d.verdict {
            Verdict::HasFiniteModel { minimal } => {
                let core = if minimal.is_empty() {
                    "0".to_string()
                } else {
                    debug_assert!(eval_sentence(minimal, &alpha).unwrap_or(false));
                    let (core, _) = shrink_to_core_with(&components, minimal, &alpha)?;
                    core.len().to_string()
                };
                ("SAT-FIN".to_string(), format!("{minimal}"), core)
            }
            Verdict::NoFiniteModel => ("UNSAT-FIN".to_string(), "-".to_string(), "-".to_string()),
        },
    };

    let agree = match &decision {
        None => "n/a".to_string(),
        Some(d) => {
            let decided_sat = matches!(&d.verdict, Verdict::HasFiniteModel { .. });
            let consistent = match (&d.verdict, &search) {
                (Verdict::HasFiniteModel { minimal }, Some(found)) => minimal == found,
                (Verdict::HasFiniteModel { minimal }, None) => minimal.len() > max_len,
                (Verdict::NoFiniteModel, Some(_)) => false,
                (Verdict::NoFiniteModel, None) => true,
            };
            // the 2^ell bound gives a complete cross-check when small
            let bound_consistent = if bound <= max_len as u64 {
                search.is_some() == decided_sat || search.is_none() && !decided_sat
            } else {
                true
            };
            if consistent && bound_consistent {
                "yes".to_string()
            } else {
                "NO".to_string()
            }
        }
    };

    Ok(CorpusCells {
        verdict,
        model,
        ell: ell.to_string(),
        bound: bound.to_string(),
        core,
        agree,
    })
}
