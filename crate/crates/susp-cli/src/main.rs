use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use susp::bench::{self, Corpus};
use susp::bridges::engine::{self, Calculus};
use susp::bridges::ls::{ls_to_susp, LsCalc, LsRule};
use susp::bridges::lsig::{env_to_lsig, lsig_subst_to_triple, lsig_to_susp, susp_to_lsig, LsigCalc, LsigRule};
use susp::bridges::lu::{lu_subst_to_triple, lu_to_susp, LuCalc, LuRule};
use susp::bridges::EnvTriple;
use susp::env::{check_well_formed, lev};
use susp::order::{check_step_decrease, essence, eta, mu, DEFAULT_ETA_BOUND};
use susp::rewrite::{self, joinable_within, RuleId, RuleSet, Status, Strategy, DEFAULT_FRONTIER, DEFAULT_RM_FUEL};
use susp::suites::{self, SuiteConfig, SuiteReport};
use susp::syntax::ls::parse_ls;
use susp::syntax::lsig::parse_lsig;
use susp::syntax::lu::parse_lu;
use susp::syntax::{parse_expr_with, Calc, ParseOptions};
use susp::trace::TraceFile;
use susp::{Error, Path, SuspExpr};

/// Rewriting with explicit substitutions in the suspension calculus.
///
/// Expressions are given inline, or read from standard input when omitted or `-`.
/// Exit status: 0 success, 1 violation or negative verdict, 2 usage or parse error.
#[derive(Parser)]
#[command(name = "susp", version)]
struct Cli {
    /// Read `@n` dummies as `(#1, n+1)`.
    #[arg(long, global = true)]
    legacy_dummies: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Checks a suspension expression for well-formedness.
    Check { file: PathBuf },
    /// Rewrites to normal form and prints it.
    Normalize {
        expr: Option<String>,
        #[arg(long, default_value = "susp")]
        calc: Calc,
        /// Preset or comma separated rule names; defaults to rmbeta, or every rule for the other calculi.
        #[arg(long)]
        rules: Option<String>,
        #[arg(long, default_value = "lo")]
        strategy: Strategy,
        #[arg(long, default_value_t = DEFAULT_RM_FUEL)]
        fuel: usize,
        /// Adds r7 to the suspension rules.
        #[arg(long)]
        logical_mode: bool,
        /// Writes the JSON trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Applies one rule at one position.
    Step {
        expr: Option<String>,
        #[arg(long, default_value = "susp")]
        calc: Calc,
        /// Child indices, e.g. `[0,1]` or `0.1`; empty for the root.
        #[arg(long, default_value = "")]
        at: Path,
        #[arg(long)]
        rule: String,
    },
    /// Lists every redex as `path rule`.
    Redexes {
        expr: Option<String>,
        #[arg(long, default_value = "susp")]
        calc: Calc,
        #[arg(long)]
        rules: Option<String>,
    },
    /// Translates between calculi: lu, ls or lsig to susp, and susp to lsig.
    Translate {
        expr: Option<String>,
        #[arg(long)]
        from: Calc,
        #[arg(long)]
        to: Calc,
        /// Embedding level for environments translated to lsig; defaults to their lev.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Prints mu, eta_0..eta_k and the essence of a suspension expression.
    Measure {
        expr: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ETA_BOUND)]
        k: usize,
    },
    /// Checks that BEFORE to AFTER decreases the termination measures.
    CheckDecrease {
        before: String,
        after: String,
        #[arg(long, default_value_t = DEFAULT_ETA_BOUND)]
        k: usize,
    },
    /// Decides whether two suspension expressions have a common reduct.
    Join {
        a: String,
        b: String,
        #[arg(long, default_value = "rm")]
        rules: RuleSet,
        #[arg(long, default_value_t = DEFAULT_RM_FUEL)]
        fuel: usize,
        #[arg(long, default_value_t = DEFAULT_FRONTIER)]
        frontier: usize,
    },
    /// Re-executes a JSON trace and checks every intermediate expression.
    Replay { file: PathBuf },
    /// Runs a seeded property suite.
    Fuzz {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Step counts per calculus and strategy.
    Bench {
        #[arg(long)]
        corpus: Corpus,
        #[arg(long, default_value = "csv")]
        report: Report,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Report {
    Csv,
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = ParseOptions { legacy_dummies: cli.legacy_dummies };
    match run(cli.cmd, opts) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } | Error::Config(_) => 2,
                _ => 1,
            })
        }
    }
}

fn input(arg: Option<String>) -> susp::Result<String> {
    match arg.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Error::Config(format!("reading stdin: {e}")))?;
            Ok(s)
        }
        Some(s) => Ok(s.to_string()),
    }
}

fn read_file(path: &PathBuf) -> susp::Result<String> {
    if path.as_os_str() == "-" {
        return input(None);
    }
    fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn status_verdict(s: Status) -> Verdict {
    verdict(s == Status::NormalForm)
}

fn susp_rules(rules: Option<&str>, logical: bool) -> susp::Result<RuleSet> {
    let set = match rules {
        Some(r) => r.parse()?,
        None => RuleSet::rmbeta(),
    };
    Ok(if logical { set.logical() } else { set })
}

/// Rule lists for the other calculi: `all`, a calculus preset, or names.
fn bridge_rules<C: Calculus>(rules: Option<&str>, presets: &[(&str, &[C::Rule])]) -> susp::Result<Vec<C::Rule>> {
    let Some(text) = rules else {
        return Ok(C::RULES.to_vec());
    };
    let mut out = Vec::new();
    for part in text.split(['+', ',']).map(str::trim).filter(|p| !p.is_empty()) {
        if part.eq_ignore_ascii_case("all") {
            out.extend_from_slice(C::RULES);
        } else if let Some((_, rs)) = presets.iter().find(|(n, _)| n.eq_ignore_ascii_case(part)) {
            out.extend_from_slice(rs);
        } else {
            out.push(engine::parse_rule::<C>(part)?);
        }
    }
    Ok(out)
}

const LSIG_PRESETS: &[(&str, &[LsigRule])] = &[("sigma", &LsigRule::SIGMA)];
const LU_PRESETS: &[(&str, &[LuRule])] = &[("upsilon", &LuRule::UPSILON)];
const LS_PRESETS: &[(&str, &[LsRule])] = &[("ls", &LsRule::LS), ("lse", &LsRule::ALL)];

fn write_trace(path: Option<&PathBuf>, file: &TraceFile) -> susp::Result<()> {
    if let Some(p) = path {
        fs::write(p, file.to_json()).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn normalize_bridge<C: Calculus>(
    calc: Calc,
    x: &C::Expr,
    rules: &[C::Rule],
    strategy: Strategy,
    fuel: usize,
    trace: Option<&PathBuf>,
) -> susp::Result<Verdict> {
    let (out, file) = TraceFile::record_bridge::<C>(calc, x, rules, strategy, fuel);
    write_trace(trace, &file)?;
    println!("{}", out.result);
    eprintln!("{} steps, {:?}", out.steps, out.status);
    Ok(status_verdict(out.status))
}

fn step_bridge<C: Calculus>(x: &C::Expr, at: &Path, rule: &str) -> susp::Result<Verdict> {
    let rule = engine::parse_rule::<C>(rule)?;
    println!("{}", engine::step_at::<C>(x, at, rule)?);
    Ok(Verdict::Yes)
}

fn redexes_bridge<C: Calculus>(x: &C::Expr, rules: &[C::Rule]) -> Verdict {
    for (p, r) in engine::redexes::<C>(x, rules) {
        println!("{p} {r}");
    }
    Verdict::Yes
}

fn print_triple(t: &EnvTriple) {
    println!("ol = {}, nl = {}, env = {}", t.ol, t.nl, t.env);
}

fn run(cmd: Cmd, opts: ParseOptions) -> susp::Result<Verdict> {
    let parse_susp = |s: &str| parse_expr_with(s, opts);
    match cmd {
        Cmd::Check { file } => {
            let x = parse_susp(&read_file(&file)?)?;
            let vs = check_well_formed(&x);
            if vs.is_empty() {
                println!("well-formed");
            }
            for v in &vs {
                println!("{v}");
            }
            Ok(verdict(vs.is_empty()))
        }
        Cmd::Normalize { expr, calc, rules, strategy, fuel, logical_mode, trace } => {
            let text = input(expr)?;
            if logical_mode && calc != Calc::Susp {
                return Err(Error::Config("--logical-mode applies to --calc susp only".into()));
            }
            let rules = rules.as_deref();
            match calc {
                Calc::Susp => {
                    let x = parse_susp(&text)?;
                    let t = rewrite::normalize(&x, susp_rules(rules, logical_mode)?, strategy, fuel)?;
                    write_trace(trace.as_ref(), &TraceFile::from_trace(&t))?;
                    println!("{}", t.result());
                    eprintln!("{} steps, {:?}", t.steps.len(), t.status);
                    Ok(status_verdict(t.status))
                }
                Calc::Lsig => {
                    let rs = bridge_rules::<LsigCalc>(rules, LSIG_PRESETS)?;
                    normalize_bridge::<LsigCalc>(calc, &parse_lsig(&text)?, &rs, strategy, fuel, trace.as_ref())
                }
                Calc::Lu => {
                    let rs = bridge_rules::<LuCalc>(rules, LU_PRESETS)?;
                    normalize_bridge::<LuCalc>(calc, &parse_lu(&text)?, &rs, strategy, fuel, trace.as_ref())
                }
                Calc::Ls => {
                    let rs = bridge_rules::<LsCalc>(rules, LS_PRESETS)?;
                    normalize_bridge::<LsCalc>(calc, &parse_ls(&text)?, &rs, strategy, fuel, trace.as_ref())
                }
            }
        }
        Cmd::Step { expr, calc, at, rule } => {
            let text = input(expr)?;
            match calc {
                Calc::Susp => {
                    let rule: RuleId = rule.parse()?;
                    println!("{}", rewrite::step_at(&parse_susp(&text)?, &at, rule)?);
                    Ok(Verdict::Yes)
                }
                Calc::Lsig => step_bridge::<LsigCalc>(&parse_lsig(&text)?, &at, &rule),
                Calc::Lu => step_bridge::<LuCalc>(&parse_lu(&text)?, &at, &rule),
                Calc::Ls => step_bridge::<LsCalc>(&parse_ls(&text)?, &at, &rule),
            }
        }
        Cmd::Redexes { expr, calc, rules } => {
            let text = input(expr)?;
            let rules = rules.as_deref();
            Ok(match calc {
                Calc::Susp => {
                    for (p, r) in rewrite::redexes(&parse_susp(&text)?, susp_rules(rules, false)?) {
                        println!("{p} {r}");
                    }
                    Verdict::Yes
                }
                Calc::Lsig => {
                    redexes_bridge::<LsigCalc>(&parse_lsig(&text)?, &bridge_rules::<LsigCalc>(rules, LSIG_PRESETS)?)
                }
                Calc::Lu => redexes_bridge::<LuCalc>(&parse_lu(&text)?, &bridge_rules::<LuCalc>(rules, LU_PRESETS)?),
                Calc::Ls => redexes_bridge::<LsCalc>(&parse_ls(&text)?, &bridge_rules::<LsCalc>(rules, LS_PRESETS)?),
            })
        }
        Cmd::Translate { expr, from, to, level } => {
            let text = input(expr)?;
            match (from, to) {
                (Calc::Lu, Calc::Susp) => {
                    let a = parse_lu(&text)?;
                    if a.is_term() {
                        println!("{}", lu_to_susp(&a)?);
                    } else {
                        print_triple(&lu_subst_to_triple(&a)?);
                    }
                }
                (Calc::Ls, Calc::Susp) => println!("{}", ls_to_susp(&parse_ls(&text)?)?),
                (Calc::Lsig, Calc::Susp) => {
                    let a = parse_lsig(&text)?;
                    if a.is_term() {
                        println!("{}", lsig_to_susp(&a)?);
                    } else {
                        print_triple(&lsig_subst_to_triple(&a)?);
                    }
                }
                (Calc::Susp, Calc::Lsig) => match parse_susp(&text)? {
                    SuspExpr::Term(t) => println!("{}", susp_to_lsig(&t)?),
                    SuspExpr::Env(e) => println!("{}", env_to_lsig(&e, level.unwrap_or_else(|| lev(&e)))?),
                },
                _ => return Err(Error::Config(format!("no translation from {from} to {to}"))),
            }
            Ok(Verdict::Yes)
        }
        Cmd::Measure { expr, k } => {
            let x = parse_susp(&input(expr)?)?;
            let r = x.as_ref();
            println!("mu: {}", mu(r));
            let etas: Vec<String> = (0..=k).map(|i| eta(r, i).to_string()).collect();
            println!("eta_0..eta_{k}: {}", etas.join(" "));
            println!("essence: {}", essence(r));
            Ok(Verdict::Yes)
        }
        Cmd::CheckDecrease { before, after, k } => {
            let report = check_step_decrease(&parse_susp(&before)?, &parse_susp(&after)?, k);
            println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            Ok(verdict(report.holds()))
        }
        Cmd::Join { a, b, rules, fuel, frontier } => {
            let v = joinable_within(&parse_susp(&a)?, &parse_susp(&b)?, rules, fuel, frontier)?;
            match (&v.common, v.inconclusive) {
                (Some(c), _) => println!("joinable: {c}"),
                (None, true) => println!("inconclusive: search frontier of {frontier} exceeded"),
                (None, false) => println!("not joinable: reduct spaces exhausted"),
            }
            Ok(verdict(v.joinable))
        }
        Cmd::Replay { file } => {
            let t = TraceFile::from_json(&read_file(&file)?)?;
            match t.replay() {
                Ok(()) => {
                    println!("replayed {} steps", t.steps.len());
                    Ok(Verdict::Yes)
                }
                Err(e) => {
                    println!("mismatch: {e}");
                    Ok(Verdict::No)
                }
            }
        }
        Cmd::Fuzz { suite, cases, seed } => {
            let report = fuzz(&suite, SuiteConfig::new(cases, seed))?;
            println!("{report}");
            Ok(verdict(report.passed()))
        }
        Cmd::Bench { corpus, report: Report::Csv } => {
            let rows = bench::run(corpus)?;
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            for r in rows {
                w.serialize(r).map_err(|e| Error::Config(format!("writing csv: {e}")))?;
            }
            w.flush().map_err(|e| Error::Config(format!("writing csv: {e}")))?;
            Ok(Verdict::Yes)
        }
    }
}

pub const SUITES: &[&str] = &[
    "preservation",
    "termination",
    "confluence",
    "grafting",
    "simulation",
    "similarity",
    "diamond",
    "retraction",
    "ls",
    "lsig-forward",
    "lsig-backward",
    "bridges",
    "lu-mapping",
    "cross-calculus",
    "mellies",
];

fn fuzz(name: &str, cfg: SuiteConfig) -> susp::Result<SuiteReport> {
    Ok(match name {
        "preservation" => suites::preservation(&cfg),
        "termination" => suites::termination(&cfg),
        "confluence" => suites::confluence(&cfg),
        "grafting" => suites::grafting_peaks(&cfg),
        "simulation" => suites::simulation(&cfg),
        "similarity" => suites::similarity(&cfg),
        "diamond" => suites::diamond(&cfg),
        "retraction" => suites::retraction(&cfg),
        "ls" => suites::ls_correspondence(&cfg),
        "lsig-forward" => suites::lsig_forward(&cfg),
        "lsig-backward" => suites::lsig_backward(&cfg),
        "bridges" => suites::bridges(&cfg),
        "lu-mapping" => suites::lu_rule_mapping(&cfg),
        // the corpus is fixed; cases sets its size
        "cross-calculus" => suites::cross_calculus(cfg.cases),
        "mellies" => suites::mellies(),
        _ => return Err(Error::Config(format!("unknown suite {name}; expected one of {}", SUITES.join(", ")))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn every_listed_suite_runs() {
        for s in SUITES.iter().filter(|s| **s != "mellies") {
            fuzz(s, SuiteConfig::new(3, 0)).unwrap();
        }
    }

    #[test]
    fn bridge_rule_lists() {
        assert_eq!(bridge_rules::<LsigCalc>(Some("sigma"), LSIG_PRESETS).unwrap(), LsigRule::SIGMA.to_vec());
        assert_eq!(bridge_rules::<LuCalc>(Some("b,app"), LU_PRESETS).unwrap(), vec![LuRule::B, LuRule::App]);
        assert!(bridge_rules::<LsCalc>(Some("nope"), LS_PRESETS).is_err());
    }
}
