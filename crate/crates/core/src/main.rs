use std::io::{BufRead, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use reslogic::demo::{demo_assembly_process, demo_assembly_resource, DemoReport, Variant};
use reslogic::game::{compactize, is_successful, star, Game, Position};
use reslogic::mll::{decide_binary_tautology, MllFormula};
use reslogic::semantics::{check_validity_desk_scale, eval_process, EvalConfig, ValidityVerdict};
use reslogic::session::{parse_slave_spec, Reply, Session};
use reslogic::strategy::{check_universal_success, simulate, MasterScript, SuccessVerdict, DEFAULT_BUDGET};
use reslogic::syntax::{parse, parse_resource, Level};
use reslogic::world::{parse_world, Interval, StepWorld};
use reslogic::{Error, Result};

#[derive(Parser)]
#[command(name = "reslogic", version, about = "Evaluate processes, decide MLL formulas and play resource games")]
struct Cli {
    /// Largest constant quantifiers range over.
    #[arg(long, global = true, default_value_t = 31)]
    domain: u32,
    /// How far past the last change the brute-force evaluator looks.
    #[arg(long, global = true, default_value_t = 32)]
    horizon: u64,
    /// Extra cut candidates tried around each boundary.
    #[arg(long, global = true, default_value_t = 3)]
    probe: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a process in a world, or search small worlds for a counterexample.
    CheckProcess {
        file: String,
        /// World file; without one, validity is checked by search.
        #[arg(long)]
        world: Option<String>,
        #[arg(long, default_value = "(0,inf)")]
        interval: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Decide whether an MLL formula is a binary tautology.
    DecideMll {
        file: String,
        /// Also print the pairing strategy as a slave spec for `play`.
        #[arg(long)]
        emit_strategy: bool,
    },
    /// Simulate a play, or search for an unsuccessful one with `--trials`.
    Play {
        file: String,
        /// waiting | diverging | pairing:P~Q,... | script:path -> branch;...  (prefix delay=N/ to slow it)
        #[arg(long, default_value = "waiting")]
        slave: String,
        /// Master script: lines of `@t master path -> branch(args)`.
        #[arg(long)]
        master: Option<String>,
        #[arg(long)]
        world: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Run this many random masters instead of one scripted play.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Play as master against a slave strategy, one line per move.
    Repl {
        file: String,
        #[arg(long, default_value = "waiting")]
        slave: String,
    },
    /// Replay a corpus demo: assembly-process, assembly-resource:theta, assembly-resource:lambda.
    Demo { name: String },
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Other(format!("{path}: {e}")))
}

fn read_world(path: &str, cfg: &mut EvalConfig) -> Result<StepWorld> {
    let (w, dom) = parse_world(&read(path)?)?;
    if let Some(d) = dom {
        cfg.domain_max = d;
    }
    Ok(w)
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

fn check_process(cfg: &mut EvalConfig, seed: u64, file: &str, world: Option<&str>, interval: &str, trials: usize) -> Result<Output> {
    let doc = parse(&read(file)?, Level::Process)?;
    let p = doc.process().cloned().expect("process document");
    match world {
        Some(wf) => {
            let w = read_world(wf, cfg)?;
            let iv = Interval::parse(interval)?;
            let r = eval_process(&w, iv, &p, cfg)?;
            let mut text = format!("{} on {iv}", r.truth);
            if let Some(cuts) = &r.witness {
                text.push_str(&format!("\nwitness cuts: {cuts:?}"));
            }
            let json = json!({ "process": p.to_string(), "interval": iv.to_string(), "verdict": r.truth, "witness": r.witness, "config": cfg });
            Ok(Output { text, json, ok: true })
        }
        None => {
            let v = check_validity_desk_scale(&p, cfg, trials, seed)?;
            let text = match &v {
                ValidityVerdict::NoCounterexampleFound { worlds, intervals, note } => {
                    format!("no counterexample found in {worlds} worlds and {intervals} intervals ({note})")
                }
                ValidityVerdict::Counterexample { world, interval } => {
                    format!("counterexample on {interval}:\n{}", world.to_text(Some(cfg.domain_max)))
                }
            };
            let json = json!({ "process": p.to_string(), "result": v, "config": cfg });
            Ok(Output { text, json, ok: !v.is_counterexample() })
        }
    }
}

fn decide_mll(file: &str, emit: bool) -> Result<Output> {
    let (r, _) = parse_resource(&read(file)?)?;
    let f = MllFormula::from_resource(&r)?;
    let occ = f.occurrences();
    let m = decide_binary_tautology(&f)?;
    let Some(m) = m else {
        return Ok(Output {
            text: format!("{f}\nnot a binary tautology"),
            json: json!({ "formula": f.to_string(), "verdict": false }),
            ok: true,
        });
    };
    let pairs: Vec<String> = m.path_pairs(&f).iter().map(|(a, b)| format!("{a}~{b}")).collect();
    let leftovers: Vec<String> = m.leftovers.iter().map(|&k| occ[k].path.to_string()).collect();
    let mut text = format!("{f}\nbinary tautology");
    for p in &pairs {
        text.push_str(&format!("\npair {p}"));
    }
    for l in &leftovers {
        text.push_str(&format!("\nunpaired {l}"));
    }
    let strategy = format!("pairing:{}", pairs.join(","));
    if emit {
        text.push_str(&format!("\nstrategy {strategy}"));
    }
    let json = json!({ "formula": f.to_string(), "verdict": true, "pairs": pairs, "unpaired": leftovers, "strategy": emit.then_some(strategy) });
    Ok(Output { text, json, ok: true })
}

#[allow(clippy::too_many_arguments)]
fn play(
    cfg: &mut EvalConfig,
    seed: u64,
    file: &str,
    slave: &str,
    master: Option<&str>,
    world: Option<&str>,
    budget: usize,
    trials: Option<usize>,
) -> Result<Output> {
    let (r, defs) = parse_resource(&read(file)?)?;
    let game = Game::new(defs, cfg.domain_max);
    let start = Position::from_resource(&r)?;
    if let Some(n) = trials {
        let make = |p: &Position| parse_slave_spec(slave, p);
        let v = check_universal_success(&game, &r, &make, n, cfg, seed)?;
        let text = match &v {
            SuccessVerdict::NoFailureFound { plays, worlds, note } => {
                format!("no failure found in {plays} plays over {worlds} worlds ({note})")
            }
            SuccessVerdict::Failure { listing, process, world, .. } => {
                format!("unsuccessful play:\n{}\nproduces {process}\nfalse in\n{}", listing.join("\n"), world.to_text(None))
            }
        };
        return Ok(Output { text, json: json!({ "resource": r.to_string(), "result": v }), ok: !v.is_failure() });
    }
    let mut m = match master {
        Some(f) => MasterScript::parse(&read(f)?)?,
        None => MasterScript::default(),
    };
    let mut s = parse_slave_spec(slave, &start)?;
    let p = compactize(&simulate(&game, &start, s.as_mut(), &mut m, budget)?);
    let produced = star(&p)?;
    let mut text = p.listing().join("\n");
    text.push_str(&format!("\nproduces {produced}"));
    if p.truncated {
        text.push_str("\n(truncated at the move budget)");
    }
    let mut json = json!({ "play": p.listing(), "produces": produced.to_string(), "truncated": p.truncated });
    if let Some(wf) = world {
        let w = read_world(wf, cfg)?;
        let ok = is_successful(&p, &w, cfg)?;
        text.push_str(&format!("\nsuccessful: {ok}"));
        json["successful"] = json!(ok);
    }
    Ok(Output { text, json, ok: true })
}

fn repl(cfg: EvalConfig, file: &str, slave: &str) -> Result<Output> {
    let (r, defs) = parse_resource(&read(file)?)?;
    let game = Game::new(defs, cfg.domain_max);
    let start = Position::from_resource(&r)?;
    let s = parse_slave_spec(slave, &start)?;
    let mut session = Session::new(game, &start, s, cfg)?;
    let stdin = std::io::stdin();
    let mut out = std::io::stdout();
    let _ = writeln!(out, "@0 {start}\n(:help lists commands)");
    let mut trace = String::new();
    for line in stdin.lock().lines() {
        let line = line.map_err(|e| Error::Other(e.to_string()))?;
        match session.handle(&line) {
            Ok(Reply::Text(t)) => {
                let _ = writeln!(out, "{t}");
            }
            Ok(Reply::Quit(t)) => {
                trace = t;
                break;
            }
            Err(e) => {
                let _ = writeln!(out, "rejected: {e}");
            }
        }
        let _ = out.flush();
    }
    if trace.is_empty() {
        if let Ok(Reply::Quit(t)) = session.handle(":quit") {
            trace = t;
        }
    }
    Ok(Output { json: json!({ "play": trace.lines().collect::<Vec<_>>() }), text: trace, ok: true })
}

fn demo(cfg: &EvalConfig, name: &str) -> Result<Output> {
    let report: DemoReport = match name {
        "assembly-process" => demo_assembly_process(cfg)?,
        _ => match name.strip_prefix("assembly-resource:") {
            Some(v) => demo_assembly_resource(v.parse::<Variant>()?, cfg)?,
            None => return Err(Error::Other(format!("unknown demo {name}"))),
        },
    };
    Ok(Output { text: report.to_text().trim_end().to_string(), json: json!(report), ok: report.ok() })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = EvalConfig { horizon: cli.horizon, probe_depth: cli.probe, domain_max: cli.domain };
    let result = match &cli.command {
        Command::CheckProcess { file, world, interval, trials } => {
            check_process(&mut cfg, cli.seed, file, world.as_deref(), interval, *trials)
        }
        Command::DecideMll { file, emit_strategy } => decide_mll(file, *emit_strategy),
        Command::Play { file, slave, master, world, budget, trials } => {
            play(&mut cfg, cli.seed, file, slave, master.as_deref(), world.as_deref(), *budget, *trials)
        }
        Command::Repl { file, slave } => repl(cfg, file, slave),
        Command::Demo { name } => demo(&cfg, name),
    };
    match result {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
            }
            if out.ok {
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

