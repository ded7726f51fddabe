//! The register-machine corpus and the runners that replay it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{compactize, is_successful, star, Choice, Game, Node, Path, Play, Position};
use crate::semantics::{eval_process, EvalConfig};
use crate::strategy::{simulate, ReportingMaster, ScriptedSlave, DEFAULT_BUDGET};
use crate::syntax::{parse, Item, Level, Potential, Process, Resource};
use crate::world::{GroundAtom, Interval, Situation, StepWorld};

pub const PRELUDE: &str = include_str!("../../corpus/assembly.rl");
pub const PROCESS_FILE: &str = include_str!("../../corpus/assembly-process.rl");
pub const THETA_FILE: &str = include_str!("../../corpus/assembly-theta.rl");
pub const LAMBDA_FILE: &str = include_str!("../../corpus/assembly-lambda.rl");

/// Corpus files by name, each meant to be read after the prelude.
pub const CORPUS: [(&str, &str); 3] =
    [("assembly-process", PROCESS_FILE), ("assembly-theta", THETA_FILE), ("assembly-lambda", LAMBDA_FILE)];

/// The prelude followed by one corpus file.
pub fn corpus_text(file: &str) -> String {
    format!("{PRELUDE}\n{file}")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DemoReport {
    pub demo: String,
    /// Situations of the realized world in order.
    pub trace: Vec<String>,
    pub axioms: Vec<Verdict>,
    pub goal: bool,
    /// Compactized play, one position per entry.
    pub play: Vec<String>,
    pub checks: Vec<Verdict>,
}

impl DemoReport {
    pub fn ok(&self) -> bool {
        self.goal && self.axioms.iter().chain(&self.checks).all(|v| v.holds)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("demo {}\n", self.demo);
        let mark = |b: bool| if b { "true" } else { "FALSE" };
        if !self.trace.is_empty() {
            out.push_str("trace\n");
            for (k, s) in self.trace.iter().enumerate() {
                out.push_str(&format!("  {k}. {s}\n"));
            }
        }
        for v in &self.axioms {
            out.push_str(&format!("axiom {}: {}\n", v.name, mark(v.holds)));
        }
        if !self.play.is_empty() {
            out.push_str("play\n");
            for l in &self.play {
                out.push_str(&format!("  {l}\n"));
            }
        }
        for v in &self.checks {
            out.push_str(&format!("check {}: {}\n", v.name, mark(v.holds)));
        }
        out.push_str(&format!("goal: {}\n", mark(self.goal)));
        out
    }
}

/// Register contents before any command.
const START: [u32; 3] = [2, 0, 0];

/// The world where register `i` is rewritten by a command whose switch moment is `t`,
/// for each `(t, i)` in order. With `pulses`, the switch moment carries `Pi` instead of
/// `Np`, and the new value appears one moment later.
pub fn register_world(commands: &[(u64, usize)], pulses: bool) -> StepWorld {
    let sit = |regs: &[u32; 3], puls: Option<usize>| {
        let mut atoms: Vec<GroundAtom> =
            (0..3).map(|i| GroundAtom::new(&format!("L{}", i + 1), vec![regs[i]])).collect();
        match (pulses, puls) {
            (true, Some(i)) => atoms.push(GroundAtom::prop(&format!("P{}", i + 1))),
            (true, None) => atoms.push(GroundAtom::prop("Np")),
            (false, _) => {}
        }
        Situation::new(atoms)
    };
    let mut regs = START;
    let mut segs = vec![(0, sit(&regs, None))];
    for &(t, i) in commands {
        if pulses {
            segs.push((t, sit(&regs, Some(i))));
        }
        regs[i] = regs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v).sum();
        segs.push((t + 1, sit(&regs, None)));
    }
    StepWorld::new(segs).expect("command moments increase").normalized()
}

/// Commands #2, #3, #1, #2 in the order the program gives them.
const PROGRAM: [usize; 4] = [1, 2, 0, 1];

fn document(file: &str, level: Level) -> Result<crate::syntax::Document> {
    parse(&corpus_text(file), level)
}

fn holds(w: &StepWorld, p: &Process, cfg: &EvalConfig) -> Result<bool> {
    Ok(eval_process(w, Interval::unbounded(0), p, cfg)?.truth)
}

fn proc_named(doc: &crate::syntax::Document, name: &str) -> Result<Process> {
    doc.defs
        .procs
        .get(name)
        .cloned()
        .map(|p| Process::Named(name.to_string(), Box::new(p)))
        .ok_or_else(|| Error::UnknownDef(name.to_string()))
}

const AXIOMS: [&str; 7] = ["reg1", "reg2", "reg3", "safety", "arithm", "nopuls", "program"];

/// The process version: the program's world, its axioms and the goal.
pub fn demo_assembly_process(cfg: &EvalConfig) -> Result<DemoReport> {
    let doc = document(PROCESS_FILE, Level::Process)?;
    let claim = doc.process().cloned().expect("process document");
    let times = [2u64, 4, 6, 8];
    let w = register_world(&times.iter().copied().zip(PROGRAM).collect::<Vec<_>>(), true);
    let mut report = DemoReport { demo: "assembly-process".into(), ..Default::default() };
    report.trace = w.segments().iter().map(|(_, s)| s.to_string()).collect();
    for name in AXIOMS {
        report.axioms.push(Verdict { name: name.into(), holds: holds(&w, &proc_named(&doc, name)?, cfg)? });
    }
    report.goal = holds(&w, &proc_named(&doc, "goal")?, cfg)?;
    report.checks.push(Verdict { name: "claim".into(), holds: holds(&w, &claim, cfg)? });
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    Theta,
    Lambda,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(Variant::Theta),
            "lambda" => Ok(Variant::Lambda),
            _ => Err(Error::Other(format!("unknown variant {s}; expected theta or lambda"))),
        }
    }
}

fn potential_name(p: &Position) -> Option<&str> {
    match &p.node {
        Node::Do { potential: Potential::Ref(n), .. } => Some(n),
        _ => None,
    }
}

/// Switch moments of the commands in a play: the tick after each command at `path`.
fn switches(play: &Play, paths: &[(Path, usize)]) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    for k in 1..play.positions.len() {
        for (path, reg) in paths {
            let was = play.positions[k - 1].at_path(path).map(|p| matches!(p.node, Node::Do { .. }));
            let now = play.positions[k].at_path(path).map(|p| matches!(p.node, Node::Done(_)));
            if was == Some(true) && now == Some(true) {
                out.push((play.times[k - 1] + 1, *reg));
            }
        }
    }
    out
}

/// The resource versions: a scripted slave against a master that reports every command.
pub fn demo_assembly_resource(variant: Variant, cfg: &EvalConfig) -> Result<DemoReport> {
    let (file, name) = match variant {
        Variant::Theta => (THETA_FILE, "assembly-resource:theta"),
        Variant::Lambda => (LAMBDA_FILE, "assembly-resource:lambda"),
    };
    let doc = document(file, Level::Resource)?;
    let Item::Resource(r) = &doc.item else { unreachable!("resource document") };
    let game = Game::new(doc.defs.clone(), cfg.domain_max);
    let start = Position::from_resource(r)?;

    // Where each register's commands go, by register index.
    let mut targets: Vec<(Path, usize)> = Vec::new();
    for o in start.occurrences() {
        let node = start.find(o.id).expect("occurrence");
        match potential_name(node) {
            Some("Theta") => targets.push((o.path.clone(), usize::MAX)),
            Some(n) if n.starts_with("Lambda") => {
                let reg = n["Lambda".len()..].parse::<usize>().map_err(|_| Error::UnknownDef(n.into()))? - 1;
                targets.push((o.path.clone(), reg));
            }
            _ => {}
        }
    }
    let steps: Vec<(Path, Choice)> = match variant {
        Variant::Theta => {
            let path = targets.first().map(|t| t.0.clone()).ok_or_else(|| Error::UnknownDef("Theta".into()))?;
            PROGRAM.iter().map(|&i| (path.clone(), Choice::new(i, vec![]))).collect()
        }
        Variant::Lambda => PROGRAM
            .iter()
            .map(|&i| {
                targets
                    .iter()
                    .find(|t| t.1 == i)
                    .map(|t| (t.0.clone(), Choice::new(0, vec![])))
                    .ok_or_else(|| Error::UnknownDef(format!("Lambda{}", i + 1)))
            })
            .collect::<Result<_>>()?,
    };

    let mut slave = ScriptedSlave::new(steps).awaiting_reports();
    let mut master = ReportingMaster::new(2);
    let play = compactize(&simulate(&game, &start, &mut slave, &mut master, DEFAULT_BUDGET)?);

    let mut report = DemoReport { demo: name.into(), ..Default::default() };
    report.play = play.listing();
    report.checks.push(Verdict { name: "script completed".into(), holds: slave.done() && !play.truncated });

    let world = match variant {
        Variant::Theta => {
            // Each command to Theta chooses the register by its branch.
            let moments: Vec<u64> = switches(&play, &targets).into_iter().map(|m| m.0).collect();
            register_world(&moments.into_iter().zip(PROGRAM).collect::<Vec<_>>(), true)
        }
        Variant::Lambda => register_world(&switches(&play, &targets), false),
    };
    report.trace = world.segments().iter().map(|(_, s)| s.to_string()).collect();

    let produced = star(&play)?;
    if let Process::Implies(ante, _) = &produced {
        report.checks.push(Verdict { name: "antecedent holds".into(), holds: holds(&world, ante, cfg)? });
    }
    let consequent = Path::parse("c")?;
    report.checks.push(Verdict {
        name: "consequent never commanded".into(),
        holds: play.positions.iter().all(|p| p.at_path(&consequent).is_some_and(|c| c.same_shape(start.at_path(&consequent).expect("consequent")))),
    });
    match variant {
        Variant::Theta => report.checks.push(Verdict { name: "matches the expected listing".into(), holds: theta_shape(&play, &targets[0].0, &doc)? }),
        Variant::Lambda => report.checks.push(Verdict { name: "one agent per move".into(), holds: one_agent_per_move(&play, r)? }),
    }
    report.goal = is_successful(&play, &world, cfg)?;
    Ok(report)
}

/// Positions 0, 1, 1', ..., 4': the Theta agent alternates between a pending command
/// `<<(alpha_i Theta)` and the reported `alpha_i Theta`, and nothing else moves.
fn theta_shape(play: &Play, at: &Path, doc: &crate::syntax::Document) -> Result<bool> {
    if play.len() != 1 + 2 * PROGRAM.len() {
        return Ok(false);
    }
    let theta = doc.defs.def("Theta")?;
    let first = &play.positions[0];
    for (k, pos) in play.positions.iter().enumerate() {
        let Some(node) = pos.at_path(at) else { return Ok(false) };
        let expected = match k {
            0 => Position::from_resource(&Resource::do_ref(Process::Down(crate::syntax::Fact::prop("Np")), "Theta"))?,
            _ => {
                let i = PROGRAM[(k - 1) / 2];
                let done = theta.instantiate(&[]).swap_remove(i);
                if k % 2 == 1 {
                    match &node.node {
                        Node::Done(d) if *d == done => continue,
                        _ => return Ok(false),
                    }
                }
                Position::from_resource(&done.instantiate(0, &[]).expect("one choice").expand())?
            }
        };
        if !node.same_shape(&expected) {
            return Ok(false);
        }
        // Everything outside the agent is as it was at the start.
        let mut rest = pos.clone();
        let mut orig = first.clone();
        if let (Some(a), Some(b)) = (rest.at_path_mut(at), orig.at_path_mut(at)) {
            *a = b.clone();
        }
        if !rest.same_shape(&orig) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Each compactized move changes the subtree of exactly one register agent.
fn one_agent_per_move(play: &Play, r: &Resource) -> Result<bool> {
    let start = &play.positions[0];
    let mut parts: Vec<Path> = Vec::new();
    fn spine(r: &Resource, path: Path, out: &mut Vec<Path>) {
        match r {
            Resource::Implies(a, b) => {
                spine(a, path.child(crate::game::Step::Antecedent), out);
                spine(b, path.child(crate::game::Step::Consequent), out);
            }
            Resource::And(a, b) => {
                spine(a, path.child(crate::game::Step::Left), out);
                spine(b, path.child(crate::game::Step::Right), out);
            }
            _ => out.push(path),
        }
    }
    spine(r, Path::default(), &mut parts);
    let agents: Vec<usize> = (0..parts.len())
        .filter(|&k| start.at_path(&parts[k]).and_then(potential_name).is_some_and(|n| n.starts_with("Lambda")))
        .collect();
    for w in play.positions.windows(2) {
        let changed: Vec<usize> = (0..parts.len())
            .filter(|&k| {
                let h = |p: &Position| p.at_path(&parts[k]).map(Position::subtree_hash);
                h(&w[0]) != h(&w[1])
            })
            .collect();
        if changed.len() != 1 || !agents.contains(&changed[0]) {
            return Ok(false);
        }
    }
    Ok(true)
}
