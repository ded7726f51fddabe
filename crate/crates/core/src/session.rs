//! Interactive play: a person types master moves, a chosen slave strategy answers.

use crate::error::{Error, Result};
use crate::game::{compactize, is_successful, star, Actor, Game, Path, Position};
use crate::semantics::EvalConfig;
use crate::strategy::{
    delta_for, parse_choice, Delayed, Diverging, PairingStrategy, PairingTable, Runner, ScriptedSlave, SlaveStrategy,
    Waiting,
};
use crate::world::parse_world;

/// `waiting`, `diverging`, `pairing:P~Q,...`, or `script:` followed by lines of
/// `path -> branch(args)` separated by `;`. A `delay=N/` prefix slows any of them.
pub fn parse_slave_spec(spec: &str, start: &Position) -> Result<Box<dyn SlaveStrategy>> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("delay=") {
        let (n, inner) = rest.split_once('/').ok_or_else(|| Error::Script(format!("expected `delay=N/spec`, got `{spec}`")))?;
        let ticks = n.parse().map_err(|_| Error::Script(format!("bad delay `{n}`")))?;
        return Ok(Box::new(Delayed { inner: parse_slave_spec(inner, start)?, ticks }));
    }
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "waiting" => Ok(Box::new(Waiting)),
        "diverging" => Ok(Box::new(Diverging)),
        "pairing" => {
            let mut pairs = Vec::new();
            for p in arg.split(',').filter(|p| !p.trim().is_empty()) {
                let (a, b) = p.split_once('~').ok_or_else(|| Error::Script(format!("expected `path~path`, got `{p}`")))?;
                pairs.push((Path::parse(a.trim())?, Path::parse(b.trim())?));
            }
            Ok(Box::new(PairingStrategy::new(PairingTable::new(start, pairs)?)))
        }
        "script" => {
            let mut steps = Vec::new();
            for line in arg.split([';', '\n']).map(str::trim).filter(|l| !l.is_empty() && !l.starts_with("--")) {
                let (path, choice) =
                    line.split_once("->").ok_or_else(|| Error::Script(format!("expected `path -> branch`, got `{line}`")))?;
                let choice = parse_choice(choice.trim()).ok_or_else(|| Error::Script(format!("bad choice in `{line}`")))?;
                steps.push((Path::parse(path.trim())?, choice));
            }
            Ok(Box::new(ScriptedSlave::new(steps).awaiting_reports()))
        }
        _ => Err(Error::Script(format!("unknown slave strategy `{spec}`"))),
    }
}

pub enum Reply {
    Text(String),
    /// The session ended; the text is the play trace.
    Quit(String),
}

pub struct Session {
    runner: Runner<Box<dyn SlaveStrategy>>,
    cfg: EvalConfig,
}

const HELP: &str = "\
path -> branch(args)   move at the next tick, e.g. `c -> 0` or `a.l -> 1(3)`
(empty) or :tick [n]   let n ticks pass without a move
:show                  current position
:play                  the play so far
:star                  the process the play has produced
:eval <worldfile>      whether the play so far succeeds in that world
:quit                  stop and print the play";

impl Session {
    pub fn new(game: Game, start: &Position, slave: Box<dyn SlaveStrategy>, cfg: EvalConfig) -> Result<Self> {
        Ok(Session { runner: Runner::new(game, start, slave)?, cfg })
    }

    pub fn help() -> &'static str {
        HELP
    }

    fn show(&self) -> String {
        format!("@{} {}", self.runner.now(), self.runner.position())
    }

    fn trace(&self) -> String {
        compactize(self.runner.play()).listing().join("\n")
    }

    /// Handle one input line. Errors leave the session as it was.
    pub fn handle(&mut self, line: &str) -> Result<Reply> {
        let line = line.trim();
        let (cmd, arg) = line.split_once(char::is_whitespace).map_or((line, ""), |(c, a)| (c, a.trim()));
        match cmd {
            "" | ":tick" => {
                let n: u64 = if arg.is_empty() { 1 } else { arg.parse().map_err(|_| Error::Script(format!("bad tick count `{arg}`")))? };
                for _ in 0..n {
                    self.runner.tick(crate::game::MoveDelta::empty(Actor::Master))?;
                }
                Ok(Reply::Text(self.show()))
            }
            ":show" => Ok(Reply::Text(self.show())),
            ":play" => Ok(Reply::Text(self.trace())),
            ":star" => Ok(Reply::Text(star(self.runner.play())?.to_string())),
            ":eval" => {
                let text = std::fs::read_to_string(arg).map_err(|e| Error::World(format!("{arg}: {e}")))?;
                let (w, _) = parse_world(&text)?;
                let ok = is_successful(self.runner.play(), &w, &self.cfg)?;
                Ok(Reply::Text(if ok { "successful so far".into() } else { "not successful".into() }))
            }
            ":help" => Ok(Reply::Text(HELP.into())),
            ":quit" => Ok(Reply::Quit(self.trace())),
            _ if cmd.starts_with(':') => Err(Error::Script(format!("unknown command `{cmd}`; try :help"))),
            _ => {
                let (path, choice) =
                    line.split_once("->").ok_or_else(|| Error::Script("expected `path -> branch(args)`".into()))?;
                let choice = parse_choice(choice.trim()).ok_or_else(|| Error::Script(format!("bad choice `{}`", choice.trim())))?;
                let delta = delta_for(self.runner.position(), Actor::Master, &Path::parse(path.trim())?, &choice)?;
                self.runner.tick(delta)?;
                Ok(Reply::Text(self.show()))
            }
        }
    }
}
