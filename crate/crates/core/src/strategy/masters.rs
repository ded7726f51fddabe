//! Master behaviours: fixed scripts, a compliant reporter, and a random adversary.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{Actor, Choice, Game, MoveDelta, Node, OccId, Path, Polarity, Position};

pub trait MasterStrategy {
    /// The master's move at tick `t` against the current position.
    fn act(&mut self, t: u64, game: &Game, pos: &Position) -> Result<MoveDelta>;
    /// True when no move will come after tick `t` from `pos` on.
    fn finished(&self, t: u64, pos: &Position) -> bool;
}

/// One scripted move: `@t actor path -> branch(args)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptEntry {
    pub time: u64,
    pub actor: Actor,
    pub path: Path,
    pub choice: Choice,
}

impl ScriptEntry {
    pub fn parse(line: &str) -> Result<ScriptEntry> {
        let bad = |why: &str| Error::Script(format!("{why} in `{line}`"));
        let rest = line.trim().strip_prefix('@').ok_or_else(|| bad("expected `@time`"))?;
        let mut words = rest.splitn(3, char::is_whitespace);
        let time = words.next().and_then(|w| w.parse().ok()).ok_or_else(|| bad("bad time"))?;
        let actor = match words.next() {
            Some("master") => Actor::Master,
            Some("slave") => Actor::Slave,
            _ => return Err(bad("expected `master` or `slave`")),
        };
        let (path, choice) = words
            .next()
            .and_then(|r| r.split_once("->"))
            .ok_or_else(|| bad("expected `path -> branch(args)`"))?;
        let path = Path::parse(path)?;
        let choice = parse_choice(choice.trim()).ok_or_else(|| bad("bad choice"))?;
        Ok(ScriptEntry { time, actor, path, choice })
    }
}

impl std::fmt::Display for ScriptEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "@{} {} {} -> {}", self.time, self.actor, self.path, self.choice)
    }
}

/// `2`, `2()` or `2(0,5)`.
pub fn parse_choice(s: &str) -> Option<Choice> {
    let (idx, args) = match s.split_once('(') {
        Some((i, rest)) => (i, rest.strip_suffix(')')?),
        None => (s, ""),
    };
    let index = idx.trim().parse().ok()?;
    let args = args
        .split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(|a| a.parse().ok())
        .collect::<Option<Vec<u32>>>()?;
    Some(Choice::new(index, args))
}

/// Turn a path-addressed replacement into a delta against `pos`.
pub fn delta_for(pos: &Position, actor: Actor, path: &Path, choice: &Choice) -> Result<MoveDelta> {
    let (id, peel) = pos.resolve(path)?;
    let mut d = MoveDelta::empty(actor).with(id, choice.clone());
    if let Some((bang, n)) = peel {
        d.peels.insert(bang, n);
    }
    Ok(d)
}

/// Master moves at fixed ticks, addressed by path.
#[derive(Clone, Debug, Default)]
pub struct MasterScript {
    pub entries: Vec<ScriptEntry>,
}

impl MasterScript {
    pub fn new(entries: Vec<ScriptEntry>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0].time > w[1].time) {
            return Err(Error::Script("script times must not decrease".into()));
        }
        if let Some(e) = entries.iter().find(|e| e.actor != Actor::Master || e.time == 0) {
            return Err(Error::Script(format!("not a master move at a positive tick: {e}")));
        }
        Ok(MasterScript { entries })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let entries = text
            .lines()
            .map(|l| l.split("--").next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(ScriptEntry::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

impl MasterStrategy for MasterScript {
    fn act(&mut self, t: u64, _game: &Game, pos: &Position) -> Result<MoveDelta> {
        let mut out = MoveDelta::empty(Actor::Master);
        for e in self.entries.iter().filter(|e| e.time == t) {
            let d = delta_for(pos, Actor::Master, &e.path, &e.choice)
                .map_err(|err| Error::Script(format!("{e}: {err} (position {pos})")))?;
            out.replacements.extend(d.replacements);
            out.peels.extend(d.peels);
        }
        Ok(out)
    }

    fn finished(&self, t: u64, _pos: &Position) -> bool {
        self.entries.iter().all(|e| e.time <= t)
    }
}

/// Reports every command the master is responsible for, taking the first choice with
/// all-zero constants, `lag` ticks after the command appeared.
#[derive(Clone, Debug)]
pub struct ReportingMaster {
    pub lag: u64,
    seen: BTreeMap<OccId, u64>,
}

impl ReportingMaster {
    pub fn new(lag: u64) -> Self {
        ReportingMaster { lag: lag.max(1), seen: BTreeMap::new() }
    }

    fn owed(pos: &Position) -> Vec<(OccId, usize)> {
        pos.occurrences()
            .into_iter()
            .filter(|o| o.polarity == Polarity::Negative)
            .filter_map(|o| match &pos.find(o.id)?.node {
                Node::Done(d) => Some((o.id, d.vars.len())),
                _ => None,
            })
            .collect()
    }
}

impl MasterStrategy for ReportingMaster {
    fn act(&mut self, t: u64, _game: &Game, pos: &Position) -> Result<MoveDelta> {
        let mut out = MoveDelta::empty(Actor::Master);
        for (id, arity) in Self::owed(pos) {
            // Seen now means it appeared during the previous tick.
            let born = *self.seen.entry(id).or_insert(t - 1);
            if t >= born + self.lag {
                out.replacements.insert(id, Choice::new(0, vec![0; arity]));
            }
        }
        Ok(out)
    }

    fn finished(&self, _t: u64, pos: &Position) -> bool {
        Self::owed(pos).is_empty()
    }
}

/// At each of its slots, makes a uniformly chosen legal master move, or none.
#[derive(Clone, Debug)]
pub struct RandomMaster {
    rng: ChaCha8Rng,
    pub slots: Vec<u64>,
    pub arg_max: u32,
}

impl RandomMaster {
    pub fn new(seed: u64, slots: Vec<u64>, arg_max: u32) -> Self {
        RandomMaster { rng: ChaCha8Rng::seed_from_u64(seed), slots, arg_max }
    }

    /// Up to `max_moves` slots at distinct ticks in `1..=max_tick`.
    pub fn random_slots(seed: u64, max_moves: usize, max_tick: u64, arg_max: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(0..=max_moves);
        let mut ticks: Vec<u64> = (1..=max_tick).collect();
        ticks.shuffle(&mut rng);
        let mut slots: Vec<u64> = ticks.into_iter().take(n).collect();
        slots.sort_unstable();
        RandomMaster { rng, slots, arg_max }
    }
}

impl MasterStrategy for RandomMaster {
    fn act(&mut self, t: u64, game: &Game, pos: &Position) -> Result<MoveDelta> {
        if !self.slots.contains(&t) {
            return Ok(MoveDelta::empty(Actor::Master));
        }
        let mut options = game.legal_moves(pos, Actor::Master, self.arg_max);
        options.push(MoveDelta::empty(Actor::Master));
        Ok(options.swap_remove(self.rng.gen_range(0..options.len())))
    }

    fn finished(&self, t: u64, _pos: &Position) -> bool {
        self.slots.iter().all(|s| *s <= t)
    }
}
