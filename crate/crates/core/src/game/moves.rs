//! Master and slave moves, and their composition.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::position::{Choice, Node, OccId, OccKind, Polarity, Position};
use crate::error::{Error, Result};
use crate::syntax::Definitions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Actor {
    Master,
    Slave,
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Actor::Master => "master",
            Actor::Slave => "slave",
        })
    }
}

impl Actor {
    /// Polarity of the DO-nodes this actor commands. It reports in the other polarity.
    pub fn commands(self) -> Polarity {
        match self {
            Actor::Master => Polarity::Positive,
            Actor::Slave => Polarity::Negative,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoveDelta {
    pub actor: Actor,
    /// Bangs that must have at least this many peeled copies before replacing.
    pub peels: BTreeMap<OccId, usize>,
    pub replacements: BTreeMap<OccId, Choice>,
}

impl MoveDelta {
    pub fn empty(actor: Actor) -> Self {
        MoveDelta { actor, peels: BTreeMap::new(), replacements: BTreeMap::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.replacements.is_empty()
    }

    pub fn with(mut self, id: OccId, c: Choice) -> Self {
        self.replacements.insert(id, c);
        self
    }
}

/// The static context of a game: recursive definitions and the constant domain.
#[derive(Clone, Debug, Default)]
pub struct Game {
    pub defs: Definitions,
    pub domain_max: u32,
}

impl Game {
    pub fn new(defs: Definitions, domain_max: u32) -> Self {
        Game { defs, domain_max }
    }

    /// Check that one replacement is legal for `actor` and compute the new subtree.
    fn replacement(&self, target: &Position, pol: Polarity, actor: Actor, c: &Choice) -> Result<Position> {
        if let Some(a) = c.args.iter().find(|a| **a > self.domain_max) {
            return Err(Error::Move(format!("constant {a} exceeds the domain bound {}", self.domain_max)));
        }
        let mut history = target.history.clone();
        history.push(c.clone());
        let id = target.replaced_id(c);
        match &target.node {
            Node::Do { potential, .. } => {
                if pol != actor.commands() {
                    return Err(Error::Move(format!("{actor} cannot command a {pol:?} DO-node")));
                }
                let node = self.defs.potential(potential)?;
                if node.branches.is_empty() {
                    return Err(Error::Move("this DO-node accepts no commands".into()));
                }
                if c.index >= node.branches.len() || c.args.len() != node.vars.len() {
                    return Err(Error::Move(format!(
                        "command {c} does not fit {} branches with {} parameters",
                        node.branches.len(),
                        node.vars.len()
                    )));
                }
                let done = node.instantiate(&c.args).swap_remove(c.index);
                Ok(Position { id, history, node: Node::Done(done) })
            }
            Node::Done(d) => {
                if pol == actor.commands() {
                    return Err(Error::Move(format!("{actor} cannot report in a {pol:?} DONE-node")));
                }
                if c.index >= d.choices.len() || c.args.len() != d.vars.len() {
                    return Err(Error::Move(format!(
                        "report {c} does not fit {} choices with {} parameters",
                        d.choices.len(),
                        d.vars.len()
                    )));
                }
                let r = d.instantiate(c.index, &c.args).expect("index checked");
                Position::build(&r.expand(), id, history)
            }
            _ => Err(Error::Move("only DO- and DONE-nodes can be replaced".into())),
        }
    }

    /// Apply one actor's move.
    pub fn apply_move(&self, pos: &Position, delta: &MoveDelta) -> Result<Position> {
        self.apply(pos, [delta])
    }

    /// Combine a master move and a slave move made against the same position.
    pub fn compose_moves(&self, base: &Position, m1: &MoveDelta, m2: &MoveDelta) -> Result<Position> {
        if m1.actor != Actor::Master || m2.actor != Actor::Slave {
            return Err(Error::Move("composition takes a master move then a slave move".into()));
        }
        if let Some(id) = m1.replacements.keys().find(|k| m2.replacements.contains_key(k)) {
            return Err(Error::Move(format!("both players replace occurrence {id:#x}")));
        }
        self.apply(base, [m1, m2])
    }

    fn apply<'a>(&self, pos: &Position, deltas: impl IntoIterator<Item = &'a MoveDelta> + Clone) -> Result<Position> {
        let mut out = pos.clone();
        for d in deltas.clone() {
            for (&bang, &need) in &d.peels {
                let b = out
                    .find_mut(bang)
                    .ok_or_else(|| Error::Move(format!("no bang with id {bang:#x}")))?;
                let id = b.id;
                match &mut b.node {
                    Node::Bang { body, copies } => {
                        while copies.len() < need {
                            let k = copies.len();
                            copies.push(Position::fresh_copy(id, body, k));
                        }
                    }
                    _ => return Err(Error::Move(format!("occurrence {bang:#x} is not a bang"))),
                }
            }
        }
        // Polarities are read off the peeled tree, before any replacement.
        let peeled = out.clone();
        for d in deltas {
            for (&id, c) in &d.replacements {
                let pol = peeled.polarity_of(id)?;
                let target = peeled.find(id).expect("occurrence exists");
                let new = self.replacement(target, pol, d.actor, c)?;
                *out.find_mut(id).expect("occurrence exists") = new;
            }
        }
        Ok(out)
    }

    /// Every legal single replacement for `actor`, with constants up to `arg_max`.
    pub fn legal_replacements(&self, pos: &Position, actor: Actor, arg_max: u32) -> Vec<(OccId, Choice)> {
        let mut out = Vec::new();
        for o in pos.occurrences() {
            let target = pos.find(o.id).expect("occurrence");
            let (n, vars) = match &target.node {
                Node::Do { potential, .. } if o.polarity == actor.commands() => match self.defs.potential(potential) {
                    Ok(node) => (node.branches.len(), node.vars.len()),
                    Err(_) => continue,
                },
                Node::Done(d) if o.polarity != actor.commands() => (d.choices.len(), d.vars.len()),
                _ => continue,
            };
            let top = arg_max.min(self.domain_max);
            for index in 0..n {
                for args in tuples(vars, top) {
                    out.push((o.id, Choice::new(index, args)));
                }
            }
        }
        out
    }
}

impl Game {
    /// Every legal move of a single replacement, including commands in the next
    /// unpeeled copy of a bang.
    pub fn legal_moves(&self, pos: &Position, actor: Actor, arg_max: u32) -> Vec<MoveDelta> {
        let mut out: Vec<MoveDelta> = self
            .legal_replacements(pos, actor, arg_max)
            .into_iter()
            .map(|(id, c)| MoveDelta::empty(actor).with(id, c))
            .collect();
        for o in pos.occurrences().into_iter().filter(|o| o.kind == OccKind::Bang) {
            let Some(Node::Bang { copies, .. }) = pos.find(o.id).map(|p| &p.node) else { continue };
            let mut peel = MoveDelta::empty(actor);
            peel.peels.insert(o.id, copies.len() + 1);
            let Ok(peeled) = self.apply_move(pos, &peel) else { continue };
            for (id, c) in self.legal_replacements(&peeled, actor, arg_max) {
                if pos.find(id).is_none() {
                    let mut d = peel.clone();
                    d.replacements.insert(id, c);
                    out.push(d);
                }
            }
        }
        out
    }
}

/// All tuples of length `n` over `0..=top`.
fn tuples(n: usize, top: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=top).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}
