//! Slave strategies.

use super::{Delay, SlaveStrategy};
use crate::error::{Error, Result};
use crate::game::{Actor, Choice, Game, MoveDelta, Node, Path, Polarity, Position, Step};

/// Never moves.
#[derive(Clone, Copy, Debug, Default)]
pub struct Waiting;

impl SlaveStrategy for Waiting {
    fn step(&mut self, _game: &Game, _pos: &Position) -> Result<MoveDelta> {
        Ok(MoveDelta::empty(Actor::Slave))
    }
}

/// Its computation never finishes, so it never answers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Diverging;

impl SlaveStrategy for Diverging {
    fn step(&mut self, _game: &Game, _pos: &Position) -> Result<MoveDelta> {
        Ok(MoveDelta::empty(Actor::Slave))
    }

    fn delay(&self, _pos: &Position) -> Delay {
        Delay::Diverge
    }
}

/// Another strategy with a fixed answer delay.
#[derive(Clone, Debug)]
pub struct Delayed<S> {
    pub inner: S,
    pub ticks: u64,
}

impl<S: SlaveStrategy> SlaveStrategy for Delayed<S> {
    fn step(&mut self, game: &Game, pos: &Position) -> Result<MoveDelta> {
        self.inner.step(game, pos)
    }

    fn delay(&self, _pos: &Position) -> Delay {
        Delay::Ticks(self.ticks.max(1))
    }
}

fn path_polarity(path: &Path) -> Polarity {
    let flips = path.0.iter().filter(|s| **s == Step::Antecedent).count();
    if flips % 2 == 0 {
        Polarity::Positive
    } else {
        Polarity::Negative
    }
}

/// Whether the slave may replace this node, given its polarity.
fn slave_may_replace(node: &Position, pol: Polarity) -> bool {
    match node.node {
        Node::Do { .. } => pol == Actor::Slave.commands(),
        Node::Done(_) => pol != Actor::Slave.commands(),
        _ => false,
    }
}

/// Makes a fixed sequence of replacements, each as soon as its target is open to it.
#[derive(Clone, Debug)]
pub struct ScriptedSlave {
    pub steps: Vec<(Path, Choice)>,
    /// Hold each step until the previous command has been reported.
    pub await_reports: bool,
    next: usize,
}

impl ScriptedSlave {
    pub fn new(steps: Vec<(Path, Choice)>) -> Self {
        ScriptedSlave { steps, await_reports: false, next: 0 }
    }

    pub fn awaiting_reports(mut self) -> Self {
        self.await_reports = true;
        self
    }

    pub fn done(&self) -> bool {
        self.next >= self.steps.len()
    }
}

impl SlaveStrategy for ScriptedSlave {
    fn step(&mut self, _game: &Game, pos: &Position) -> Result<MoveDelta> {
        let Some((path, choice)) = self.steps.get(self.next) else {
            return Ok(MoveDelta::empty(Actor::Slave));
        };
        if self.await_reports && self.next > 0 {
            let prev = &self.steps[self.next - 1].0;
            if pos.at_path(prev).is_some_and(|p| matches!(p.node, Node::Done(_))) {
                return Ok(MoveDelta::empty(Actor::Slave));
            }
        }
        let Ok((id, peel)) = pos.resolve(path) else {
            return Ok(MoveDelta::empty(Actor::Slave));
        };
        let node = match pos.find(id) {
            Some(n) => n.clone(),
            None => match peel {
                // A fresh bang copy: resolve it on the peeled tree.
                Some(_) => return Err(Error::Move(format!("scripted slave cannot peel at {path}"))),
                None => return Ok(MoveDelta::empty(Actor::Slave)),
            },
        };
        if !slave_may_replace(&node, path_polarity(path)) {
            return Ok(MoveDelta::empty(Actor::Slave));
        }
        self.next += 1;
        Ok(MoveDelta::empty(Actor::Slave).with(id, choice.clone()))
    }
}

/// Pairs of paths to occurrences of the same subresource with opposite polarities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairingTable {
    pub pairs: Vec<(Path, Path)>,
}

impl PairingTable {
    /// Check the table against an initial position.
    pub fn new(start: &Position, pairs: Vec<(Path, Path)>) -> Result<Self> {
        let mut used = Vec::new();
        for (p, q) in &pairs {
            let (a, b) = match (start.at_path(p), start.at_path(q)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Move(format!("pairing {p} ~ {q} does not fit the position"))),
            };
            if !a.same_shape(b) {
                return Err(Error::Move(format!("paired occurrences {p} and {q} differ")));
            }
            if path_polarity(p) == path_polarity(q) {
                return Err(Error::Move(format!("paired occurrences {p} and {q} have the same polarity")));
            }
            for x in [p, q] {
                if used.iter().any(|u: &Path| u.0.starts_with(&x.0) || x.0.starts_with(&u.0)) {
                    return Err(Error::Move(format!("occurrence {x} is paired twice")));
                }
                used.push(x.clone());
            }
        }
        Ok(PairingTable { pairs })
    }
}

/// Copies every move made in one occurrence of a pair into the other one.
#[derive(Clone, Debug)]
pub struct PairingStrategy {
    pub table: PairingTable,
}

impl PairingStrategy {
    pub fn new(table: PairingTable) -> Self {
        PairingStrategy { table }
    }

    fn mirror(a: &Position, b: &Position, pa: &Path, pb: &Path, out: &mut MoveDelta) {
        let (la, lb) = (a.history.len(), b.history.len());
        if la != lb {
            let (ahead, behind, pbehind, n) = if la > lb { (a, b, pb, lb) } else { (b, a, pa, la) };
            if slave_may_replace(behind, path_polarity(pbehind)) {
                out.replacements.insert(behind.id, ahead.history[n].clone());
            }
            return;
        }
        match (&a.node, &b.node) {
            (Node::Implies(a1, a2), Node::Implies(b1, b2)) => {
                Self::mirror(a1, b1, &pa.child(Step::Antecedent), &pb.child(Step::Antecedent), out);
                Self::mirror(a2, b2, &pa.child(Step::Consequent), &pb.child(Step::Consequent), out);
            }
            (Node::And(a1, a2), Node::And(b1, b2)) => {
                Self::mirror(a1, b1, &pa.child(Step::Left), &pb.child(Step::Left), out);
                Self::mirror(a2, b2, &pa.child(Step::Right), &pb.child(Step::Right), out);
            }
            (Node::Forall(_, a1), Node::Forall(_, b1)) => {
                Self::mirror(a1, b1, &pa.child(Step::Body), &pb.child(Step::Body), out);
            }
            (Node::Bang { body: ba, copies: ca }, Node::Bang { body: bb, copies: cb }) => {
                for k in 0..ca.len().max(cb.len()) {
                    let x = ca.get(k).cloned().unwrap_or_else(|| {
                        out.peels.insert(a.id, k + 1);
                        Position::fresh_copy(a.id, ba, k)
                    });
                    let y = cb.get(k).cloned().unwrap_or_else(|| {
                        out.peels.insert(b.id, k + 1);
                        Position::fresh_copy(b.id, bb, k)
                    });
                    Self::mirror(&x, &y, &pa.child(Step::Copy(k)), &pb.child(Step::Copy(k)), out);
                }
            }
            _ => {}
        }
    }
}

impl SlaveStrategy for PairingStrategy {
    fn step(&mut self, _game: &Game, pos: &Position) -> Result<MoveDelta> {
        let mut out = MoveDelta::empty(Actor::Slave);
        for (p, q) in &self.table.pairs {
            match (pos.at_path(p), pos.at_path(q)) {
                (Some(a), Some(b)) => Self::mirror(a, b, p, q, &mut out),
                _ => return Err(Error::Move(format!("pairing {p} ~ {q} lost its occurrences"))),
            }
        }
        Ok(out)
    }
}
