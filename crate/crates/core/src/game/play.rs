//! Plays, compactization, and the process a play produces.

use super::position::{Node, Position};
use crate::error::{Error, Result};
use crate::semantics::{eval_process, EvalConfig};
use crate::syntax::{Conjunct, LeadChain, Link, Multiplicity, Process};
use crate::world::{Interval, StepWorld};

/// `<P0, t1, P1, t2, P2, ...>`; `times[k]` is the moment `positions[k]` is replaced
/// by `positions[k + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Play {
    pub positions: Vec<Position>,
    pub times: Vec<u64>,
    /// Set when a simulation stopped at its move budget.
    pub truncated: bool,
}

impl Play {
    pub fn new(start: Position) -> Self {
        Play { positions: vec![start], times: Vec::new(), truncated: false }
    }

    pub fn push(&mut self, t: u64, p: Position) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(Error::Move(format!("play times must increase: {t} after {last}")));
            }
        }
        self.times.push(t);
        self.positions.push(p);
        Ok(())
    }

    pub fn last(&self) -> &Position {
        self.positions.last().expect("plays are nonempty")
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_compact(&self) -> bool {
        self.positions.windows(2).all(|w| !w[0].same_shape(&w[1]))
    }

    /// Numbered listing, one position per line with the moment it was reached.
    pub fn listing(&self) -> Vec<String> {
        self.positions
            .iter()
            .enumerate()
            .map(|(k, p)| match k {
                0 => format!("0. {p}"),
                _ => format!("{k}. @{} {p}", self.times[k - 1]),
            })
            .collect()
    }
}

/// Drop every position identical to its predecessor, with the moment before it.
pub fn compactize(play: &Play) -> Play {
    compact_parts(play.positions.clone(), play.times.clone(), play.truncated)
}

fn compact_parts(positions: Vec<Position>, times: Vec<u64>, truncated: bool) -> Play {
    let mut it = positions.into_iter();
    let mut out = Play::new(it.next().expect("plays are nonempty"));
    out.truncated = truncated;
    for (p, t) in it.zip(times) {
        if !out.last().same_shape(&p) {
            out.positions.push(p);
            out.times.push(t);
        }
    }
    out
}

fn child_play(
    play: &Play,
    pick: impl Fn(&Position) -> Result<Position>,
) -> Result<Play> {
    let ps = play.positions.iter().map(pick).collect::<Result<Vec<_>>>()?;
    Ok(compact_parts(ps, play.times.clone(), play.truncated))
}

fn spine_error() -> Error {
    Error::Move("play changes the connective structure of a position".into())
}

/// The process produced by a play. The play is compactized first.
pub fn star(play: &Play) -> Result<Process> {
    star_compact(&compactize(play))
}

fn star_compact(play: &Play) -> Result<Process> {
    let first = &play.positions[0];
    match &first.node {
        Node::Implies(..) | Node::And(..) => {
            let is_imp = matches!(first.node, Node::Implies(..));
            let side = |left: bool| {
                child_play(play, |p| match (&p.node, is_imp) {
                    (Node::Implies(a, b), true) | (Node::And(a, b), false) => {
                        Ok(if left { (**a).clone() } else { (**b).clone() })
                    }
                    _ => Err(spine_error()),
                })
            };
            let a = star_compact(&side(true)?)?;
            let b = star_compact(&side(false)?)?;
            Ok(if is_imp { Process::implies(a, b) } else { Process::and(a, b) })
        }
        Node::Forall(v, _) => {
            let body = child_play(play, |p| match &p.node {
                Node::Forall(w, a) if w == v => Ok((**a).clone()),
                _ => Err(spine_error()),
            })?;
            Ok(Process::Forall(v.clone(), Box::new(star_compact(&body)?)))
        }
        Node::Bang { body, .. } => {
            let peeled = play
                .positions
                .iter()
                .map(|p| match &p.node {
                    Node::Bang { copies, .. } => Ok(copies.len()),
                    _ => Err(spine_error()),
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max()
                .unwrap_or(0);
            let mut conjuncts: Vec<Conjunct> = Vec::new();
            let mut add = |p: Process, m: Multiplicity| {
                match conjuncts.iter_mut().find(|c| c.process == p) {
                    Some(c) => c.multiplicity = Multiplicity::Unbounded,
                    None => conjuncts.push(Conjunct { process: p, multiplicity: m }),
                }
            };
            for k in 0..peeled {
                let sub = child_play(play, |p| match &p.node {
                    Node::Bang { body, copies } => {
                        Ok(copies.get(k).cloned().unwrap_or_else(|| Position::fresh_copy(p.id, body, k)))
                    }
                    _ => Err(spine_error()),
                })?;
                add(star_compact(&sub)?, Multiplicity::Finite(1));
            }
            let rest = Position::fresh_copy(first.id, body, peeled);
            add(star_compact(&Play::new(rest))?, Multiplicity::Unbounded);
            Ok(if conjuncts.len() == 1 { conjuncts.pop().unwrap().process } else { Process::InfConj(conjuncts) })
        }
        Node::Do { effect, .. } => {
            if play.len() == 1 {
                return Ok(effect.clone());
            }
            if !matches!(play.positions[1].node, Node::Done(_)) {
                return Err(spine_error());
            }
            if play.len() == 2 {
                // Commanded but never reported.
                return Ok(Process::falsum());
            }
            let (k, m) = (play.times[0], play.times[1]);
            let rest = Play {
                positions: play.positions[2..].to_vec(),
                times: play.times[2..].to_vec(),
                truncated: play.truncated,
            };
            let tail = star_compact(&rest)?;
            let mut links = vec![];
            let next = match tail {
                Process::Chain(LeadChain { head, links: more, open_ended: false }) => {
                    links.push(Link { after: k, before: m, next: *head });
                    links.extend(more);
                    return Ok(Process::Chain(LeadChain { head: Box::new(effect.clone()), links, open_ended: false }));
                }
                other => other,
            };
            links.push(Link { after: k, before: m, next });
            Ok(Process::Chain(LeadChain { head: Box::new(effect.clone()), links, open_ended: false }))
        }
        Node::Done(_) => Err(Error::Move("a play cannot start at a pending command".into())),
    }
}

/// `W |=_(0,inf) P*`.
pub fn is_successful(play: &Play, w: &StepWorld, cfg: &EvalConfig) -> Result<bool> {
    Ok(eval_process(w, Interval::unbounded(0), &star(play)?, cfg)?.truth)
}
