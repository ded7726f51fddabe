//! Positions: resources whose DO-nodes may have been commanded (leaving a pending
//! DONE-node) or reported (leaving the chosen resource).

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::printer::{done_node, resource};
use crate::syntax::{DoneNode, Potential, Process, Resource, Var};

pub type OccId = u64;

/// Child id from a parent id and a tag (splitmix64 finalizer over the mix).
pub fn derive(parent: OccId, tag: u64) -> OccId {
    let mut z = parent ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub const ROOT_ID: OccId = 0x5EED;

const TAG_LEFT: u64 = 1;
const TAG_RIGHT: u64 = 2;
const TAG_BODY: u64 = 3;
const TAG_COPY: u64 = 0x100;
const TAG_REPLACE: u64 = 0x1_0000;

/// A branch index together with the constants substituted for its variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Choice {
    pub index: usize,
    pub args: Vec<u32>,
}

impl Choice {
    pub fn new(index: usize, args: Vec<u32>) -> Self {
        Choice { index, args }
    }

    fn tag(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        TAG_REPLACE ^ h.finish()
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
        write!(f, "{}({})", self.index, args.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    /// A DO-resource that has not been commanded.
    Do { effect: Process, potential: Potential },
    /// A command was given; the report is pending.
    Done(DoneNode),
    Implies(Box<Position>, Box<Position>),
    And(Box<Position>, Box<Position>),
    Forall(Var, Box<Position>),
    /// `!body` with the conjuncts peeled off so far; the rest are all still `body`.
    Bang { body: Resource, copies: Vec<Position> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    pub id: OccId,
    /// Every choice made at this location since it was a leaf of the initial resource.
    pub history: Vec<Choice>,
    pub node: Node,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// One step of an occurrence path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Antecedent,
    Consequent,
    Left,
    Right,
    Body,
    Copy(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<Step>);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(".");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| match s {
                Step::Antecedent => "a".into(),
                Step::Consequent => "c".into(),
                Step::Left => "l".into(),
                Step::Right => "r".into(),
                Step::Body => "f".into(),
                Step::Copy(k) => k.to_string(),
            })
            .collect();
        f.write_str(&parts.join("."))
    }
}

impl Path {
    pub fn parse(s: &str) -> Result<Path> {
        let s = s.trim();
        if s == "." || s.is_empty() {
            return Ok(Path(Vec::new()));
        }
        s.split('.')
            .map(|p| match p {
                "a" => Ok(Step::Antecedent),
                "c" => Ok(Step::Consequent),
                "l" => Ok(Step::Left),
                "r" => Ok(Step::Right),
                "f" => Ok(Step::Body),
                d => d
                    .parse()
                    .map(Step::Copy)
                    .map_err(|_| Error::Move(format!("bad path step `{d}` in `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Path)
    }

    pub fn child(&self, s: Step) -> Path {
        let mut v = self.0.clone();
        v.push(s);
        Path(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OccKind {
    Do,
    Done,
    Bang,
}

/// A surface occurrence that a move could target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub id: OccId,
    pub path: Path,
    pub polarity: Polarity,
    pub kind: OccKind,
}

impl Position {
    /// Build the initial position of a resource. Sugar is expanded; resource letters are
    /// rejected since only instances are played.
    pub fn from_resource(r: &Resource) -> Result<Position> {
        Self::build(&r.expand(), ROOT_ID, Vec::new())
    }

    pub(crate) fn build(r: &Resource, id: OccId, history: Vec<Choice>) -> Result<Position> {
        let node = match r {
            Resource::Do { effect, potential } => {
                Node::Do { effect: effect.clone(), potential: potential.clone() }
            }
            Resource::Implies(a, b) => Node::Implies(
                Box::new(Self::build(a, derive(id, TAG_LEFT), Vec::new())?),
                Box::new(Self::build(b, derive(id, TAG_RIGHT), Vec::new())?),
            ),
            Resource::And(a, b) => Node::And(
                Box::new(Self::build(a, derive(id, TAG_LEFT), Vec::new())?),
                Box::new(Self::build(b, derive(id, TAG_RIGHT), Vec::new())?),
            ),
            Resource::Forall(v, a) => {
                Node::Forall(v.clone(), Box::new(Self::build(a, derive(id, TAG_BODY), Vec::new())?))
            }
            Resource::Bang(a) => Node::Bang { body: (**a).clone(), copies: Vec::new() },
            Resource::Letter(n, _) => {
                return Err(Error::Move(format!("resource letter {n} in a position; substitute first")))
            }
            _ => unreachable!("sugar removed by expand"),
        };
        Ok(Position { id, history, node })
    }

    pub(crate) fn copy_id(bang: OccId, k: usize) -> OccId {
        derive(bang, TAG_COPY + k as u64)
    }

    pub(crate) fn fresh_copy(bang: OccId, body: &Resource, k: usize) -> Position {
        Self::build(body, Self::copy_id(bang, k), Vec::new()).expect("bang bodies are letter-free")
    }

    pub(crate) fn replaced_id(&self, c: &Choice) -> OccId {
        derive(self.id, c.tag())
    }

    /// Equality up to occurrence ids and histories.
    pub fn same_shape(&self, other: &Position) -> bool {
        match (&self.node, &other.node) {
            (Node::Do { effect: e1, potential: p1 }, Node::Do { effect: e2, potential: p2 }) => {
                e1 == e2 && p1 == p2
            }
            (Node::Done(a), Node::Done(b)) => a == b,
            (Node::Implies(a1, b1), Node::Implies(a2, b2))
            | (Node::And(a1, b1), Node::And(a2, b2)) => a1.same_shape(a2) && b1.same_shape(b2),
            (Node::Forall(v1, a1), Node::Forall(v2, a2)) => v1 == v2 && a1.same_shape(a2),
            (Node::Bang { body: b1, copies: c1 }, Node::Bang { body: b2, copies: c2 }) => {
                // Unpeeled conjuncts are all `body`, so an untouched peeled copy is invisible.
                if b1 != b2 {
                    return false;
                }
                let n = c1.len().max(c2.len());
                (0..n).all(|k| {
                    let x = c1.get(k).cloned().unwrap_or_else(|| Self::fresh_copy(0, b1, k));
                    let y = c2.get(k).cloned().unwrap_or_else(|| Self::fresh_copy(0, b2, k));
                    x.same_shape(&y)
                })
            }
            _ => false,
        }
    }

    /// Hash of the whole subtree, ids included.
    pub fn subtree_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    /// Every node of the tree with its id and subtree hash.
    pub fn hashes(&self, out: &mut Vec<(OccId, u64)>) {
        out.push((self.id, self.subtree_hash()));
        match &self.node {
            Node::Implies(a, b) | Node::And(a, b) => {
                a.hashes(out);
                b.hashes(out);
            }
            Node::Forall(_, a) => a.hashes(out),
            Node::Bang { copies, .. } => copies.iter().for_each(|c| c.hashes(out)),
            Node::Do { .. } | Node::Done(_) => {}
        }
    }

    /// Surface occurrences with their polarities, in depth-first order.
    pub fn occurrences(&self) -> Vec<Occurrence> {
        let mut out = Vec::new();
        self.walk(Polarity::Positive, &Path::default(), &mut out);
        out
    }

    fn walk(&self, pol: Polarity, path: &Path, out: &mut Vec<Occurrence>) {
        let occ = |kind| Occurrence { id: self.id, path: path.clone(), polarity: pol, kind };
        match &self.node {
            Node::Do { .. } => out.push(occ(OccKind::Do)),
            Node::Done(_) => out.push(occ(OccKind::Done)),
            Node::Implies(a, b) => {
                a.walk(pol.flip(), &path.child(Step::Antecedent), out);
                b.walk(pol, &path.child(Step::Consequent), out);
            }
            Node::And(a, b) => {
                a.walk(pol, &path.child(Step::Left), out);
                b.walk(pol, &path.child(Step::Right), out);
            }
            Node::Forall(_, a) => a.walk(pol, &path.child(Step::Body), out),
            Node::Bang { copies, .. } => {
                out.push(occ(OccKind::Bang));
                for (k, c) in copies.iter().enumerate() {
                    c.walk(pol, &path.child(Step::Copy(k)), out);
                }
            }
        }
    }

    pub fn find(&self, id: OccId) -> Option<&Position> {
        if self.id == id {
            return Some(self);
        }
        match &self.node {
            Node::Implies(a, b) | Node::And(a, b) => a.find(id).or_else(|| b.find(id)),
            Node::Forall(_, a) => a.find(id),
            Node::Bang { copies, .. } => copies.iter().find_map(|c| c.find(id)),
            _ => None,
        }
    }

    pub(crate) fn find_mut(&mut self, id: OccId) -> Option<&mut Position> {
        if self.id == id {
            return Some(self);
        }
        match &mut self.node {
            Node::Implies(a, b) | Node::And(a, b) => match a.find_mut(id) {
                Some(p) => Some(p),
                None => b.find_mut(id),
            },
            Node::Forall(_, a) => a.find_mut(id),
            Node::Bang { copies, .. } => copies.iter_mut().find_map(|c| c.find_mut(id)),
            _ => None,
        }
    }

    pub fn polarity_of(&self, id: OccId) -> Result<Polarity> {
        self.occurrences()
            .into_iter()
            .find(|o| o.id == id)
            .map(|o| o.polarity)
            .ok_or_else(|| Error::Move(format!("no surface occurrence with id {id:#x}")))
    }

    pub fn at_path(&self, path: &Path) -> Option<&Position> {
        let mut cur = self;
        for s in &path.0 {
            cur = match (&cur.node, s) {
                (Node::Implies(a, _), Step::Antecedent) | (Node::And(a, _), Step::Left) => a,
                (Node::Implies(_, b), Step::Consequent) | (Node::And(_, b), Step::Right) => b,
                (Node::Forall(_, a), Step::Body) => a,
                (Node::Bang { copies, .. }, Step::Copy(k)) => copies.get(*k)?,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn at_path_mut(&mut self, path: &Path) -> Option<&mut Position> {
        let mut cur = self;
        for s in &path.0 {
            cur = match (&mut cur.node, s) {
                (Node::Implies(a, _), Step::Antecedent) | (Node::And(a, _), Step::Left) => a,
                (Node::Implies(_, b), Step::Consequent) | (Node::And(_, b), Step::Right) => b,
                (Node::Forall(_, a), Step::Body) => a,
                (Node::Bang { copies, .. }, Step::Copy(k)) => copies.get_mut(*k)?,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Resolve a path to an occurrence id. A path through a bang may name the next
    /// unpeeled copy, or any later one; those are reported as `(bang id, copies needed)`.
    pub fn resolve(&self, path: &Path) -> Result<(OccId, Option<(OccId, usize)>)> {
        let mut cur = self.clone();
        let mut peel = None;
        for s in &path.0 {
            let next = match (&cur.node, s) {
                (Node::Implies(a, _), Step::Antecedent) | (Node::And(a, _), Step::Left) => (**a).clone(),
                (Node::Implies(_, b), Step::Consequent) | (Node::And(_, b), Step::Right) => (**b).clone(),
                (Node::Forall(_, a), Step::Body) => (**a).clone(),
                (Node::Bang { body, copies }, Step::Copy(k)) => match copies.get(*k) {
                    Some(c) => c.clone(),
                    None => {
                        if peel.is_some() {
                            return Err(Error::Move(format!("path {path} peels two nested bangs")));
                        }
                        peel = Some((cur.id, k + 1));
                        Self::fresh_copy(cur.id, body, *k)
                    }
                },
                _ => return Err(Error::Move(format!("path {path} does not fit the position"))),
            };
            cur = next;
        }
        Ok((cur.id, peel))
    }

    /// The subtree with ids and histories dropped, as a plain resource where possible.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.print(&mut out, 0, true);
        out
    }

    fn level(&self) -> u8 {
        match &self.node {
            Node::Implies(..) => 0,
            Node::And(..) => 2,
            Node::Bang { copies, .. } if !copies.is_empty() => 2,
            _ => 3,
        }
    }

    fn print(&self, out: &mut String, level: u8, tail: bool) {
        let quant = matches!(self.node, Node::Forall(..));
        let paren = self.level() < level || (quant && !tail);
        if paren {
            out.push('(');
        }
        let tail = tail || paren;
        match &self.node {
            Node::Do { effect, potential } => {
                let r = Resource::Do { effect: effect.clone(), potential: potential.clone() };
                resource(out, &r, 3, tail);
            }
            Node::Done(d) => done_node(out, d),
            Node::Implies(a, b) => {
                a.print(out, 1, false);
                out.push_str(" :-> ");
                b.print(out, 0, tail);
            }
            Node::And(a, b) => {
                a.print(out, 2, false);
                out.push_str(" :& ");
                b.print(out, 3, tail);
            }
            Node::Forall(v, a) => {
                out.push_str(&format!(":all {v}. "));
                a.print(out, 0, true);
            }
            Node::Bang { body, copies } => {
                for c in copies {
                    c.print(out, 2, false);
                    out.push_str(" :& ");
                }
                resource(out, &Resource::Bang(Box::new(body.clone())), 3, tail);
            }
        }
        if paren {
            out.push(')');
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
