//! The main evaluator: memoized, with cut points restricted to moments near
//! interval ends, change points and chain bounds.
//!
//! Inside a constant stretch of the world, the truth of a process on a
//! subinterval depends only on its length, and as a function of length it is
//! eventually periodic. A window of `reach` moments around each boundary
//! therefore contains a witness whenever one exists, provided the window
//! exceeds the threshold plus period of the subprocesses involved. The window
//! grows with the probe depth; agreement with the brute-force oracle is the
//! check on that choice.

use std::collections::HashMap;

use super::{EvalConfig, EvalResult};
use crate::error::{Error, Result};
use crate::syntax::{Fact, Process, Var};
use crate::world::{eval_fact, Interval, StepWorld, Time};

const INF: u64 = u64::MAX;

type Id = u32;

#[derive(Clone, Debug)]
enum Node {
    First(usize),
    Inner(usize),
    Upto(usize),
    Always(usize),
    Imp(Id, Id),
    Not(Id),
    And(Id, Id),
    Or(Id, Id),
    Iff(Id, Id),
    Quant(bool, Var, Id),
    Seq(Id, Id),
    WSeq(Id, Id),
    Rep(Id),
    WRep(Id),
    Conj(Vec<Id>),
    Chain { head: Id, links: Vec<(u64, u64, Id)>, open: bool },
}

/// Evaluation state for one world and one process, reusable across intervals.
pub struct Evaluator<'w> {
    world: &'w StepWorld,
    cfg: EvalConfig,
    reach: u64,
    tail: u64,
    nodes: Vec<Node>,
    /// Set for nodes whose truth depends on absolute time, not only on the world.
    absolute: Vec<bool>,
    root: Id,
    facts: Vec<Fact>,
    env: Vec<(Var, u32)>,
    env_id: u32,
    env_ids: HashMap<Vec<(Var, u32)>, u32>,
    memo: HashMap<(Id, u64, u64, u32), bool>,
    fact_memo: HashMap<(usize, usize, u32), bool>,
}

/// `W |=_(i,j) p` for a closed process.
pub fn eval_process(
    w: &StepWorld,
    iv: Interval,
    p: &Process,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let mut ev = Evaluator::new(w, p, cfg)?;
    let truth = ev.eval(iv);
    let witness = if truth { ev.witness(iv) } else { None };
    Ok(EvalResult { truth, witness, config: *cfg })
}

/// Evaluate after rewriting every abbreviation into the basic operators.
pub fn eval_process_expanded(
    w: &StepWorld,
    iv: Interval,
    p: &Process,
    cfg: &EvalConfig,
) -> Result<bool> {
    Ok(Evaluator::new(w, &p.expand(), cfg)?.eval(iv))
}

impl<'w> Evaluator<'w> {
    pub fn new(world: &'w StepWorld, p: &Process, cfg: &EvalConfig) -> Result<Self> {
        if let Some(v) = p.free_vars().into_iter().next() {
            return Err(Error::Open(v.to_string()));
        }
        let probe = cfg.probe_depth.max(p.seq_depth()) as u64;
        let mut ev = Evaluator {
            world,
            cfg: *cfg,
            reach: 4 * (probe + 1),
            tail: world.last_change(),
            nodes: Vec::new(),
            absolute: Vec::new(),
            root: 0,
            facts: Vec::new(),
            env: Vec::new(),
            env_id: 0,
            env_ids: HashMap::new(),
            memo: HashMap::new(),
            fact_memo: HashMap::new(),
        };
        ev.env_ids.insert(Vec::new(), 0);
        ev.root = ev.compile(p)?;
        Ok(ev)
    }

    fn push(&mut self, n: Node, absolute: bool) -> Id {
        self.nodes.push(n);
        self.absolute.push(absolute);
        (self.nodes.len() - 1) as Id
    }

    fn fact_index(&mut self, f: &Fact) -> usize {
        if let Some(i) = self.facts.iter().position(|g| g == f) {
            return i;
        }
        self.facts.push(f.clone());
        self.facts.len() - 1
    }

    fn compile(&mut self, p: &Process) -> Result<Id> {
        use Process::*;
        let abs = |s: &Self, ids: &[Id]| ids.iter().any(|i| s.absolute[*i as usize]);
        Ok(match p {
            First(f) => {
                let i = self.fact_index(f);
                self.push(Node::First(i), false)
            }
            Inner(f) => {
                let i = self.fact_index(f);
                self.push(Node::Inner(i), false)
            }
            Upto(f) => {
                let i = self.fact_index(f);
                self.push(Node::Upto(i), false)
            }
            Always(f) => {
                let i = self.fact_index(f);
                self.push(Node::Always(i), false)
            }
            UpDown(f) => {
                let i = self.fact_index(f);
                let a = self.push(Node::First(i), false);
                let b = self.push(Node::Upto(i), false);
                self.push(Node::And(a, b), false)
            }
            Down(f) => {
                let i = self.fact_index(f);
                let a = self.push(Node::First(i), false);
                let b = self.push(Node::Inner(i), false);
                self.push(Node::And(a, b), false)
            }
            Named(_, body) => self.compile(body)?,
            Not(a) => {
                let a = self.compile(a)?;
                let x = abs(self, &[a]);
                self.push(Node::Not(a), x)
            }
            RepSeq(a) | WRepSeq(a) => {
                let a = self.compile(a)?;
                let x = abs(self, &[a]);
                let n = if matches!(p, RepSeq(_)) { Node::Rep(a) } else { Node::WRep(a) };
                self.push(n, x)
            }
            Forall(v, a) | Exists(v, a) => {
                let a = self.compile(a)?;
                let x = abs(self, &[a]);
                self.push(Node::Quant(matches!(p, Forall(..)), v.clone(), a), x)
            }
            Implies(a, b) | And(a, b) | Or(a, b) | Iff(a, b) | Seq(a, b) | WSeq(a, b) => {
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                let x = abs(self, &[a, b]);
                let n = match p {
                    Implies(..) => Node::Imp(a, b),
                    And(..) => Node::And(a, b),
                    Or(..) => Node::Or(a, b),
                    Iff(..) => Node::Iff(a, b),
                    Seq(..) => Node::Seq(a, b),
                    _ => Node::WSeq(a, b),
                };
                self.push(n, x)
            }
            InfConj(cs) => {
                let mut ids = Vec::new();
                // Copies of a conjunct add nothing: conjunction is idempotent.
                for c in cs {
                    ids.push(self.compile(&c.process)?);
                }
                let x = abs(self, &ids);
                self.push(Node::Conj(ids), x)
            }
            Chain(ch) => {
                if !ch.bounds_ordered() {
                    return Err(Error::ChainOrder);
                }
                let head = self.compile(&ch.head)?;
                let mut links = Vec::new();
                for l in &ch.links {
                    links.push((l.after, l.before, self.compile(&l.next)?));
                }
                self.push(Node::Chain { head, links, open: ch.open_ended }, true)
            }
        })
    }

    pub fn eval(&mut self, iv: Interval) -> bool {
        let hi = iv.hi.finite().unwrap_or(INF);
        self.truth(self.root, iv.lo, hi)
    }

    fn fact_at(&mut self, f: usize, seg: usize) -> bool {
        let key = (f, seg, self.env_id);
        if let Some(&b) = self.fact_memo.get(&key) {
            return b;
        }
        let sit = &self.world.segments()[seg].1;
        // Closedness was checked up front, so every variable is bound here.
        let b = eval_fact(sit, &self.facts[f], &mut self.env, self.cfg.domain_max)
            .expect("closed process");
        self.fact_memo.insert(key, b);
        b
    }

    /// The fact holds at every moment of `[from, to]`; `to = INF` means forever.
    fn fact_on(&mut self, f: usize, from: u64, to: u64) -> bool {
        if from > to {
            return true;
        }
        let s0 = self.world.segment_index(from);
        let s1 = if to == INF {
            self.world.segments().len() - 1
        } else {
            self.world.segment_index(to)
        };
        (s0..=s1).all(|s| self.fact_at(f, s))
    }

    fn truth(&mut self, id: Id, lo: u64, hi: u64) -> bool {
        // Past the last change point only the length of an interval matters.
        let (lo, hi) = if !self.absolute[id as usize] && lo > self.tail {
            if hi == INF {
                (self.tail, INF)
            } else {
                (self.tail, self.tail + (hi - lo))
            }
        } else {
            (lo, hi)
        };
        let key = (id, lo, hi, self.env_id);
        if let Some(&b) = self.memo.get(&key) {
            return b;
        }
        let b = self.compute(id, lo, hi);
        self.memo.insert(key, b);
        b
    }

    fn compute(&mut self, id: Id, lo: u64, hi: u64) -> bool {
        let node = self.nodes[id as usize].clone();
        match node {
            Node::First(f) => {
                let s = self.world.segment_index(lo);
                self.fact_at(f, s)
            }
            Node::Inner(f) => {
                let to = if hi == INF { INF } else { hi - 1 };
                self.fact_on(f, lo + 1, to)
            }
            Node::Upto(f) => self.fact_on(f, lo + 1, hi),
            Node::Always(f) => self.fact_on(f, 0, INF),
            Node::Imp(a, b) => !self.truth(a, lo, hi) || self.truth(b, lo, hi),
            Node::Not(a) => !self.truth(a, lo, hi),
            Node::And(a, b) => self.truth(a, lo, hi) && self.truth(b, lo, hi),
            Node::Or(a, b) => self.truth(a, lo, hi) || self.truth(b, lo, hi),
            Node::Iff(a, b) => self.truth(a, lo, hi) == self.truth(b, lo, hi),
            Node::Quant(univ, v, a) => {
                for c in 0..=self.cfg.domain_max {
                    let saved = self.bind(&v, c);
                    let r = self.truth(a, lo, hi);
                    self.unbind(saved);
                    if r != univ {
                        return !univ;
                    }
                }
                univ
            }
            Node::Seq(a, b) => self.seq_cut(a, b, lo, hi).is_some(),
            Node::WSeq(a, b) => self.truth(a, lo, hi) || self.seq_cut(a, b, lo, hi).is_some(),
            Node::Rep(a) => self.rep_chain(a, lo, hi).is_some(),
            Node::WRep(a) => self.rep_chain(a, lo, hi).is_some() || self.wrep_chain(a, lo, hi).is_some(),
            Node::Conj(ids) => ids.iter().all(|&c| self.truth(c, lo, hi)),
            Node::Chain { head, links, open } => self.chain_cuts(head, &links, open, lo, hi).is_some(),
        }
    }

    fn bind(&mut self, v: &Var, c: u32) -> u32 {
        let saved = self.env_id;
        self.env.push((v.clone(), c));
        let next = self.env_ids.len() as u32;
        self.env_id = *self.env_ids.entry(self.env.clone()).or_insert(next);
        saved
    }

    fn unbind(&mut self, saved: u32) {
        self.env.pop();
        self.env_id = saved;
    }

    /// Moments strictly inside `(lo, hi)` within `reach` of a boundary.
    fn candidates(&self, lo: u64, hi: u64, extra: &[u64]) -> Vec<u64> {
        let k = self.reach;
        let mut anchors: Vec<u64> = vec![lo];
        if hi != INF {
            anchors.push(hi);
        }
        anchors.extend(self.world.change_points());
        anchors.extend_from_slice(extra);
        let mut ranges: Vec<(u64, u64)> = anchors
            .into_iter()
            .filter_map(|b| {
                let from = b.saturating_sub(k).max(lo + 1);
                let to = b.saturating_add(k).min(if hi == INF { INF - 1 } else { hi - 1 });
                (from <= to).then_some((from, to))
            })
            .collect();
        ranges.sort_unstable();
        let mut out = Vec::new();
        let mut next = 0u64;
        for (from, to) in ranges {
            let start = from.max(next);
            for t in start..=to {
                out.push(t);
            }
            next = next.max(to + 1);
        }
        out
    }

    fn seq_cut(&mut self, a: Id, b: Id, lo: u64, hi: u64) -> Option<u64> {
        self.candidates(lo, hi, &[]).into_iter().find(|&e| self.truth(a, lo, e) && self.truth(b, e, hi))
    }

    /// Moments reachable from `lo` by a chain of `a`-intervals, with parents.
    fn reachable(&mut self, a: Id, lo: u64, points: &[u64]) -> Vec<(u64, Option<usize>)> {
        let mut out: Vec<(u64, Option<usize>)> = vec![(lo, None)];
        let mut i = 0;
        let mut seen = std::collections::HashSet::new();
        seen.insert(lo);
        while i < out.len() {
            let p = out[i].0;
            for &q in points {
                if q > p && !seen.contains(&q) && self.truth(a, p, q) {
                    seen.insert(q);
                    out.push((q, Some(i)));
                }
            }
            i += 1;
        }
        out
    }

    fn path(found: &[(u64, Option<usize>)], mut i: usize) -> Vec<u64> {
        let mut pts = vec![found[i].0];
        while let Some(p) = found[i].1 {
            pts.push(found[p].0);
            i = p;
        }
        pts.reverse();
        pts
    }

    /// An infinite chain needs an unbounded interval; it exists iff a finite
    /// chain reaches the constant tail and some length repeats there forever.
    fn rep_chain(&mut self, a: Id, lo: u64, hi: u64) -> Option<Vec<u64>> {
        if hi != INF {
            return None;
        }
        let t = self.tail;
        let start = lo.max(t);
        let k = self.reach;
        if !(1..=k).any(|n| self.truth(a, start, start + n)) {
            return None;
        }
        if lo >= t {
            return Some(vec![lo]);
        }
        let points = self.candidates(lo, INF, &[]);
        let found = self.reachable(a, lo, &points);
        let i = found.iter().position(|(p, _)| *p >= t)?;
        // Repetition is only shift-invariant for time-independent pieces.
        let p = found[i].0;
        if self.absolute[a as usize] && !(1..=k).any(|n| self.truth(a, p, p + n)) {
            return None;
        }
        Some(Self::path(&found, i))
    }

    fn wrep_chain(&mut self, a: Id, lo: u64, hi: u64) -> Option<Vec<u64>> {
        let points = self.candidates(lo, hi, &[]);
        let found = self.reachable(a, lo, &points);
        let i = (0..found.len()).find(|&i| self.truth(a, found[i].0, hi))?;
        let mut pts = Self::path(&found, i);
        pts.push(hi);
        Some(pts)
    }

    fn chain_cuts(
        &mut self,
        head: Id,
        links: &[(u64, u64, Id)],
        open: bool,
        lo: u64,
        hi: u64,
    ) -> Option<Vec<u64>> {
        // layers[m] holds (e_m, index of predecessor in layers[m-1]).
        let mut layers: Vec<Vec<(u64, usize)>> = vec![vec![(lo, 0)]];
        let mut prev_proc = head;
        for &(k, k2, next) in links {
            let from = k + 1;
            let to = if hi == INF { k2 - 1 } else { (k2 - 1).min(hi - 1) };
            let span: Vec<u64> = if to < from {
                Vec::new()
            } else if to - from <= 4 * self.reach {
                (from..=to).collect()
            } else {
                self.candidates(lo, hi, &[k, k2]).into_iter().filter(|e| *e >= from && *e <= to).collect()
            };
            let mut layer = Vec::new();
            let last = layers.last().expect("nonempty").clone();
            for e in span {
                if let Some(j) = last.iter().position(|&(p, _)| p < e && self.truth(prev_proc, p, e)) {
                    layer.push((e, j));
                }
            }
            if layer.is_empty() {
                return None;
            }
            layers.push(layer);
            prev_proc = next;
        }
        let last = layers.last().expect("nonempty");
        let end = if open {
            Some(0)
        } else {
            let last = last.clone();
            last.iter().position(|&(e, _)| e < hi && self.truth(prev_proc, e, hi))
        }?;
        let mut pts = Vec::new();
        let mut j = end;
        for m in (1..layers.len()).rev() {
            pts.push(layers[m][j].0);
            j = layers[m][j].1;
        }
        pts.reverse();
        Some(pts)
    }

    /// Cut points supporting a true verdict at the root, best effort.
    pub fn witness(&mut self, iv: Interval) -> Option<Vec<u64>> {
        let hi = iv.hi.finite().unwrap_or(INF);
        let lo = iv.lo;
        match self.nodes[self.root as usize].clone() {
            Node::Seq(a, b) => self.seq_cut(a, b, lo, hi).map(|e| vec![e]),
            Node::WSeq(a, b) if !self.truth(a, lo, hi) => self.seq_cut(a, b, lo, hi).map(|e| vec![e]),
            Node::Rep(a) => self.rep_chain(a, lo, hi),
            Node::WRep(a) => self.rep_chain(a, lo, hi).or_else(|| self.wrep_chain(a, lo, hi)),
            Node::Chain { head, links, open } => self.chain_cuts(head, &links, open, lo, hi),
            _ => None,
        }
    }
}

impl From<u64> for Time {
    fn from(t: u64) -> Self {
        if t == INF {
            Time::Infinity
        } else {
            Time::At(t)
        }
    }
}
