//! Brute-force reference evaluator. It rewrites every abbreviation, then
//! follows the truth clauses literally, trying every cut point. Cuts in an
//! unbounded interval are tried up to the horizon, measured from the later of
//! the interval start and the last change point.

use std::collections::HashMap;
use std::rc::Rc;

use super::EvalConfig;
use crate::error::{Error, Result};
use crate::syntax::{Fact, Process, Var};
use crate::world::{eval_fact, Interval, StepWorld};

/// Subprocess address, interval and variable environment.
type MemoKey = (usize, u64, Option<u64>, Vec<(Var, u32)>);

/// Brute-force evaluator bound to one world and process. Truth values are cached across
/// intervals.
pub struct Oracle<'a> {
    w: &'a StepWorld,
    basic: Rc<Process>,
    dmax: u32,
    last: u64,
    window: u64,
    env: Vec<(Var, u32)>,
    memo: HashMap<MemoKey, bool>,
}

pub fn eval_process_oracle(
    w: &StepWorld,
    iv: Interval,
    p: &Process,
    cfg: &EvalConfig,
) -> Result<bool> {
    Ok(Oracle::new(w, p, cfg)?.eval(iv))
}

impl<'a> Oracle<'a> {
    pub fn new(w: &'a StepWorld, p: &Process, cfg: &EvalConfig) -> Result<Self> {
        if let Some(v) = p.free_vars().into_iter().next() {
            return Err(Error::Open(v.to_string()));
        }
        let last = w.last_change();
        if cfg.horizon <= last {
            return Err(Error::Horizon { horizon: cfg.horizon, last });
        }
        let o = Oracle {
            w,
            basic: Rc::new(p.expand()),
            dmax: cfg.domain_max,
            last,
            window: cfg.horizon - last,
            env: Vec::new(),
            memo: HashMap::new(),
        };
        o.check_chains(&o.basic)?;
        Ok(o)
    }

    pub fn eval(&mut self, iv: Interval) -> bool {
        // The shared tree is never mutated, so node addresses stay valid memo keys.
        let root = Rc::clone(&self.basic);
        self.truth(&root, iv.lo, iv.hi.finite())
    }

    fn check_chains(&self, p: &Process) -> Result<()> {
        use Process::*;
        match p {
            Chain(ch) => {
                if !ch.bounds_ordered() {
                    return Err(Error::ChainOrder);
                }
                self.check_chains(&ch.head)?;
                ch.links.iter().try_for_each(|l| self.check_chains(&l.next))
            }
            Implies(a, b) | Seq(a, b) => {
                self.check_chains(a)?;
                self.check_chains(b)
            }
            Forall(_, a) | RepSeq(a) | WRepSeq(a) => self.check_chains(a),
            InfConj(cs) => cs.iter().try_for_each(|c| self.check_chains(&c.process)),
            _ => Ok(()),
        }
    }

    fn fact(&mut self, f: &Fact, t: u64) -> bool {
        let s = self.w.situation_at(t);
        eval_fact(s, f, &mut self.env, self.dmax).expect("closed process")
    }

    /// Last cut point tried inside `(lo, inf)`.
    fn bound(&self, lo: u64) -> u64 {
        lo.max(self.last) + self.window
    }

    fn truth(&mut self, p: &Process, lo: u64, hi: Option<u64>) -> bool {
        let key = (p as *const Process as usize, lo, hi, self.env.clone());
        if let Some(&b) = self.memo.get(&key) {
            return b;
        }
        let b = self.compute(p, lo, hi);
        self.memo.insert(key, b);
        b
    }

    fn cuts(&self, lo: u64, hi: Option<u64>) -> std::ops::Range<u64> {
        match hi {
            Some(h) => lo + 1..h,
            None => lo + 1..self.bound(lo) + 1,
        }
    }

    fn compute(&mut self, p: &Process, lo: u64, hi: Option<u64>) -> bool {
        use Process::*;
        match p {
            First(f) => self.fact(f, lo),
            Inner(f) => {
                let end = hi.unwrap_or(self.bound(lo) + 2);
                (lo + 1..end).all(|r| self.fact(f, r))
            }
            Upto(f) => {
                let end = hi.map(|h| h + 1).unwrap_or(self.bound(lo) + 2);
                (lo + 1..end).all(|r| self.fact(f, r))
            }
            Always(f) => (0..=self.last + 1).all(|r| self.fact(f, r)),
            Implies(a, b) => !self.truth(a, lo, hi) || self.truth(b, lo, hi),
            Forall(v, a) => (0..=self.dmax).all(|c| {
                self.env.push((v.clone(), c));
                let r = self.truth(a, lo, hi);
                self.env.pop();
                r
            }),
            Seq(a, b) => self.cuts(lo, hi).any(|e| self.truth(a, lo, Some(e)) && self.truth(b, e, hi)),
            RepSeq(a) => self.rep(a, lo, hi),
            WRepSeq(a) => {
                self.rep(a, lo, hi) || {
                    let reach = self.reach(a, lo, hi);
                    reach.iter().any(|&p| self.truth(a, p, hi))
                }
            }
            InfConj(cs) => cs.iter().all(|c| self.truth(&c.process, lo, hi)),
            Chain(ch) => {
                let mut layer = vec![lo];
                let mut prev: &Process = &ch.head;
                for l in &ch.links {
                    let mut next_layer = Vec::new();
                    for e in l.after + 1..l.before {
                        if hi.is_some_and(|h| e >= h) {
                            break;
                        }
                        if layer.iter().any(|&s| s < e && self.truth(prev, s, Some(e))) {
                            next_layer.push(e);
                        }
                    }
                    layer = next_layer;
                    prev = &l.next;
                }
                if ch.open_ended {
                    !layer.is_empty()
                } else {
                    layer.iter().any(|&e| hi.is_none_or(|h| e < h) && self.truth(prev, e, hi))
                }
            }
            Not(_) | And(..) | Or(..) | Iff(..) | Exists(..) | UpDown(_) | Down(_) | WSeq(..)
            | Named(..) => unreachable!("abbreviations are expanded first"),
        }
    }

    fn rep(&mut self, a: &Process, lo: u64, hi: Option<u64>) -> bool {
        // No infinite increasing sequence of naturals stays below a finite bound.
        if hi.is_some() {
            return false;
        }
        let reach = self.reach(a, lo, None);
        reach.iter().any(|&p| {
            p >= self.last
                && (1..=self.window).any(|n| {
                    // One repetition past the first confirms the period.
                    self.truth(a, p, Some(p + n)) && self.truth(a, p + n, Some(p + 2 * n))
                })
        })
    }

    /// All moments reachable from `lo` by chains of `a`-intervals inside the cut range.
    fn reach(&mut self, a: &Process, lo: u64, hi: Option<u64>) -> Vec<u64> {
        let cuts: Vec<u64> = self.cuts(lo, hi).collect();
        let mut reached = vec![lo];
        for &q in &cuts {
            let r2 = reached.clone();
            if r2.iter().any(|&p| self.truth(a, p, Some(q))) {
                reached.push(q);
            }
        }
        reached
    }
}
