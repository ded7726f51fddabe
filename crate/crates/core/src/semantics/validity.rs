//! Counterexample search for process validity over small eventually constant worlds.
//! A clean search is evidence at desk scale, never a proof.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EvalConfig, Evaluator};
use crate::error::Result;
use crate::syntax::Process;
use crate::world::{random_world_with, GroundAtom, Interval, Situation, StepWorld, Time};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ValidityVerdict {
    NoCounterexampleFound { worlds: usize, intervals: usize, note: String },
    Counterexample { world: StepWorld, interval: Interval },
}

impl ValidityVerdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, ValidityVerdict::Counterexample { .. })
    }
}

/// Ground atoms over the process letters with arguments drawn from {0, 1}.
fn atom_pool(p: &Process) -> Vec<GroundAtom> {
    let mut letters = Vec::new();
    p.fact_letters(&mut letters);
    let mut pool = Vec::new();
    for (name, arity) in letters {
        let mut args = vec![0u32; arity];
        loop {
            pool.push(GroundAtom::new(&name, args.clone()));
            // Binary odometer over the argument tuple.
            match args.iter().position(|&a| a == 0) {
                Some(k) => {
                    args[..k].iter_mut().for_each(|a| *a = 0);
                    args[k] = 1;
                }
                None => break,
            }
        }
    }
    pool
}

fn subsets(vocab: &[GroundAtom]) -> Vec<Situation> {
    (0..1usize << vocab.len())
        .map(|m| Situation::new(vocab.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, a)| a.clone())))
        .collect()
}

/// Every world with at most two segments over `vocab` and a change point in 1..=3, followed by
/// a few alternating worlds where each atom holds alone in turn.
pub fn structured_worlds(vocab: &[GroundAtom]) -> Vec<StepWorld> {
    let sits = subsets(vocab);
    let mut out: Vec<StepWorld> = sits.iter().cloned().map(StepWorld::constant).collect();
    for a in &sits {
        for b in &sits {
            if a == b {
                continue;
            }
            for t in 1..=3 {
                out.push(StepWorld::new(vec![(0, a.clone()), (t, b.clone())]).expect("ordered"));
            }
        }
    }
    let singles: Vec<Situation> = vocab.iter().map(|a| Situation::new([a.clone()])).collect();
    if singles.len() >= 2 {
        for gap in 1..=2u64 {
            let mut segs = vec![(0, Situation::default())];
            for (k, s) in singles.iter().enumerate() {
                segs.push((gap * (k as u64 + 1), s.clone()));
            }
            out.push(StepWorld::new(segs).expect("ordered"));
        }
    }
    out
}

fn intervals(last: u64) -> Vec<Interval> {
    let top = last + 2;
    let mut out = Vec::new();
    for i in 0..=top {
        for j in i + 1..=top {
            out.push(Interval { lo: i, hi: Time::At(j) });
        }
        out.push(Interval::unbounded(i));
    }
    out
}

/// Search structured worlds, then `trials` seeded random worlds, for a world and interval
/// where `p` fails.
pub fn check_validity_desk_scale(
    p: &Process,
    cfg: &EvalConfig,
    trials: usize,
    seed: u64,
) -> Result<ValidityVerdict> {
    let pool = atom_pool(p);
    let vocab: Vec<GroundAtom> = pool.iter().take(2).cloned().collect();
    let mut worlds = structured_worlds(&vocab);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        worlds.push(random_world_with(&mut rng, cfg.domain_max, 4, &pool, 4));
    }
    let mut checked = 0;
    for w in &worlds {
        let mut ev = Evaluator::new(w, p, cfg)?;
        for iv in intervals(w.last_change()) {
            checked += 1;
            if !ev.eval(iv) {
                return Ok(ValidityVerdict::Counterexample { world: w.clone(), interval: iv });
            }
        }
    }
    Ok(ValidityVerdict::NoCounterexampleFound {
        worlds: worlds.len(),
        intervals: checked,
        note: "desk-scale evidence over eventually constant worlds, not a proof".into(),
    })
}
