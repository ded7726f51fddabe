//! Desk-scale searches for unsuccessful plays.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::masters::{MasterScript, MasterStrategy, RandomMaster};
use super::{simulate, SlaveStrategy, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::game::{is_successful, star, Actor, Game, Play, Position};
use crate::semantics::{structured_worlds, EvalConfig};
use crate::syntax::{apply_substitution, DoNode, Potential, Process, Resource, Substitution};
use crate::world::{random_world_with, GroundAtom, StepWorld};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SuccessVerdict {
    NoFailureFound { plays: usize, worlds: usize, note: String },
    Failure { instance: String, listing: Vec<String>, process: String, world: StepWorld },
}

impl SuccessVerdict {
    pub fn is_failure(&self) -> bool {
        matches!(self, SuccessVerdict::Failure { .. })
    }
}

pub type SlaveFactory<'a> = dyn Fn(&Position) -> Result<Box<dyn SlaveStrategy>> + 'a;

fn effects(r: &Resource, game: &Game, out: &mut Vec<Process>, seen: &mut Vec<String>) {
    match r {
        Resource::Do { effect, potential } => {
            out.push(effect.clone());
            let node: Option<&DoNode> = match potential {
                Potential::Inline(n) => Some(n),
                Potential::Ref(name) if !seen.contains(name) => {
                    seen.push(name.clone());
                    game.defs.def(name).ok()
                }
                Potential::Ref(_) => None,
            };
            for d in node.into_iter().flat_map(|n| &n.branches) {
                for c in &d.choices {
                    effects(c, game, out, seen);
                }
            }
        }
        Resource::Implies(a, b) | Resource::And(a, b) | Resource::Or(a, b) | Resource::With(a, b) | Resource::Plus(a, b) => {
            effects(a, game, out, seen);
            effects(b, game, out, seen);
        }
        Resource::Forall(_, a)
        | Resource::Exists(_, a)
        | Resource::AForall(_, a)
        | Resource::AExists(_, a)
        | Resource::Bang(a)
        | Resource::Not(a) => effects(a, game, out, seen),
        Resource::Letter(..) => {}
    }
}

/// Ground atoms over the fact letters of a resource's effects, with arguments in {0, 1}.
pub fn default_atom_pool(r: &Resource, game: &Game) -> Vec<GroundAtom> {
    let mut ps = Vec::new();
    effects(r, game, &mut ps, &mut Vec::new());
    let mut letters = Vec::new();
    for p in &ps {
        p.fact_letters(&mut letters);
    }
    let mut pool = Vec::new();
    for (name, arity) in letters {
        for bits in 0..1u32 << arity.min(2) {
            let args = (0..arity).map(|i| if i < 2 { bits >> i & 1 } else { 0 }).collect();
            pool.push(GroundAtom::new(&name, args));
        }
    }
    pool.truncate(8);
    pool
}

fn judge(play: &Play, worlds: &[StepWorld], cfg: &EvalConfig, instance: &str) -> Result<Option<SuccessVerdict>> {
    for w in worlds {
        if !is_successful(play, w, cfg)? {
            return Ok(Some(SuccessVerdict::Failure {
                instance: instance.to_string(),
                listing: play.listing(),
                process: star(play)?.to_string(),
                world: w.clone(),
            }));
        }
    }
    Ok(None)
}

/// Simulate `start` against an exhaustive set of one-move masters over structured worlds,
/// then `trials` random masters, each judged in a fresh random world.
pub fn check_universal_success(
    game: &Game,
    start: &Resource,
    make_slave: &SlaveFactory<'_>,
    trials: usize,
    cfg: &EvalConfig,
    seed: u64,
) -> Result<SuccessVerdict> {
    let pos = Position::from_resource(start)?;
    let instance = start.to_string();
    let pool = default_atom_pool(start, game);
    let grid = structured_worlds(&pool.iter().take(2).cloned().collect::<Vec<_>>());
    let mut plays = 0;
    let mut worlds = grid.len();

    let mut masters: Vec<Box<dyn MasterStrategy>> = vec![Box::new(MasterScript::default())];
    for d in game.legal_moves(&pos, Actor::Master, 1) {
        masters.push(Box::new(OneShot(Some(d))));
    }
    for mut m in masters {
        let mut slave = make_slave(&pos)?;
        let play = simulate(game, &pos, slave.as_mut(), m.as_mut(), DEFAULT_BUDGET)?;
        plays += 1;
        if let Some(v) = judge(&play, &grid, cfg, &instance)? {
            return Ok(v);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut master = RandomMaster::random_slots(rng.gen(), 6, 12, 1);
        let mut slave = make_slave(&pos)?;
        let play = simulate(game, &pos, slave.as_mut(), &mut master, DEFAULT_BUDGET)?;
        let w = random_world_with(&mut rng, game.domain_max, 4, &pool, 4);
        plays += 1;
        worlds += 1;
        if let Some(v) = judge(&play, std::slice::from_ref(&w), cfg, &instance)? {
            return Ok(v);
        }
    }
    Ok(SuccessVerdict::NoFailureFound {
        plays,
        worlds,
        note: "desk-scale evidence over sampled plays and worlds, not a proof".into(),
    })
}

/// A master that makes one fixed move at tick 1.
struct OneShot(Option<crate::game::MoveDelta>);

impl MasterStrategy for OneShot {
    fn act(&mut self, t: u64, _game: &Game, _pos: &Position) -> Result<crate::game::MoveDelta> {
        Ok(match (t, self.0.take()) {
            (1, Some(d)) => d,
            (_, d) => {
                self.0 = d;
                crate::game::MoveDelta::empty(Actor::Master)
            }
        })
    }

    fn finished(&self, t: u64, _pos: &Position) -> bool {
        t >= 1
    }
}

/// Check a scheme on sampled safe instances. This samples; it does not decide.
#[allow(clippy::too_many_arguments)]
pub fn check_s_validity_by_sampling(
    game: &Game,
    scheme: &Resource,
    make_slave: &SlaveFactory<'_>,
    sampler: &mut dyn FnMut(&mut ChaCha8Rng) -> Substitution,
    instances: usize,
    trials: usize,
    cfg: &EvalConfig,
    seed: u64,
) -> Result<SuccessVerdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plays = 0;
    let mut worlds = 0;
    for _ in 0..instances {
        let tau = sampler(&mut rng);
        if !tau.safe || tau.images.values().any(|i| !i.body.is_safe()) {
            return Err(Error::Substitution("the sampler produced an unsafe substitution".into()));
        }
        let inst = apply_substitution(scheme, &tau)?;
        match check_universal_success(game, &inst, make_slave, trials, cfg, rng.gen())? {
            SuccessVerdict::NoFailureFound { plays: p, worlds: w, .. } => {
                plays += p;
                worlds += w;
            }
            failure => return Ok(failure),
        }
    }
    Ok(SuccessVerdict::NoFailureFound {
        plays,
        worlds,
        note: "desk-scale evidence over sampled safe instances, not a proof".into(),
    })
}
