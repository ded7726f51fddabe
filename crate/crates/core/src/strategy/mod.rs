//! Slave strategies, master scripts, and the asynchronous play protocol.
//!
//! Time is a tick counter. At each tick the master may move against the current
//! position; a slave output that falls due at the same tick is merged after it.
//! The slave then reads the new position (if it is not busy) and will answer at
//! the read tick plus its delay.

mod harness;
mod masters;
mod slaves;

pub use harness::{check_s_validity_by_sampling, check_universal_success, default_atom_pool, SuccessVerdict};
pub use masters::{delta_for, parse_choice, MasterScript, MasterStrategy, RandomMaster, ReportingMaster, ScriptEntry};
pub use slaves::{Delayed, Diverging, PairingStrategy, PairingTable, ScriptedSlave, Waiting};

use crate::error::{Error, Result};
use crate::game::{Actor, Game, MoveDelta, Play, Position};

/// How long a slave needs before its answer to a snapshot appears.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Delay {
    Ticks(u64),
    Diverge,
}

pub trait SlaveStrategy {
    /// The answer to a snapshot. It must be a legal slave move for `pos`.
    fn step(&mut self, game: &Game, pos: &Position) -> Result<MoveDelta>;

    fn delay(&self, _pos: &Position) -> Delay {
        Delay::Ticks(1)
    }
}

impl<S: SlaveStrategy + ?Sized> SlaveStrategy for &mut S {
    fn step(&mut self, game: &Game, pos: &Position) -> Result<MoveDelta> {
        (**self).step(game, pos)
    }

    fn delay(&self, pos: &Position) -> Delay {
        (**self).delay(pos)
    }
}

impl<S: SlaveStrategy + ?Sized> SlaveStrategy for Box<S> {
    fn step(&mut self, game: &Game, pos: &Position) -> Result<MoveDelta> {
        (**self).step(game, pos)
    }

    fn delay(&self, pos: &Position) -> Delay {
        (**self).delay(pos)
    }
}

pub const DEFAULT_BUDGET: usize = 64;
/// Ticks without any move before a simulation that has not settled is cut off.
const TICK_SLACK: u64 = 256;

/// Run one play. Stops when neither side will move again, or at `budget` moves
/// (the play is then flagged as truncated).
pub fn simulate(
    game: &Game,
    start: &Position,
    slave: &mut dyn SlaveStrategy,
    master: &mut dyn MasterStrategy,
    budget: usize,
) -> Result<Play> {
    let mut run = Runner::new(game.clone(), start, slave)?;
    loop {
        if master.finished(run.now(), run.position()) && run.slave_quiet() {
            break;
        }
        if run.now() > run.last_move + TICK_SLACK {
            run.play.truncated = true;
            break;
        }
        let m = master.act(run.now() + 1, game, run.position())?;
        run.tick(m)?;
        if run.moves >= budget {
            run.play.truncated = true;
            break;
        }
    }
    Ok(run.play)
}

/// The clock of one play, advanced a tick at a time by the caller acting as master.
pub struct Runner<S> {
    game: Game,
    slave: S,
    state: SlaveState,
    play: Play,
    t: u64,
    last_move: u64,
    moves: usize,
}

impl<S: SlaveStrategy> Runner<S> {
    pub fn new(game: Game, start: &Position, mut slave: S) -> Result<Self> {
        let mut state = SlaveState::default();
        state.read(&game, start, 0, &mut slave)?;
        Ok(Runner { game, slave, state, play: Play::new(start.clone()), t: 0, last_move: 0, moves: 0 })
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn now(&self) -> u64 {
        self.t
    }

    pub fn position(&self) -> &Position {
        self.play.last()
    }

    pub fn play(&self) -> &Play {
        &self.play
    }

    pub fn into_play(self) -> Play {
        self.play
    }

    pub fn slave_quiet(&self) -> bool {
        self.state.quiet()
    }

    /// Advance one tick with the master's move `m`. An illegal move is rejected
    /// before the clock moves, leaving everything unchanged.
    pub fn tick(&mut self, m: MoveDelta) -> Result<()> {
        let t = self.t + 1;
        let pos = self.play.last().clone();
        if !m.is_empty() {
            self.game.apply_move(&pos, &m).map_err(|e| Error::Move(format!("at tick {t}: {e}")))?;
        }
        let s = self.state.take_due(t);
        self.t = t;
        if !m.is_empty() || !s.is_empty() {
            let next = self
                .game
                .compose_moves(&pos, &m, &s)
                .map_err(|e| Error::Move(format!("at tick {t}: {e}")))?;
            self.play.push(t, next)?;
            self.last_move = t;
            self.state.dirty = true;
            self.moves += 1;
        }
        if self.state.pending.is_none() && !self.state.diverged {
            let cur = self.play.last().clone();
            self.state.read(&self.game, &cur, t, &mut self.slave)?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct SlaveState {
    pending: Option<(u64, MoveDelta)>,
    /// The last snapshot read asked for nothing.
    idle: bool,
    /// The position moved after the last read.
    dirty: bool,
    diverged: bool,
}

impl SlaveState {
    fn read<S: SlaveStrategy + ?Sized>(&mut self, game: &Game, pos: &Position, t: u64, slave: &mut S) -> Result<()> {
        self.dirty = false;
        match slave.delay(pos) {
            Delay::Diverge => self.diverged = true,
            Delay::Ticks(d) => {
                let delta = slave.step(game, pos)?;
                self.idle = delta.is_empty();
                self.pending = Some((t + d.max(1), delta));
            }
        }
        Ok(())
    }

    fn take_due(&mut self, t: u64) -> MoveDelta {
        match self.pending.take() {
            Some((at, d)) if at == t => d,
            other => {
                self.pending = other;
                MoveDelta::empty(Actor::Slave)
            }
        }
    }

    fn quiet(&self) -> bool {
        self.diverged || (self.idle && !self.dirty)
    }
}
