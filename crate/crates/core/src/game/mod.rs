//! Resources as games between master and slave.

mod moves;
mod play;
mod position;

pub use moves::{Actor, Game, MoveDelta};
pub use play::{compactize, is_successful, star, Play};
pub use position::{derive, Choice, Node, OccId, OccKind, Occurrence, Path, Polarity, Position, Step, ROOT_ID};
