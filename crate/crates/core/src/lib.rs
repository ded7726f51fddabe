//! Facts, processes and resources over discrete time: evaluation, games between
//! master and slave, and a decision procedure for the multiplicative fragment.

pub mod demo;
pub mod error;
pub mod game;
pub mod mll;
pub mod semantics;
pub mod session;
pub mod strategy;
pub mod syntax;
pub mod world;

pub use error::{Error, Result};
