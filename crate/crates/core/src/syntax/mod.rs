//! Abstract syntax, parsing and printing for facts, processes and resources.

pub mod defs;
pub mod fact;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod process;
pub mod resource;
pub mod subst;

pub use defs::Definitions;
pub use fact::{Fact, Term, Var};
pub use parser::{parse, parse_fact, parse_process, parse_resource, parse_with, Document, Item, Level};
pub use printer::{print_definitions, print_document};
pub use process::{Conjunct, LeadChain, Link, Multiplicity, Process};
pub use resource::{DoNode, DoneNode, LeafKind, Potential, Resource};
pub use subst::{apply_substitution, Image, Substitution};
