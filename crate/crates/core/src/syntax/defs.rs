//! Declarations shared by a document: process abbreviations, recursive
//! potentials, and the arity signature.

use std::collections::BTreeMap;

use indexmap::IndexMap;

use super::process::Process;
use super::resource::{DoNode, Potential, Resource};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Definitions {
    /// `proc name := p;`
    pub procs: IndexMap<String, Process>,
    /// `def Name := >> ...;`
    pub defs: IndexMap<String, DoNode>,
    pub fact_arity: BTreeMap<String, usize>,
    pub letter_arity: BTreeMap<String, usize>,
}

impl Definitions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn def(&self, name: &str) -> Result<&DoNode> {
        self.defs.get(name).ok_or_else(|| Error::UnknownDef(name.to_string()))
    }

    /// The written-out potential of a DO-resource.
    pub fn potential<'a>(&'a self, p: &'a Potential) -> Result<&'a DoNode> {
        match p {
            Potential::Inline(n) => Ok(n),
            Potential::Ref(name) => self.def(name),
        }
    }

    /// Record an arity, failing on conflict.
    pub fn note_fact_arity(&mut self, name: &str, n: usize) -> Result<()> {
        note(&mut self.fact_arity, name, n)
    }

    pub fn note_letter_arity(&mut self, name: &str, n: usize) -> Result<()> {
        note(&mut self.letter_arity, name, n)
    }

    /// Every body must be `>> x (<< y (a Name, ...), ...)` where each choice is
    /// an effect followed by a defined name, and closed under its own binders.
    pub fn check_shapes(&self) -> Result<()> {
        for (name, body) in &self.defs {
            let shape = |reason: String| Error::Shape { name: name.clone(), reason };
            for d in &body.branches {
                if d.choices.is_empty() {
                    return Err(shape("report with no choices".into()));
                }
                for c in &d.choices {
                    match c {
                        Resource::Do { effect, potential: Potential::Ref(r) } => {
                            if !self.defs.contains_key(r) {
                                return Err(Error::UnknownDef(r.clone()));
                            }
                            if !effect.is_finitary() {
                                return Err(shape("infinitary effect".into()));
                            }
                        }
                        _ => {
                            return Err(shape(
                                "every choice must be an effect followed by a defined name".into(),
                            ))
                        }
                    }
                }
            }
            let free = body.free_vars();
            if let Some(v) = free.iter().next() {
                return Err(shape(format!("free variable {v}")));
            }
        }
        Ok(())
    }

    /// Unfold one level: a referenced potential is written out, a bang peels
    /// one copy. Anything else is returned unchanged.
    pub fn expand_once(&self, r: &Resource) -> Result<Resource> {
        match r {
            Resource::Do { effect, potential: Potential::Ref(name) } => {
                Ok(Resource::do_inline(effect.clone(), self.def(name)?.clone()))
            }
            Resource::Bang(inner) => Ok(Resource::and((**inner).clone(), r.clone())),
            _ => Ok(r.clone()),
        }
    }

    /// Check that every referenced definition exists.
    pub fn check_refs(&self, r: &Resource) -> Result<()> {
        let mut names = Default::default();
        r.def_refs(&mut names);
        for n in names {
            self.def(&n)?;
        }
        Ok(())
    }
}

fn note(map: &mut BTreeMap<String, usize>, name: &str, n: usize) -> Result<()> {
    match map.get(name) {
        Some(&m) if m != n => {
            Err(Error::Arity { name: name.to_string(), expected: m, found: n })
        }
        Some(_) => Ok(()),
        None => {
            map.insert(name.to_string(), n);
            Ok(())
        }
    }
}
