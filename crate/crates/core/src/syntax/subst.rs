//! Substituting resources for resource letters in schemata.

use std::collections::{BTreeMap, BTreeSet};

use super::fact::{Term, Var};
use super::resource::{DoNode, DoneNode, Potential, Resource};
use crate::error::{Error, Result};

/// The image of one letter: a resource with designated parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub params: Vec<Var>,
    pub body: Resource,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    pub images: BTreeMap<String, Image>,
    /// When set, every image must be safe.
    pub safe: bool,
}

impl Substitution {
    pub fn new(safe: bool) -> Self {
        Substitution { images: BTreeMap::new(), safe }
    }

    pub fn insert(&mut self, letter: &str, params: Vec<Var>, body: Resource) -> Result<()> {
        let free = body.free_vars();
        let wanted: BTreeSet<Var> = params.iter().cloned().collect();
        if wanted.len() != params.len() {
            return Err(Error::Substitution(format!("repeated parameter in image of {letter}")));
        }
        if free != wanted {
            return Err(Error::Substitution(format!(
                "image of {letter} must have exactly its {} parameters free",
                params.len()
            )));
        }
        if self.safe && !body.is_safe() {
            return Err(Error::Substitution(format!("image of {letter} is not safe")));
        }
        self.images.insert(letter.to_string(), Image { params, body });
        Ok(())
    }

    /// Images may not mention any variable that the scheme uses.
    pub fn check_pool(&self, scheme: &Resource) -> Result<()> {
        let mut pool = BTreeSet::new();
        scheme.all_vars(&mut pool);
        for (letter, img) in &self.images {
            let mut used = BTreeSet::new();
            img.body.all_vars(&mut used);
            if let Some(v) = used.intersection(&pool).next() {
                return Err(Error::Substitution(format!(
                    "image of {letter} uses scheme variable {v}"
                )));
            }
        }
        Ok(())
    }
}

pub fn apply_substitution(scheme: &Resource, tau: &Substitution) -> Result<Resource> {
    tau.check_pool(scheme)?;
    apply(scheme, tau)
}

fn apply(r: &Resource, tau: &Substitution) -> Result<Resource> {
    use Resource::*;
    let b = |x: &Resource| apply(x, tau).map(Box::new);
    Ok(match r {
        Letter(name, args) => {
            let img = tau
                .images
                .get(name)
                .ok_or_else(|| Error::Substitution(format!("no image for letter {name}")))?;
            if img.params.len() != args.len() {
                return Err(Error::Arity {
                    name: name.clone(),
                    expected: img.params.len(),
                    found: args.len(),
                });
            }
            instantiate_image(img, args)
        }
        Do { effect, potential } => Do {
            effect: effect.clone(),
            potential: match potential {
                Potential::Ref(_) => potential.clone(),
                Potential::Inline(n) => Potential::Inline(DoNode {
                    vars: n.vars.clone(),
                    branches: n
                        .branches
                        .iter()
                        .map(|d| {
                            Ok(DoneNode {
                                vars: d.vars.clone(),
                                choices: d
                                    .choices
                                    .iter()
                                    .map(|c| apply(c, tau))
                                    .collect::<Result<_>>()?,
                            })
                        })
                        .collect::<Result<_>>()?,
                }),
            },
        },
        Implies(x, y) => Implies(b(x)?, b(y)?),
        And(x, y) => And(b(x)?, b(y)?),
        Or(x, y) => Or(b(x)?, b(y)?),
        With(x, y) => With(b(x)?, b(y)?),
        Plus(x, y) => Plus(b(x)?, b(y)?),
        Forall(v, x) => Forall(v.clone(), b(x)?),
        Exists(v, x) => Exists(v.clone(), b(x)?),
        AForall(v, x) => AForall(v.clone(), b(x)?),
        AExists(v, x) => AExists(v.clone(), b(x)?),
        Bang(x) => Bang(b(x)?),
        Not(x) => Not(b(x)?),
    })
}

/// The image body with the parameters replaced by `args`.
pub fn instantiate_image(img: &Image, args: &[Term]) -> Resource {
    let mut out = img.body.clone();
    for (v, t) in img.params.iter().zip(args) {
        out = out.subst(v, t);
    }
    out
}
