//! The multiplicative fragment: binary tautologies and the pairing strategies they yield.

mod prop;

pub use prop::{is_classical_tautology, Prop, MAX_LETTERS};

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Path, Polarity, Position, Step};
use crate::strategy::{PairingStrategy, PairingTable};
use crate::syntax::{apply_substitution, Resource, Substitution};

/// `rff`, 0-ary letters, `:->` and `:&`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MllFormula {
    False,
    Letter(String),
    Implies(Box<MllFormula>, Box<MllFormula>),
    And(Box<MllFormula>, Box<MllFormula>),
}

impl MllFormula {
    pub fn letter(name: &str) -> Self {
        MllFormula::Letter(name.to_string())
    }

    pub fn implies(a: MllFormula, b: MllFormula) -> Self {
        MllFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn and(a: MllFormula, b: MllFormula) -> Self {
        MllFormula::And(Box::new(a), Box::new(b))
    }

    pub fn from_resource(r: &Resource) -> Result<Self> {
        Ok(match r {
            Resource::Letter(n, args) if args.is_empty() => MllFormula::Letter(n.clone()),
            Resource::Letter(n, _) => return Err(Error::Other(format!("letter {n} is not 0-ary"))),
            Resource::Implies(a, b) => MllFormula::implies(Self::from_resource(a)?, Self::from_resource(b)?),
            Resource::And(a, b) => MllFormula::and(Self::from_resource(a)?, Self::from_resource(b)?),
            r if *r == Resource::rfalse() => MllFormula::False,
            other => return Err(Error::Other(format!("{other} is outside the multiplicative fragment"))),
        })
    }

    pub fn to_resource(&self) -> Resource {
        match self {
            MllFormula::False => Resource::rfalse(),
            MllFormula::Letter(n) => Resource::letter(n),
            MllFormula::Implies(a, b) => Resource::implies(a.to_resource(), b.to_resource()),
            MllFormula::And(a, b) => Resource::and(a.to_resource(), b.to_resource()),
        }
    }

    /// Connectives plus leaves.
    pub fn size(&self) -> usize {
        match self {
            MllFormula::False | MllFormula::Letter(_) => 1,
            MllFormula::Implies(a, b) | MllFormula::And(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Leaves in left-to-right order.
    pub fn occurrences(&self) -> Vec<Occurrence> {
        let mut out = Vec::new();
        self.walk(Polarity::Positive, Path::default(), &mut out);
        out
    }

    fn walk(&self, pol: Polarity, path: Path, out: &mut Vec<Occurrence>) {
        match self {
            MllFormula::False => out.push(Occurrence { letter: None, polarity: pol, path }),
            MllFormula::Letter(n) => out.push(Occurrence { letter: Some(n.clone()), polarity: pol, path }),
            MllFormula::Implies(a, b) => {
                a.walk(pol.flip(), path.child(Step::Antecedent), out);
                b.walk(pol, path.child(Step::Consequent), out);
            }
            MllFormula::And(a, b) => {
                a.walk(pol, path.child(Step::Left), out);
                b.walk(pol, path.child(Step::Right), out);
            }
        }
    }

    /// The classical reading, with leaf `k` named by `name(k)`.
    fn skeleton(&self, name: &mut impl FnMut(usize) -> Prop, next: &mut usize) -> Prop {
        match self {
            MllFormula::False => {
                *next += 1;
                Prop::False
            }
            MllFormula::Letter(_) => {
                let p = name(*next);
                *next += 1;
                p
            }
            MllFormula::Implies(a, b) => {
                let a = a.skeleton(name, next);
                Prop::implies(a, b.skeleton(name, next))
            }
            MllFormula::And(a, b) => {
                let a = a.skeleton(name, next);
                Prop::and(a, b.skeleton(name, next))
            }
        }
    }

    /// The classical formula with the letters read as they stand.
    pub fn classical(&self) -> Prop {
        let occ = self.occurrences();
        self.skeleton(&mut |k| Prop::var(occ[k].letter.as_deref().unwrap_or("")), &mut 0)
    }

    /// The classical formula after renaming paired leaves to a shared letter and every
    /// other letter leaf to a letter of its own. `rff` stays false.
    pub fn relabel(&self, m: &Matching) -> Prop {
        let mut label = BTreeMap::new();
        for (k, (p, n)) in m.pairs.iter().enumerate() {
            label.insert(*p, format!("m{k}"));
            label.insert(*n, format!("m{k}"));
        }
        for &k in &m.leftovers {
            label.insert(k, format!("u{k}"));
        }
        self.skeleton(&mut |k| Prop::var(&label[&k]), &mut 0)
    }
}

impl fmt::Display for MllFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_resource())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    /// `None` for `rff`.
    pub letter: Option<String>,
    pub polarity: Polarity,
    pub path: Path,
}

/// Pairs of (positive, negative) leaf indices into `occurrences()`, and the letter
/// leaves left unpaired.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub leftovers: Vec<usize>,
}

impl Matching {
    pub fn path_pairs(&self, f: &MllFormula) -> Vec<(Path, Path)> {
        let occ = f.occurrences();
        self.pairs.iter().map(|&(p, n)| (occ[p].path.clone(), occ[n].path.clone())).collect()
    }

    /// Pairs join same-letter leaves of opposite polarity, at most once each.
    pub fn is_well_formed(&self, f: &MllFormula) -> bool {
        let occ = f.occurrences();
        let mut seen = vec![false; occ.len()];
        let mut mark = |k: usize| k < occ.len() && !std::mem::replace(&mut seen[k], true);
        for &(p, n) in &self.pairs {
            if !mark(p) || !mark(n) {
                return false;
            }
            if occ[p].letter.is_none()
                || occ[p].letter != occ[n].letter
                || occ[p].polarity != Polarity::Positive
                || occ[n].polarity != Polarity::Negative
            {
                return false;
            }
        }
        for &k in &self.leftovers {
            if !mark(k) || occ[k].letter.is_none() {
                return false;
            }
        }
        occ.iter().zip(&seen).all(|(o, s)| *s || o.letter.is_none())
    }
}

/// Per-letter candidates: every pairing of the smaller polarity class into the larger,
/// in lexicographic order of partners.
fn letter_matchings(pos: &[usize], neg: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn go(pos: &[usize], neg: &[usize], used: &mut Vec<bool>, need: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&p, rest)) = pos.split_first() else {
            if cur.len() == need {
                out.push(cur.clone());
            }
            return;
        };
        for (j, &n) in neg.iter().enumerate() {
            if !used[j] {
                used[j] = true;
                cur.push((p, n));
                go(rest, neg, used, need, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
        if cur.len() + rest.len() >= need {
            go(rest, neg, used, need, cur, out);
        }
    }
    let mut out = Vec::new();
    go(pos, neg, &mut vec![false; neg.len()], pos.len().min(neg.len()), &mut Vec::new(), &mut out);
    out
}

/// Candidate matchings in the order they are tried.
///
/// Only matchings that cannot be extended are listed: joining an unpaired positive leaf
/// with an unpaired negative leaf of the same letter yields an instance of the previous
/// relabeling, so it stays a tautology.
pub fn candidate_matchings(f: &MllFormula) -> Vec<Matching> {
    let occ = f.occurrences();
    let mut letters: Vec<&str> = Vec::new();
    for o in &occ {
        if let Some(l) = o.letter.as_deref() {
            if !letters.contains(&l) {
                letters.push(l);
            }
        }
    }
    let mut acc: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for l in letters {
        let of = |pol: Polarity| -> Vec<usize> {
            (0..occ.len()).filter(|&k| occ[k].letter.as_deref() == Some(l) && occ[k].polarity == pol).collect()
        };
        let options = letter_matchings(&of(Polarity::Positive), &of(Polarity::Negative));
        acc = acc
            .into_iter()
            .flat_map(|a| {
                options.iter().map(move |o| {
                    let mut a = a.clone();
                    a.extend(o.iter().copied());
                    a
                })
            })
            .collect();
    }
    acc.into_iter()
        .map(|mut pairs| {
            pairs.sort();
            let leftovers = (0..occ.len())
                .filter(|k| occ[*k].letter.is_some() && !pairs.iter().any(|(p, n)| p == k || n == k))
                .collect();
            Matching { pairs, leftovers }
        })
        .collect()
}

/// The first candidate matching whose relabeling is a classical tautology, if any.
pub fn decide_binary_tautology(f: &MllFormula) -> Result<Option<Matching>> {
    for m in candidate_matchings(f) {
        if is_classical_tautology(&f.relabel(&m))? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// The pairing strategy for the instance of `f` under `tau`, pairing the leaves `m` joins.
pub fn strategy_from_matching(f: &MllFormula, m: &Matching, tau: &Substitution) -> Result<PairingStrategy> {
    if !m.is_well_formed(f) || !is_classical_tautology(&f.relabel(m))? {
        return Err(Error::NotAccepting);
    }
    let inst = apply_substitution(&f.to_resource(), tau)?;
    let start = Position::from_resource(&inst)?;
    Ok(PairingStrategy::new(PairingTable::new(&start, m.path_pairs(f))?))
}
