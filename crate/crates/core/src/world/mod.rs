//! Discrete time, situations and eventually-constant worlds.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{Fact, Term, Var};

/// A time moment or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Time {
    At(u64),
    Infinity,
}

impl Time {
    pub fn finite(self) -> Option<u64> {
        match self {
            Time::At(t) => Some(t),
            Time::Infinity => None,
        }
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Time::At(t) => write!(f, "{t}"),
            Time::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: u64,
    pub hi: Time,
}

impl Interval {
    pub fn new(lo: u64, hi: Time) -> Result<Self> {
        if Time::At(lo) < hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::Other(format!("empty interval ({lo},{hi})")))
        }
    }

    pub fn finite(lo: u64, hi: u64) -> Result<Self> {
        Self::new(lo, Time::At(hi))
    }

    pub fn unbounded(lo: u64) -> Self {
        Interval { lo, hi: Time::Infinity }
    }

    /// Parse `i,j` or `(i,j)` where `j` may be `inf`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Other(format!("bad interval `{s}`, expected (i,j)"));
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
        let (a, b) = t.split_once(',').ok_or_else(bad)?;
        let lo = a.trim().parse::<u64>().map_err(|_| bad())?;
        let hi = match b.trim() {
            "inf" | "oo" | "infinity" => Time::Infinity,
            t => Time::At(t.parse::<u64>().map_err(|_| bad())?),
        };
        Self::new(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// A ground atom: a fact letter applied to constants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroundAtom {
    pub letter: String,
    pub args: Vec<u32>,
}

impl GroundAtom {
    pub fn new(letter: &str, args: Vec<u32>) -> Self {
        GroundAtom { letter: letter.to_string(), args }
    }

    pub fn prop(letter: &str) -> Self {
        GroundAtom::new(letter, Vec::new())
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.letter)?;
        if !self.args.is_empty() {
            let a: Vec<String> = self.args.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", a.join(","))?;
        }
        Ok(())
    }
}

/// The atoms true at one moment.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Situation {
    pub atoms: BTreeSet<GroundAtom>,
}

impl Situation {
    pub fn new(atoms: impl IntoIterator<Item = GroundAtom>) -> Self {
        Situation { atoms: atoms.into_iter().collect() }
    }

    pub fn contains(&self, letter: &str, args: &[u32]) -> bool {
        // Atoms are few per situation, so a scan avoids building a key.
        self.atoms.iter().any(|a| a.letter == letter && a.args == args)
    }
}

impl fmt::Display for Situation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.atoms.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", a.join(", "))
    }
}

/// Evaluate a term; `None` when a sum leaves the domain.
pub(crate) fn eval_term(t: &Term, env: &[(Var, u32)], dmax: u32) -> Result<Option<u32>> {
    Ok(match t {
        Term::Const(c) => (*c <= dmax).then_some(*c),
        Term::Var(v) => match env.iter().rev().find(|(w, _)| w == v) {
            Some((_, c)) => Some(*c),
            None => return Err(Error::Unbound(v.to_string())),
        },
        Term::Sum(a, b) => match (eval_term(a, env, dmax)?, eval_term(b, env, dmax)?) {
            (Some(x), Some(y)) => x.checked_add(y).filter(|s| *s <= dmax),
            _ => None,
        },
    })
}

/// Classical evaluation under an environment for the free variables.
pub fn eval_fact(s: &Situation, a: &Fact, env: &mut Vec<(Var, u32)>, dmax: u32) -> Result<bool> {
    use Fact::*;
    Ok(match a {
        False => false,
        True => true,
        Atom(p, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for t in args {
                match eval_term(t, env, dmax)? {
                    Some(c) => vals.push(c),
                    None => return Ok(false),
                }
            }
            s.contains(p, &vals)
        }
        Eq(x, y) => match (eval_term(x, env, dmax)?, eval_term(y, env, dmax)?) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
        Implies(x, y) => !eval_fact(s, x, env, dmax)? || eval_fact(s, y, env, dmax)?,
        Not(x) => !eval_fact(s, x, env, dmax)?,
        And(x, y) => eval_fact(s, x, env, dmax)? && eval_fact(s, y, env, dmax)?,
        Or(x, y) => eval_fact(s, x, env, dmax)? || eval_fact(s, y, env, dmax)?,
        Iff(x, y) => eval_fact(s, x, env, dmax)? == eval_fact(s, y, env, dmax)?,
        Forall(v, x) | Exists(v, x) => {
            let univ = matches!(a, Forall(..));
            let mut result = univ;
            for c in 0..=dmax {
                env.push((v.clone(), c));
                let r = eval_fact(s, x, env, dmax);
                env.pop();
                if r? != univ {
                    result = !univ;
                    break;
                }
            }
            result
        }
    })
}

/// `s |= A` for a closed fact.
pub fn holds_fact(s: &Situation, a: &Fact, domain_max: u32) -> Result<bool> {
    if let Some(v) = a.free_vars().into_iter().next() {
        return Err(Error::Unbound(v.to_string()));
    }
    eval_fact(s, a, &mut Vec::new(), domain_max)
}

/// A piecewise-constant world whose last situation lasts forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepWorld {
    segments: Vec<(u64, Situation)>,
}

impl StepWorld {
    pub fn new(segments: Vec<(u64, Situation)>) -> Result<Self> {
        if segments.first().map(|s| s.0) != Some(0) {
            return Err(Error::World("first segment must start at 0".into()));
        }
        if segments.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::World("segment start times must strictly increase".into()));
        }
        Ok(StepWorld { segments })
    }

    pub fn constant(s: Situation) -> Self {
        StepWorld { segments: vec![(0, s)] }
    }

    pub fn segments(&self) -> &[(u64, Situation)] {
        &self.segments
    }

    /// Index of the segment holding moment `t`.
    pub fn segment_index(&self, t: u64) -> usize {
        self.segments.partition_point(|(start, _)| *start <= t) - 1
    }

    pub fn situation_at(&self, t: u64) -> &Situation {
        &self.segments[self.segment_index(t)].1
    }

    /// Start of the constant tail.
    pub fn last_change(&self) -> u64 {
        self.segments.last().map(|s| s.0).unwrap_or(0)
    }

    pub fn change_points(&self) -> impl Iterator<Item = u64> + '_ {
        self.segments.iter().skip(1).map(|s| s.0)
    }

    /// Merge neighbouring equal segments.
    pub fn normalized(&self) -> StepWorld {
        let mut out: Vec<(u64, Situation)> = Vec::new();
        for (t, s) in &self.segments {
            if out.last().map(|l| &l.1) != Some(s) {
                out.push((*t, s.clone()));
            }
        }
        StepWorld { segments: out }
    }

    pub fn check_invariants(&self) -> bool {
        self.segments.first().map(|s| s.0) == Some(0)
            && self.segments.windows(2).all(|w| w[0].0 < w[1].0)
    }

    /// Text in the world-file format.
    pub fn to_text(&self, domain_max: Option<u32>) -> String {
        let mut out = String::new();
        if let Some(d) = domain_max {
            out.push_str(&format!("domain {d}\n"));
        }
        for (t, s) in &self.segments {
            let a: Vec<String> = s.atoms.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("@{t}: {}\n", a.join(", ")));
        }
        out
    }
}

impl fmt::Display for StepWorld {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.segments.iter().map(|(t, s)| format!("@{t} {s}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A world file: optional `domain N` header and `@t: atoms` lines.
pub fn parse_world(text: &str) -> Result<(StepWorld, Option<u32>)> {
    let mut domain = None;
    let mut segments = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split("--").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| Error::World(format!("line {}: {m}", no + 1));
        if let Some(rest) = line.strip_prefix("domain") {
            domain = Some(rest.trim().parse::<u32>().map_err(|_| err("bad domain"))?);
            continue;
        }
        let rest = line.strip_prefix('@').ok_or_else(|| err("expected `@time:`"))?;
        let (t, atoms) = rest.split_once(':').ok_or_else(|| err("expected `:`"))?;
        let t = t.trim().parse::<u64>().map_err(|_| err("bad time"))?;
        let mut sit = Situation::default();
        for a in split_atoms(atoms) {
            sit.atoms.insert(parse_ground_atom(&a).map_err(|m| err(&m))?);
        }
        segments.push((t, sit));
    }
    if segments.is_empty() {
        return Err(Error::World("no segments".into()));
    }
    Ok((StepWorld::new(segments)?, domain))
}

/// Split on commas that are not inside parentheses.
fn split_atoms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out.into_iter().map(|a| a.trim().to_string()).filter(|a| !a.is_empty()).collect()
}

pub fn parse_ground_atom(s: &str) -> std::result::Result<GroundAtom, String> {
    let s = s.trim();
    let (name, args) = match s.split_once('(') {
        None => (s, Vec::new()),
        Some((n, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| format!("bad atom `{s}`"))?;
            let args = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|x| x.trim().parse::<u32>().map_err(|_| format!("bad constant in `{s}`")))
                    .collect::<std::result::Result<Vec<_>, _>>()?
            };
            (n.trim(), args)
        }
    };
    if !name.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
        return Err(format!("atom `{s}` must start with an uppercase letter"));
    }
    Ok(GroundAtom::new(name, args))
}

/// A seeded random world. Each segment draws each pool atom with probability 1/2.
pub fn random_world(
    seed: u64,
    domain_max: u32,
    max_segments: usize,
    atom_pool: &[GroundAtom],
) -> StepWorld {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_world_with(&mut rng, domain_max, max_segments, atom_pool, 4)
}

pub fn random_world_with<R: Rng>(
    rng: &mut R,
    domain_max: u32,
    max_segments: usize,
    atom_pool: &[GroundAtom],
    max_gap: u64,
) -> StepWorld {
    let n = rng.gen_range(1..=max_segments.max(1));
    let mut segments = Vec::with_capacity(n);
    let mut t = 0u64;
    for i in 0..n {
        if i > 0 {
            t += rng.gen_range(1..=max_gap.max(1));
        }
        let atoms = atom_pool
            .iter()
            .filter(|a| a.args.iter().all(|c| *c <= domain_max))
            .filter(|_| rng.gen_bool(0.5))
            .cloned();
        segments.push((t, Situation::new(atoms)));
    }
    StepWorld { segments }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_fact;

    #[test]
    fn world_file_round_trip() {
        let text = "domain 12\n@0: L1(2), L2(0), Np\n@3: P2\n";
        let (w, d) = parse_world(text).unwrap();
        assert_eq!(d, Some(12));
        assert_eq!(w.situation_at(2).atoms.len(), 3);
        let (w2, _) = parse_world(&w.to_text(d)).unwrap();
        assert_eq!(w, w2);
    }

    #[test]
    fn rejects_unordered() {
        assert!(parse_world("@0: A\n@0: B").is_err());
        assert!(parse_world("@1: A").is_err());
    }

    #[test]
    fn sums_leaving_the_domain() {
        let s = Situation::new([GroundAtom::new("L", vec![3])]);
        assert!(holds_fact(&s, &parse_fact("L(1+2)").unwrap(), 3).unwrap());
        assert!(!holds_fact(&s, &parse_fact("2+2 = 4").unwrap(), 3).unwrap());
        assert!(holds_fact(&s, &parse_fact("~(2+2 = 4)").unwrap(), 3).unwrap());
    }

    #[test]
    fn open_fact_is_an_error() {
        assert!(holds_fact(&Situation::default(), &parse_fact("P(x)").unwrap(), 3).is_err());
    }
}
