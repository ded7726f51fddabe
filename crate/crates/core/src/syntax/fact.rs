//! Terms and facts: the classical first-order layer.

use std::collections::BTreeSet;
use std::fmt;

/// A variable name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var(s.to_string())
    }
}

/// Terms: variables, natural-number constants, and interpreted sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Const(u32),
    Sum(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Var::new(name))
    }

    pub fn sum(a: Term, b: Term) -> Self {
        Term::Sum(Box::new(a), Box::new(b))
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Sum(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Replace `var` by `with` everywhere.
    pub fn subst(&self, var: &Var, with: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => with.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Sum(a, b) => Term::sum(a.subst(var, with), b.subst(var, with)),
        }
    }
}

/// Facts. `True`, `Not`, `And`, `Or`, `Iff` and `Exists` are sugar nodes kept for
/// printing; [`Fact::expand`] rewrites them into the basic connectives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fact {
    False,
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Implies(Box<Fact>, Box<Fact>),
    Forall(Var, Box<Fact>),
    True,
    Not(Box<Fact>),
    And(Box<Fact>, Box<Fact>),
    Or(Box<Fact>, Box<Fact>),
    Iff(Box<Fact>, Box<Fact>),
    Exists(Var, Box<Fact>),
}

impl Fact {
    pub fn atom(letter: &str, args: Vec<Term>) -> Self {
        Fact::Atom(letter.to_string(), args)
    }

    pub fn prop(letter: &str) -> Self {
        Fact::Atom(letter.to_string(), Vec::new())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Fact) -> Self {
        Fact::Not(Box::new(a))
    }

    pub fn and(a: Fact, b: Fact) -> Self {
        Fact::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Fact, b: Fact) -> Self {
        Fact::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Fact, b: Fact) -> Self {
        Fact::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Fact, b: Fact) -> Self {
        Fact::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, a: Fact) -> Self {
        Fact::Forall(Var::new(v), Box::new(a))
    }

    pub fn exists(v: &str, a: Fact) -> Self {
        Fact::Exists(Var::new(v), Box::new(a))
    }

    /// Rewrite every sugar node into `False`, atoms, equality, `->` and `all`.
    pub fn expand(&self) -> Fact {
        use Fact::*;
        let neg = |a: Fact| Implies(Box::new(a), Box::new(False));
        match self {
            False | Atom(..) | Eq(..) => self.clone(),
            Implies(a, b) => Implies(Box::new(a.expand()), Box::new(b.expand())),
            Forall(v, a) => Forall(v.clone(), Box::new(a.expand())),
            True => neg(False),
            Not(a) => neg(a.expand()),
            Or(a, b) => Implies(Box::new(neg(a.expand())), Box::new(b.expand())),
            And(a, b) => {
                // ~(~A \/ ~B) = ((~A -> ff) -> ~B) -> ff
                let na = neg(a.expand());
                let nb = neg(b.expand());
                neg(Implies(Box::new(neg(na)), Box::new(nb)))
            }
            Iff(a, b) => {
                let ab = Fact::implies((**a).clone(), (**b).clone());
                let ba = Fact::implies((**b).clone(), (**a).clone());
                Fact::and(ab, ba).expand()
            }
            Exists(v, a) => neg(Forall(v.clone(), Box::new(neg(a.expand())))),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        use Fact::*;
        match self {
            False | True => {}
            Atom(_, args) => {
                let mut vs = BTreeSet::new();
                for t in args {
                    t.collect_vars(&mut vs);
                }
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Eq(a, b) => {
                let mut vs = BTreeSet::new();
                a.collect_vars(&mut vs);
                b.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Not(a) => a.collect_free(bound, out),
            Implies(a, b) | And(a, b) | Or(a, b) | Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Forall(v, a) | Exists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Substitute a term for the free occurrences of `var`.
    pub fn subst(&self, var: &Var, with: &Term) -> Fact {
        use Fact::*;
        let b = |f: &Fact| Box::new(f.subst(var, with));
        match self {
            False | True => self.clone(),
            Atom(p, args) => Atom(p.clone(), args.iter().map(|t| t.subst(var, with)).collect()),
            Eq(a, c) => Eq(a.subst(var, with), c.subst(var, with)),
            Not(a) => Not(b(a)),
            Implies(a, c) => Implies(b(a), b(c)),
            And(a, c) => And(b(a), b(c)),
            Or(a, c) => Or(b(a), b(c)),
            Iff(a, c) => Iff(b(a), b(c)),
            Forall(v, _) | Exists(v, _) if v == var => self.clone(),
            Forall(v, a) => Forall(v.clone(), b(a)),
            Exists(v, a) => Exists(v.clone(), b(a)),
        }
    }

    /// Fact letters with their arities, in first-occurrence order.
    pub fn letters(&self, out: &mut Vec<(String, usize)>) {
        use Fact::*;
        match self {
            False | True | Eq(..) => {}
            Atom(p, args) => {
                if !out.iter().any(|(q, _)| q == p) {
                    out.push((p.clone(), args.len()));
                }
            }
            Not(a) | Forall(_, a) | Exists(_, a) => a.letters(out),
            Implies(a, b) | And(a, b) | Or(a, b) | Iff(a, b) => {
                a.letters(out);
                b.letters(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        use Fact::*;
        match self {
            False | True | Atom(..) | Eq(..) => 1,
            Not(a) | Forall(_, a) | Exists(_, a) => 1 + a.depth(),
            Implies(a, b) | And(a, b) | Or(a, b) | Iff(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Variables bound somewhere inside.
    pub fn binders(&self, out: &mut BTreeSet<Var>) {
        use Fact::*;
        match self {
            False | True | Atom(..) | Eq(..) => {}
            Not(a) => a.binders(out),
            Forall(v, a) | Exists(v, a) => {
                out.insert(v.clone());
                a.binders(out);
            }
            Implies(a, b) | And(a, b) | Or(a, b) | Iff(a, b) => {
                a.binders(out);
                b.binders(out);
            }
        }
    }
}
