//! Processes: formulas that are true or false on time intervals.

use std::collections::BTreeSet;

use super::fact::{Fact, Term, Var};

/// A process expression.
///
/// The first nine variants are the basic finitary operators. The sugar variants
/// (`Not` through `Named`) are kept as written so that printing reproduces the
/// source; [`Process::expand`] rewrites them. `InfConj` and `Chain` only arise
/// from plays and make a process infinitary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Process {
    /// True iff the fact holds at the first moment of the interval.
    First(Fact),
    /// True iff the fact holds strictly inside the interval.
    Inner(Fact),
    /// True iff the fact holds at every moment after the first, up to and including the last.
    Upto(Fact),
    /// True iff the fact holds at every moment whatsoever.
    Always(Fact),
    Implies(Box<Process>, Box<Process>),
    Forall(Var, Box<Process>),
    Seq(Box<Process>, Box<Process>),
    RepSeq(Box<Process>),
    WRepSeq(Box<Process>),
    Not(Box<Process>),
    And(Box<Process>, Box<Process>),
    Or(Box<Process>, Box<Process>),
    Iff(Box<Process>, Box<Process>),
    Exists(Var, Box<Process>),
    UpDown(Fact),
    Down(Fact),
    WSeq(Box<Process>, Box<Process>),
    /// A named abbreviation together with its body.
    Named(String, Box<Process>),
    InfConj(Vec<Conjunct>),
    Chain(LeadChain),
}

/// How many copies of a conjunct an infinite conjunction holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(u32),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conjunct {
    pub process: Process,
    pub multiplicity: Multiplicity,
}

/// `head ~>[k1,k1'] p1 ~>[k2,k2'] p2 ...`: each switch happens strictly between
/// its two bounds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeadChain {
    pub head: Box<Process>,
    pub links: Vec<Link>,
    /// When set, the listed links are a prefix of an infinite chain and the last
    /// process is not tied to the end of the interval.
    pub open_ended: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Link {
    pub after: u64,
    pub before: u64,
    pub next: Process,
}

impl LeadChain {
    /// Bounds must satisfy `k1 < k1' < k2 < k2' < ...`.
    pub fn bounds_ordered(&self) -> bool {
        let mut prev: Option<u64> = None;
        for link in &self.links {
            if link.after >= link.before {
                return false;
            }
            if let Some(p) = prev {
                if p >= link.after {
                    return false;
                }
            }
            prev = Some(link.before);
        }
        true
    }
}

fn bx(p: Process) -> Box<Process> {
    Box::new(p)
}

impl Process {
    /// `box ff`
    pub fn falsum() -> Self {
        Process::Always(Fact::False)
    }

    /// `first tt`
    pub fn verum() -> Self {
        Process::First(Fact::True)
    }

    pub fn implies(a: Process, b: Process) -> Self {
        Process::Implies(bx(a), bx(b))
    }

    pub fn and(a: Process, b: Process) -> Self {
        Process::And(bx(a), bx(b))
    }

    pub fn or(a: Process, b: Process) -> Self {
        Process::Or(bx(a), bx(b))
    }

    pub fn iff(a: Process, b: Process) -> Self {
        Process::Iff(bx(a), bx(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Process) -> Self {
        Process::Not(bx(a))
    }

    pub fn seq(a: Process, b: Process) -> Self {
        Process::Seq(bx(a), bx(b))
    }

    pub fn wseq(a: Process, b: Process) -> Self {
        Process::WSeq(bx(a), bx(b))
    }

    pub fn rep(a: Process) -> Self {
        Process::RepSeq(bx(a))
    }

    pub fn wrep(a: Process) -> Self {
        Process::WRepSeq(bx(a))
    }

    pub fn forall(v: &str, a: Process) -> Self {
        Process::Forall(Var::new(v), bx(a))
    }

    pub fn exists(v: &str, a: Process) -> Self {
        Process::Exists(Var::new(v), bx(a))
    }

    /// Rewrite every sugar node into basic operators. Fact sugar inside the
    /// modalities is left alone; infinitary nodes are expanded componentwise.
    pub fn expand(&self) -> Process {
        use Process::*;
        let neg = |a: Process| Implies(bx(a), bx(Process::falsum()));
        match self {
            First(_) | Inner(_) | Upto(_) | Always(_) => self.clone(),
            Implies(a, b) => Implies(bx(a.expand()), bx(b.expand())),
            Forall(v, a) => Forall(v.clone(), bx(a.expand())),
            Seq(a, b) => Seq(bx(a.expand()), bx(b.expand())),
            RepSeq(a) => RepSeq(bx(a.expand())),
            WRepSeq(a) => WRepSeq(bx(a.expand())),
            Not(a) => neg(a.expand()),
            Or(a, b) => Implies(bx(neg(a.expand())), bx(b.expand())),
            And(a, b) => {
                let na = neg(a.expand());
                let nb = neg(b.expand());
                neg(Implies(bx(neg(na)), bx(nb)))
            }
            Iff(a, b) => {
                let ab = Process::implies((**a).clone(), (**b).clone());
                let ba = Process::implies((**b).clone(), (**a).clone());
                Process::and(ab, ba).expand()
            }
            Exists(v, a) => neg(Forall(v.clone(), bx(neg(a.expand())))),
            UpDown(f) => Process::and(First(f.clone()), Upto(f.clone())).expand(),
            Down(f) => Process::and(First(f.clone()), Inner(f.clone())).expand(),
            WSeq(a, b) => {
                Process::or((**a).clone(), Process::seq((**a).clone(), (**b).clone())).expand()
            }
            Named(_, body) => body.expand(),
            InfConj(cs) => InfConj(
                cs.iter()
                    .map(|c| Conjunct { process: c.process.expand(), multiplicity: c.multiplicity })
                    .collect(),
            ),
            Chain(ch) => Chain(LeadChain {
                head: bx(ch.head.expand()),
                links: ch
                    .links
                    .iter()
                    .map(|l| Link { after: l.after, before: l.before, next: l.next.expand() })
                    .collect(),
                open_ended: ch.open_ended,
            }),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        use Process::*;
        match self {
            First(f) | Inner(f) | Upto(f) | Always(f) | UpDown(f) | Down(f) => {
                f.collect_free(bound, out)
            }
            Implies(a, b) | Seq(a, b) | And(a, b) | Or(a, b) | Iff(a, b) | WSeq(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            RepSeq(a) | WRepSeq(a) | Not(a) | Named(_, a) => a.collect_free(bound, out),
            Forall(v, a) | Exists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            InfConj(cs) => {
                for c in cs {
                    c.process.collect_free(bound, out);
                }
            }
            Chain(ch) => {
                ch.head.collect_free(bound, out);
                for l in &ch.links {
                    l.next.collect_free(bound, out);
                }
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Substitute a term for the free occurrences of `var`.
    pub fn subst(&self, var: &Var, with: &Term) -> Process {
        use Process::*;
        let s = |p: &Process| bx(p.subst(var, with));
        match self {
            First(f) => First(f.subst(var, with)),
            Inner(f) => Inner(f.subst(var, with)),
            Upto(f) => Upto(f.subst(var, with)),
            Always(f) => Always(f.subst(var, with)),
            UpDown(f) => UpDown(f.subst(var, with)),
            Down(f) => Down(f.subst(var, with)),
            Implies(a, b) => Implies(s(a), s(b)),
            Seq(a, b) => Seq(s(a), s(b)),
            And(a, b) => And(s(a), s(b)),
            Or(a, b) => Or(s(a), s(b)),
            Iff(a, b) => Iff(s(a), s(b)),
            WSeq(a, b) => WSeq(s(a), s(b)),
            RepSeq(a) => RepSeq(s(a)),
            WRepSeq(a) => WRepSeq(s(a)),
            Not(a) => Not(s(a)),
            // Abbreviations are closed by construction.
            Named(..) => self.clone(),
            Forall(v, _) | Exists(v, _) if v == var => self.clone(),
            Forall(v, a) => Forall(v.clone(), s(a)),
            Exists(v, a) => Exists(v.clone(), s(a)),
            InfConj(cs) => InfConj(
                cs.iter()
                    .map(|c| Conjunct { process: c.process.subst(var, with), multiplicity: c.multiplicity })
                    .collect(),
            ),
            Chain(ch) => Chain(LeadChain {
                head: s(&ch.head),
                links: ch
                    .links
                    .iter()
                    .map(|l| Link { after: l.after, before: l.before, next: l.next.subst(var, with) })
                    .collect(),
                open_ended: ch.open_ended,
            }),
        }
    }

    /// Nesting of sequencing operators, weighted so that every cut point a
    /// single path through the process can place is counted.
    pub fn seq_depth(&self) -> usize {
        use Process::*;
        match self {
            First(_) | Inner(_) | Upto(_) | Always(_) | UpDown(_) | Down(_) => 0,
            Implies(a, b) | And(a, b) | Or(a, b) | Iff(a, b) => a.seq_depth().max(b.seq_depth()),
            Seq(a, b) | WSeq(a, b) => a.seq_depth() + b.seq_depth() + 1,
            RepSeq(a) | WRepSeq(a) => 2 * a.seq_depth() + 2,
            Not(a) | Forall(_, a) | Exists(_, a) | Named(_, a) => a.seq_depth(),
            InfConj(cs) => cs.iter().map(|c| c.process.seq_depth()).max().unwrap_or(0),
            Chain(ch) => ch
                .links
                .iter()
                .map(|l| l.next.seq_depth())
                .chain(std::iter::once(ch.head.seq_depth()))
                .max()
                .unwrap_or(0),
        }
    }

    /// Syntax-tree height, counting a modality over a fact as one level.
    pub fn depth(&self) -> usize {
        use Process::*;
        match self {
            First(_) | Inner(_) | Upto(_) | Always(_) | UpDown(_) | Down(_) => 1,
            Implies(a, b) | And(a, b) | Or(a, b) | Iff(a, b) | Seq(a, b) | WSeq(a, b) => {
                1 + a.depth().max(b.depth())
            }
            RepSeq(a) | WRepSeq(a) | Not(a) | Forall(_, a) | Exists(_, a) => 1 + a.depth(),
            Named(_, a) => a.depth(),
            InfConj(cs) => 1 + cs.iter().map(|c| c.process.depth()).max().unwrap_or(0),
            Chain(ch) => {
                1 + ch
                    .links
                    .iter()
                    .map(|l| l.next.depth())
                    .chain(std::iter::once(ch.head.depth()))
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Fact letters used anywhere in the process.
    pub fn fact_letters(&self, out: &mut Vec<(String, usize)>) {
        use Process::*;
        match self {
            First(f) | Inner(f) | Upto(f) | Always(f) | UpDown(f) | Down(f) => f.letters(out),
            Implies(a, b) | Seq(a, b) | And(a, b) | Or(a, b) | Iff(a, b) | WSeq(a, b) => {
                a.fact_letters(out);
                b.fact_letters(out);
            }
            RepSeq(a) | WRepSeq(a) | Not(a) | Forall(_, a) | Exists(_, a) | Named(_, a) => {
                a.fact_letters(out)
            }
            InfConj(cs) => cs.iter().for_each(|c| c.process.fact_letters(out)),
            Chain(ch) => {
                ch.head.fact_letters(out);
                ch.links.iter().for_each(|l| l.next.fact_letters(out));
            }
        }
    }

    /// True if the process uses neither infinite conjunctions nor chains.
    pub fn is_finitary(&self) -> bool {
        use Process::*;
        match self {
            First(_) | Inner(_) | Upto(_) | Always(_) | UpDown(_) | Down(_) => true,
            Implies(a, b) | Seq(a, b) | And(a, b) | Or(a, b) | Iff(a, b) | WSeq(a, b) => {
                a.is_finitary() && b.is_finitary()
            }
            RepSeq(a) | WRepSeq(a) | Not(a) | Forall(_, a) | Exists(_, a) | Named(_, a) => {
                a.is_finitary()
            }
            InfConj(_) | Chain(_) => false,
        }
    }

    /// Variables bound somewhere inside, fact binders included.
    pub fn binders(&self, out: &mut BTreeSet<Var>) {
        use Process::*;
        match self {
            First(f) | Inner(f) | Upto(f) | Always(f) | UpDown(f) | Down(f) => f.binders(out),
            Implies(a, b) | Seq(a, b) | And(a, b) | Or(a, b) | Iff(a, b) | WSeq(a, b) => {
                a.binders(out);
                b.binders(out);
            }
            RepSeq(a) | WRepSeq(a) | Not(a) | Named(_, a) => a.binders(out),
            Forall(v, a) | Exists(v, a) => {
                out.insert(v.clone());
                a.binders(out);
            }
            InfConj(cs) => cs.iter().for_each(|c| c.process.binders(out)),
            Chain(ch) => {
                ch.head.binders(out);
                ch.links.iter().for_each(|l| l.next.binders(out));
            }
        }
    }
}
