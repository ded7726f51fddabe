//! Resources, DO-nodes and DONE-nodes.

use std::collections::BTreeSet;

use super::fact::{Term, Var};
use super::process::Process;

/// The potential of a DO-resource: either written out or a reference to a
/// recursive definition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Potential {
    Inline(DoNode),
    Ref(String),
}

/// `>> x1..xm (D1, ..., Dn)`; `n` may be zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DoNode {
    pub vars: Vec<Var>,
    pub branches: Vec<DoneNode>,
}

/// `<< y1..ym (R1, ..., Rk)` with `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DoneNode {
    pub vars: Vec<Var>,
    pub choices: Vec<Resource>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Resource {
    /// An effect together with a potential.
    Do { effect: Process, potential: Potential },
    Implies(Box<Resource>, Box<Resource>),
    And(Box<Resource>, Box<Resource>),
    Forall(Var, Box<Resource>),
    Bang(Box<Resource>),
    /// A resource letter, only present in schemata.
    Letter(String, Vec<Term>),
    // Sugar.
    Not(Box<Resource>),
    Or(Box<Resource>, Box<Resource>),
    Exists(Var, Box<Resource>),
    /// Additive conjunction.
    With(Box<Resource>, Box<Resource>),
    /// Additive disjunction.
    Plus(Box<Resource>, Box<Resource>),
    AForall(Var, Box<Resource>),
    AExists(Var, Box<Resource>),
}

/// What sits at a leaf of the multiplicative spine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeafKind {
    DoInline,
    DoRef,
    Letter,
    Bang,
}

fn bx(r: Resource) -> Box<Resource> {
    Box::new(r)
}

impl DoNode {
    pub fn empty() -> Self {
        DoNode { vars: Vec::new(), branches: Vec::new() }
    }

    pub fn subst(&self, var: &Var, with: &Term) -> DoNode {
        if self.vars.contains(var) {
            return self.clone();
        }
        DoNode {
            vars: self.vars.clone(),
            branches: self.branches.iter().map(|d| d.subst(var, with)).collect(),
        }
    }

    /// Substitute constants for the bound variables, dropping the binder.
    pub fn instantiate(&self, args: &[u32]) -> Vec<DoneNode> {
        self.branches
            .iter()
            .map(|d| {
                let mut d = d.clone();
                for (v, a) in self.vars.iter().zip(args) {
                    d = d.subst(v, &Term::Const(*a));
                }
                d
            })
            .collect()
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let n = self.vars.len();
        bound.extend(self.vars.iter().cloned());
        for d in &self.branches {
            d.collect_free(bound, out);
        }
        bound.truncate(bound.len() - n);
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }
}

impl DoneNode {
    pub fn subst(&self, var: &Var, with: &Term) -> DoneNode {
        if self.vars.contains(var) {
            return self.clone();
        }
        DoneNode {
            vars: self.vars.clone(),
            choices: self.choices.iter().map(|r| r.subst(var, with)).collect(),
        }
    }

    /// Choice `j` with the report constants substituted.
    pub fn instantiate(&self, j: usize, args: &[u32]) -> Option<Resource> {
        let mut r = self.choices.get(j)?.clone();
        for (v, a) in self.vars.iter().zip(args) {
            r = r.subst(v, &Term::Const(*a));
        }
        Some(r)
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let n = self.vars.len();
        bound.extend(self.vars.iter().cloned());
        for r in &self.choices {
            r.collect_free(bound, out);
        }
        bound.truncate(bound.len() - n);
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }
}

impl Resource {
    pub fn do_inline(effect: Process, node: DoNode) -> Self {
        Resource::Do { effect, potential: Potential::Inline(node) }
    }

    pub fn do_ref(effect: Process, name: &str) -> Self {
        Resource::Do { effect, potential: Potential::Ref(name.to_string()) }
    }

    /// `p >>` with no commands.
    pub fn inert(effect: Process) -> Self {
        Resource::do_inline(effect, DoNode::empty())
    }

    pub fn rfalse() -> Self {
        Resource::inert(Process::falsum())
    }

    pub fn rtrue() -> Self {
        Resource::inert(Process::verum())
    }

    pub fn letter(name: &str) -> Self {
        Resource::Letter(name.to_string(), Vec::new())
    }

    pub fn implies(a: Resource, b: Resource) -> Self {
        Resource::Implies(bx(a), bx(b))
    }

    pub fn and(a: Resource, b: Resource) -> Self {
        Resource::And(bx(a), bx(b))
    }

    pub fn forall(v: &str, a: Resource) -> Self {
        Resource::Forall(Var::new(v), bx(a))
    }

    pub fn bang(a: Resource) -> Self {
        Resource::Bang(bx(a))
    }

    /// Rewrite the sugar nodes. Processes inside effects are left as written.
    pub fn expand(&self) -> Resource {
        use Resource::*;
        let neg = |r: Resource| Implies(bx(r), bx(Resource::rfalse()));
        let single = |r: Resource| DoneNode { vars: Vec::new(), choices: vec![r] };
        match self {
            Do { effect, potential } => Do {
                effect: effect.clone(),
                potential: match potential {
                    Potential::Ref(_) => potential.clone(),
                    Potential::Inline(node) => Potential::Inline(DoNode {
                        vars: node.vars.clone(),
                        branches: node
                            .branches
                            .iter()
                            .map(|d| DoneNode {
                                vars: d.vars.clone(),
                                choices: d.choices.iter().map(|c| c.expand()).collect(),
                            })
                            .collect(),
                    }),
                },
            },
            Implies(a, b) => Implies(bx(a.expand()), bx(b.expand())),
            And(a, b) => And(bx(a.expand()), bx(b.expand())),
            Forall(v, a) => Forall(v.clone(), bx(a.expand())),
            Bang(a) => Bang(bx(a.expand())),
            Letter(..) => self.clone(),
            Not(a) => neg(a.expand()),
            Or(a, b) => Implies(bx(neg(a.expand())), bx(b.expand())),
            Exists(v, a) => neg(Forall(v.clone(), bx(neg(a.expand())))),
            With(a, b) => Resource::do_inline(
                Process::verum(),
                DoNode { vars: Vec::new(), branches: vec![single(a.expand()), single(b.expand())] },
            ),
            AForall(v, a) => Resource::do_inline(
                Process::verum(),
                DoNode { vars: vec![v.clone()], branches: vec![single(a.expand())] },
            ),
            Plus(a, b) => {
                let w = With(bx(Not(a.clone())), bx(Not(b.clone())));
                neg(w.expand())
            }
            AExists(v, a) => neg(AForall(v.clone(), bx(Not(a.clone()))).expand()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        use Resource::*;
        match self {
            Do { effect, potential } => {
                effect.collect_free(bound, out);
                if let Potential::Inline(node) = potential {
                    node.collect_free(bound, out);
                }
            }
            Implies(a, b) | And(a, b) | Or(a, b) | With(a, b) | Plus(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Bang(a) | Not(a) => a.collect_free(bound, out),
            Forall(v, a) | Exists(v, a) | AForall(v, a) | AExists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            Letter(_, args) => {
                let mut vs = BTreeSet::new();
                for t in args {
                    t.collect_vars(&mut vs);
                }
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn subst(&self, var: &Var, with: &Term) -> Resource {
        use Resource::*;
        let s = |r: &Resource| bx(r.subst(var, with));
        match self {
            Do { effect, potential } => Do {
                effect: effect.subst(var, with),
                potential: match potential {
                    Potential::Inline(n) => Potential::Inline(n.subst(var, with)),
                    Potential::Ref(_) => potential.clone(),
                },
            },
            Implies(a, b) => Implies(s(a), s(b)),
            And(a, b) => And(s(a), s(b)),
            Or(a, b) => Or(s(a), s(b)),
            With(a, b) => With(s(a), s(b)),
            Plus(a, b) => Plus(s(a), s(b)),
            Bang(a) => Bang(s(a)),
            Not(a) => Not(s(a)),
            Forall(v, _) | Exists(v, _) | AForall(v, _) | AExists(v, _) if v == var => self.clone(),
            Forall(v, a) => Forall(v.clone(), s(a)),
            Exists(v, a) => Exists(v.clone(), s(a)),
            AForall(v, a) => AForall(v.clone(), s(a)),
            AExists(v, a) => AExists(v.clone(), s(a)),
            Letter(n, args) => Letter(n.clone(), args.iter().map(|t| t.subst(var, with)).collect()),
        }
    }

    /// Every variable name appearing anywhere, bound or free.
    pub fn all_vars(&self, out: &mut BTreeSet<Var>) {
        use Resource::*;
        fn proc_vars(p: &Process, out: &mut BTreeSet<Var>) {
            // Binders in processes also count, so collect through a fresh walk.
            let mut bound = Vec::new();
            let mut free = BTreeSet::new();
            p.collect_free(&mut bound, &mut free);
            out.extend(free);
            p.binders(out);
        }
        match self {
            Do { effect, potential } => {
                proc_vars(effect, out);
                if let Potential::Inline(n) = potential {
                    out.extend(n.vars.iter().cloned());
                    for d in &n.branches {
                        out.extend(d.vars.iter().cloned());
                        for c in &d.choices {
                            c.all_vars(out);
                        }
                    }
                }
            }
            Implies(a, b) | And(a, b) | Or(a, b) | With(a, b) | Plus(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Bang(a) | Not(a) => a.all_vars(out),
            Forall(v, a) | Exists(v, a) | AForall(v, a) | AExists(v, a) => {
                out.insert(v.clone());
                a.all_vars(out);
            }
            Letter(_, args) => {
                for t in args {
                    t.collect_vars(out);
                }
            }
        }
    }

    /// Leaves of the multiplicative spine after sugar expansion, with their kinds.
    /// This is total: every resource decomposes this way.
    pub fn spine_leaves(&self) -> Vec<(LeafKind, Resource)> {
        fn walk(r: &Resource, out: &mut Vec<(LeafKind, Resource)>) {
            match r {
                Resource::Implies(a, b) | Resource::And(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Resource::Forall(_, a) => walk(a, out),
                Resource::Do { potential: Potential::Inline(_), .. } => {
                    out.push((LeafKind::DoInline, r.clone()))
                }
                Resource::Do { potential: Potential::Ref(_), .. } => {
                    out.push((LeafKind::DoRef, r.clone()))
                }
                Resource::Letter(..) => out.push((LeafKind::Letter, r.clone())),
                Resource::Bang(_) => out.push((LeafKind::Bang, r.clone())),
                _ => unreachable!("sugar removed by expand"),
            }
        }
        let mut out = Vec::new();
        walk(&self.expand(), &mut out);
        out
    }

    /// Safe: every spine leaf is a DO-resource whose effect is `first tt`.
    pub fn is_safe(&self) -> bool {
        self.spine_leaves().iter().all(|(k, r)| match (k, r) {
            (LeafKind::DoInline | LeafKind::DoRef, Resource::Do { effect, .. }) => {
                effect.expand() == Process::verum()
            }
            _ => false,
        })
    }

    pub fn has_letters(&self) -> bool {
        let mut v = Vec::new();
        self.resource_letters(&mut v);
        !v.is_empty()
    }

    /// Resource letters with arities, in first-occurrence order.
    pub fn resource_letters(&self, out: &mut Vec<(String, usize)>) {
        use Resource::*;
        match self {
            Do { potential: Potential::Inline(n), .. } => {
                for d in &n.branches {
                    for c in &d.choices {
                        c.resource_letters(out);
                    }
                }
            }
            Do { .. } => {}
            Implies(a, b) | And(a, b) | Or(a, b) | With(a, b) | Plus(a, b) => {
                a.resource_letters(out);
                b.resource_letters(out);
            }
            Bang(a) | Not(a) | Forall(_, a) | Exists(_, a) | AForall(_, a) | AExists(_, a) => {
                a.resource_letters(out)
            }
            Letter(n, args) => {
                if !out.iter().any(|(m, _)| m == n) {
                    out.push((n.clone(), args.len()));
                }
            }
        }
    }

    /// Names of the definitions referenced anywhere.
    pub fn def_refs(&self, out: &mut BTreeSet<String>) {
        use Resource::*;
        match self {
            Do { potential: Potential::Ref(n), .. } => {
                out.insert(n.clone());
            }
            Do { potential: Potential::Inline(n), .. } => n.def_refs(out),
            Implies(a, b) | And(a, b) | Or(a, b) | With(a, b) | Plus(a, b) => {
                a.def_refs(out);
                b.def_refs(out);
            }
            Bang(a) | Not(a) | Forall(_, a) | Exists(_, a) | AForall(_, a) | AExists(_, a) => {
                a.def_refs(out)
            }
            Letter(..) => {}
        }
    }
}

impl DoNode {
    pub fn def_refs(&self, out: &mut BTreeSet<String>) {
        for d in &self.branches {
            for c in &d.choices {
                c.def_refs(out);
            }
        }
    }
}
