//! Canonical printer. Output reparses to a structurally equal tree.

use std::fmt::{self, Display, Write};

use super::defs::Definitions;
use super::fact::{Fact, Term};
use super::parser::{Document, Item};
use super::process::{Multiplicity, Process};
use super::resource::{DoNode, DoneNode, Potential, Resource};

impl Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Sum(a, b) => {
                write!(f, "{a} + ")?;
                if matches!(**b, Term::Sum(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

fn join_terms(args: &[Term]) -> String {
    args.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

fn join_vars(vs: &[super::fact::Var]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

// Levels: 0 implication, 1 disjunction, 2 conjunction, 3 unary.
fn fact(out: &mut String, a: &Fact, level: u8, tail: bool) {
    use Fact::*;
    let mine = match a {
        Implies(..) | Iff(..) => 0,
        Or(..) => 1,
        And(..) => 2,
        _ => 3,
    };
    let quant = matches!(a, Forall(..) | Exists(..));
    let paren = mine < level || (quant && !tail);
    if paren {
        out.push('(');
    }
    let tail = tail || paren;
    match a {
        False => out.push_str("ff"),
        True => out.push_str("tt"),
        Atom(p, args) => {
            let _ = write!(out, "{p}({})", join_terms(args));
        }
        Eq(x, y) => {
            let _ = write!(out, "{x} = {y}");
        }
        Not(x) => {
            out.push('~');
            fact(out, x, 3, tail);
        }
        Implies(x, y) | Iff(x, y) => {
            fact(out, x, 1, false);
            out.push_str(if matches!(a, Implies(..)) { " -> " } else { " <-> " });
            fact(out, y, 0, tail);
        }
        Or(x, y) => {
            fact(out, x, 1, false);
            out.push_str(" \\/ ");
            fact(out, y, 2, tail);
        }
        And(x, y) => {
            fact(out, x, 2, false);
            out.push_str(" & ");
            fact(out, y, 3, tail);
        }
        Forall(v, x) | Exists(v, x) => {
            out.push_str(if matches!(a, Forall(..)) { "all " } else { "ex " });
            let _ = write!(out, "{v}. ");
            fact(out, x, 0, true);
        }
    }
    if paren {
        out.push(')');
    }
}

impl Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        fact(&mut s, self, 0, true);
        f.write_str(&s)
    }
}

// Levels: 0 implication, 1 sequencing, 2 disjunction, 3 conjunction, 4 unary.
fn process(out: &mut String, p: &Process, level: u8, tail: bool) {
    use Process::*;
    let mine = match p {
        Implies(..) | Iff(..) => 0,
        Seq(..) | WSeq(..) | Chain(_) => 1,
        Or(..) => 2,
        And(..) => 3,
        _ => 4,
    };
    let quant = matches!(p, Forall(..) | Exists(..));
    let paren = mine < level || (quant && !tail);
    if paren {
        out.push('(');
    }
    let tail = tail || paren;
    let modal = |out: &mut String, kw: &str, f: &Fact| {
        out.push_str(kw);
        out.push(' ');
        fact(out, f, 0, true);
    };
    match p {
        First(f) => modal(out, "first", f),
        Inner(f) => modal(out, "inner", f),
        Upto(f) => modal(out, "upto", f),
        Always(f) => modal(out, "box", f),
        UpDown(f) => modal(out, "updown", f),
        Down(f) => modal(out, "down", f),
        Named(n, _) => out.push_str(n),
        Not(a) => {
            out.push_str(".~");
            process(out, a, 4, tail);
        }
        RepSeq(a) => {
            out.push_str("rep ");
            process(out, a, 4, tail);
        }
        WRepSeq(a) => {
            out.push_str("wrep ");
            process(out, a, 4, tail);
        }
        Implies(a, b) | Iff(a, b) => {
            process(out, a, 1, false);
            out.push_str(if matches!(p, Implies(..)) { " .-> " } else { " .<-> " });
            process(out, b, 0, tail);
        }
        Seq(a, b) | WSeq(a, b) => {
            process(out, a, 1, false);
            out.push_str(if matches!(p, Seq(..)) { " |> " } else { " |>= " });
            process(out, b, 2, tail);
        }
        Or(a, b) => {
            process(out, a, 2, false);
            out.push_str(" .\\/ ");
            process(out, b, 3, tail);
        }
        And(a, b) => {
            process(out, a, 3, false);
            out.push_str(" .& ");
            process(out, b, 4, tail);
        }
        Forall(v, a) | Exists(v, a) => {
            out.push_str(if matches!(p, Forall(..)) { ".all " } else { ".ex " });
            let _ = write!(out, "{v}. ");
            process(out, a, 0, true);
        }
        InfConj(cs) => {
            out.push_str("conj{");
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                process(out, &c.process, 0, true);
                match c.multiplicity {
                    Multiplicity::Finite(1) => {}
                    Multiplicity::Finite(n) => {
                        let _ = write!(out, " #{n}");
                    }
                    Multiplicity::Unbounded => out.push_str(" *"),
                }
            }
            out.push('}');
        }
        Chain(ch) => {
            // A chain head that is itself a chain would be read as one longer chain.
            let head_level = if matches!(*ch.head, Chain(_)) { 2 } else { 1 };
            process(out, &ch.head, head_level, false);
            let n = ch.links.len();
            for (i, l) in ch.links.iter().enumerate() {
                let _ = write!(out, " ~>[{},{}] ", l.after, l.before);
                let last = i + 1 == n && !ch.open_ended;
                process(out, &l.next, 2, tail && last);
            }
            if ch.open_ended {
                out.push_str(" ~>*");
            }
        }
    }
    if paren {
        out.push(')');
    }
}

impl Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        process(&mut s, self, 0, true);
        f.write_str(&s)
    }
}

fn effect(out: &mut String, p: &Process) {
    process(out, p, 4, false);
}

fn do_node(out: &mut String, n: &DoNode) {
    out.push_str(">>");
    if !n.vars.is_empty() {
        let _ = write!(out, " {}", join_vars(&n.vars));
    }
    if n.branches.is_empty() && !n.vars.is_empty() {
        out.push_str(" ()");
    } else if !n.branches.is_empty() {
        out.push_str(" (");
        for (i, d) in n.branches.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            done_node(out, d);
        }
        out.push(')');
    }
}

pub(crate) fn done_node(out: &mut String, d: &DoneNode) {
    out.push_str("<<");
    if !d.vars.is_empty() {
        let _ = write!(out, " {} ", join_vars(&d.vars));
    }
    out.push('(');
    for (i, r) in d.choices.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        resource(out, r, 0, true);
    }
    out.push(')');
}

// Levels: 0 implication, 1 disjunction, 2 conjunction, 3 unary.
pub(crate) fn resource(out: &mut String, r: &Resource, level: u8, tail: bool) {
    use Resource::*;
    let mine = match r {
        Implies(..) => 0,
        Or(..) | Plus(..) => 1,
        And(..) | With(..) => 2,
        _ => 3,
    };
    let quant = matches!(r, Forall(..) | Exists(..) | AForall(..) | AExists(..));
    let paren = mine < level || (quant && !tail);
    if paren {
        out.push('(');
    }
    let tail = tail || paren;
    match r {
        Do { effect: e, potential: Potential::Inline(n) }
            if n.branches.is_empty() && n.vars.is_empty() && *e == Process::falsum() =>
        {
            out.push_str("rff")
        }
        Do { effect: e, potential: Potential::Inline(n) }
            if n.branches.is_empty() && n.vars.is_empty() && *e == Process::verum() =>
        {
            out.push_str("rtt")
        }
        Do { effect: e, potential } => {
            effect(out, e);
            match potential {
                Potential::Inline(n) => {
                    out.push(' ');
                    do_node(out, n);
                }
                Potential::Ref(name) => {
                    let _ = write!(out, " {name}");
                }
            }
        }
        Letter(n, args) => {
            out.push_str(n);
            if !args.is_empty() {
                let _ = write!(out, "({})", join_terms(args));
            }
        }
        Not(a) => {
            out.push_str(":~");
            resource(out, a, 3, tail);
        }
        Bang(a) => {
            out.push('!');
            resource(out, a, 3, tail);
        }
        Implies(a, b) => {
            resource(out, a, 1, false);
            out.push_str(" :-> ");
            resource(out, b, 0, tail);
        }
        Or(a, b) | Plus(a, b) => {
            resource(out, a, 1, false);
            out.push_str(if matches!(r, Or(..)) { " :\\/ " } else { " :|| " });
            resource(out, b, 2, tail);
        }
        And(a, b) | With(a, b) => {
            resource(out, a, 2, false);
            out.push_str(if matches!(r, And(..)) { " :& " } else { " :&& " });
            resource(out, b, 3, tail);
        }
        Forall(v, a) | Exists(v, a) | AForall(v, a) | AExists(v, a) => {
            let kw = match r {
                Forall(..) => ":all",
                Exists(..) => ":ex",
                AForall(..) => ":aall",
                _ => ":aex",
            };
            let _ = write!(out, "{kw} {v}. ");
            resource(out, a, 0, true);
        }
    }
    if paren {
        out.push(')');
    }
}

impl Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        resource(&mut s, self, 0, true);
        f.write_str(&s)
    }
}

impl Display for DoNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        do_node(&mut s, self);
        f.write_str(&s)
    }
}

impl Display for DoneNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        done_node(&mut s, self);
        f.write_str(&s)
    }
}

/// Declarations, one per line, in declaration order.
pub fn print_definitions(defs: &Definitions) -> String {
    let mut out = String::new();
    for (name, body) in &defs.procs {
        let _ = writeln!(out, "proc {name} := {body};");
    }
    for (name, body) in &defs.defs {
        let _ = writeln!(out, "def {name} := {body};");
    }
    out
}

pub fn print_document(doc: &Document) -> String {
    let mut out = print_definitions(&doc.defs);
    match &doc.item {
        Item::Fact(f) => {
            let _ = writeln!(out, "{f}");
        }
        Item::Process(p) => {
            let _ = writeln!(out, "{p}");
        }
        Item::Resource(r) => {
            let _ = writeln!(out, "{r}");
        }
        Item::DoNode(n) => {
            let _ = writeln!(out, "{n}");
        }
        Item::None => {}
    }
    out
}
