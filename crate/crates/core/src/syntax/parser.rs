//! Recursive-descent parser for facts, processes, resources and declarations.

use std::collections::BTreeSet;

use super::defs::Definitions;
use super::fact::{Fact, Term, Var};
use super::lexer::{lex, Spanned, Tok};
use super::process::{Conjunct, LeadChain, Link, Multiplicity, Process};
use super::resource::{DoNode, DoneNode, Potential, Resource};
use crate::error::{Error, Result};

/// Which kind of item a text holds after its declarations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Fact,
    Process,
    Resource,
    DoNode,
    Definitions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Fact(Fact),
    Process(Process),
    Resource(Resource),
    DoNode(DoNode),
    None,
}

/// Declarations plus the main item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub defs: Definitions,
    pub item: Item,
}

impl Document {
    pub fn process(&self) -> Option<&Process> {
        match &self.item {
            Item::Process(p) => Some(p),
            _ => None,
        }
    }

    pub fn resource(&self) -> Option<&Resource> {
        match &self.item {
            Item::Resource(r) => Some(r),
            _ => None,
        }
    }
}

const KEYWORDS: &[&str] = &[
    "ff", "tt", "all", "ex", "forall", "exists", "aall", "aex", "first", "inner", "upto", "box",
    "rep", "wrep", "updown", "down", "conj", "proc", "def", "rff", "rtt",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

fn is_upper(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

fn is_lower_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_lowercase() || c == '_') && !is_keyword(s)
}

/// Parse a whole document at the given level.
pub fn parse(text: &str, level: Level) -> Result<Document> {
    parse_with(text, level, &Definitions::new())
}

/// Parse with an existing set of declarations already in scope.
pub fn parse_with(text: &str, level: Level, defs: &Definitions) -> Result<Document> {
    let mut p = Parser::new(text, defs.clone())?;
    p.document(level)
}

pub fn parse_fact(text: &str) -> Result<Fact> {
    match parse(text, Level::Fact)?.item {
        Item::Fact(f) => Ok(f),
        _ => unreachable!(),
    }
}

pub fn parse_process(text: &str) -> Result<Process> {
    match parse(text, Level::Process)?.item {
        Item::Process(p) => Ok(p),
        _ => unreachable!(),
    }
}

/// A resource together with the declarations it was written with.
pub fn parse_resource(text: &str) -> Result<(Resource, Definitions)> {
    let doc = parse(text, Level::Resource)?;
    match doc.item {
        Item::Resource(r) => Ok((r, doc.defs)),
        _ => unreachable!(),
    }
}

pub fn parse_definitions(text: &str) -> Result<Definitions> {
    Ok(parse(text, Level::Definitions)?.defs)
}

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    defs: Definitions,
    def_names: BTreeSet<String>,
}

type Snapshot = (usize, Definitions);

impl Parser {
    pub(crate) fn new(text: &str, defs: Definitions) -> Result<Self> {
        let toks = lex(text)?;
        let mut def_names: BTreeSet<String> = defs.defs.keys().cloned().collect();
        for w in toks.windows(3) {
            if let (Tok::Ident(d), Tok::Ident(n), Tok::Define) = (&w[0].tok, &w[1].tok, &w[2].tok) {
                if d == "def" {
                    def_names.insert(n.clone());
                }
            }
        }
        Ok(Parser { toks, pos: 0, defs, def_names })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Syntax { line: s.line, col: s.col, msg: msg.into() })
    }

    fn expected<T>(&self, what: &str) -> Result<T> {
        self.err(format!("expected {what}, found {}", self.peek().describe()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.expected(&format!("`{}`", t.text()))
        }
    }

    /// Accept a `.` even when the lexer glued it to the next operator.
    fn expect_dot(&mut self) -> Result<()> {
        if self.eat(&Tok::Dot) {
            return Ok(());
        }
        if let Some((_, rest)) = self.peek().split_prefix() {
            self.toks[self.pos].tok = rest;
            self.toks[self.pos].col += 1;
            return Ok(());
        }
        self.expected("`.`")
    }

    fn is_ident(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn snapshot(&self) -> Snapshot {
        (self.pos, self.defs.clone())
    }

    fn restore(&mut self, s: Snapshot) {
        self.pos = s.0;
        self.defs = s.1;
    }

    /// Try `a`; on failure rewind and try `b`, reporting whichever got further.
    fn alt<T>(
        &mut self,
        a: impl FnOnce(&mut Self) -> Result<T>,
        b: impl FnOnce(&mut Self) -> Result<T>,
    ) -> Result<T> {
        let snap = self.snapshot();
        match a(self) {
            Ok(v) => Ok(v),
            Err(ea) => {
                self.restore(snap);
                match b(self) {
                    Ok(v) => Ok(v),
                    Err(eb) => Err(further(ea, eb)),
                }
            }
        }
    }

    pub(crate) fn document(&mut self, level: Level) -> Result<Document> {
        loop {
            if self.is_ident("proc") && matches!(self.peek_at(2), Tok::Define) {
                self.proc_decl()?;
            } else if self.is_ident("def") && matches!(self.peek_at(2), Tok::Define) {
                self.def_decl()?;
            } else {
                break;
            }
        }
        let item = match level {
            Level::Fact => Item::Fact(self.fact()?),
            Level::Process => Item::Process(self.process()?),
            Level::Resource => Item::Resource(self.resource()?),
            Level::DoNode => Item::DoNode(self.do_node_required()?),
            Level::Definitions => Item::None,
        };
        if item != Item::None {
            self.eat(&Tok::Semi);
        }
        if self.peek() != &Tok::Eof {
            return self.expected("end of input");
        }
        self.defs.check_shapes()?;
        if let Item::Resource(r) = &item {
            self.defs.check_refs(r)?;
        }
        Ok(Document { defs: std::mem::take(&mut self.defs), item })
    }

    fn proc_decl(&mut self) -> Result<()> {
        self.bump();
        let name = match self.bump() {
            Tok::Ident(n) if is_lower_name(&n) => n,
            _ => {
                self.pos -= 1;
                return self.expected("a lowercase process name");
            }
        };
        if self.defs.procs.contains_key(&name) {
            return self.err(format!("process name {name} declared twice"));
        }
        self.expect(&Tok::Define)?;
        let body = self.process()?;
        if let Some(v) = body.free_vars().into_iter().next() {
            return self.err(format!("process {name} has free variable {v}"));
        }
        self.expect(&Tok::Semi)?;
        self.defs.procs.insert(name, body);
        Ok(())
    }

    fn def_decl(&mut self) -> Result<()> {
        self.bump();
        let name = match self.bump() {
            Tok::Ident(n) if is_upper(&n) => n,
            _ => {
                self.pos -= 1;
                return self.expected("an uppercase definition name");
            }
        };
        if self.defs.defs.contains_key(&name) {
            return self.err(format!("definition {name} declared twice"));
        }
        self.expect(&Tok::Define)?;
        let body = self.do_node_required()?;
        self.expect(&Tok::Semi)?;
        self.defs.defs.insert(name, body);
        Ok(())
    }

    // ---- terms and facts ----

    fn var(&mut self) -> Result<Var> {
        match self.peek().clone() {
            Tok::Ident(s) if is_lower_name(&s) => {
                self.bump();
                Ok(Var(s))
            }
            _ => self.expected("a variable"),
        }
    }

    fn var_list(&mut self) -> Result<Vec<Var>> {
        let mut vs = vec![self.var()?];
        while self.eat(&Tok::Comma) {
            vs.push(self.var()?);
        }
        Ok(vs)
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = self.term_atom()?;
        while self.eat(&Tok::Plus) {
            t = Term::sum(t, self.term_atom()?);
        }
        Ok(t)
    }

    fn term_atom(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.bump();
                let c = u32::try_from(n).or_else(|_| self.err("constant too large"))?;
                Ok(Term::Const(c))
            }
            Tok::Ident(s) if is_lower_name(&s) => {
                self.bump();
                Ok(Term::Var(Var(s)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            _ => self.expected("a term"),
        }
    }

    fn term_args(&mut self) -> Result<Vec<Term>> {
        self.expect(&Tok::LParen)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(out);
        }
        out.push(self.term()?);
        while self.eat(&Tok::Comma) {
            out.push(self.term()?);
        }
        if !self.eat(&Tok::RParen) {
            return self.expected("`,` or `)` (unbalanced parenthesis)");
        }
        Ok(out)
    }

    pub(crate) fn fact(&mut self) -> Result<Fact> {
        let lhs = self.fact_or()?;
        if self.eat(&Tok::Arrow) {
            Ok(Fact::implies(lhs, self.fact()?))
        } else if self.eat(&Tok::Iff) {
            Ok(Fact::iff(lhs, self.fact()?))
        } else {
            Ok(lhs)
        }
    }

    fn fact_or(&mut self) -> Result<Fact> {
        let mut f = self.fact_and()?;
        while self.eat(&Tok::Or) {
            f = Fact::or(f, self.fact_and()?);
        }
        Ok(f)
    }

    fn fact_and(&mut self) -> Result<Fact> {
        let mut f = self.fact_unary()?;
        while self.eat(&Tok::Amp) {
            f = Fact::and(f, self.fact_unary()?);
        }
        Ok(f)
    }

    fn quant_kind(&self) -> Option<bool> {
        match self.peek() {
            Tok::Ident(s) if s == "all" || s == "forall" => Some(true),
            Tok::Ident(s) if s == "ex" || s == "exists" => Some(false),
            _ => None,
        }
    }

    fn fact_unary(&mut self) -> Result<Fact> {
        if self.eat(&Tok::Tilde) {
            return Ok(Fact::not(self.fact_unary()?));
        }
        if let Some(univ) = self.quant_kind() {
            self.bump();
            let vs = self.var_list()?;
            self.expect_dot()?;
            let mut body = self.fact()?;
            for v in vs.into_iter().rev() {
                body = if univ { Fact::Forall(v, Box::new(body)) } else { Fact::Exists(v, Box::new(body)) };
            }
            return Ok(body);
        }
        match self.peek().clone() {
            Tok::Ident(s) if s == "ff" => {
                self.bump();
                Ok(Fact::False)
            }
            Tok::Ident(s) if s == "tt" => {
                self.bump();
                Ok(Fact::True)
            }
            Tok::Ident(s) if is_upper(&s) => {
                self.bump();
                let args =
                    if self.peek() == &Tok::LParen { self.term_args()? } else { Vec::new() };
                self.defs.note_fact_arity(&s, args.len())?;
                Ok(Fact::Atom(s, args))
            }
            Tok::LParen => self.alt(
                |p| p.equation(),
                |p| {
                    p.bump();
                    let f = p.fact()?;
                    if !p.eat(&Tok::RParen) {
                        return p.expected("`)` (unbalanced parenthesis)");
                    }
                    Ok(f)
                },
            ),
            Tok::Nat(_) | Tok::Ident(_) => self.equation(),
            _ => self.expected("a fact"),
        }
    }

    fn equation(&mut self) -> Result<Fact> {
        let a = self.term()?;
        self.expect(&Tok::Eq)?;
        let b = self.term()?;
        Ok(Fact::Eq(a, b))
    }

    // ---- processes ----

    pub(crate) fn process(&mut self) -> Result<Process> {
        let lhs = self.p_seq()?;
        if self.eat(&Tok::PArrow) {
            Ok(Process::implies(lhs, self.process()?))
        } else if self.eat(&Tok::PIff) {
            Ok(Process::iff(lhs, self.process()?))
        } else {
            Ok(lhs)
        }
    }

    fn nat(&mut self) -> Result<u64> {
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.expected("a natural number"),
        }
    }

    fn p_seq(&mut self) -> Result<Process> {
        let mut p = self.p_or()?;
        // Set while `p` is a chain built by this loop, so further links extend it.
        let mut open_chain = false;
        loop {
            if self.eat(&Tok::Seq) {
                p = Process::seq(p, self.p_or()?);
                open_chain = false;
            } else if self.eat(&Tok::WSeq) {
                p = Process::wseq(p, self.p_or()?);
                open_chain = false;
            } else if self.peek() == &Tok::Lead && self.peek_at(1) == &Tok::Star {
                match (&mut p, open_chain) {
                    (Process::Chain(ch), true) if !ch.links.is_empty() && !ch.open_ended => {
                        self.bump();
                        self.bump();
                        ch.open_ended = true;
                        open_chain = false;
                    }
                    _ => return self.err("`~>*` must close a chain"),
                }
            } else if self.eat(&Tok::Lead) {
                self.expect(&Tok::LBracket)?;
                let after = self.nat()?;
                self.expect(&Tok::Comma)?;
                let before = self.nat()?;
                self.expect(&Tok::RBracket)?;
                let next = self.p_or()?;
                let link = Link { after, before, next };
                p = match (p, open_chain) {
                    (Process::Chain(mut ch), true) => {
                        ch.links.push(link);
                        Process::Chain(ch)
                    }
                    (head, _) => Process::Chain(LeadChain {
                        head: Box::new(head),
                        links: vec![link],
                        open_ended: false,
                    }),
                };
                if let Process::Chain(ch) = &p {
                    if !ch.bounds_ordered() {
                        return self.err("chain bounds must strictly increase");
                    }
                }
                open_chain = true;
            } else {
                return Ok(p);
            }
        }
    }

    fn p_or(&mut self) -> Result<Process> {
        let mut p = self.p_and()?;
        while self.eat(&Tok::POr) {
            p = Process::or(p, self.p_and()?);
        }
        Ok(p)
    }

    fn p_and(&mut self) -> Result<Process> {
        let mut p = self.p_unary()?;
        while self.eat(&Tok::PAnd) {
            p = Process::and(p, self.p_unary()?);
        }
        Ok(p)
    }

    fn p_unary(&mut self) -> Result<Process> {
        if self.eat(&Tok::PNot) {
            return Ok(Process::not(self.p_unary()?));
        }
        if self.peek() == &Tok::Dot {
            if let Tok::Ident(s) = self.peek_at(1).clone() {
                let univ = match s.as_str() {
                    "all" | "forall" => true,
                    "ex" | "exists" => false,
                    _ => return self.expected("`.all` or `.ex`"),
                };
                self.bump();
                self.bump();
                let vs = self.var_list()?;
                self.expect_dot()?;
                let mut body = self.process()?;
                for v in vs.into_iter().rev() {
                    body = if univ {
                        Process::Forall(v, Box::new(body))
                    } else {
                        Process::Exists(v, Box::new(body))
                    };
                }
                return Ok(body);
            }
        }
        match self.peek().clone() {
            Tok::Ident(s) => match s.as_str() {
                "first" | "inner" | "upto" | "box" | "updown" | "down" => {
                    self.bump();
                    let f = self.fact()?;
                    Ok(match s.as_str() {
                        "first" => Process::First(f),
                        "inner" => Process::Inner(f),
                        "upto" => Process::Upto(f),
                        "box" => Process::Always(f),
                        "updown" => Process::UpDown(f),
                        _ => Process::Down(f),
                    })
                }
                "rep" => {
                    self.bump();
                    Ok(Process::rep(self.p_unary()?))
                }
                "wrep" => {
                    self.bump();
                    Ok(Process::wrep(self.p_unary()?))
                }
                "conj" => {
                    self.bump();
                    self.conj()
                }
                _ if is_lower_name(&s) => match self.defs.procs.get(&s) {
                    Some(body) => {
                        let body = body.clone();
                        self.bump();
                        Ok(Process::Named(s, Box::new(body)))
                    }
                    None => self.err(format!("unknown process name {s}")),
                },
                _ => self.expected("a process"),
            },
            Tok::LParen => {
                self.bump();
                let p = self.process()?;
                if !self.eat(&Tok::RParen) {
                    return self.expected("`)` (unbalanced parenthesis)");
                }
                Ok(p)
            }
            _ => self.expected("a process"),
        }
    }

    fn conj(&mut self) -> Result<Process> {
        self.expect(&Tok::LBrace)?;
        let mut items = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                let process = self.process()?;
                let multiplicity = if self.eat(&Tok::Star) {
                    Multiplicity::Unbounded
                } else if self.eat(&Tok::Hash) {
                    let n = self.nat()?;
                    Multiplicity::Finite(u32::try_from(n).or_else(|_| self.err("count too large"))?)
                } else {
                    Multiplicity::Finite(1)
                };
                items.push(Conjunct { process, multiplicity });
                if self.eat(&Tok::RBrace) {
                    break;
                }
                if !self.eat(&Tok::Comma) {
                    return self.expected("`,` or `}`");
                }
            }
        }
        Ok(Process::InfConj(items))
    }

    // ---- resources ----

    pub(crate) fn resource(&mut self) -> Result<Resource> {
        let lhs = self.r_or()?;
        if self.eat(&Tok::RArrow) {
            Ok(Resource::implies(lhs, self.resource()?))
        } else {
            Ok(lhs)
        }
    }

    fn r_or(&mut self) -> Result<Resource> {
        let mut r = self.r_and()?;
        loop {
            if self.eat(&Tok::ROr) {
                r = Resource::Or(Box::new(r), Box::new(self.r_and()?));
            } else if self.eat(&Tok::RPlus) {
                r = Resource::Plus(Box::new(r), Box::new(self.r_and()?));
            } else {
                return Ok(r);
            }
        }
    }

    fn r_and(&mut self) -> Result<Resource> {
        let mut r = self.r_unary()?;
        loop {
            if self.eat(&Tok::RAnd) {
                r = Resource::and(r, self.r_unary()?);
            } else if self.eat(&Tok::RWith) {
                r = Resource::With(Box::new(r), Box::new(self.r_unary()?));
            } else {
                return Ok(r);
            }
        }
    }

    fn r_unary(&mut self) -> Result<Resource> {
        if self.eat(&Tok::RNot) {
            return Ok(Resource::Not(Box::new(self.r_unary()?)));
        }
        if self.eat(&Tok::Bang) {
            return Ok(Resource::bang(self.r_unary()?));
        }
        if self.peek() == &Tok::Colon {
            self.bump();
            let kind = match self.peek().clone() {
                Tok::Ident(s) => s,
                _ => return self.expected("a resource quantifier"),
            };
            let make: fn(Var, Box<Resource>) -> Resource = match kind.as_str() {
                "all" | "forall" => Resource::Forall,
                "ex" | "exists" => Resource::Exists,
                "aall" => Resource::AForall,
                "aex" => Resource::AExists,
                _ => return self.expected("`all`, `ex`, `aall` or `aex`"),
            };
            self.bump();
            let vs = self.var_list()?;
            self.expect_dot()?;
            let mut body = self.resource()?;
            for v in vs.into_iter().rev() {
                body = make(v, Box::new(body));
            }
            return Ok(body);
        }
        match self.peek().clone() {
            Tok::Ident(s) if s == "rff" => {
                self.bump();
                Ok(Resource::rfalse())
            }
            Tok::Ident(s) if s == "rtt" => {
                self.bump();
                Ok(Resource::rtrue())
            }
            Tok::Ident(s) if is_upper(&s) => {
                if self.def_names.contains(&s) {
                    return self.err(format!(
                        "{s} names a potential; give it an effect, as in `first tt {s}`"
                    ));
                }
                self.bump();
                let args =
                    if self.peek() == &Tok::LParen { self.term_args()? } else { Vec::new() };
                self.defs.note_letter_arity(&s, args.len())?;
                Ok(Resource::Letter(s, args))
            }
            Tok::LParen => self.alt(
                |p| p.do_resource(),
                |p| {
                    p.bump();
                    let r = p.resource()?;
                    if !p.eat(&Tok::RParen) {
                        return p.expected("`)` (unbalanced parenthesis)");
                    }
                    Ok(r)
                },
            ),
            _ => self.do_resource(),
        }
    }

    fn do_resource(&mut self) -> Result<Resource> {
        let effect = self.process()?;
        if !effect.is_finitary() {
            return self.err("effects must be finitary processes");
        }
        match self.peek().clone() {
            Tok::DoOp => {
                let node = self.do_node_required()?;
                Ok(Resource::do_inline(effect, node))
            }
            Tok::Ident(s) if is_upper(&s) => {
                if !self.def_names.contains(&s) {
                    return self.err(format!("unknown definition {s}"));
                }
                self.bump();
                Ok(Resource::Do { effect, potential: Potential::Ref(s) })
            }
            _ => self.expected("`>>` or a defined potential"),
        }
    }

    fn do_node_required(&mut self) -> Result<DoNode> {
        self.expect(&Tok::DoOp)?;
        let vars = match self.peek() {
            Tok::Ident(s) if is_lower_name(s) => self.var_list()?,
            _ => Vec::new(),
        };
        let mut branches = Vec::new();
        if self.peek() == &Tok::LParen {
            self.bump();
            // `>> x ()` binds variables over an empty menu.
            if !vars.is_empty() && self.eat(&Tok::RParen) {
                return Ok(DoNode { vars, branches });
            }
            branches.push(self.done_node()?);
            while self.eat(&Tok::Comma) {
                branches.push(self.done_node()?);
            }
            if !self.eat(&Tok::RParen) {
                return self.expected("`,` or `)` (unbalanced parenthesis)");
            }
        } else if self.peek() == &Tok::DoneOp {
            branches.push(self.done_node()?);
        } else if !vars.is_empty() {
            return self.expected("`(` or `<<` after bound variables");
        }
        Ok(DoNode { vars, branches })
    }

    fn done_node(&mut self) -> Result<DoneNode> {
        self.expect(&Tok::DoneOp)?;
        let vars = match self.peek() {
            Tok::Ident(s) if is_lower_name(s) => self.var_list()?,
            _ => Vec::new(),
        };
        if !self.eat(&Tok::LParen) {
            return self.expected("`(`");
        }
        let mut choices = vec![self.resource()?];
        while self.eat(&Tok::Comma) {
            choices.push(self.resource()?);
        }
        if !self.eat(&Tok::RParen) {
            return self.expected("`,` or `)` (unbalanced parenthesis)");
        }
        Ok(DoneNode { vars, choices })
    }
}

fn further(a: Error, b: Error) -> Error {
    match (&a, &b) {
        (Error::Syntax { line: la, col: ca, .. }, Error::Syntax { line: lb, col: cb, .. }) => {
            if (la, ca) > (lb, cb) {
                a
            } else {
                b
            }
        }
        (Error::Syntax { .. }, _) => b,
        _ => a,
    }
}
