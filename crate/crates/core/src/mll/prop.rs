//! Classical propositional formulas and truth tables.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_LETTERS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Prop {
    False,
    True,
    Var(String),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn var(name: &str) -> Self {
        Prop::Var(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Prop) -> Self {
        Prop::Not(Box::new(a))
    }

    pub fn and(a: Prop, b: Prop) -> Self {
        Prop::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Prop, b: Prop) -> Self {
        Prop::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Prop, b: Prop) -> Self {
        Prop::Implies(Box::new(a), Box::new(b))
    }

    pub fn letters(&self) -> Vec<&str> {
        fn go<'a>(p: &'a Prop, out: &mut Vec<&'a str>) {
            match p {
                Prop::Var(v) if !out.contains(&v.as_str()) => out.push(v),
                Prop::Var(_) | Prop::False | Prop::True => {}
                Prop::Not(a) => go(a, out),
                Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::False => f.write_str("ff"),
            Prop::True => f.write_str("tt"),
            Prop::Var(v) => f.write_str(v),
            Prop::Not(a) => write!(f, "~{a}"),
            Prop::And(a, b) => write!(f, "({a} & {b})"),
            Prop::Or(a, b) => write!(f, "({a} | {b})"),
            Prop::Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

/// Columns of the first six variables within one 64-row block.
const LOW: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

enum Op {
    Const(bool),
    Var(usize),
    Not(Box<Op>),
    And(Box<Op>, Box<Op>),
    Or(Box<Op>, Box<Op>),
    Implies(Box<Op>, Box<Op>),
}

fn compile(p: &Prop, names: &[&str]) -> Op {
    let c = |a: &Prop| Box::new(compile(a, names));
    match p {
        Prop::False => Op::Const(false),
        Prop::True => Op::Const(true),
        Prop::Var(v) => Op::Var(names.iter().position(|n| n == v).expect("letter collected")),
        Prop::Not(a) => Op::Not(c(a)),
        Prop::And(a, b) => Op::And(c(a), c(b)),
        Prop::Or(a, b) => Op::Or(c(a), c(b)),
        Prop::Implies(a, b) => Op::Implies(c(a), c(b)),
    }
}

fn eval(op: &Op, cols: &[u64]) -> u64 {
    match op {
        Op::Const(b) => if *b { !0 } else { 0 },
        Op::Var(i) => cols[*i],
        Op::Not(a) => !eval(a, cols),
        Op::And(a, b) => eval(a, cols) & eval(b, cols),
        Op::Or(a, b) => eval(a, cols) | eval(b, cols),
        Op::Implies(a, b) => !eval(a, cols) | eval(b, cols),
    }
}

/// Truth-table check, 64 rows at a time.
pub fn is_classical_tautology(p: &Prop) -> Result<bool> {
    let names = p.letters();
    if names.len() > MAX_LETTERS {
        return Err(Error::TooManyLetters(names.len()));
    }
    let op = compile(p, &names);
    let n = names.len();
    let rows = if n <= 6 { (1u64 << n) as u32 } else { 64 };
    let live = if rows == 64 { !0 } else { (1u64 << rows) - 1 };
    let blocks = 1u64 << n.saturating_sub(6);
    let mut cols = vec![0u64; n];
    for b in 0..blocks {
        for (i, c) in cols.iter_mut().enumerate() {
            *c = if i < 6 { LOW[i] } else if b >> (i - 6) & 1 == 1 { !0 } else { 0 };
        }
        if eval(&op, &cols) & live != live {
            return Ok(false);
        }
    }
    Ok(true)
}
