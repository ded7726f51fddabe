//! Tokenizer for the ASCII surface syntax.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Nat(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dot,
    Colon,
    Define,
    Eq,
    Plus,
    Star,
    Hash,
    Bang,
    Tilde,
    Amp,
    Or,
    Arrow,
    Iff,
    // Process connectives.
    PNot,
    PAnd,
    POr,
    PArrow,
    PIff,
    Seq,
    WSeq,
    Lead,
    // Resource connectives.
    RNot,
    RAnd,
    ROr,
    RArrow,
    RWith,
    RPlus,
    DoOp,
    DoneOp,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.text()),
        }
    }

    pub fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Define => ":=",
            Tok::Eq => "=",
            Tok::Plus => "+",
            Tok::Star => "*",
            Tok::Hash => "#",
            Tok::Bang => "!",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Or => "\\/",
            Tok::Arrow => "->",
            Tok::Iff => "<->",
            Tok::PNot => ".~",
            Tok::PAnd => ".&",
            Tok::POr => ".\\/",
            Tok::PArrow => ".->",
            Tok::PIff => ".<->",
            Tok::Seq => "|>",
            Tok::WSeq => "|>=",
            Tok::Lead => "~>",
            Tok::RNot => ":~",
            Tok::RAnd => ":&",
            Tok::ROr => ":\\/",
            Tok::RArrow => ":->",
            Tok::RWith => ":&&",
            Tok::RPlus => ":||",
            Tok::DoOp => ">>",
            Tok::DoneOp => "<<",
            Tok::Ident(_) | Tok::Nat(_) | Tok::Eof => "",
        }
    }

    /// For a compound `.`/`:` token, the token left once the prefix is split off.
    pub fn split_prefix(&self) -> Option<(Tok, Tok)> {
        let pair = match self {
            Tok::PNot => (Tok::Dot, Tok::Tilde),
            Tok::PAnd => (Tok::Dot, Tok::Amp),
            Tok::POr => (Tok::Dot, Tok::Or),
            Tok::PArrow => (Tok::Dot, Tok::Arrow),
            Tok::PIff => (Tok::Dot, Tok::Iff),
            _ => return None,
        };
        Some(pair)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const TABLE: &[(&str, Tok)] = &[
    (".<->", Tok::PIff),
    (".->", Tok::PArrow),
    (".\\/", Tok::POr),
    (".&", Tok::PAnd),
    (".~", Tok::PNot),
    (":&&", Tok::RWith),
    (":||", Tok::RPlus),
    (":->", Tok::RArrow),
    (":\\/", Tok::ROr),
    (":&", Tok::RAnd),
    (":~", Tok::RNot),
    (":=", Tok::Define),
    ("|>=", Tok::WSeq),
    ("|>", Tok::Seq),
    ("~>", Tok::Lead),
    ("<->", Tok::Iff),
    ("->", Tok::Arrow),
    ("\\/", Tok::Or),
    (">>", Tok::DoOp),
    ("<<", Tok::DoneOp),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("{", Tok::LBrace),
    ("}", Tok::RBrace),
    ("[", Tok::LBracket),
    ("]", Tok::RBracket),
    (",", Tok::Comma),
    (";", Tok::Semi),
    (".", Tok::Dot),
    (":", Tok::Colon),
    ("=", Tok::Eq),
    ("+", Tok::Plus),
    ("*", Tok::Star),
    ("#", Tok::Hash),
    ("!", Tok::Bang),
    ("~", Tok::Tilde),
    ("&", Tok::Amp),
];

pub fn lex(src: &str) -> Result<Vec<Spanned>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    'outer: while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if bytes[i..].starts_with(b"--") {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
            {
                i += 1;
            }
            out.push(Spanned { tok: Tok::Ident(src[start..i].to_string()), line, col });
            col += i - start;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i].parse::<u64>().map_err(|_| Error::Syntax {
                line,
                col,
                msg: "number too large".into(),
            })?;
            out.push(Spanned { tok: Tok::Nat(n), line, col });
            col += i - start;
            continue;
        }
        for (text, tok) in TABLE {
            if bytes[i..].starts_with(text.as_bytes()) {
                out.push(Spanned { tok: tok.clone(), line, col });
                i += text.len();
                col += text.len();
                continue 'outer;
            }
        }
        let ch = src[i..].chars().next().unwrap_or('?');
        return Err(Error::Syntax { line, col, msg: format!("unexpected character `{ch}`") });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn compound_operators() {
        assert_eq!(
            toks("a .-> b :-> c |>= d"),
            vec![
                Tok::Ident("a".into()),
                Tok::PArrow,
                Tok::Ident("b".into()),
                Tok::RArrow,
                Tok::Ident("c".into()),
                Tok::WSeq,
                Tok::Ident("d".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let t = lex("-- note\n  first").unwrap();
        assert_eq!(t[0].line, 2);
        assert_eq!(t[0].col, 3);
    }

    #[test]
    fn bad_char() {
        assert!(matches!(lex("first $"), Err(Error::Syntax { col: 7, .. })));
    }
}
