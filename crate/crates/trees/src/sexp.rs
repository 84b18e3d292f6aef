//! A small S-expression reader with line and column tracking, plus decoders
//! for trees, teeth and labels in their canonical text form.

use std::fmt;

use thiserror::Error;

use crate::{Label, Name, Tooth, Tree};

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A syntax error located in the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            pos,
            message: message.into(),
        }
    }
}

/// A parsed S-expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            Sexp::List(..) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Some(items),
            Sexp::Atom(..) => None,
        }
    }

    /// Returns the head atom and the remaining items of a list form.
    pub fn form(&self) -> Option<(&str, &[Sexp])> {
        let items = self.list()?;
        let (head, rest) = items.split_first()?;
        Some((head.atom()?, rest))
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.pos(), message)
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a, _) => f.write_str(a),
            Sexp::List(items, _) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.peek().copied() {
            None => Err(SyntaxError::new(start, "unexpected end of input")),
            Some(')') => Err(SyntaxError::new(start, "unexpected ')'")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.peek() {
                        None => return Err(SyntaxError::new(start, "unclosed '('")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, start))
            }
        }
    }
}

/// Reads every top-level S-expression in `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, SyntaxError> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
    };
    let mut out = Vec::new();
    loop {
        r.skip_ws();
        if r.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

/// Reads exactly one S-expression from `text`.
pub fn read_one(text: &str) -> Result<Sexp, SyntaxError> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.pop().expect("one item")),
        0 => Err(SyntaxError::new(Pos { line: 1, col: 1 }, "empty input")),
        _ => Err(all[1].error("trailing input after expression")),
    }
}

/// True when `s` is a valid identifier for binders and context entries.
pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    s != "_" && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '\'' | '-'))
}

pub fn ident(s: &Sexp) -> Result<Name, SyntaxError> {
    match s.atom() {
        Some(a) if is_ident(a) => Ok(a.into()),
        _ => Err(s.error(format!("expected identifier, found {s}"))),
    }
}

pub fn nat(s: &Sexp) -> Result<u64, SyntaxError> {
    s.atom()
        .and_then(|a| a.parse::<u64>().ok())
        .ok_or_else(|| s.error(format!("expected natural number, found {s}")))
}

fn expect_len(s: &Sexp, rest: &[Sexp], n: usize) -> Result<(), SyntaxError> {
    if rest.len() == n {
        Ok(())
    } else {
        Err(s.error(format!("expected {n} arguments in {s}")))
    }
}

/// Decodes a label written on its own: `Int`, `->`, `(ext x)`, `(? 3)`.
pub fn label(s: &Sexp) -> Result<Label, SyntaxError> {
    if let Some(a) = s.atom() {
        return match a {
            "Int" => Ok(Label::Int),
            "Bool" => Ok(Label::Bool),
            "->" => Ok(Label::Arrow),
            "List" => Ok(Label::List),
            "empty" => Ok(Label::EmptyCtx),
            "|-" => Ok(Label::Turnstile),
            _ => Err(s.error(format!("unknown label {a}"))),
        };
    }
    let (head, rest) = s.form().ok_or_else(|| s.error("malformed label"))?;
    expect_len(s, rest, 1)?;
    match head {
        "?" => Ok(Label::TyHole(nat(&rest[0])?)),
        "ext" => Ok(Label::CtxExtend(ident(&rest[0])?)),
        "meta" => Ok(Label::Meta(nat(&rest[0])? as u32)),
        _ => Err(s.error(format!("unknown label {s}"))),
    }
}

/// Splits a node form into its label and child expressions.
fn node_parts(s: &Sexp) -> Result<(Label, Vec<&Sexp>), SyntaxError> {
    if s.atom().is_some() {
        let l = label(s)?;
        if l.arity() != 0 {
            return Err(s.error(format!("label {l} needs children")));
        }
        return Ok((l, Vec::new()));
    }
    let (head, rest) = s.form().ok_or_else(|| s.error("malformed tree"))?;
    let (l, kids): (Label, &[Sexp]) = match head {
        "?" => {
            expect_len(s, rest, 1)?;
            (Label::TyHole(nat(&rest[0])?), &[])
        }
        "meta" => {
            expect_len(s, rest, 1)?;
            (Label::Meta(nat(&rest[0])? as u32), &[])
        }
        "ext" => {
            expect_len(s, rest, 3)?;
            (Label::CtxExtend(ident(&rest[0])?), &rest[1..])
        }
        "->" => (Label::Arrow, rest),
        "List" => (Label::List, rest),
        "|-" => (Label::Turnstile, rest),
        _ => return Err(s.error(format!("unknown tree form {head}"))),
    };
    if kids.len() != l.arity() {
        return Err(s.error(format!("label {l} expects {} children", l.arity())));
    }
    Ok((l, kids.iter().collect()))
}

/// Decodes a tree in canonical form.
pub fn tree(s: &Sexp) -> Result<Tree, SyntaxError> {
    let (l, kids) = node_parts(s)?;
    let children = kids.into_iter().map(tree).collect::<Result<Vec<_>, _>>()?;
    Ok(Tree::node(l, children))
}

/// Decodes a tooth: a node form with exactly one child written as `_`.
pub fn tooth(s: &Sexp) -> Result<Tooth, SyntaxError> {
    let (l, kids) = node_parts(s)?;
    let holes: Vec<usize> = kids
        .iter()
        .enumerate()
        .filter(|(_, k)| k.atom() == Some("_"))
        .map(|(i, _)| i)
        .collect();
    if holes.len() != 1 {
        return Err(s.error("a tooth needs exactly one '_' child"));
    }
    let others = kids
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != holes[0])
        .map(|(_, k)| tree(k))
        .collect::<Result<Vec<_>, _>>()?;
    Tooth::new(l, holes[0], others).map_err(|e| s.error(e.to_string()))
}
