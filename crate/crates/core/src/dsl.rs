//! Morphism expressions: `f ; g` is `g∘f`, `f ⊗ g` (or `f (x) g`) is the
//! tensor product, atoms are names, `id[S]` and `c[S,T]`.
//!
//! ```text
//! expr  := term (";" term)*
//! term  := atom (("⊗" | "(x)") atom)*
//! atom  := name | "id[" space "]" | "c[" space "," space "]" | "(" expr ")"
//! space := factor (("⊗" | "(x)") factor)*      factor := name | "K"
//! ```
//!
//! `(x)` is always the tensor operator, so a name called `x` cannot be
//! parenthesized on its own.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::scalar::FieldSpec;
use crate::space::SpaceSig;

#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

/// Expression tree. Composition and tensor lists are flat and hold at least
/// two items; composition lists are in diagrammatic order.
#[derive(Clone, Debug)]
pub enum Expr {
    Name(String, Pos),
    Id(Vec<String>, Pos),
    Swap(Vec<String>, Vec<String>, Pos),
    Compose(Vec<Expr>),
    Tensor(Vec<Expr>),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        use Expr::*;
        match (self, other) {
            (Name(a, _), Name(b, _)) => a == b,
            (Id(a, _), Id(b, _)) => a == b,
            (Swap(a, b, _), Swap(c, d, _)) => a == c && b == d,
            (Compose(a), Compose(b)) | (Tensor(a), Tensor(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Name(_, p) | Expr::Id(_, p) | Expr::Swap(_, _, p) => *p,
            Expr::Compose(v) | Expr::Tensor(v) => v[0].pos(),
        }
    }

    /// `fs[0] ; fs[1] ; …`, flattening nested compositions.
    pub fn compose(fs: Vec<Expr>) -> Expr {
        let mut out = Vec::new();
        for f in fs {
            match f {
                Expr::Compose(v) => out.extend(v),
                e => out.push(e),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Expr::Compose(out)
        }
    }

    pub fn tensor(fs: Vec<Expr>) -> Expr {
        let mut out = Vec::new();
        for f in fs {
            match f {
                Expr::Tensor(v) => out.extend(v),
                e => out.push(e),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Expr::Tensor(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Semi,
    Tensor,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("name {s:?}"),
        Tok::Semi => "\";\"".into(),
        Tok::Tensor => "tensor operator".into(),
        Tok::LParen => "\"(\"".into(),
        Tok::RParen => "\")\"".into(),
        Tok::LBracket => "\"[\"".into(),
        Tok::RBracket => "\"]\"".into(),
        Tok::Comma => "\",\"".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        let pos = Pos { line, col };
        let mut step = 1;
        match ch {
            '\n' => {
                line += 1;
                col = 0;
            }
            c if c.is_whitespace() => {}
            ';' => out.push((Tok::Semi, pos)),
            '⊗' => out.push((Tok::Tensor, pos)),
            '(' if chars[k..].starts_with(&['(', 'x', ')']) => {
                out.push((Tok::Tensor, pos));
                step = 3;
            }
            '(' => out.push((Tok::LParen, pos)),
            ')' => out.push((Tok::RParen, pos)),
            '[' => out.push((Tok::LBracket, pos)),
            ']' => out.push((Tok::RBracket, pos)),
            ',' => out.push((Tok::Comma, pos)),
            c if c.is_alphabetic() || c == '_' => {
                let start = k;
                while k + step < chars.len() {
                    let d = chars[k + step];
                    if d.is_alphanumeric() || d == '_' || d == '\'' {
                        step += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(chars[start..k + step].iter().collect()), pos));
            }
            c => {
                return Err(Error::SyntaxError {
                    line,
                    col,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        }
        k += step;
        col += step;
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    k: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.k].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.k].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.k].clone();
        if self.k + 1 < self.toks.len() {
            self.k += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(Error::SyntaxError {
            line: p.line,
            col: p.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                describe(&t),
                describe(self.peek())
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            terms.push(self.term()?);
        }
        Ok(Expr::compose(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut atoms = vec![self.atom()?];
        while *self.peek() == Tok::Tensor {
            self.bump();
            atoms.push(self.atom()?);
        }
        Ok(Expr::tensor(atoms))
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() != Tok::LBracket || (name != "id" && name != "c") {
                    return Ok(Expr::Name(name, pos));
                }
                self.bump();
                let s = self.space()?;
                let e = if name == "id" {
                    Expr::Id(s, pos)
                } else {
                    self.expect(Tok::Comma)?;
                    Expr::Swap(s, self.space()?, pos)
                };
                self.expect(Tok::RBracket)?;
                Ok(e)
            }
            t => self.error(format!("expected a morphism, found {}", describe(&t))),
        }
    }

    /// Factor names; `K` contributes nothing.
    fn space(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(n) => {
                    self.bump();
                    if n != "K" {
                        out.push(n)
                    }
                }
                t => return self.error(format!("expected a space name, found {}", describe(&t))),
            }
            if *self.peek() != Tok::Tensor {
                return Ok(out);
            }
            self.bump();
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(src)?, k: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    Ok(e)
}

fn print_space(s: &[String]) -> String {
    if s.is_empty() {
        "K".into()
    } else {
        s.join(" ⊗ ")
    }
}

fn print_atom(e: &Expr, classical: bool) -> String {
    match e {
        Expr::Name(n, _) => n.clone(),
        Expr::Id(s, _) => format!("id[{}]", print_space(s)),
        Expr::Swap(s, t, _) => format!("c[{}, {}]", print_space(s), print_space(t)),
        Expr::Compose(_) => format!("({})", print_with(e, classical)),
        Expr::Tensor(v) => v
            .iter()
            .map(|x| print_atom(x, classical))
            .collect::<Vec<_>>()
            .join(" ⊗ "),
    }
}

fn print_with(e: &Expr, classical: bool) -> String {
    match e {
        Expr::Compose(v) if classical => v
            .iter()
            .rev()
            .map(|x| print_atom(x, true))
            .collect::<Vec<_>>()
            .join(" ∘ "),
        Expr::Compose(v) => v
            .iter()
            .map(|x| print_atom(x, false))
            .collect::<Vec<_>>()
            .join(" ; "),
        _ => print_atom(e, classical),
    }
}

/// Diagrammatic order, reparseable.
pub fn print_expr(e: &Expr) -> String {
    print_with(e, false)
}

/// Classical `∘` order, for reading against displayed formulas.
pub fn print_classical(e: &Expr) -> String {
    print_with(e, true)
}

/// Names visible to expressions.
#[derive(Clone, Debug)]
pub struct Env {
    pub field: FieldSpec,
    pub spaces: BTreeMap<String, SpaceSig>,
    pub morphisms: BTreeMap<String, Morphism>,
}

impl Env {
    pub fn new(field: FieldSpec) -> Env {
        Env {
            field,
            spaces: BTreeMap::new(),
            morphisms: BTreeMap::new(),
        }
    }

    fn space(&self, names: &[String], pos: Pos) -> Result<SpaceSig> {
        let mut s = SpaceSig::unit();
        for n in names {
            let f = self.spaces.get(n).ok_or_else(|| Error::UnknownName {
                name: n.clone(),
                line: pos.line,
                col: pos.col,
            })?;
            s = s.tensor(f);
        }
        Ok(s)
    }

    /// Evaluates with signature checking at every composition.
    pub fn eval(&self, e: &Expr) -> Result<Morphism> {
        match e {
            Expr::Name(n, pos) => self.morphisms.get(n).cloned().ok_or_else(|| {
                Error::UnknownName {
                    name: n.clone(),
                    line: pos.line,
                    col: pos.col,
                }
            }),
            Expr::Id(s, pos) => Ok(Morphism::id(self.field, &self.space(s, *pos)?)),
            Expr::Swap(s, t, pos) => Ok(Morphism::swap(
                self.field,
                &self.space(s, *pos)?,
                &self.space(t, *pos)?,
            )),
            Expr::Tensor(v) => {
                let fs = v.iter().map(|x| self.eval(x)).collect::<Result<Vec<_>>>()?;
                Ok(Morphism::tensor_all(&fs))
            }
            Expr::Compose(v) => {
                let mut acc = self.eval(&v[0])?;
                for x in &v[1..] {
                    let g = self.eval(x)?;
                    if g.dom() != acc.cod() {
                        let p = x.pos();
                        return Err(Error::ArityMismatch {
                            line: p.line,
                            col: p.col,
                            left: acc.cod().clone(),
                            right: g.dom().clone(),
                        });
                    }
                    acc = g.try_compose(&acc)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn eval_str(&self, src: &str) -> Result<Morphism> {
        self.eval(&parse_expr(src)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_point_at_the_problem() {
        match parse_expr("mu ;\n  ; delta") {
            Err(Error::SyntaxError { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        match parse_expr("id[H") {
            Err(Error::SyntaxError { line, col, .. }) => assert_eq!((line, col), (1, 5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tensor_spellings_agree() {
        assert_eq!(
            parse_expr("a ⊗ b ; c").unwrap(),
            parse_expr("(a (x) b) ; c").unwrap()
        );
        assert_eq!(parse_expr("(a ; b) ; c").unwrap(), parse_expr("a ; (b ; c)").unwrap());
    }
}
