//! Lexer and parser for session files.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(BigInt),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
    pub offset: usize,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const COMPOUND: [&str; 4] = ["homotopy-verify", "homotopy-table", "witness-p1", "total-residue"];

fn parse_error(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse { line: pos.line, col: pos.col, msg: msg.into() }
}

pub fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let (offset, c) = chars[i];
        let pos = Pos { line, col, offset };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
        } else if c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                { let ch = chars[i].1; advance(&mut i, &mut line, &mut col, ch); }
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                s.push(chars[i].1);
                { let ch = chars[i].1; advance(&mut i, &mut line, &mut col, ch); }
            }
            out.push(Token { tok: Tok::Num(s.parse().expect("digits")), pos });
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                s.push(chars[i].1);
                { let ch = chars[i].1; advance(&mut i, &mut line, &mut col, ch); }
            }
            for k in COMPOUND {
                let rest = &k[s.len().min(k.len())..];
                if k.starts_with(&s) && rest.starts_with('-') {
                    let tail: String = chars[i..].iter().take(rest.len()).map(|(_, c)| *c).collect();
                    let boundary = chars.get(i + rest.len()).is_none_or(|(_, c)| !(c.is_alphanumeric() || *c == '_'));
                    if tail == rest && boundary {
                        for _ in 0..rest.len() {
                            { let ch = chars[i].1; advance(&mut i, &mut line, &mut col, ch); }
                        }
                        s = k.to_string();
                        break;
                    }
                }
            }
            out.push(Token { tok: Tok::Ident(s), pos });
        } else if "()[],;:+-*/^=".contains(c) {
            out.push(Token { tok: Tok::Sym(c), pos });
            advance(&mut i, &mut line, &mut col, c);
        } else {
            return Err(parse_error(pos, format!("unexpected character `{c}`")));
        }
    }
    let end = Pos { line, col, offset: src.len() };
    out.push(Token { tok: Tok::Eof, pos: end });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Ident(String, Pos),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>, Pos),
    /// `name[...]`, as in `poles[...]`.
    Tagged(String, Vec<Expr>, Pos),
    List(Vec<Expr>, Pos),
    /// `[a:b:c]`
    Hom(Vec<Expr>, Pos),
    Tuple(Vec<Expr>, Pos),
    /// `P1(a) x P1(b) x ...`
    Product(Vec<Expr>, Pos),
}

impl Expr {
    pub fn pos(&self) -> Option<Pos> {
        match self {
            Expr::Ident(_, p) | Expr::Call(_, _, p) | Expr::Tagged(_, _, p) | Expr::List(_, p) | Expr::Hom(_, p) | Expr::Tuple(_, p) | Expr::Product(_, p) => Some(*p),
            Expr::Neg(e) => e.pos(),
            Expr::Bin(_, a, _) => a.pos(),
            Expr::Num(_) => None,
        }
    }
}

fn join(xs: &[Expr], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Ident(s, _) => write!(f, "{s}"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Bin(op, a, b) => write!(f, "({a}){op}({b})"),
            Expr::Call(n, args, _) => write!(f, "{n}({})", join(args, ", ")),
            Expr::Tagged(n, args, _) => write!(f, "{n}[{}]", join(args, ", ")),
            Expr::List(xs, _) => write!(f, "[{}]", join(xs, ", ")),
            Expr::Hom(xs, _) => write!(f, "[{}]", join(xs, ":")),
            Expr::Tuple(xs, _) => write!(f, "({})", join(xs, ", ")),
            Expr::Product(xs, _) => write!(f, "{}", join(xs, " x ")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Print(Expr),
    Normalize(Expr),
    Boundary(Expr),
    Support(Expr),
    IsCycle(Expr, Option<Expr>),
    Dsq(Expr),
    HomotopyVerify(Expr, Option<Expr>),
    HomotopyTable(Expr, Option<Expr>),
    WitnessP1(Option<Expr>, Expr),
    Residue(Expr, Option<Expr>, Option<Expr>),
    TotalResidue(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Let(String, Expr),
    Command(Command),
}

#[derive(Clone, Debug)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
    /// The statement's source text with whitespace collapsed.
    pub text: String,
}

struct Parser<'a> {
    toks: Vec<Token>,
    i: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek() == &Tok::Sym(c)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(parse_error(self.pos(), format!("expected `{c}`, found {}", self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => Err(parse_error(self.pos(), format!("expected a name, found {t}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while self.is_sym('+') || self.is_sym('-') {
            let Tok::Sym(op) = self.bump().tok else { unreachable!() };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.is_sym('*') || self.is_sym('/') {
            let Tok::Sym(op) = self.bump().tok else { unreachable!() };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.is_sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.is_sym('^') {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Bin('^', Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn args(&mut self, close: char) -> Result<Vec<Expr>> {
        let mut out = Vec::new();
        if self.is_sym(close) {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.is_sym(',') {
                self.bump();
            } else {
                self.expect_sym(close)?;
                return Ok(out);
            }
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Num(n))
            }
            Tok::Ident(name) => {
                self.bump();
                if self.is_sym('(') {
                    self.bump();
                    let args = self.args(')')?;
                    let call = Expr::Call(name.clone(), args, pos);
                    if name == "P1" && self.is_word("x") && self.peek_at(1) == &Tok::Ident("P1".into()) {
                        let mut factors = vec![call];
                        while self.is_word("x") && self.peek_at(1) == &Tok::Ident("P1".into()) {
                            self.bump();
                            let p = self.pos();
                            self.bump();
                            self.expect_sym('(')?;
                            factors.push(Expr::Call("P1".into(), self.args(')')?, p));
                        }
                        return Ok(Expr::Product(factors, pos));
                    }
                    Ok(call)
                } else if self.is_sym('[') {
                    self.bump();
                    Ok(Expr::Tagged(name, self.args(']')?, pos))
                } else {
                    Ok(Expr::Ident(name, pos))
                }
            }
            Tok::Sym('(') => {
                self.bump();
                let first = self.expr()?;
                if self.is_sym(',') {
                    self.bump();
                    let mut items = vec![first];
                    items.extend(self.args(')')?);
                    return Ok(Expr::Tuple(items, pos));
                }
                self.expect_sym(')')?;
                Ok(first)
            }
            Tok::Sym('[') => {
                self.bump();
                if self.is_sym(']') {
                    self.bump();
                    return Ok(Expr::List(vec![], pos));
                }
                let first = self.expr()?;
                if self.is_sym(':') {
                    let mut items = vec![first];
                    while self.is_sym(':') {
                        self.bump();
                        items.push(self.expr()?);
                    }
                    self.expect_sym(']')?;
                    return Ok(Expr::Hom(items, pos));
                }
                let mut items = vec![first];
                if self.is_sym(',') {
                    self.bump();
                    items.extend(self.args(']')?);
                } else {
                    self.expect_sym(']')?;
                }
                Ok(Expr::List(items, pos))
            }
            t => Err(parse_error(pos, format!("expected an expression, found {t}"))),
        }
    }

    fn optional(&mut self, word: &str) -> Result<Option<Expr>> {
        if self.is_word(word) {
            self.bump();
            Ok(Some(self.expr()?))
        } else {
            Ok(None)
        }
    }

    fn statement(&mut self) -> Result<Stmt> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Ident(w) if w == "let" => {
                self.bump();
                let name = self.ident()?;
                self.expect_sym('=')?;
                StmtKind::Let(name, self.expr()?)
            }
            Tok::Ident(w) if is_command(&w) && !matches!(self.peek_at(1), Tok::Sym(';') | Tok::Sym('=')) => {
                self.bump();
                StmtKind::Command(self.command(&w)?)
            }
            _ => StmtKind::Command(Command::Print(self.expr()?)),
        };
        if !self.is_sym(';') {
            return Err(parse_error(self.pos(), format!("expected `;` or an operator, found {}", self.peek())));
        }
        let end = self.pos().offset;
        self.bump();
        let text = self.src[pos.offset..end].split_whitespace().collect::<Vec<_>>().join(" ");
        Ok(Stmt { kind, pos, text })
    }

    fn command(&mut self, w: &str) -> Result<Command> {
        Ok(match w {
            "print" => Command::Print(self.expr()?),
            "normalize" => Command::Normalize(self.expr()?),
            "boundary" => Command::Boundary(self.expr()?),
            "support" => Command::Support(self.expr()?),
            "iscycle" => {
                let e = self.expr()?;
                Command::IsCycle(e, self.optional("rel")?)
            }
            "dsq" => Command::Dsq(self.expr()?),
            "homotopy-verify" => {
                let e = self.expr()?;
                Command::HomotopyVerify(e, self.optional("at")?)
            }
            "homotopy-table" => {
                let e = self.expr()?;
                Command::HomotopyTable(e, self.optional("at")?)
            }
            "witness-p1" => {
                let line = if self.is_sym('[') { None } else { Some(self.expr()?) };
                Command::WitnessP1(line, self.expr()?)
            }
            "residue" => {
                let e = self.expr()?;
                let along = self.optional("along")?;
                let then = if along.is_some() { self.optional("then")? } else { None };
                Command::Residue(e, along, then)
            }
            "total-residue" => Command::TotalResidue(self.expr()?),
            _ => unreachable!("checked by is_command"),
        })
    }
}

fn is_command(w: &str) -> bool {
    matches!(
        w,
        "print" | "normalize" | "boundary" | "support" | "iscycle" | "dsq" | "homotopy-verify" | "homotopy-table" | "witness-p1" | "residue" | "total-residue"
    )
}

pub fn parse_program(src: &str) -> Result<Vec<Stmt>> {
    let toks = lex(src)?;
    let mut p = Parser { toks, i: 0, src };
    let mut out = Vec::new();
    while p.peek() != &Tok::Eof {
        out.push(p.statement()?);
    }
    Ok(out)
}

/// Parses a single expression, as found in rendered output.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, i: 0, src };
    let e = p.expr()?;
    if p.peek() != &Tok::Eof {
        return Err(parse_error(p.pos(), format!("unexpected {} after expression", p.peek())));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compound_keywords_and_positions() {
        let toks = lex("homotopy-verify a;\n  total-residue b - c;").unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("homotopy-verify".into()));
        assert_eq!(toks[3].tok, Tok::Ident("total-residue".into()));
        assert_eq!((toks[3].pos.line, toks[3].pos.col), (2, 3));
        assert_eq!(toks[5].tok, Tok::Sym('-'));
    }

    #[test]
    fn precedence() {
        let e = parse_expr("-x^2*y + 1/2").unwrap();
        assert_eq!(e.to_string(), "((-((x)^(2)))*(y))+((1)/(2))");
        let w = parse_expr("TAU^-1*d(z)^d(w)").unwrap();
        assert_eq!(w.to_string(), "((TAU)^(-(1)))*((d(z))^(d(w)))");
    }

    #[test]
    fn statements() {
        let prog = parse_program("let A = P1(z); let a = chain(A, id, dlog(z/(z-1)), poles[z, z-1]); boundary a;").unwrap();
        assert_eq!(prog.len(), 3);
        assert!(matches!(&prog[2].kind, StmtKind::Command(Command::Boundary(_))));
        assert_eq!(prog[1].text, "let a = chain(A, id, dlog(z/(z-1)), poles[z, z-1])");
        let prod = parse_expr("P1(a) x P1(b)").unwrap();
        assert!(matches!(prod, Expr::Product(ref f, _) if f.len() == 2));
        assert!(matches!(parse_expr("[[1:t],[t:1]]").unwrap(), Expr::List(ref xs, _) if matches!(xs[0], Expr::Hom(..))));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_program("let a = (z + ;").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, col: 14, .. }), "{err}");
        let err = parse_program("boundary a\nprint b;").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }
}
