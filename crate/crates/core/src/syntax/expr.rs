use std::fmt::Write;

use crate::ast::{Condition, Letter, Rewb, Var};
use crate::error::SourceError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Plus,
    Dot,
    Star,
    LBrack,
    RBrack,
    At,
    LParen,
    RParen,
    Bar,
    Amp,
    Tilde,
    Eq,
    Neq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Star => "`*`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::At => "`@`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<(Vec<(Tok, Pos)>, Pos), SourceError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            column += i - start;
            toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '.' => Tok::Dot,
            '*' => Tok::Star,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '@' => Tok::At,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '|' => Tok::Bar,
            '&' => Tok::Amp,
            '~' => Tok::Tilde,
            '=' => Tok::Eq,
            '!' if chars.get(i + 1) == Some(&'=') => {
                i += 1;
                column += 1;
                Tok::Neq
            }
            _ => return Err(SourceError::new(format!("unexpected character `{c}`"), line, column)),
        };
        toks.push((tok, pos));
        i += 1;
        column += 1;
    }
    Ok((toks, Pos { line, column }))
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn error(&self, what: &str) -> SourceError {
        let p = self.pos();
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".into(),
        };
        SourceError::new(format!("expected {what}, found {found}"), p.line, p.column)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), SourceError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.error(&t.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), SourceError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                let p = self.pos();
                self.at += 1;
                Ok((s, p))
            }
            _ => Err(self.error(what)),
        }
    }

    fn expr(&mut self) -> Result<Rewb, SourceError> {
        let mut e = self.seq()?;
        while self.eat(&Tok::Plus) {
            e = e.union(self.seq()?);
        }
        Ok(e)
    }

    fn seq(&mut self) -> Result<Rewb, SourceError> {
        let mut e = self.unit()?;
        while self.eat(&Tok::Dot) {
            e = e.concat(self.unit()?);
        }
        Ok(e)
    }

    fn unit(&mut self) -> Result<Rewb, SourceError> {
        let mut e = self.atom()?;
        while self.eat(&Tok::Star) {
            e = e.star();
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Rewb, SourceError> {
        if self.eat(&Tok::LParen) {
            let e = self.expr()?;
            self.expect(Tok::RParen)?;
            return Ok(e);
        }
        let (name, p) = self.ident("an expression")?;
        if name == "eps" {
            return match self.peek() {
                Some(Tok::LBrack) | Some(Tok::At) => {
                    Err(SourceError::new("`eps` is reserved and cannot be used as a letter", p.line, p.column))
                }
                _ => Ok(Rewb::Eps),
            };
        }
        let letter = Letter::new(name).expect("lexer produces identifiers");
        if self.eat(&Tok::LBrack) {
            let c = self.cond()?;
            self.expect(Tok::RBrack)?;
            Ok(Rewb::Test(letter, c))
        } else if self.eat(&Tok::At) {
            let (x, _) = self.ident("a variable")?;
            self.expect(Tok::LParen)?;
            let body = self.expr()?;
            self.expect(Tok::RParen)?;
            Ok(Rewb::Bind(letter, Var::new(x).expect("lexer produces identifiers"), Box::new(body)))
        } else {
            Ok(Rewb::Atom(letter))
        }
    }

    // '|' and '&' associate to the right.
    fn cond(&mut self) -> Result<Condition, SourceError> {
        let c = self.conj()?;
        if self.eat(&Tok::Bar) {
            Ok(c.or(self.cond()?))
        } else {
            Ok(c)
        }
    }

    fn conj(&mut self) -> Result<Condition, SourceError> {
        let c = self.neg()?;
        if self.eat(&Tok::Amp) {
            Ok(c.and(self.conj()?))
        } else {
            Ok(c)
        }
    }

    fn neg(&mut self) -> Result<Condition, SourceError> {
        if self.eat(&Tok::Tilde) {
            return Ok(self.neg()?.not());
        }
        if self.eat(&Tok::LParen) {
            let c = self.cond()?;
            self.expect(Tok::RParen)?;
            return Ok(c);
        }
        let (x, _) = self.ident("a condition")?;
        let x = Var::new(x).expect("lexer produces identifiers");
        if self.eat(&Tok::Eq) {
            Ok(Condition::Eq(x))
        } else if self.eat(&Tok::Neq) {
            Ok(Condition::Neq(x))
        } else {
            Err(self.error("`=` or `!=`"))
        }
    }
}

/// Parses the concrete expression syntax.
///
/// ```text
/// expr := seq ('+' seq)*          seq  := unit ('.' unit)*
/// unit := atom '*'*
/// atom := 'eps' | IDENT | IDENT '[' cond ']' | IDENT '@' IDENT '(' expr ')' | '(' expr ')'
/// cond := conj ('|' conj)*        conj := neg ('&' neg)*
/// neg  := '~' neg | IDENT '=' | IDENT '!=' | '(' cond ')'
/// ```
///
/// `+` and `.` nest to the left, `|` and `&` to the right.
pub fn parse_expr(text: &str) -> Result<Rewb, SourceError> {
    let (toks, end) = lex(text)?;
    let mut p = Parser { toks, at: 0, end };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(p.error("an operator or end of input"));
    }
    Ok(e)
}

/// Canonical text with the fewest parentheses that parse back to the same
/// tree.
pub fn print_expr(e: &Rewb) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

pub fn print_condition(c: &Condition) -> String {
    let mut out = String::new();
    write_cond(&mut out, c, 0);
    out
}

// precedence: 0 union, 1 concatenation, 2 postfix and atoms
fn write_expr(out: &mut String, e: &Rewb, ctx: u8) {
    match e {
        Rewb::Eps => out.push_str("eps"),
        Rewb::Atom(a) => out.push_str(a.as_str()),
        Rewb::Test(a, c) => {
            out.push_str(a.as_str());
            out.push('[');
            write_cond(out, c, 0);
            out.push(']');
        }
        Rewb::Bind(a, x, b) => {
            let _ = write!(out, "{a}@{x}(");
            write_expr(out, b, 0);
            out.push(')');
        }
        Rewb::Star(b) => {
            // a starred binder is written `(a@x(…))*` so the star visibly
            // applies to the whole binder
            parens(out, matches!(**b, Rewb::Bind(..)), |out| write_expr(out, b, 2));
            out.push('*');
        }
        Rewb::Union(l, r) => parens(out, ctx > 0, |out| {
            write_expr(out, l, 0);
            out.push('+');
            write_expr(out, r, 1);
        }),
        Rewb::Concat(l, r) => parens(out, ctx > 1, |out| {
            write_expr(out, l, 1);
            out.push('.');
            write_expr(out, r, 2);
        }),
    }
}

// precedence: 0 or, 1 and, 2 negation and atoms
fn write_cond(out: &mut String, c: &Condition, ctx: u8) {
    match c {
        Condition::Eq(x) => {
            let _ = write!(out, "{x}=");
        }
        Condition::Neq(x) => {
            let _ = write!(out, "{x}!=");
        }
        Condition::Not(c) => {
            out.push('~');
            write_cond(out, c, 2);
        }
        Condition::Or(l, r) => parens(out, ctx > 0, |out| {
            write_cond(out, l, 1);
            out.push('|');
            write_cond(out, r, 0);
        }),
        Condition::And(l, r) => parens(out, ctx > 1, |out| {
            write_cond(out, l, 2);
            out.push('&');
            write_cond(out, r, 1);
        }),
    }
}

fn parens(out: &mut String, wrap: bool, body: impl FnOnce(&mut String)) {
    if wrap {
        out.push('(');
    }
    body(out);
    if wrap {
        out.push(')');
    }
}
