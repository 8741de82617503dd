//! Concrete syntax for FPC. Types: `X | t + u | t * u | t -> u | mu X. t`
//! with * binding tighter than +, + tighter than ->, -> right-associative,
//! and mu extending as far right as possible. Terms follow the pPCF style:
//! application is juxtaposition of atoms, annotations sit in brackets
//! (`inl[t, u](M)`, `intro[mu X. t](M)`), and case is
//! `case M of inl x. N | inr y. P`. Comments run from `#` to end of line.

use super::{FTerm, FType};
use crate::syntax::ParseError;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
enum FTok {
    Ident(String),
    KwInl,
    KwInr,
    KwCase,
    KwOf,
    KwFst,
    KwSnd,
    KwIntro,
    KwElim,
    KwMu,
    Backslash,
    Dot,
    Colon,
    Comma,
    Plus,
    Star,
    Pipe,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl fmt::Display for FTok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FTok::Ident(s) => write!(f, "`{s}`"),
            FTok::KwInl => write!(f, "`inl`"),
            FTok::KwInr => write!(f, "`inr`"),
            FTok::KwCase => write!(f, "`case`"),
            FTok::KwOf => write!(f, "`of`"),
            FTok::KwFst => write!(f, "`fst`"),
            FTok::KwSnd => write!(f, "`snd`"),
            FTok::KwIntro => write!(f, "`intro`"),
            FTok::KwElim => write!(f, "`elim`"),
            FTok::KwMu => write!(f, "`mu`"),
            FTok::Backslash => write!(f, "`\\`"),
            FTok::Dot => write!(f, "`.`"),
            FTok::Colon => write!(f, "`:`"),
            FTok::Comma => write!(f, "`,`"),
            FTok::Plus => write!(f, "`+`"),
            FTok::Star => write!(f, "`*`"),
            FTok::Pipe => write!(f, "`|`"),
            FTok::Arrow => write!(f, "`->`"),
            FTok::LParen => write!(f, "`(`"),
            FTok::RParen => write!(f, "`)`"),
            FTok::LBracket => write!(f, "`[`"),
            FTok::RBracket => write!(f, "`]`"),
            FTok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: FTok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            out.push(Spanned { tok: $tok, line, col });
            col += $len;
        }};
    }
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let start_col = col;
                let mut word = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '\'' {
                        word.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let tok = match word.as_str() {
                    "inl" => FTok::KwInl,
                    "inr" => FTok::KwInr,
                    "case" => FTok::KwCase,
                    "of" => FTok::KwOf,
                    "fst" => FTok::KwFst,
                    "snd" => FTok::KwSnd,
                    "intro" => FTok::KwIntro,
                    "elim" => FTok::KwElim,
                    "mu" => FTok::KwMu,
                    _ => FTok::Ident(word),
                };
                out.push(Spanned { tok, line, col: start_col });
            }
            '\\' => {
                chars.next();
                push!(FTok::Backslash, 1);
            }
            '.' => {
                chars.next();
                push!(FTok::Dot, 1);
            }
            ':' => {
                chars.next();
                push!(FTok::Colon, 1);
            }
            ',' => {
                chars.next();
                push!(FTok::Comma, 1);
            }
            '+' => {
                chars.next();
                push!(FTok::Plus, 1);
            }
            '*' => {
                chars.next();
                push!(FTok::Star, 1);
            }
            '|' => {
                chars.next();
                push!(FTok::Pipe, 1);
            }
            '(' => {
                chars.next();
                push!(FTok::LParen, 1);
            }
            ')' => {
                chars.next();
                push!(FTok::RParen, 1);
            }
            '[' => {
                chars.next();
                push!(FTok::LBracket, 1);
            }
            ']' => {
                chars.next();
                push!(FTok::RBracket, 1);
            }
            '-' => {
                chars.next();
                if chars.peek() == Some(&'>') {
                    chars.next();
                    push!(FTok::Arrow, 2);
                } else {
                    return Err(ParseError {
                        line,
                        col,
                        expected: vec!["`->`".to_string()],
                        found: "`-`".to_string(),
                    });
                }
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    expected: vec!["a token".to_string()],
                    found: format!("`{other}`"),
                })
            }
        }
    }
    out.push(Spanned { tok: FTok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let here = self.peek();
        ParseError {
            line: here.line,
            col: here.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: here.tok.to_string(),
        }
    }

    fn expect(&mut self, tok: FTok, what: &str) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.error(&[what]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match &self.peek().tok {
            FTok::Ident(name) => {
                let name = name.clone();
                self.next();
                Ok(name)
            }
            _ => Err(self.error(&["an identifier"])),
        }
    }

    fn ty(&mut self) -> Result<FType, ParseError> {
        if self.peek().tok == FTok::KwMu {
            self.next();
            let binder = self.ident()?;
            self.expect(FTok::Dot, "`.`")?;
            let body = self.ty()?;
            return Ok(FType::mu(&binder, body));
        }
        let lhs = self.sum_ty()?;
        if self.peek().tok == FTok::Arrow {
            self.next();
            let rhs = self.ty()?;
            Ok(FType::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn sum_ty(&mut self) -> Result<FType, ParseError> {
        let mut lhs = self.prod_ty()?;
        while self.peek().tok == FTok::Plus {
            self.next();
            let rhs = self.prod_ty()?;
            lhs = FType::sum(lhs, rhs);
        }
        Ok(lhs)
    }

    fn prod_ty(&mut self) -> Result<FType, ParseError> {
        let mut lhs = self.atom_ty()?;
        while self.peek().tok == FTok::Star {
            self.next();
            let rhs = self.atom_ty()?;
            lhs = FType::prod(lhs, rhs);
        }
        Ok(lhs)
    }

    fn atom_ty(&mut self) -> Result<FType, ParseError> {
        match &self.peek().tok {
            FTok::Ident(_) => Ok(FType::TVar(self.ident()?)),
            FTok::LParen => {
                self.next();
                let t = self.ty()?;
                self.expect(FTok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.error(&["a type variable", "`(`", "`mu`"])),
        }
    }

    fn term(&mut self) -> Result<FTerm, ParseError> {
        match self.peek().tok {
            FTok::Backslash => {
                self.next();
                let binder = self.ident()?;
                self.expect(FTok::Colon, "`:`")?;
                let ann = self.ty()?;
                self.expect(FTok::Dot, "`.`")?;
                let body = self.term()?;
                Ok(FTerm::lam(&binder, ann, body))
            }
            FTok::KwCase => {
                self.next();
                let scrutinee = self.term()?;
                self.expect(FTok::KwOf, "`of`")?;
                self.expect(FTok::KwInl, "`inl`")?;
                let left_binder = self.ident()?;
                self.expect(FTok::Dot, "`.`")?;
                let left = self.term()?;
                self.expect(FTok::Pipe, "`|`")?;
                self.expect(FTok::KwInr, "`inr`")?;
                let right_binder = self.ident()?;
                self.expect(FTok::Dot, "`.`")?;
                let right = self.term()?;
                Ok(FTerm::case(scrutinee, &left_binder, left, &right_binder, right))
            }
            _ => self.application(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek().tok,
            FTok::Ident(_)
                | FTok::KwInl
                | FTok::KwInr
                | FTok::KwIntro
                | FTok::KwElim
                | FTok::KwFst
                | FTok::KwSnd
                | FTok::LParen
        )
    }

    fn application(&mut self) -> Result<FTerm, ParseError> {
        let mut lhs = self.atom()?;
        while self.starts_atom() {
            let rhs = self.atom()?;
            lhs = FTerm::app(lhs, rhs);
        }
        Ok(lhs)
    }

    /// Parses `[t, u]` after `inl`/`inr`.
    fn sum_annotations(&mut self) -> Result<(FType, FType), ParseError> {
        self.expect(FTok::LBracket, "`[`")?;
        let body_ty = self.ty()?;
        self.expect(FTok::Comma, "`,`")?;
        let other_ty = self.ty()?;
        self.expect(FTok::RBracket, "`]`")?;
        Ok((body_ty, other_ty))
    }

    fn parenthesized(&mut self) -> Result<FTerm, ParseError> {
        self.expect(FTok::LParen, "`(`")?;
        let m = self.term()?;
        self.expect(FTok::RParen, "`)`")?;
        Ok(m)
    }

    fn atom(&mut self) -> Result<FTerm, ParseError> {
        match &self.peek().tok {
            FTok::Ident(_) => Ok(FTerm::Var(self.ident()?)),
            FTok::KwInl => {
                self.next();
                let (body_ty, other_ty) = self.sum_annotations()?;
                let body = self.parenthesized()?;
                Ok(FTerm::inl(body_ty, other_ty, body))
            }
            FTok::KwInr => {
                self.next();
                let (body_ty, other_ty) = self.sum_annotations()?;
                let body = self.parenthesized()?;
                Ok(FTerm::inr(body_ty, other_ty, body))
            }
            FTok::KwIntro => {
                self.next();
                self.expect(FTok::LBracket, "`[`")?;
                let ann = self.ty()?;
                self.expect(FTok::RBracket, "`]`")?;
                let body = self.parenthesized()?;
                Ok(FTerm::intro(ann, body))
            }
            FTok::KwElim => {
                self.next();
                Ok(FTerm::elim(self.parenthesized()?))
            }
            FTok::KwFst => {
                self.next();
                Ok(FTerm::fst(self.parenthesized()?))
            }
            FTok::KwSnd => {
                self.next();
                Ok(FTerm::snd(self.parenthesized()?))
            }
            FTok::LParen => {
                self.next();
                let first = self.term()?;
                if self.peek().tok == FTok::Comma {
                    self.next();
                    let second = self.term()?;
                    self.expect(FTok::RParen, "`)`")?;
                    Ok(FTerm::pair(first, second))
                } else {
                    self.expect(FTok::RParen, "`)`")?;
                    Ok(first)
                }
            }
            _ => Err(self.error(&["a term"])),
        }
    }
}

pub fn parse_fpc(text: &str) -> Result<FTerm, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let term = p.term()?;
    if p.peek().tok != FTok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok(term)
}

pub fn parse_ftype(text: &str) -> Result<FType, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let ty = p.ty()?;
    if p.peek().tok != FTok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok(ty)
}
