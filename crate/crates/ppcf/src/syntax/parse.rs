//! Recursive-descent parser for the concrete pPCF grammar.
//!
//! ```text
//! type   ::= "nat" | type "->" type              (right-assoc)
//! term   ::= lam | choice
//! lam    ::= "\" ident ":" type "." term
//! choice ::= app [ "(+" rat ")" app ]            (non-assoc sugar for ⊕_κ)
//! app    ::= atom { atom }                       (left-assoc application)
//! atom   ::= nat-literal | ident | "coin" "(" rat ")" | "succ" "(" term ")"
//!          | "if" "(" term "," term "," ident "." term ")"
//!          | "let" ident "=" term "in" term
//!          | "fix" "(" term ")" | "(" term ")"
//! rat    ::= integer [ "/" integer ]
//! ```
//!
//! `#` starts a line comment. The choice sugar binds looser than
//! application so that `x (+1/2) (f)(succ(x))` reads as a choice between
//! `x` and the whole application, and `fix(...)` sits in atom position so
//! it can head an application chain.

use super::{desugar_choice, desugar_let, PTerm, PType};
use crate::prob::{Prob, Rat};
use num::BigInt;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at {line}:{col}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Nat(u64),
    Ident(String),
    KwNat,
    KwCoin,
    KwSucc,
    KwIf,
    KwLet,
    KwIn,
    KwFix,
    Backslash,
    Dot,
    Colon,
    Comma,
    Equals,
    Slash,
    Arrow,
    LParen,
    RParen,
    LParenPlus,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::KwNat => write!(f, "`nat`"),
            Tok::KwCoin => write!(f, "`coin`"),
            Tok::KwSucc => write!(f, "`succ`"),
            Tok::KwIf => write!(f, "`if`"),
            Tok::KwLet => write!(f, "`let`"),
            Tok::KwIn => write!(f, "`in`"),
            Tok::KwFix => write!(f, "`fix`"),
            Tok::Backslash => write!(f, "`\\`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Equals => write!(f, "`=`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LParenPlus => write!(f, "`(+`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
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
            '0'..='9' => {
                let start_col = col;
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let n = digits.parse::<u64>().map_err(|_| ParseError {
                    line,
                    col: start_col,
                    expected: vec!["a representable numeral".to_string()],
                    found: format!("`{digits}`"),
                })?;
                out.push(Spanned { tok: Tok::Nat(n), line, col: start_col });
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
                    "nat" => Tok::KwNat,
                    "coin" => Tok::KwCoin,
                    "succ" => Tok::KwSucc,
                    "if" => Tok::KwIf,
                    "let" => Tok::KwLet,
                    "in" => Tok::KwIn,
                    "fix" => Tok::KwFix,
                    _ => Tok::Ident(word),
                };
                out.push(Spanned { tok, line, col: start_col });
            }
            '\\' => {
                chars.next();
                push!(Tok::Backslash, 1);
            }
            '.' => {
                chars.next();
                push!(Tok::Dot, 1);
            }
            ':' => {
                chars.next();
                push!(Tok::Colon, 1);
            }
            ',' => {
                chars.next();
                push!(Tok::Comma, 1);
            }
            '=' => {
                chars.next();
                push!(Tok::Equals, 1);
            }
            '/' => {
                chars.next();
                push!(Tok::Slash, 1);
            }
            ')' => {
                chars.next();
                push!(Tok::RParen, 1);
            }
            '(' => {
                chars.next();
                if chars.peek() == Some(&'+') {
                    chars.next();
                    push!(Tok::LParenPlus, 2);
                } else {
                    push!(Tok::LParen, 1);
                }
            }
            '-' => {
                chars.next();
                if chars.peek() == Some(&'>') {
                    chars.next();
                    push!(Tok::Arrow, 2);
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
    out.push(Spanned { tok: Tok::Eof, line, col });
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

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.error(&[what]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Ident(name) => {
                let name = name.clone();
                self.next();
                Ok(name)
            }
            _ => Err(self.error(&["an identifier"])),
        }
    }

    fn rational(&mut self) -> Result<(Rat, usize, usize), ParseError> {
        let here = self.peek().clone();
        let numer = match here.tok {
            Tok::Nat(n) => {
                self.next();
                n
            }
            _ => return Err(self.error(&["a rational literal"])),
        };
        let mut denom = 1u64;
        if self.peek().tok == Tok::Slash {
            self.next();
            denom = match self.peek().tok {
                Tok::Nat(0) => return Err(self.error(&["a nonzero denominator"])),
                Tok::Nat(n) => {
                    self.next();
                    n
                }
                _ => return Err(self.error(&["a denominator"])),
            };
        }
        Ok((
            Rat::new(BigInt::from(numer), BigInt::from(denom)),
            here.line,
            here.col,
        ))
    }

    fn probability(&mut self) -> Result<Prob, ParseError> {
        let (r, line, col) = self.rational()?;
        Prob::new(r).map_err(|e| ParseError {
            line,
            col,
            expected: vec!["a probability in [0, 1]".to_string()],
            found: format!("`{e}`"),
        })
    }

    fn ptype(&mut self) -> Result<PType, ParseError> {
        let lhs = match &self.peek().tok {
            Tok::KwNat => {
                self.next();
                PType::Nat
            }
            Tok::LParen => {
                self.next();
                let t = self.ptype()?;
                self.expect(Tok::RParen, "`)`")?;
                t
            }
            _ => return Err(self.error(&["`nat`", "`(`"])),
        };
        if self.peek().tok == Tok::Arrow {
            self.next();
            let rhs = self.ptype()?;
            Ok(PType::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek().tok,
            Tok::Nat(_)
                | Tok::Ident(_)
                | Tok::KwCoin
                | Tok::KwSucc
                | Tok::KwIf
                | Tok::KwLet
                | Tok::KwFix
                | Tok::LParen
        )
    }

    fn term(&mut self) -> Result<PTerm, ParseError> {
        if self.peek().tok == Tok::Backslash {
            self.next();
            let binder = self.ident()?;
            self.expect(Tok::Colon, "`:`")?;
            let ann = self.ptype()?;
            self.expect(Tok::Dot, "`.`")?;
            let body = self.term()?;
            return Ok(PTerm::Lam { binder, ann, body: Box::new(body) });
        }
        let lhs = self.application()?;
        if self.peek().tok == Tok::LParenPlus {
            self.next();
            let kappa = self.probability()?;
            self.expect(Tok::RParen, "`)`")?;
            let rhs = self.application()?;
            return Ok(desugar_choice(lhs, kappa, rhs));
        }
        Ok(lhs)
    }

    fn application(&mut self) -> Result<PTerm, ParseError> {
        let mut acc = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            acc = PTerm::app(acc, arg);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<PTerm, ParseError> {
        match self.peek().tok.clone() {
            Tok::Nat(n) => {
                self.next();
                Ok(PTerm::Num(n))
            }
            Tok::Ident(name) => {
                self.next();
                Ok(PTerm::Var(name))
            }
            Tok::KwCoin => {
                self.next();
                self.expect(Tok::LParen, "`(`")?;
                let kappa = self.probability()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(PTerm::Coin(kappa))
            }
            Tok::KwSucc => {
                self.next();
                self.expect(Tok::LParen, "`(`")?;
                let inner = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(PTerm::succ(inner))
            }
            Tok::KwIf => {
                self.next();
                self.expect(Tok::LParen, "`(`")?;
                let scrutinee = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let zero = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let binder = self.ident()?;
                self.expect(Tok::Dot, "`.`")?;
                let succ = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(PTerm::If {
                    scrutinee: Box::new(scrutinee),
                    zero: Box::new(zero),
                    binder,
                    succ: Box::new(succ),
                })
            }
            Tok::KwLet => {
                self.next();
                let name = self.ident()?;
                self.expect(Tok::Equals, "`=`")?;
                let bound = self.term()?;
                self.expect(Tok::KwIn, "`in`")?;
                let body = self.term()?;
                Ok(desugar_let(&name, bound, body))
            }
            Tok::KwFix => {
                self.next();
                self.expect(Tok::LParen, "`(`")?;
                let inner = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(PTerm::fix(inner))
            }
            Tok::LParen => {
                self.next();
                let inner = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error(&["a term"])),
        }
    }
}

pub fn parse(text: &str) -> Result<PTerm, ParseError> {
    let mut parser = Parser { toks: lex(text)?, pos: 0 };
    let term = parser.term()?;
    if parser.peek().tok != Tok::Eof {
        return Err(parser.error(&["end of input"]));
    }
    Ok(term)
}
