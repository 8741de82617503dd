//! Abstract syntax of pPCF, its type system, capture-avoiding substitution,
//! and the derived forms (pred, probabilistic choice, let).
//!
//! Terms keep their user-written names, but equality and hashing are
//! alpha-equivalence throughout: two terms differing only in bound names are
//! the same term to every map and test in the workbench.

mod parse;
mod print;
mod typecheck;

pub use parse::{parse, ParseError};
pub use print::{pretty, pretty_type};
pub use typecheck::{typecheck, TypeError};

use crate::prob::Prob;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PType {
    Nat,
    Arrow(Box<PType>, Box<PType>),
}

impl PType {
    pub fn arrow(dom: PType, cod: PType) -> PType {
        PType::Arrow(Box::new(dom), Box::new(cod))
    }
}

impl fmt::Display for PType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", pretty_type(self))
    }
}

#[derive(Debug, Clone)]
pub enum PTerm {
    Num(u64),
    Var(String),
    Succ(Box<PTerm>),
    If {
        scrutinee: Box<PTerm>,
        zero: Box<PTerm>,
        binder: String,
        succ: Box<PTerm>,
    },
    Lam {
        binder: String,
        ann: PType,
        body: Box<PTerm>,
    },
    App {
        fun: Box<PTerm>,
        arg: Box<PTerm>,
    },
    Coin(Prob),
    Fix(Box<PTerm>),
}

impl PTerm {
    pub fn var(name: &str) -> PTerm {
        PTerm::Var(name.to_string())
    }

    pub fn succ(m: PTerm) -> PTerm {
        PTerm::Succ(Box::new(m))
    }

    pub fn iff(scrutinee: PTerm, zero: PTerm, binder: &str, succ: PTerm) -> PTerm {
        PTerm::If {
            scrutinee: Box::new(scrutinee),
            zero: Box::new(zero),
            binder: binder.to_string(),
            succ: Box::new(succ),
        }
    }

    pub fn lam(binder: &str, ann: PType, body: PTerm) -> PTerm {
        PTerm::Lam { binder: binder.to_string(), ann, body: Box::new(body) }
    }

    pub fn app(fun: PTerm, arg: PTerm) -> PTerm {
        PTerm::App { fun: Box::new(fun), arg: Box::new(arg) }
    }

    pub fn fix(m: PTerm) -> PTerm {
        PTerm::Fix(Box::new(m))
    }

    /// Weak-normal: no weak reduction rule applies (numerals and abstractions).
    pub fn is_weak_normal(&self) -> bool {
        matches!(self, PTerm::Num(_) | PTerm::Lam { .. })
    }

    pub fn has_fix(&self) -> bool {
        match self {
            PTerm::Num(_) | PTerm::Var(_) | PTerm::Coin(_) => false,
            PTerm::Fix(_) => true,
            PTerm::Succ(inner) => inner.has_fix(),
            PTerm::Lam { body, .. } => body.has_fix(),
            PTerm::App { fun, arg } => fun.has_fix() || arg.has_fix(),
            PTerm::If { scrutinee, zero, succ, .. } => {
                scrutinee.has_fix() || zero.has_fix() || succ.has_fix()
            }
        }
    }
}

fn alpha_eq<'a>(a: &'a PTerm, b: &'a PTerm, sa: &mut Vec<&'a str>, sb: &mut Vec<&'a str>) -> bool {
    use PTerm::*;
    match (a, b) {
        (Num(m), Num(n)) => m == n,
        (Coin(p), Coin(q)) => p == q,
        (Var(x), Var(y)) => {
            let ia = sa.iter().rposition(|v| *v == x.as_str());
            let ib = sb.iter().rposition(|v| *v == y.as_str());
            match (ia, ib) {
                (Some(i), Some(j)) => sa.len() - i == sb.len() - j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Succ(m), Succ(n)) => alpha_eq(m, n, sa, sb),
        (Fix(m), Fix(n)) => alpha_eq(m, n, sa, sb),
        (App { fun: f1, arg: a1 }, App { fun: f2, arg: a2 }) => {
            alpha_eq(f1, f2, sa, sb) && alpha_eq(a1, a2, sa, sb)
        }
        (
            Lam { binder: b1, ann: t1, body: m1 },
            Lam { binder: b2, ann: t2, body: m2 },
        ) => {
            if t1 != t2 {
                return false;
            }
            sa.push(b1);
            sb.push(b2);
            let r = alpha_eq(m1, m2, sa, sb);
            sa.pop();
            sb.pop();
            r
        }
        (
            If { scrutinee: s1, zero: z1, binder: b1, succ: q1 },
            If { scrutinee: s2, zero: z2, binder: b2, succ: q2 },
        ) => {
            if !alpha_eq(s1, s2, sa, sb) || !alpha_eq(z1, z2, sa, sb) {
                return false;
            }
            sa.push(b1);
            sb.push(b2);
            let r = alpha_eq(q1, q2, sa, sb);
            sa.pop();
            sb.pop();
            r
        }
        _ => false,
    }
}

impl PartialEq for PTerm {
    fn eq(&self, other: &PTerm) -> bool {
        alpha_eq(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

impl Eq for PTerm {}

fn alpha_hash<'a, H: Hasher>(m: &'a PTerm, stack: &mut Vec<&'a str>, state: &mut H) {
    use PTerm::*;
    match m {
        Num(n) => {
            state.write_u8(0);
            n.hash(state);
        }
        Var(x) => match stack.iter().rposition(|v| *v == x.as_str()) {
            Some(i) => {
                state.write_u8(1);
                (stack.len() - i).hash(state);
            }
            None => {
                state.write_u8(2);
                x.hash(state);
            }
        },
        Succ(inner) => {
            state.write_u8(3);
            alpha_hash(inner, stack, state);
        }
        If { scrutinee, zero, binder, succ } => {
            state.write_u8(4);
            alpha_hash(scrutinee, stack, state);
            alpha_hash(zero, stack, state);
            stack.push(binder);
            alpha_hash(succ, stack, state);
            stack.pop();
        }
        Lam { binder, ann, body } => {
            state.write_u8(5);
            ann.hash(state);
            stack.push(binder);
            alpha_hash(body, stack, state);
            stack.pop();
        }
        App { fun, arg } => {
            state.write_u8(6);
            alpha_hash(fun, stack, state);
            alpha_hash(arg, stack, state);
        }
        Coin(p) => {
            state.write_u8(7);
            p.hash(state);
        }
        Fix(inner) => {
            state.write_u8(8);
            alpha_hash(inner, stack, state);
        }
    }
}

impl Hash for PTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        alpha_hash(self, &mut Vec::new(), state);
    }
}

impl fmt::Display for PTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", pretty(self))
    }
}

pub fn free_vars(m: &PTerm) -> BTreeSet<String> {
    fn go(m: &PTerm, bound: &mut Vec<String>, acc: &mut BTreeSet<String>) {
        match m {
            PTerm::Num(_) | PTerm::Coin(_) => {}
            PTerm::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    acc.insert(x.clone());
                }
            }
            PTerm::Succ(inner) | PTerm::Fix(inner) => go(inner, bound, acc),
            PTerm::App { fun, arg } => {
                go(fun, bound, acc);
                go(arg, bound, acc);
            }
            PTerm::Lam { binder, body, .. } => {
                bound.push(binder.clone());
                go(body, bound, acc);
                bound.pop();
            }
            PTerm::If { scrutinee, zero, binder, succ } => {
                go(scrutinee, bound, acc);
                go(zero, bound, acc);
                bound.push(binder.clone());
                go(succ, bound, acc);
                bound.pop();
            }
        }
    }
    let mut acc = BTreeSet::new();
    go(m, &mut Vec::new(), &mut acc);
    acc
}

pub(crate) fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// Keeps `base` when it is already safe, renaming only on collision.
fn pick_fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    if avoid.contains(base) {
        fresh_name(base, avoid)
    } else {
        base.to_string()
    }
}

/// Capture-avoiding substitution m[x ↦ n].
pub fn subst(m: &PTerm, x: &str, n: &PTerm) -> PTerm {
    match m {
        PTerm::Num(_) | PTerm::Coin(_) => m.clone(),
        PTerm::Var(y) => {
            if y == x {
                n.clone()
            } else {
                m.clone()
            }
        }
        PTerm::Succ(inner) => PTerm::succ(subst(inner, x, n)),
        PTerm::Fix(inner) => PTerm::fix(subst(inner, x, n)),
        PTerm::App { fun, arg } => PTerm::app(subst(fun, x, n), subst(arg, x, n)),
        PTerm::Lam { binder, ann, body } => {
            if binder == x {
                m.clone()
            } else {
                let (binder, body) = avoid_capture(binder, body, x, n);
                PTerm::Lam { binder, ann: ann.clone(), body: Box::new(subst(&body, x, n)) }
            }
        }
        PTerm::If { scrutinee, zero, binder, succ } => {
            let scrutinee = subst(scrutinee, x, n);
            let zero = subst(zero, x, n);
            if binder == x {
                PTerm::If {
                    scrutinee: Box::new(scrutinee),
                    zero: Box::new(zero),
                    binder: binder.clone(),
                    succ: succ.clone(),
                }
            } else {
                let (binder, succ) = avoid_capture(binder, succ, x, n);
                PTerm::If {
                    scrutinee: Box::new(scrutinee),
                    zero: Box::new(zero),
                    binder,
                    succ: Box::new(subst(&succ, x, n)),
                }
            }
        }
    }
}

/// Renames `binder` away from the free variables of `n` when substituting
/// into `body` could capture; returns the (possibly renamed) binder and body.
fn avoid_capture(binder: &str, body: &PTerm, x: &str, n: &PTerm) -> (String, PTerm) {
    let fv_n = free_vars(n);
    if fv_n.contains(binder) && free_vars(body).contains(x) {
        let mut avoid = fv_n;
        avoid.extend(free_vars(body));
        avoid.insert(x.to_string());
        let renamed = fresh_name(binder, &avoid);
        let body = subst(body, binder, &PTerm::var(&renamed));
        (renamed, body)
    } else {
        (binder.to_string(), body.clone())
    }
}

/// The predecessor combinator λx^nat. if(x, 0, z·z).
pub fn desugar_pred() -> PTerm {
    PTerm::lam(
        "x",
        PType::Nat,
        PTerm::iff(PTerm::var("x"), PTerm::Num(0), "z", PTerm::var("z")),
    )
}

/// M ⊕_κ N ≝ if(coin(κ), M, N) with an unused fresh dismissal binder.
pub fn desugar_choice(m: PTerm, kappa: Prob, n: PTerm) -> PTerm {
    let binder = pick_fresh("z", &free_vars(&n));
    PTerm::If {
        scrutinee: Box::new(PTerm::Coin(kappa)),
        zero: Box::new(m),
        binder,
        succ: Box::new(n),
    }
}

/// let x = M in N ≝ if(M, N[x↦0], z·N[x↦succ(z)]).
pub fn desugar_let(x: &str, m: PTerm, n: PTerm) -> PTerm {
    let binder = pick_fresh("z", &free_vars(&n));
    let zero = subst(&n, x, &PTerm::Num(0));
    let succ = subst(&n, x, &PTerm::succ(PTerm::var(&binder)));
    PTerm::If { scrutinee: Box::new(m), zero: Box::new(zero), binder, succ: Box::new(succ) }
}

#[derive(Debug, Clone, Default)]
pub struct TypingCtx {
    binds: Vec<(String, PType)>,
}

impl TypingCtx {
    pub fn empty() -> TypingCtx {
        TypingCtx::default()
    }

    pub fn extend(&self, name: &str, ty: PType) -> TypingCtx {
        let mut binds = self.binds.clone();
        binds.push((name.to_string(), ty));
        TypingCtx { binds }
    }

    /// Innermost binding wins, so shadowed names resolve correctly.
    pub fn lookup(&self, name: &str) -> Option<&PType> {
        self.binds.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn bindings(&self) -> &[(String, PType)] {
        &self.binds
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::hash_map::DefaultHasher;

    fn hash_of(t: &PTerm) -> u64 {
        let mut h = DefaultHasher::new();
        t.hash(&mut h);
        h.finish()
    }

    #[test]
    fn alpha_equivalence_ignores_binder_names() {
        let a = PTerm::lam("x", PType::Nat, PTerm::var("x"));
        let b = PTerm::lam("y", PType::Nat, PTerm::var("y"));
        assert_eq!(a, b);
        assert_eq!(hash_of(&a), hash_of(&b));
        let free_a = PTerm::lam("x", PType::Nat, PTerm::var("w"));
        let free_b = PTerm::lam("y", PType::Nat, PTerm::var("v"));
        assert_ne!(free_a, free_b);
    }

    #[test]
    fn alpha_equivalence_tracks_shadowing() {
        let a = PTerm::lam("x", PType::Nat, PTerm::lam("x", PType::Nat, PTerm::var("x")));
        let b = PTerm::lam("x", PType::Nat, PTerm::lam("y", PType::Nat, PTerm::var("y")));
        let c = PTerm::lam("x", PType::Nat, PTerm::lam("y", PType::Nat, PTerm::var("x")));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn subst_examples() {
        assert_eq!(subst(&PTerm::var("x"), "x", &PTerm::Num(3)), PTerm::Num(3));
        let shadowed = PTerm::lam("x", PType::Nat, PTerm::var("x"));
        assert_eq!(subst(&shadowed, "x", &PTerm::Num(3)), shadowed);
        let capture = PTerm::lam("y", PType::Nat, PTerm::var("x"));
        let result = subst(&capture, "x", &PTerm::var("y"));
        assert_eq!(result, PTerm::lam("w", PType::Nat, PTerm::var("y")));
        assert_ne!(result, PTerm::lam("w", PType::Nat, PTerm::var("w")));
    }

    #[test]
    fn subst_free_variable_bound() {
        let m = PTerm::app(PTerm::var("x"), PTerm::lam("y", PType::Nat, PTerm::var("x")));
        let n = PTerm::succ(PTerm::var("w"));
        let out = subst(&m, "x", &n);
        let fv = free_vars(&out);
        assert!(fv.contains("w"));
        assert!(!fv.contains("x"));
    }

    #[test]
    fn desugar_examples() {
        let choice = desugar_choice(PTerm::Num(0), Prob::parse("1/2").unwrap(), PTerm::Num(1));
        assert_eq!(
            choice,
            PTerm::iff(
                PTerm::Coin(Prob::parse("1/2").unwrap()),
                PTerm::Num(0),
                "z",
                PTerm::Num(1)
            )
        );
        let let_term = desugar_let("x", PTerm::Num(0), PTerm::succ(PTerm::var("x")));
        assert_eq!(
            let_term,
            PTerm::iff(
                PTerm::Num(0),
                PTerm::succ(PTerm::Num(0)),
                "z",
                PTerm::succ(PTerm::succ(PTerm::var("z")))
            )
        );
        assert_eq!(
            typecheck(&TypingCtx::empty(), &PTerm::app(desugar_pred(), PTerm::Num(0))).unwrap(),
            PType::Nat
        );
    }

    #[test]
    fn choice_binder_avoids_free_z() {
        let n = PTerm::succ(PTerm::var("z"));
        let choice = desugar_choice(PTerm::Num(0), Prob::parse("1/3").unwrap(), n.clone());
        if let PTerm::If { binder, succ, .. } = &choice {
            assert_ne!(binder, "z");
            assert_eq!(succ.as_ref(), &n);
        } else {
            panic!("choice must desugar to if");
        }
    }
}
