//! FPC: recursive types with intro/elim, sums, products, and functions.
//! No probabilistic constructs live here; the lab exists to exercise the
//! type-and-reduction layer that the recursive-type semantics sits on.
//!
//! As in the pPCF syntax, equality and hashing of both types and terms are
//! alpha-equivalence, so `mu X. X` and `mu Y. Y` are one type everywhere.

mod parse;
mod print;
mod reduce;
mod typecheck;

pub use parse::{parse_fpc, parse_ftype};
pub use print::{pretty_fterm, pretty_ftype};
pub use reduce::{is_value, normalize, step_fpc, Normalized};
pub use typecheck::typecheck_fpc;

use crate::syntax::fresh_name;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

#[derive(Debug, Clone)]
pub enum FType {
    TVar(String),
    Sum(Box<FType>, Box<FType>),
    Prod(Box<FType>, Box<FType>),
    Arrow(Box<FType>, Box<FType>),
    Mu(String, Box<FType>),
}

impl FType {
    pub fn tvar(name: &str) -> FType {
        FType::TVar(name.to_string())
    }

    pub fn sum(l: FType, r: FType) -> FType {
        FType::Sum(Box::new(l), Box::new(r))
    }

    pub fn prod(l: FType, r: FType) -> FType {
        FType::Prod(Box::new(l), Box::new(r))
    }

    pub fn arrow(dom: FType, cod: FType) -> FType {
        FType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn mu(binder: &str, body: FType) -> FType {
        FType::Mu(binder.to_string(), Box::new(body))
    }
}

fn alpha_eq_ty<'a>(
    a: &'a FType,
    b: &'a FType,
    sa: &mut Vec<&'a str>,
    sb: &mut Vec<&'a str>,
) -> bool {
    use FType::*;
    match (a, b) {
        (TVar(x), TVar(y)) => {
            let ia = sa.iter().rposition(|v| *v == x.as_str());
            let ib = sb.iter().rposition(|v| *v == y.as_str());
            match (ia, ib) {
                (Some(i), Some(j)) => sa.len() - i == sb.len() - j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Sum(l1, r1), Sum(l2, r2))
        | (Prod(l1, r1), Prod(l2, r2))
        | (Arrow(l1, r1), Arrow(l2, r2)) => {
            alpha_eq_ty(l1, l2, sa, sb) && alpha_eq_ty(r1, r2, sa, sb)
        }
        (Mu(x, t1), Mu(y, t2)) => {
            sa.push(x);
            sb.push(y);
            let r = alpha_eq_ty(t1, t2, sa, sb);
            sa.pop();
            sb.pop();
            r
        }
        _ => false,
    }
}

impl PartialEq for FType {
    fn eq(&self, other: &FType) -> bool {
        alpha_eq_ty(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

impl Eq for FType {}

fn alpha_hash_ty<'a, H: Hasher>(t: &'a FType, stack: &mut Vec<&'a str>, state: &mut H) {
    use FType::*;
    match t {
        TVar(x) => match stack.iter().rposition(|v| *v == x.as_str()) {
            Some(i) => {
                state.write_u8(0);
                (stack.len() - i).hash(state);
            }
            None => {
                state.write_u8(1);
                x.hash(state);
            }
        },
        Sum(l, r) => {
            state.write_u8(2);
            alpha_hash_ty(l, stack, state);
            alpha_hash_ty(r, stack, state);
        }
        Prod(l, r) => {
            state.write_u8(3);
            alpha_hash_ty(l, stack, state);
            alpha_hash_ty(r, stack, state);
        }
        Arrow(l, r) => {
            state.write_u8(4);
            alpha_hash_ty(l, stack, state);
            alpha_hash_ty(r, stack, state);
        }
        Mu(x, body) => {
            state.write_u8(5);
            stack.push(x);
            alpha_hash_ty(body, stack, state);
            stack.pop();
        }
    }
}

impl Hash for FType {
    fn hash<H: Hasher>(&self, state: &mut H) {
        alpha_hash_ty(self, &mut Vec::new(), state);
    }
}

impl fmt::Display for FType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", pretty_ftype(self))
    }
}

pub fn free_tvars(t: &FType) -> BTreeSet<String> {
    fn go(t: &FType, bound: &mut Vec<String>, acc: &mut BTreeSet<String>) {
        match t {
            FType::TVar(x) => {
                if !bound.iter().any(|b| b == x) {
                    acc.insert(x.clone());
                }
            }
            FType::Sum(l, r) | FType::Prod(l, r) | FType::Arrow(l, r) => {
                go(l, bound, acc);
                go(r, bound, acc);
            }
            FType::Mu(x, body) => {
                bound.push(x.clone());
                go(body, bound, acc);
                bound.pop();
            }
        }
    }
    let mut acc = BTreeSet::new();
    go(t, &mut Vec::new(), &mut acc);
    acc
}

/// Capture-avoiding type substitution t[X ↦ u].
pub fn type_subst(t: &FType, x: &str, u: &FType) -> FType {
    match t {
        FType::TVar(y) => {
            if y == x {
                u.clone()
            } else {
                t.clone()
            }
        }
        FType::Sum(l, r) => FType::sum(type_subst(l, x, u), type_subst(r, x, u)),
        FType::Prod(l, r) => FType::prod(type_subst(l, x, u), type_subst(r, x, u)),
        FType::Arrow(l, r) => FType::arrow(type_subst(l, x, u), type_subst(r, x, u)),
        FType::Mu(y, body) => {
            if y == x {
                t.clone()
            } else if free_tvars(u).contains(y) && free_tvars(body).contains(x) {
                let mut avoid = free_tvars(u);
                avoid.extend(free_tvars(body));
                avoid.insert(x.to_string());
                let renamed = fresh_name(y, &avoid);
                let body = type_subst(body, y, &FType::tvar(&renamed));
                FType::Mu(renamed, Box::new(type_subst(&body, x, u)))
            } else {
                FType::Mu(y.clone(), Box::new(type_subst(body, x, u)))
            }
        }
    }
}

/// Ordered list of distinct type variables in scope.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeCtx {
    vars: Vec<String>,
}

impl TypeCtx {
    pub fn empty() -> TypeCtx {
        TypeCtx::default()
    }

    pub fn of(names: &[&str]) -> TypeCtx {
        let mut ctx = TypeCtx::empty();
        for name in names {
            ctx = ctx.extend(name);
        }
        ctx
    }

    pub fn extend(&self, name: &str) -> TypeCtx {
        let mut vars = self.vars.clone();
        if !vars.iter().any(|v| v == name) {
            vars.push(name.to_string());
        }
        TypeCtx { vars }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v == name)
    }
}

/// Θ ⊢ t: every free type variable of t is declared.
pub fn wf_type(theta: &TypeCtx, t: &FType) -> bool {
    match t {
        FType::TVar(x) => theta.contains(x),
        FType::Sum(l, r) | FType::Prod(l, r) | FType::Arrow(l, r) => {
            wf_type(theta, l) && wf_type(theta, r)
        }
        FType::Mu(x, body) => wf_type(&theta.extend(x), body),
    }
}

/// Terms. In inl/inr the first annotation is always the type of the body
/// itself: inl[t, u](M) has type t + u while inr[t, u](M) has type u + t,
/// both requiring M : t.
#[derive(Debug, Clone)]
pub enum FTerm {
    Var(String),
    Inl {
        body_ty: FType,
        other_ty: FType,
        body: Box<FTerm>,
    },
    Inr {
        body_ty: FType,
        other_ty: FType,
        body: Box<FTerm>,
    },
    Case {
        scrutinee: Box<FTerm>,
        left_binder: String,
        left: Box<FTerm>,
        right_binder: String,
        right: Box<FTerm>,
    },
    Pair(Box<FTerm>, Box<FTerm>),
    Lam {
        binder: String,
        ann: FType,
        body: Box<FTerm>,
    },
    App {
        fun: Box<FTerm>,
        arg: Box<FTerm>,
    },
    Fst(Box<FTerm>),
    Snd(Box<FTerm>),
    /// Always carries its target recursive type.
    Intro {
        ann: FType,
        body: Box<FTerm>,
    },
    Elim(Box<FTerm>),
}

impl FTerm {
    pub fn var(name: &str) -> FTerm {
        FTerm::Var(name.to_string())
    }

    pub fn inl(body_ty: FType, other_ty: FType, body: FTerm) -> FTerm {
        FTerm::Inl { body_ty, other_ty, body: Box::new(body) }
    }

    pub fn inr(body_ty: FType, other_ty: FType, body: FTerm) -> FTerm {
        FTerm::Inr { body_ty, other_ty, body: Box::new(body) }
    }

    pub fn case(
        scrutinee: FTerm,
        left_binder: &str,
        left: FTerm,
        right_binder: &str,
        right: FTerm,
    ) -> FTerm {
        FTerm::Case {
            scrutinee: Box::new(scrutinee),
            left_binder: left_binder.to_string(),
            left: Box::new(left),
            right_binder: right_binder.to_string(),
            right: Box::new(right),
        }
    }

    pub fn pair(l: FTerm, r: FTerm) -> FTerm {
        FTerm::Pair(Box::new(l), Box::new(r))
    }

    pub fn lam(binder: &str, ann: FType, body: FTerm) -> FTerm {
        FTerm::Lam { binder: binder.to_string(), ann, body: Box::new(body) }
    }

    pub fn app(fun: FTerm, arg: FTerm) -> FTerm {
        FTerm::App { fun: Box::new(fun), arg: Box::new(arg) }
    }

    pub fn fst(m: FTerm) -> FTerm {
        FTerm::Fst(Box::new(m))
    }

    pub fn snd(m: FTerm) -> FTerm {
        FTerm::Snd(Box::new(m))
    }

    pub fn intro(ann: FType, body: FTerm) -> FTerm {
        FTerm::Intro { ann, body: Box::new(body) }
    }

    pub fn elim(m: FTerm) -> FTerm {
        FTerm::Elim(Box::new(m))
    }
}

fn alpha_eq_tm<'a>(
    a: &'a FTerm,
    b: &'a FTerm,
    sa: &mut Vec<&'a str>,
    sb: &mut Vec<&'a str>,
) -> bool {
    use FTerm::*;
    let under = |x: &'a str, y: &'a str, m: &'a FTerm, n: &'a FTerm,
                 sa: &mut Vec<&'a str>, sb: &mut Vec<&'a str>| {
        sa.push(x);
        sb.push(y);
        let r = alpha_eq_tm(m, n, sa, sb);
        sa.pop();
        sb.pop();
        r
    };
    match (a, b) {
        (Var(x), Var(y)) => {
            let ia = sa.iter().rposition(|v| *v == x.as_str());
            let ib = sb.iter().rposition(|v| *v == y.as_str());
            match (ia, ib) {
                (Some(i), Some(j)) => sa.len() - i == sb.len() - j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (
            Inl { body_ty: t1, other_ty: u1, body: m1 },
            Inl { body_ty: t2, other_ty: u2, body: m2 },
        )
        | (
            Inr { body_ty: t1, other_ty: u1, body: m1 },
            Inr { body_ty: t2, other_ty: u2, body: m2 },
        ) => t1 == t2 && u1 == u2 && alpha_eq_tm(m1, m2, sa, sb),
        (
            Case { scrutinee: s1, left_binder: x1, left: l1, right_binder: y1, right: r1 },
            Case { scrutinee: s2, left_binder: x2, left: l2, right_binder: y2, right: r2 },
        ) => {
            alpha_eq_tm(s1, s2, sa, sb)
                && under(x1, x2, l1, l2, sa, sb)
                && under(y1, y2, r1, r2, sa, sb)
        }
        (Pair(l1, r1), Pair(l2, r2)) => {
            alpha_eq_tm(l1, l2, sa, sb) && alpha_eq_tm(r1, r2, sa, sb)
        }
        (Lam { binder: x1, ann: t1, body: m1 }, Lam { binder: x2, ann: t2, body: m2 }) => {
            t1 == t2 && under(x1, x2, m1, m2, sa, sb)
        }
        (App { fun: f1, arg: a1 }, App { fun: f2, arg: a2 }) => {
            alpha_eq_tm(f1, f2, sa, sb) && alpha_eq_tm(a1, a2, sa, sb)
        }
        (Fst(m1), Fst(m2)) | (Snd(m1), Snd(m2)) | (Elim(m1), Elim(m2)) => {
            alpha_eq_tm(m1, m2, sa, sb)
        }
        (Intro { ann: t1, body: m1 }, Intro { ann: t2, body: m2 }) => {
            t1 == t2 && alpha_eq_tm(m1, m2, sa, sb)
        }
        _ => false,
    }
}

impl PartialEq for FTerm {
    fn eq(&self, other: &FTerm) -> bool {
        alpha_eq_tm(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

impl Eq for FTerm {}

impl fmt::Display for FTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", pretty_fterm(self))
    }
}

pub fn free_vars_fpc(m: &FTerm) -> BTreeSet<String> {
    fn go(m: &FTerm, bound: &mut Vec<String>, acc: &mut BTreeSet<String>) {
        match m {
            FTerm::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    acc.insert(x.clone());
                }
            }
            FTerm::Inl { body, .. }
            | FTerm::Inr { body, .. }
            | FTerm::Intro { body, .. } => go(body, bound, acc),
            FTerm::Fst(inner) | FTerm::Snd(inner) | FTerm::Elim(inner) => {
                go(inner, bound, acc)
            }
            FTerm::Pair(l, r) => {
                go(l, bound, acc);
                go(r, bound, acc);
            }
            FTerm::App { fun, arg } => {
                go(fun, bound, acc);
                go(arg, bound, acc);
            }
            FTerm::Lam { binder, body, .. } => {
                bound.push(binder.clone());
                go(body, bound, acc);
                bound.pop();
            }
            FTerm::Case { scrutinee, left_binder, left, right_binder, right } => {
                go(scrutinee, bound, acc);
                bound.push(left_binder.clone());
                go(left, bound, acc);
                bound.pop();
                bound.push(right_binder.clone());
                go(right, bound, acc);
                bound.pop();
            }
        }
    }
    let mut acc = BTreeSet::new();
    go(m, &mut Vec::new(), &mut acc);
    acc
}

fn avoid_capture_fpc(binder: &str, body: &FTerm, x: &str, n: &FTerm) -> (String, FTerm) {
    let fv_n = free_vars_fpc(n);
    if fv_n.contains(binder) && free_vars_fpc(body).contains(x) {
        let mut avoid = fv_n;
        avoid.extend(free_vars_fpc(body));
        avoid.insert(x.to_string());
        let renamed = fresh_name(binder, &avoid);
        let body = subst_fpc(body, binder, &FTerm::var(&renamed));
        (renamed, body)
    } else {
        (binder.to_string(), body.clone())
    }
}

/// Capture-avoiding substitution m[x ↦ n].
pub fn subst_fpc(m: &FTerm, x: &str, n: &FTerm) -> FTerm {
    match m {
        FTerm::Var(y) => {
            if y == x {
                n.clone()
            } else {
                m.clone()
            }
        }
        FTerm::Inl { body_ty, other_ty, body } => {
            FTerm::inl(body_ty.clone(), other_ty.clone(), subst_fpc(body, x, n))
        }
        FTerm::Inr { body_ty, other_ty, body } => {
            FTerm::inr(body_ty.clone(), other_ty.clone(), subst_fpc(body, x, n))
        }
        FTerm::Pair(l, r) => FTerm::pair(subst_fpc(l, x, n), subst_fpc(r, x, n)),
        FTerm::App { fun, arg } => FTerm::app(subst_fpc(fun, x, n), subst_fpc(arg, x, n)),
        FTerm::Fst(inner) => FTerm::fst(subst_fpc(inner, x, n)),
        FTerm::Snd(inner) => FTerm::snd(subst_fpc(inner, x, n)),
        FTerm::Elim(inner) => FTerm::elim(subst_fpc(inner, x, n)),
        FTerm::Intro { ann, body } => FTerm::intro(ann.clone(), subst_fpc(body, x, n)),
        FTerm::Lam { binder, ann, body } => {
            if binder == x {
                m.clone()
            } else {
                let (binder, body) = avoid_capture_fpc(binder, body, x, n);
                FTerm::Lam { binder, ann: ann.clone(), body: Box::new(subst_fpc(&body, x, n)) }
            }
        }
        FTerm::Case { scrutinee, left_binder, left, right_binder, right } => {
            let scrutinee = Box::new(subst_fpc(scrutinee, x, n));
            let (left_binder, left) = if left_binder == x {
                (left_binder.clone(), left.as_ref().clone())
            } else {
                let (b, body) = avoid_capture_fpc(left_binder, left, x, n);
                (b, subst_fpc(&body, x, n))
            };
            let (right_binder, right) = if right_binder == x {
                (right_binder.clone(), right.as_ref().clone())
            } else {
                let (b, body) = avoid_capture_fpc(right_binder, right, x, n);
                (b, subst_fpc(&body, x, n))
            };
            FTerm::Case {
                scrutinee,
                left_binder,
                left: Box::new(left),
                right_binder,
                right: Box::new(right),
            }
        }
    }
}

/// Γ: variable typings, innermost binding shadowing outer ones.
#[derive(Debug, Clone, Default)]
pub struct TermCtx {
    binds: Vec<(String, FType)>,
}

impl TermCtx {
    pub fn empty() -> TermCtx {
        TermCtx::default()
    }

    pub fn extend(&self, name: &str, ty: FType) -> TermCtx {
        let mut binds = self.binds.clone();
        binds.push((name.to_string(), ty));
        TermCtx { binds }
    }

    pub fn lookup(&self, name: &str) -> Option<&FType> {
        self.binds.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

/// The empty type 0 = mu X. X.
pub fn void_type() -> FType {
    FType::mu("X", FType::tvar("X"))
}

/// The one-point type is encoded as 0 -> 0; no primitive unit exists.
pub fn unit_type() -> FType {
    FType::arrow(void_type(), void_type())
}

/// The canonical inhabitant of 0 -> 0.
pub fn unit_value() -> FTerm {
    FTerm::lam("u", void_type(), FTerm::var("u"))
}

/// nat = mu X. 1 + X with 1 the encoded unit type.
pub fn nat_type() -> FType {
    FType::mu("X", FType::sum(unit_type(), FType::tvar("X")))
}

pub fn nat_zero() -> FTerm {
    FTerm::intro(nat_type(), FTerm::inl(unit_type(), nat_type(), unit_value()))
}

pub fn nat_succ(m: FTerm) -> FTerm {
    FTerm::intro(nat_type(), FTerm::inr(nat_type(), unit_type(), m))
}

/// zero under n successors.
pub fn nat_literal(n: u64) -> FTerm {
    let mut t = nat_zero();
    for _ in 0..n {
        t = nat_succ(t);
    }
    t
}

/// Predecessor on encoded naturals, sending zero to zero:
/// \n. case elim(n) of inl u. zero | inr p. p.
pub fn nat_pred() -> FTerm {
    FTerm::lam(
        "n",
        nat_type(),
        FTerm::case(
            FTerm::elim(FTerm::var("n")),
            "u",
            nat_zero(),
            "p",
            FTerm::var("p"),
        ),
    )
}

/// The self-application loop at R = mu X. X -> X: with
/// d = \x:R. (elim x)(x), the program (d)(intro[R](d)) reduces to itself
/// in two steps and never reaches a normal form.
pub fn omega_loop() -> FTerm {
    let r = FType::mu("X", FType::arrow(FType::tvar("X"), FType::tvar("X")));
    let d = FTerm::lam(
        "x",
        r.clone(),
        FTerm::app(FTerm::elim(FTerm::var("x")), FTerm::var("x")),
    );
    FTerm::app(d.clone(), FTerm::intro(r, d))
}
