//! One-step reduction and the deterministic normalization driver.
//!
//! The relation is nondeterministic: reduction may happen under lambda,
//! and congruences act on several subterm positions. step_fpc returns
//! every one-step successor, root redexes first and congruences in
//! left-to-right subterm order, so index 0 is the leftmost-outermost
//! choice. Arguments of applications are never reduced in place, and the
//! application congruence only fires when the head is not an abstraction.
//!
//! Three rule families are completions of an otherwise unusable relation
//! and are flagged as such in the design notes: projections and
//! congruences for pairs, the congruence for intro, and the cancellation
//! reading of case/elim (their premises are phrased through reduction of
//! the scrutinee, which a one-step relation cannot test directly).

use super::{subst_fpc, FTerm};

/// The value grammar: pairs of values, injections of values, any intro,
/// any abstraction. Values can still reduce (under the binder or inside
/// an intro); normal forms are the terms with no successors at all.
pub fn is_value(m: &FTerm) -> bool {
    match m {
        FTerm::Pair(l, r) => is_value(l) && is_value(r),
        FTerm::Inl { body, .. } | FTerm::Inr { body, .. } => is_value(body),
        FTerm::Intro { .. } | FTerm::Lam { .. } => true,
        _ => false,
    }
}

fn push_unique(acc: &mut Vec<FTerm>, candidate: FTerm) {
    if !acc.contains(&candidate) {
        acc.push(candidate);
    }
}

/// All one-step successors of m, leftmost-outermost first, without
/// duplicates (successors reachable by two different rules count once).
pub fn step_fpc(m: &FTerm) -> Vec<FTerm> {
    let mut out = Vec::new();
    match m {
        FTerm::Var(_) => {}
        FTerm::Lam { binder, ann, body } => {
            for b in step_fpc(body) {
                push_unique(&mut out, FTerm::lam(binder, ann.clone(), b));
            }
        }
        FTerm::App { fun, arg } => {
            if let FTerm::Lam { binder, body, .. } = fun.as_ref() {
                push_unique(&mut out, subst_fpc(body, binder, arg));
            } else {
                for f in step_fpc(fun) {
                    push_unique(&mut out, FTerm::app(f, arg.as_ref().clone()));
                }
            }
        }
        FTerm::Inl { body_ty, other_ty, body } => {
            for b in step_fpc(body) {
                push_unique(&mut out, FTerm::inl(body_ty.clone(), other_ty.clone(), b));
            }
        }
        FTerm::Inr { body_ty, other_ty, body } => {
            for b in step_fpc(body) {
                push_unique(&mut out, FTerm::inr(body_ty.clone(), other_ty.clone(), b));
            }
        }
        FTerm::Case { scrutinee, left_binder, left, right_binder, right } => {
            match scrutinee.as_ref() {
                FTerm::Inl { body, .. } => {
                    push_unique(&mut out, subst_fpc(left, left_binder, body));
                }
                FTerm::Inr { body, .. } => {
                    push_unique(&mut out, subst_fpc(right, right_binder, body));
                }
                _ => {}
            }
            for s in step_fpc(scrutinee) {
                push_unique(
                    &mut out,
                    FTerm::case(
                        s,
                        left_binder,
                        left.as_ref().clone(),
                        right_binder,
                        right.as_ref().clone(),
                    ),
                );
            }
        }
        FTerm::Pair(l, r) => {
            for l2 in step_fpc(l) {
                push_unique(&mut out, FTerm::pair(l2, r.as_ref().clone()));
            }
            for r2 in step_fpc(r) {
                push_unique(&mut out, FTerm::pair(l.as_ref().clone(), r2));
            }
        }
        FTerm::Fst(inner) => {
            if let FTerm::Pair(l, _) = inner.as_ref() {
                push_unique(&mut out, l.as_ref().clone());
            }
            for i in step_fpc(inner) {
                push_unique(&mut out, FTerm::fst(i));
            }
        }
        FTerm::Snd(inner) => {
            if let FTerm::Pair(_, r) = inner.as_ref() {
                push_unique(&mut out, r.as_ref().clone());
            }
            for i in step_fpc(inner) {
                push_unique(&mut out, FTerm::snd(i));
            }
        }
        FTerm::Intro { ann, body } => {
            for b in step_fpc(body) {
                push_unique(&mut out, FTerm::intro(ann.clone(), b));
            }
        }
        FTerm::Elim(inner) => {
            if let FTerm::Intro { body, .. } = inner.as_ref() {
                push_unique(&mut out, body.as_ref().clone());
            }
            for i in step_fpc(inner) {
                push_unique(&mut out, FTerm::elim(i));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    Normal(FTerm),
    OutOfFuel(FTerm),
}

/// Repeatedly takes the leftmost-outermost successor until no rule
/// applies, spending one unit of fuel per step.
pub fn normalize(m: &FTerm, fuel: usize) -> Normalized {
    let mut current = m.clone();
    for _ in 0..fuel {
        match step_fpc(&current).into_iter().next() {
            None => return Normalized::Normal(current),
            Some(next) => current = next,
        }
    }
    if step_fpc(&current).is_empty() {
        Normalized::Normal(current)
    } else {
        Normalized::OutOfFuel(current)
    }
}
