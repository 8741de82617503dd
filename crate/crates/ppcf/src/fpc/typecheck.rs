//! Syntax-directed typing for FPC. One deliberate divergence from the
//! usual split-context presentation of application and case: both premises
//! are checked under the same context, so a variable may occur in several
//! subterms. The split form would reject the self-application loop at
//! mu X. X -> X, which the reduction tests depend on.
//!
//! Products get the standard rules (pairing, projections); inl/inr follow
//! the annotation convention documented on FTerm.

use super::{type_subst, wf_type, FTerm, FType, TermCtx, TypeCtx};
use crate::fpc::print::pretty_ftype;
use crate::syntax::TypeError;

pub fn typecheck_fpc(theta: &TypeCtx, gamma: &TermCtx, m: &FTerm) -> Result<FType, TypeError> {
    let mut path = Vec::new();
    check(theta, gamma, m, &mut path)
}

fn fail(rule: &'static str, path: &[&'static str], message: String) -> TypeError {
    TypeError { rule, path: path.to_vec(), message }
}

fn require_wf(
    theta: &TypeCtx,
    t: &FType,
    rule: &'static str,
    path: &[&'static str],
) -> Result<(), TypeError> {
    if wf_type(theta, t) {
        Ok(())
    } else {
        Err(fail(rule, path, format!("annotation {} is not well formed here", pretty_ftype(t))))
    }
}

fn check(
    theta: &TypeCtx,
    gamma: &TermCtx,
    m: &FTerm,
    path: &mut Vec<&'static str>,
) -> Result<FType, TypeError> {
    match m {
        FTerm::Var(name) => gamma
            .lookup(name)
            .cloned()
            .ok_or_else(|| fail("var", path, format!("unbound variable `{name}`"))),
        FTerm::Inl { body_ty, other_ty, body } => {
            require_wf(theta, body_ty, "inl", path)?;
            require_wf(theta, other_ty, "inl", path)?;
            path.push("inl");
            let t = check(theta, gamma, body, path)?;
            if t != *body_ty {
                return Err(fail(
                    "inl",
                    path,
                    format!(
                        "body has type {}, annotation says {}",
                        pretty_ftype(&t),
                        pretty_ftype(body_ty)
                    ),
                ));
            }
            path.pop();
            Ok(FType::sum(body_ty.clone(), other_ty.clone()))
        }
        FTerm::Inr { body_ty, other_ty, body } => {
            require_wf(theta, body_ty, "inr", path)?;
            require_wf(theta, other_ty, "inr", path)?;
            path.push("inr");
            let t = check(theta, gamma, body, path)?;
            if t != *body_ty {
                return Err(fail(
                    "inr",
                    path,
                    format!(
                        "body has type {}, annotation says {}",
                        pretty_ftype(&t),
                        pretty_ftype(body_ty)
                    ),
                ));
            }
            path.pop();
            Ok(FType::sum(other_ty.clone(), body_ty.clone()))
        }
        FTerm::Case { scrutinee, left_binder, left, right_binder, right } => {
            path.push("case.scrutinee");
            let s = check(theta, gamma, scrutinee, path)?;
            let FType::Sum(t, u) = s else {
                return Err(fail(
                    "case",
                    path,
                    format!("scrutinee has non-sum type {}", pretty_ftype(&s)),
                ));
            };
            path.pop();
            path.push("case.left");
            let v1 = check(theta, &gamma.extend(left_binder, *t), left, path)?;
            path.pop();
            path.push("case.right");
            let v2 = check(theta, &gamma.extend(right_binder, *u), right, path)?;
            path.pop();
            if v1 != v2 {
                return Err(fail(
                    "case",
                    path,
                    format!(
                        "branches disagree: {} versus {}",
                        pretty_ftype(&v1),
                        pretty_ftype(&v2)
                    ),
                ));
            }
            Ok(v1)
        }
        FTerm::Pair(l, r) => {
            path.push("pair.fst");
            let t = check(theta, gamma, l, path)?;
            path.pop();
            path.push("pair.snd");
            let u = check(theta, gamma, r, path)?;
            path.pop();
            Ok(FType::prod(t, u))
        }
        FTerm::Lam { binder, ann, body } => {
            require_wf(theta, ann, "lam", path)?;
            path.push("lam.body");
            let cod = check(theta, &gamma.extend(binder, ann.clone()), body, path)?;
            path.pop();
            Ok(FType::arrow(ann.clone(), cod))
        }
        FTerm::App { fun, arg } => {
            path.push("app.fun");
            let f = check(theta, gamma, fun, path)?;
            let FType::Arrow(dom, cod) = f else {
                return Err(fail(
                    "app",
                    path,
                    format!("applied term has non-function type {}", pretty_ftype(&f)),
                ));
            };
            path.pop();
            path.push("app.arg");
            let a = check(theta, gamma, arg, path)?;
            if a != *dom {
                return Err(fail(
                    "app",
                    path,
                    format!("expected argument of type {}, found {}", pretty_ftype(&dom), pretty_ftype(&a)),
                ));
            }
            path.pop();
            Ok(*cod)
        }
        FTerm::Fst(inner) => {
            path.push("fst");
            let t = check(theta, gamma, inner, path)?;
            match t {
                FType::Prod(l, _) => {
                    path.pop();
                    Ok(*l)
                }
                other => Err(fail(
                    "fst",
                    path,
                    format!("fst of non-product type {}", pretty_ftype(&other)),
                )),
            }
        }
        FTerm::Snd(inner) => {
            path.push("snd");
            let t = check(theta, gamma, inner, path)?;
            match t {
                FType::Prod(_, r) => {
                    path.pop();
                    Ok(*r)
                }
                other => Err(fail(
                    "snd",
                    path,
                    format!("snd of non-product type {}", pretty_ftype(&other)),
                )),
            }
        }
        FTerm::Intro { ann, body } => {
            require_wf(theta, ann, "intro", path)?;
            let FType::Mu(x, t) = ann else {
                return Err(fail(
                    "intro",
                    path,
                    format!("intro annotation {} is not a recursive type", pretty_ftype(ann)),
                ));
            };
            path.push("intro");
            let unfolded = type_subst(t, x, ann);
            let b = check(theta, gamma, body, path)?;
            if b != unfolded {
                return Err(fail(
                    "intro",
                    path,
                    format!(
                        "body has type {}, unfolding needs {}",
                        pretty_ftype(&b),
                        pretty_ftype(&unfolded)
                    ),
                ));
            }
            path.pop();
            Ok(ann.clone())
        }
        FTerm::Elim(inner) => {
            path.push("elim");
            let t = check(theta, gamma, inner, path)?;
            match &t {
                FType::Mu(x, body) => {
                    let unfolded = type_subst(body, x, &t);
                    path.pop();
                    Ok(unfolded)
                }
                other => Err(fail(
                    "elim",
                    path,
                    format!("elim of non-recursive type {}", pretty_ftype(other)),
                )),
            }
        }
    }
}
