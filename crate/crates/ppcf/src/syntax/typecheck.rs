//! Syntax-directed checking of the eight typing rules. Annotations on
//! lambdas make the algorithm a single bottom-up pass; every term has at
//! most one type in a given context.

use super::{PTerm, PType, TypingCtx};
use crate::syntax::print::pretty_type;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct TypeError {
    /// Which rule could not be applied, e.g. `app` or `if`.
    pub rule: &'static str,
    /// Path from the root to the offending subterm, e.g. `app.fun -> lam.body`.
    pub path: Vec<&'static str>,
    pub message: String,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.path.is_empty() {
            "root".to_string()
        } else {
            self.path.join(" -> ")
        };
        write!(f, "rule {} violated at {}: {}", self.rule, at, self.message)
    }
}

pub fn typecheck(ctx: &TypingCtx, term: &PTerm) -> Result<PType, TypeError> {
    let mut path = Vec::new();
    check(ctx, term, &mut path)
}

fn fail(rule: &'static str, path: &[&'static str], message: String) -> TypeError {
    TypeError { rule, path: path.to_vec(), message }
}

fn check(ctx: &TypingCtx, term: &PTerm, path: &mut Vec<&'static str>) -> Result<PType, TypeError> {
    match term {
        PTerm::Num(_) => Ok(PType::Nat),
        PTerm::Coin(_) => Ok(PType::Nat),
        PTerm::Var(name) => ctx.lookup(name).cloned().ok_or_else(|| {
            fail("var", path, format!("unbound variable `{name}`"))
        }),
        PTerm::Succ(inner) => {
            path.push("succ");
            let t = check(ctx, inner, path)?;
            if t != PType::Nat {
                return Err(fail(
                    "succ",
                    path,
                    format!("succ needs a nat argument, found {}", pretty_type(&t)),
                ));
            }
            path.pop();
            Ok(PType::Nat)
        }
        PTerm::If { scrutinee, zero, binder, succ } => {
            path.push("if.scrutinee");
            let st = check(ctx, scrutinee, path)?;
            if st != PType::Nat {
                return Err(fail(
                    "if",
                    path,
                    format!("if scrutinee must be nat, found {}", pretty_type(&st)),
                ));
            }
            path.pop();
            path.push("if.zero");
            let zt = check(ctx, zero, path)?;
            path.pop();
            path.push("if.succ");
            let inner = ctx.extend(binder, PType::Nat);
            let qt = check(&inner, succ, path)?;
            path.pop();
            if zt != qt {
                return Err(fail(
                    "if",
                    path,
                    format!(
                        "branches disagree: zero branch has {}, succ branch has {}",
                        pretty_type(&zt),
                        pretty_type(&qt)
                    ),
                ));
            }
            Ok(zt)
        }
        PTerm::Lam { binder, ann, body } => {
            path.push("lam.body");
            let inner = ctx.extend(binder, ann.clone());
            let cod = check(&inner, body, path)?;
            path.pop();
            Ok(PType::arrow(ann.clone(), cod))
        }
        PTerm::App { fun, arg } => {
            path.push("app.fun");
            let ft = check(ctx, fun, path)?;
            let (dom, cod) = match ft {
                PType::Arrow(dom, cod) => (*dom, *cod),
                PType::Nat => {
                    return Err(fail(
                        "app",
                        path,
                        "expected a function type, found nat".to_string(),
                    ))
                }
            };
            path.pop();
            path.push("app.arg");
            let at = check(ctx, arg, path)?;
            if at != dom {
                return Err(fail(
                    "app",
                    path,
                    format!(
                        "argument has {}, function expects {}",
                        pretty_type(&at),
                        pretty_type(&dom)
                    ),
                ));
            }
            path.pop();
            Ok(cod)
        }
        PTerm::Fix(inner) => {
            path.push("fix");
            let t = check(ctx, inner, path)?;
            match t {
                PType::Arrow(dom, cod) if dom == cod => {
                    path.pop();
                    Ok(*dom)
                }
                other => Err(fail(
                    "fix",
                    path,
                    format!("fix needs an endo-function t -> t, found {}", pretty_type(&other)),
                )),
            }
        }
    }
}
