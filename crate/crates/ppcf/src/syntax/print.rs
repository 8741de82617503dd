//! Pretty-printer. Applications render in the "(M)N" style; everything else
//! uses its concrete-syntax form, so `parse(pretty(m))` is alpha-equivalent
//! to `m` (syntactically equal, in fact, since names are preserved).

use super::{PTerm, PType};
use crate::prob::show_rat;

pub fn pretty_type(ty: &PType) -> String {
    match ty {
        PType::Nat => "nat".to_string(),
        PType::Arrow(dom, cod) => {
            let dom_str = match **dom {
                PType::Nat => pretty_type(dom),
                PType::Arrow(..) => format!("({})", pretty_type(dom)),
            };
            format!("{} -> {}", dom_str, pretty_type(cod))
        }
    }
}

pub fn pretty(term: &PTerm) -> String {
    match term {
        PTerm::Num(n) => n.to_string(),
        PTerm::Var(name) => name.clone(),
        PTerm::Coin(kappa) => format!("coin({})", show_rat(kappa.rat())),
        PTerm::Succ(inner) => format!("succ({})", pretty(inner)),
        PTerm::If { scrutinee, zero, binder, succ } => format!(
            "if({}, {}, {}. {})",
            pretty(scrutinee),
            pretty(zero),
            binder,
            pretty(succ)
        ),
        PTerm::Lam { binder, ann, body } => {
            format!("\\{}:{}. {}", binder, pretty_type(ann), pretty(body))
        }
        PTerm::Fix(inner) => format!("fix({})", pretty(inner)),
        PTerm::App { fun, arg } => format!("({}){}", pretty(fun), pretty_atom(arg)),
    }
}

// Arguments that are not atoms in the grammar get wrapped so the
// application chain reparses with the same shape.
fn pretty_atom(term: &PTerm) -> String {
    match term {
        PTerm::Lam { .. } | PTerm::App { .. } => format!("({})", pretty(term)),
        _ => pretty(term),
    }
}
