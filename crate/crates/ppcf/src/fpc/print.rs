//! Pretty-printers for FPC types and terms, inverse to the parser up to
//! alpha-equivalence (names are preserved, so syntactic equality holds).

use super::{FTerm, FType};

// Binding strengths: mu binds loosest, then ->, then +, then *.
const PREC_TOP: u8 = 0;
const PREC_ARROW: u8 = 1;
const PREC_SUM: u8 = 2;
const PREC_PROD: u8 = 3;

pub fn pretty_ftype(t: &FType) -> String {
    go_ty(t, PREC_TOP)
}

fn go_ty(t: &FType, prec: u8) -> String {
    let (body, mine) = match t {
        FType::TVar(x) => return x.clone(),
        FType::Mu(x, inner) => (format!("mu {x}. {}", go_ty(inner, PREC_TOP)), PREC_TOP),
        // The parser takes a full type after `->`, so the codomain needs no
        // parentheses even when it is a mu or another arrow.
        FType::Arrow(dom, cod) => (
            format!("{} -> {}", go_ty(dom, PREC_SUM), go_ty(cod, PREC_TOP)),
            PREC_ARROW,
        ),
        FType::Sum(l, r) => (
            format!("{} + {}", go_ty(l, PREC_SUM), go_ty(r, PREC_PROD)),
            PREC_SUM,
        ),
        FType::Prod(l, r) => (
            format!("{} * {}", go_ty(l, PREC_PROD), go_ty(r, PREC_PROD + 1)),
            PREC_PROD,
        ),
    };
    if prec > mine {
        format!("({body})")
    } else {
        body
    }
}

pub fn pretty_fterm(m: &FTerm) -> String {
    match m {
        FTerm::Var(x) => x.clone(),
        FTerm::Lam { binder, ann, body } => {
            format!("\\{}:{}. {}", binder, pretty_ftype(ann), pretty_fterm(body))
        }
        FTerm::Case { scrutinee, left_binder, left, right_binder, right } => format!(
            "case {} of inl {}. {} | inr {}. {}",
            pretty_fterm(scrutinee),
            left_binder,
            pretty_fterm(left),
            right_binder,
            pretty_fterm(right)
        ),
        FTerm::App { fun, arg } => format!("({}){}", pretty_fterm(fun), pretty_fatom(arg)),
        FTerm::Inl { body_ty, other_ty, body } => format!(
            "inl[{}, {}]({})",
            pretty_ftype(body_ty),
            pretty_ftype(other_ty),
            pretty_fterm(body)
        ),
        FTerm::Inr { body_ty, other_ty, body } => format!(
            "inr[{}, {}]({})",
            pretty_ftype(body_ty),
            pretty_ftype(other_ty),
            pretty_fterm(body)
        ),
        FTerm::Pair(l, r) => format!("({}, {})", pretty_fterm(l), pretty_fterm(r)),
        FTerm::Fst(inner) => format!("fst({})", pretty_fterm(inner)),
        FTerm::Snd(inner) => format!("snd({})", pretty_fterm(inner)),
        FTerm::Intro { ann, body } => {
            format!("intro[{}]({})", pretty_ftype(ann), pretty_fterm(body))
        }
        FTerm::Elim(inner) => format!("elim({})", pretty_fterm(inner)),
    }
}

fn pretty_fatom(m: &FTerm) -> String {
    match m {
        FTerm::Lam { .. } | FTerm::Case { .. } | FTerm::App { .. } => {
            format!("({})", pretty_fterm(m))
        }
        _ => pretty_fterm(m),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{nat_type, parse_fpc, parse_ftype, unit_type, unit_value, FTerm, FType};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn type_precedence_round_trip_by_hand() {
        let cases = [
            (FType::sum(FType::tvar("A"), FType::tvar("B")), "A + B"),
            (
                FType::sum(FType::sum(FType::tvar("A"), FType::tvar("B")), FType::tvar("C")),
                "A + B + C",
            ),
            (
                FType::sum(FType::tvar("A"), FType::sum(FType::tvar("B"), FType::tvar("C"))),
                "A + (B + C)",
            ),
            (
                FType::prod(FType::sum(FType::tvar("A"), FType::tvar("B")), FType::tvar("C")),
                "(A + B) * C",
            ),
            (
                FType::sum(FType::tvar("A"), FType::prod(FType::tvar("B"), FType::tvar("C"))),
                "A + B * C",
            ),
            (
                FType::arrow(FType::arrow(FType::tvar("A"), FType::tvar("B")), FType::tvar("C")),
                "(A -> B) -> C",
            ),
            (
                FType::arrow(FType::tvar("A"), FType::arrow(FType::tvar("B"), FType::tvar("C"))),
                "A -> B -> C",
            ),
            (
                FType::arrow(FType::sum(FType::tvar("A"), FType::tvar("B")), FType::tvar("C")),
                "A + B -> C",
            ),
            (FType::mu("X", FType::arrow(FType::tvar("X"), FType::tvar("X"))), "mu X. X -> X"),
            (
                FType::arrow(FType::mu("X", FType::tvar("X")), FType::tvar("C")),
                "(mu X. X) -> C",
            ),
        ];
        for (ty, text) in cases {
            assert_eq!(pretty_ftype(&ty), text);
            assert_eq!(parse_ftype(text).unwrap(), ty);
        }
    }

    #[test]
    fn nat_type_round_trips() {
        let printed = pretty_ftype(&nat_type());
        assert_eq!(printed, "mu X. ((mu X. X) -> mu X. X) + X");
        assert_eq!(parse_ftype(&printed).unwrap(), nat_type());
    }

    #[test]
    fn term_forms_round_trip_by_hand() {
        let unit = unit_value();
        let cases = [
            (FTerm::var("x"), "x".to_string()),
            (unit.clone(), "\\u:mu X. X. u".to_string()),
            (
                FTerm::app(FTerm::var("f"), FTerm::var("x")),
                "(f)x".to_string(),
            ),
            (
                FTerm::pair(FTerm::var("a"), FTerm::var("b")),
                "(a, b)".to_string(),
            ),
            (
                FTerm::fst(FTerm::pair(FTerm::var("a"), FTerm::var("b"))),
                "fst((a, b))".to_string(),
            ),
            (
                FTerm::inl(unit_type(), unit_type(), unit.clone()),
                format!("inl[{t}, {t}](\\u:mu X. X. u)", t = "(mu X. X) -> mu X. X"),
            ),
            (
                FTerm::case(FTerm::var("s"), "x", FTerm::var("x"), "y", FTerm::var("y")),
                "case s of inl x. x | inr y. y".to_string(),
            ),
            (
                FTerm::elim(FTerm::intro(FType::mu("X", FType::tvar("X")), FTerm::var("v"))),
                "elim(intro[mu X. X](v))".to_string(),
            ),
        ];
        for (term, text) in cases {
            assert_eq!(pretty_fterm(&term), text);
            assert_eq!(parse_fpc(&text).unwrap(), term);
        }
    }

    fn arb_tvar() -> impl Strategy<Value = String> {
        prop::sample::select(vec!["X", "Y", "Z", "A", "B'"])
            .prop_map(|s| s.to_string())
    }

    fn arb_ftype() -> impl Strategy<Value = FType> {
        let leaf = arb_tvar().prop_map(|x| FType::tvar(&x));
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| FType::sum(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| FType::prod(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| FType::arrow(a, b)),
                (arb_tvar(), inner).prop_map(|(x, t)| FType::mu(&x, t)),
            ]
        })
    }

    fn arb_var() -> impl Strategy<Value = String> {
        prop::sample::select(vec!["x", "y", "f", "g'", "_w0"])
            .prop_map(|s| s.to_string())
    }

    fn arb_fterm() -> impl Strategy<Value = FTerm> {
        let leaf = arb_var().prop_map(|x| FTerm::var(&x));
        leaf.prop_recursive(4, 20, 2, |inner| {
            prop_oneof![
                (arb_var(), arb_ftype(), inner.clone())
                    .prop_map(|(x, t, b)| FTerm::lam(&x, t, b)),
                (inner.clone(), inner.clone()).prop_map(|(f, a)| FTerm::app(f, a)),
                (arb_ftype(), arb_ftype(), inner.clone())
                    .prop_map(|(t, u, b)| FTerm::inl(t, u, b)),
                (arb_ftype(), arb_ftype(), inner.clone())
                    .prop_map(|(t, u, b)| FTerm::inr(t, u, b)),
                (inner.clone(), arb_var(), inner.clone(), arb_var(), inner.clone())
                    .prop_map(|(s, x, l, y, r)| FTerm::case(s, &x, l, &y, r)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| FTerm::pair(a, b)),
                inner.clone().prop_map(FTerm::fst),
                inner.clone().prop_map(FTerm::snd),
                (arb_ftype(), inner.clone()).prop_map(|(t, b)| FTerm::intro(t, b)),
                inner.prop_map(FTerm::elim),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, .. ProptestConfig::default() })]

        #[test]
        fn parse_inverts_pretty_on_types(t in arb_ftype()) {
            let printed = pretty_ftype(&t);
            let reparsed = parse_ftype(&printed).unwrap();
            prop_assert_eq!(reparsed, t);
        }

        #[test]
        fn parse_inverts_pretty_on_terms(m in arb_fterm()) {
            let printed = pretty_fterm(&m);
            let reparsed = parse_fpc(&printed).unwrap();
            prop_assert_eq!(reparsed, m);
        }
    }
}
