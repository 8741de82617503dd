//! Order-theoretic semantics: terms denote sub-distributions at ground type
//! and continuous maps at arrow types. Fixpoints are approximated by a
//! finite Kleene iteration f^D(bottom), and every ground distribution is
//! truncated at a configurable support cap, so all reported numbers are
//! certified lower bounds of the limit semantics.
//!
//! The if-branch sees the concrete predecessor: if(M, P, z.Q) denotes
//! v(0)*[[P]] + sum over k of v(k+1)*[[Q]] with z bound to dirac(k), where
//! v = [[M]]. This matches the operational rule if(n+1,P,z.Q) -> Q[z|->n].

use crate::prob::Rat;
use crate::subdist::{convex_combine, shift, truncate, SubDist};
use crate::syntax::{typecheck, PTerm, PType, TypingCtx};
use num::Zero;
use std::fmt;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemError {
    #[error("type mismatch in denotation: {0}")]
    TypeMismatch(String),
    #[error("invalid convex weights in denotation: {0}")]
    Weights(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenoteConfig {
    /// Kleene iteration depth D for every fix.
    pub fix_iters: usize,
    /// Largest numeral index kept in any ground distribution.
    pub support_cap: u64,
}

impl Default for DenoteConfig {
    fn default() -> Self {
        DenoteConfig { fix_iters: 60, support_cap: 64 }
    }
}

/// A denotation: a sub-distribution at nat, an opaque closure at arrows.
/// Closures capture only immutable shared data and may be sent across
/// threads; they are compared only through application at ground type.
#[derive(Clone)]
pub enum SemValue {
    Nat(SubDist),
    Fun(SemFun),
}

type SemClosure = dyn Fn(&SemValue) -> Result<SemValue, SemError> + Send + Sync;

#[derive(Clone)]
pub struct SemFun {
    ty: PType,
    f: Arc<SemClosure>,
}

impl SemFun {
    fn new(ty: PType, f: Arc<SemClosure>) -> SemFun {
        debug_assert!(matches!(ty, PType::Arrow(..)));
        SemFun { ty, f }
    }

    pub fn ty(&self) -> &PType {
        &self.ty
    }
}

impl SemValue {
    pub fn ty(&self) -> PType {
        match self {
            SemValue::Nat(_) => PType::Nat,
            SemValue::Fun(f) => f.ty.clone(),
        }
    }

    pub fn as_nat(&self) -> Result<&SubDist, SemError> {
        match self {
            SemValue::Nat(d) => Ok(d),
            SemValue::Fun(f) => Err(SemError::TypeMismatch(format!(
                "expected a ground value, found a function of type {}",
                f.ty
            ))),
        }
    }

    fn as_fun(&self) -> Result<&SemFun, SemError> {
        match self {
            SemValue::Fun(f) => Ok(f),
            SemValue::Nat(d) => Err(SemError::TypeMismatch(format!(
                "expected a function, found a ground value of mass {}",
                d.mass()
            ))),
        }
    }
}

impl fmt::Debug for SemValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemValue::Nat(d) => write!(f, "Nat({d:?})"),
            SemValue::Fun(sf) => write!(f, "Fun(<{}>)", sf.ty),
        }
    }
}

/// Persistent environment; extension shares the tail.
#[derive(Clone, Default)]
pub struct SemEnv(Option<Arc<EnvNode>>);

struct EnvNode {
    name: String,
    value: SemValue,
    rest: SemEnv,
}

impl SemEnv {
    pub fn empty() -> SemEnv {
        SemEnv(None)
    }

    pub fn extend(&self, name: &str, value: SemValue) -> SemEnv {
        SemEnv(Some(Arc::new(EnvNode {
            name: name.to_string(),
            value,
            rest: self.clone(),
        })))
    }

    pub fn lookup(&self, name: &str) -> Option<&SemValue> {
        let mut cur = self;
        while let Some(node) = &cur.0 {
            if node.name == name {
                return Some(&node.value);
            }
            cur = &node.rest;
        }
        None
    }

    /// The typing context induced by the stored values' type tags.
    pub fn typing_ctx(&self) -> TypingCtx {
        let mut binds = Vec::new();
        let mut cur = self;
        while let Some(node) = &cur.0 {
            binds.push((node.name.clone(), node.value.ty()));
            cur = &node.rest;
        }
        let mut ctx = TypingCtx::empty();
        for (name, ty) in binds.into_iter().rev() {
            ctx = ctx.extend(&name, ty);
        }
        ctx
    }
}

pub fn bottom(t: &PType) -> SemValue {
    match t {
        PType::Nat => SemValue::Nat(SubDist::empty()),
        PType::Arrow(_, cod) => {
            let cod = (**cod).clone();
            SemValue::Fun(SemFun::new(
                t.clone(),
                Arc::new(move |_| Ok(bottom(&cod))),
            ))
        }
    }
}

pub fn apply_sem(f: &SemValue, arg: &SemValue) -> Result<SemValue, SemError> {
    let sf = f.as_fun()?;
    let dom = match &sf.ty {
        PType::Arrow(dom, _) => dom,
        PType::Nat => unreachable!("SemFun carries an arrow type"),
    };
    let arg_ty = arg.ty();
    if arg_ty != **dom {
        return Err(SemError::TypeMismatch(format!(
            "function of type {} applied to an argument of type {arg_ty}",
            sf.ty
        )));
    }
    (sf.f)(arg)
}

/// f^iters(bottom) for f at some type t => t. At ground observations the
/// sequence is pointwise nondecreasing in iters.
pub fn fix_iterate(f: &SemValue, iters: usize) -> Result<SemValue, SemError> {
    let sf = f.as_fun()?;
    let dom = match &sf.ty {
        PType::Arrow(dom, cod) if dom == cod => dom,
        other => {
            return Err(SemError::TypeMismatch(format!(
                "fix needs an endo-function t => t, found {other}"
            )))
        }
    };
    let mut x = bottom(dom);
    for _ in 0..iters {
        x = apply_sem(f, &x)?;
    }
    Ok(x)
}

/// Convex combination of same-typed values: exact at nat, pointwise
/// through application at arrows. Zero weights are legal; the first value
/// fixes the type, so callers keep at least one entry even at weight zero.
pub fn combine_sem(pairs: &[(Rat, SemValue)]) -> Result<SemValue, SemError> {
    let (_, first) = pairs
        .first()
        .ok_or_else(|| SemError::TypeMismatch("empty semantic combination".to_string()))?;
    match first {
        SemValue::Nat(_) => {
            let weights: Vec<Rat> = pairs.iter().map(|(w, _)| w.clone()).collect();
            let dists = pairs
                .iter()
                .map(|(_, v)| v.as_nat().cloned())
                .collect::<Result<Vec<_>, _>>()?;
            convex_combine(&weights, &dists)
                .map(SemValue::Nat)
                .map_err(|e| SemError::Weights(e.to_string()))
        }
        SemValue::Fun(f0) => {
            let ty = f0.ty.clone();
            let parts = pairs
                .iter()
                .map(|(w, v)| {
                    let f = v.as_fun()?;
                    if f.ty != ty {
                        return Err(SemError::TypeMismatch(format!(
                            "mixed function types {} and {} in a combination",
                            ty, f.ty
                        )));
                    }
                    Ok((w.clone(), f.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SemValue::Fun(SemFun::new(
                ty,
                Arc::new(move |arg| {
                    let applied = parts
                        .iter()
                        .map(|(w, f)| Ok((w.clone(), (f.f)(arg)?)))
                        .collect::<Result<Vec<_>, SemError>>()?;
                    combine_sem(&applied)
                }),
            )))
        }
    }
}

#[derive(Clone)]
struct Ctx {
    cfg: DenoteConfig,
    discarded: Arc<Mutex<Rat>>,
}

impl Ctx {
    fn clamp(&self, d: SubDist) -> SubDist {
        let kept = truncate(&d, self.cfg.support_cap);
        let dropped = d.mass() - kept.mass();
        if !dropped.is_zero() {
            *self.discarded.lock().unwrap() += dropped;
        }
        kept
    }
}

pub fn denote(env: &SemEnv, m: &PTerm, cfg: &DenoteConfig) -> Result<SemValue, SemError> {
    denote_traced(env, m, cfg).map(|(v, _)| v)
}

/// Like denote, but also reports the total mass dropped by support
/// truncation anywhere in the evaluation (including inside fix iterates,
/// so it may overstate the effect on the final value). Zero means no
/// truncation occurred and the result is exact for the given fix_iters.
pub fn denote_traced(
    env: &SemEnv,
    m: &PTerm,
    cfg: &DenoteConfig,
) -> Result<(SemValue, Rat), SemError> {
    let ctx = Ctx { cfg: *cfg, discarded: Arc::new(Mutex::new(Rat::zero())) };
    let value = eval(env, m, &ctx)?;
    let dropped = ctx.discarded.lock().unwrap().clone();
    Ok((value, dropped))
}

fn eval(env: &SemEnv, m: &PTerm, ctx: &Ctx) -> Result<SemValue, SemError> {
    match m {
        PTerm::Num(n) => Ok(SemValue::Nat(ctx.clamp(SubDist::dirac(*n)))),
        PTerm::Var(name) => env.lookup(name).cloned().ok_or_else(|| {
            SemError::TypeMismatch(format!("variable `{name}` is not in the environment"))
        }),
        PTerm::Coin(kappa) => {
            let d = SubDist::from_pairs([
                (0, kappa.rat().clone()),
                (1, kappa.complement().rat().clone()),
            ])
            .expect("coin weights always form a distribution");
            Ok(SemValue::Nat(ctx.clamp(d)))
        }
        PTerm::Succ(inner) => {
            let d = eval(env, inner, ctx)?.as_nat()?.clone();
            Ok(SemValue::Nat(ctx.clamp(shift(&d))))
        }
        PTerm::If { scrutinee, zero, binder, succ } => {
            let v = eval(env, scrutinee, ctx)?.as_nat()?.clone();
            // The zero branch is always evaluated: it fixes the result type
            // even when its weight is zero.
            let zero_val = eval(env, zero, ctx)?;
            let mut pairs = vec![(v.weight(0), zero_val)];
            for (&idx, w) in v.iter() {
                if idx == 0 {
                    continue;
                }
                let pred = SemValue::Nat(SubDist::dirac(idx - 1));
                let branch_env = env.extend(binder, pred);
                pairs.push((w.clone(), eval(&branch_env, succ, ctx)?));
            }
            combine_sem(&pairs)
        }
        PTerm::Lam { binder, ann, body } => {
            let body_ctx = env.typing_ctx().extend(binder, ann.clone());
            let cod = typecheck(&body_ctx, body).map_err(|e| {
                SemError::TypeMismatch(format!("lambda body does not typecheck: {e}"))
            })?;
            let ty = PType::arrow(ann.clone(), cod);
            let captured_env = env.clone();
            let captured_ctx = ctx.clone();
            let binder = binder.clone();
            let dom = ann.clone();
            let body = (**body).clone();
            Ok(SemValue::Fun(SemFun::new(
                ty,
                Arc::new(move |arg| {
                    let arg_ty = arg.ty();
                    if arg_ty != dom {
                        return Err(SemError::TypeMismatch(format!(
                            "argument of type {arg_ty} bound at type {dom}"
                        )));
                    }
                    let inner = captured_env.extend(&binder, arg.clone());
                    eval(&inner, &body, &captured_ctx)
                }),
            )))
        }
        PTerm::App { fun, arg } => {
            let f = eval(env, fun, ctx)?;
            let a = eval(env, arg, ctx)?;
            apply_sem(&f, &a)
        }
        PTerm::Fix(inner) => {
            let f = eval(env, inner, ctx)?;
            fix_iterate(&f, ctx.cfg.fix_iters)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{pow2_neg, rat};
    use crate::subdist::pointwise_leq;
    use crate::syntax::parse;
    use num::One;

    fn cfg(d: usize, c: u64) -> DenoteConfig {
        DenoteConfig { fix_iters: d, support_cap: c }
    }

    fn ground(env: &SemEnv, src: &str, config: &DenoteConfig) -> SubDist {
        denote(env, &parse(src).unwrap(), config)
            .unwrap()
            .as_nat()
            .unwrap()
            .clone()
    }

    fn geometric_src() -> &'static str {
        "fix(\\f:nat->nat. \\x:nat. x (+1/2) (f) (succ(x))) (0)"
    }

    #[test]
    fn bottom_at_ground_is_empty() {
        assert_eq!(bottom(&PType::Nat).as_nat().unwrap(), &SubDist::empty());
    }

    #[test]
    fn bottom_functions_return_bottom() {
        let f = bottom(&PType::arrow(PType::Nat, PType::Nat));
        let out = apply_sem(&f, &SemValue::Nat(SubDist::dirac(5))).unwrap();
        assert!(out.as_nat().unwrap().is_empty());

        let g = bottom(&PType::arrow(
            PType::Nat,
            PType::arrow(PType::Nat, PType::Nat),
        ));
        let once = apply_sem(&g, &SemValue::Nat(SubDist::dirac(0))).unwrap();
        let twice = apply_sem(&once, &SemValue::Nat(SubDist::dirac(1))).unwrap();
        assert!(twice.as_nat().unwrap().is_empty());
    }

    #[test]
    fn numerals_denote_diracs() {
        let env = SemEnv::empty();
        let config = DenoteConfig::default();
        for n in 0..=20 {
            let v = denote(&env, &PTerm::Num(n), &config).unwrap();
            assert_eq!(v.as_nat().unwrap(), &SubDist::dirac(n));
        }
    }

    #[test]
    fn coin_denotes_its_two_point_distribution() {
        let d = ground(&SemEnv::empty(), "coin(1/3)", &DenoteConfig::default());
        assert_eq!(d.weight(0), rat(1, 3));
        assert_eq!(d.weight(1), rat(2, 3));
        assert_eq!(d.mass(), Rat::one());
    }

    #[test]
    fn succ_shifts_mass() {
        let env = SemEnv::empty();
        let config = DenoteConfig::default();
        let f = denote(&env, &parse("\\x:nat. succ(x)").unwrap(), &config).unwrap();
        let half = SubDist::from_pairs([(0, rat(1, 2))]).unwrap();
        let out = apply_sem(&f, &SemValue::Nat(half)).unwrap();
        assert_eq!(
            out.as_nat().unwrap(),
            &SubDist::from_pairs([(1, rat(1, 2))]).unwrap()
        );
    }

    #[test]
    fn identity_function_is_identity() {
        let env = SemEnv::empty();
        let config = DenoteConfig::default();
        let f = denote(&env, &parse("\\x:nat. x").unwrap(), &config).unwrap();
        let out = apply_sem(&f, &SemValue::Nat(SubDist::dirac(2))).unwrap();
        assert_eq!(out.as_nat().unwrap(), &SubDist::dirac(2));
    }

    #[test]
    fn fix_of_identity_is_bottom() {
        let env = SemEnv::empty();
        for d in [0, 1, 5, 60] {
            let dist = ground(&env, "fix(\\x:nat. x)", &cfg(d, 64));
            assert!(dist.is_empty(), "nonempty at D={d}");
        }
    }

    #[test]
    fn constant_map_fixes_in_one_iteration() {
        let env = SemEnv::empty();
        let config = DenoteConfig::default();
        let f = denote(&env, &parse("\\x:nat. 3").unwrap(), &config).unwrap();
        let out = fix_iterate(&f, 1).unwrap();
        assert_eq!(out.as_nat().unwrap(), &SubDist::dirac(3));
        assert!(fix_iterate(&f, 0).unwrap().as_nat().unwrap().is_empty());
    }

    #[test]
    fn geometric_generator_three_iterations() {
        let env = SemEnv::empty();
        let config = DenoteConfig::default();
        let gen = parse("\\f:nat->nat. \\x:nat. x (+1/2) (f) (succ(x))").unwrap();
        let f = denote(&env, &gen, &config).unwrap();
        let third = fix_iterate(&f, 3).unwrap();
        let out = apply_sem(&third, &SemValue::Nat(SubDist::dirac(0))).unwrap();
        let expect = SubDist::from_pairs([
            (0, rat(1, 2)),
            (1, rat(1, 4)),
            (2, rat(1, 8)),
        ])
        .unwrap();
        assert_eq!(out.as_nat().unwrap(), &expect);
    }

    #[test]
    fn geometric_program_closed_form_at_d40_c40() {
        let env = SemEnv::empty();
        let (v, dropped) =
            denote_traced(&env, &parse(geometric_src()).unwrap(), &cfg(40, 40)).unwrap();
        let d = v.as_nat().unwrap();
        for n in 0..40u64 {
            assert_eq!(d.weight(n), pow2_neg(n as u32 + 1), "weight at {n}");
        }
        assert_eq!(d.weight(40), Rat::zero());
        assert_eq!(d.mass(), Rat::one() - pow2_neg(40));
        assert_eq!(dropped, Rat::zero());
    }

    #[test]
    fn geometric_program_at_defaults() {
        let d = ground(&SemEnv::empty(), geometric_src(), &DenoteConfig::default());
        for n in 0..60u64 {
            assert_eq!(d.weight(n), pow2_neg(n as u32 + 1));
        }
        assert_eq!(d.mass(), Rat::one() - pow2_neg(60));
    }

    #[test]
    fn truncation_reports_discarded_mass() {
        let env = SemEnv::empty();
        let (v, dropped) =
            denote_traced(&env, &parse(geometric_src()).unwrap(), &cfg(40, 2)).unwrap();
        let d = v.as_nat().unwrap();
        assert_eq!(
            d,
            &SubDist::from_pairs([
                (0, rat(1, 2)),
                (1, rat(1, 4)),
                (2, rat(1, 8)),
            ])
            .unwrap()
        );
        assert!(dropped > Rat::zero());

        let (_, none) =
            denote_traced(&env, &parse("succ(succ(coin(1/2)))").unwrap(), &cfg(0, 64)).unwrap();
        assert_eq!(none, Rat::zero());
    }

    #[test]
    fn truncation_drops_out_of_range_numerals() {
        let d = ground(&SemEnv::empty(), "70", &cfg(0, 64));
        assert!(d.is_empty());
        let d = ground(&SemEnv::empty(), "64", &cfg(0, 64));
        assert_eq!(d, SubDist::dirac(64));
    }

    #[test]
    fn kleene_iterates_are_monotone_in_d() {
        let env = SemEnv::empty();
        let walk = "fix(\\f:nat->nat. \\x:nat. (f) (succ(x)) (+1/3) x) (0)";
        for src in [geometric_src(), walk] {
            let mut prev = ground(&env, src, &cfg(0, 64));
            for d in [1, 2, 5, 13, 30, 60] {
                let cur = ground(&env, src, &cfg(d, 64));
                assert!(pointwise_leq(&prev, &cur), "not monotone at D={d} for {src}");
                prev = cur;
            }
        }
    }

    #[test]
    fn truncation_is_monotone_in_c() {
        let env = SemEnv::empty();
        let mut prev = ground(&env, geometric_src(), &cfg(40, 1));
        for c in [2, 5, 10, 40, 64] {
            let cur = ground(&env, geometric_src(), &cfg(40, c));
            assert!(pointwise_leq(&prev, &cur), "not monotone at C={c}");
            prev = cur;
        }
    }

    #[test]
    fn mass_never_exceeds_one() {
        let env = SemEnv::empty();
        let sources = [
            "coin(1/2)",
            "succ(coin(2/3))",
            "if(coin(1/2), 0, z. succ(succ(z)))",
            geometric_src(),
            "fix(\\x:nat. x)",
            "succ(coin(1/4)) (+1/3) coin(1/2)",
        ];
        for src in sources {
            let d = ground(&env, src, &DenoteConfig::default());
            assert!(d.mass() <= Rat::one(), "mass > 1 for {src}");
        }
    }

    #[test]
    fn fix_free_terms_ignore_iteration_depth() {
        let env = SemEnv::empty();
        let src = "succ(coin(1/4)) (+1/3) coin(1/2)";
        let a = ground(&env, src, &cfg(0, 64));
        let b = ground(&env, src, &cfg(60, 64));
        assert_eq!(a, b);
        assert_eq!(a.weight(0), rat(1, 3));
        assert_eq!(a.weight(1), rat(5, 12));
        assert_eq!(a.weight(2), rat(1, 4));
    }

    #[test]
    fn if_keeps_the_branch_type_when_weights_vanish() {
        let env = SemEnv::empty();
        let config = DenoteConfig::default();
        let sure_zero = ground(&env, "if(coin(1), 7, z. z)", &config);
        assert_eq!(sure_zero, SubDist::dirac(7));
        let sure_succ = ground(&env, "if(coin(0), 7, z. succ(z))", &config);
        assert_eq!(sure_succ, SubDist::dirac(1));
        let diverging = ground(&env, "if(fix(\\x:nat. x), 5, z. z)", &config);
        assert!(diverging.is_empty());
    }

    #[test]
    fn if_binds_the_predecessor_dirac() {
        // Scrutinee 2/3 at index 2: branch sees z |-> dirac(1).
        let d = ground(
            &SemEnv::empty(),
            "if(succ(succ(coin(2/3))), 9, z. z)",
            &DenoteConfig::default(),
        );
        assert_eq!(d.weight(1), rat(2, 3));
        assert_eq!(d.weight(2), rat(1, 3));
    }

    #[test]
    fn higher_order_application() {
        let env = SemEnv::empty();
        let config = DenoteConfig::default();
        let twice = parse("(\\f:nat->nat. \\x:nat. (f) ((f) (x))) (\\y:nat. succ(y)) (3)").unwrap();
        let d = denote(&env, &twice, &config).unwrap();
        assert_eq!(d.as_nat().unwrap(), &SubDist::dirac(5));
    }

    #[test]
    fn affine_compatibility_on_single_use_bodies() {
        let env = SemEnv::empty();
        let config = DenoteConfig::default();
        let funs = [
            "\\x:nat. x",
            "\\x:nat. succ(x)",
            "\\x:nat. if(x, 0, z. z)",
            "\\x:nat. x (+1/4) coin(1/3)",
            "\\x:nat. if(x, coin(1/2), z. succ(succ(z)))",
        ];
        let xs = [
            SubDist::dirac(0),
            SubDist::from_pairs([(1, rat(1, 2)), (3, rat(1, 2))]).unwrap(),
            SubDist::from_pairs([(0, rat(1, 3)), (2, rat(1, 3)), (5, rat(1, 3))]).unwrap(),
        ];
        let weights = [rat(1, 2), rat(1, 3), rat(1, 6)];
        let mixed = convex_combine(&weights, &xs).unwrap();
        for src in funs {
            let f = denote(&env, &parse(src).unwrap(), &config).unwrap();
            let lhs = apply_sem(&f, &SemValue::Nat(mixed.clone()))
                .unwrap()
                .as_nat()
                .unwrap()
                .clone();
            let images = xs
                .iter()
                .map(|x| {
                    apply_sem(&f, &SemValue::Nat(x.clone()))
                        .unwrap()
                        .as_nat()
                        .unwrap()
                        .clone()
                })
                .collect::<Vec<_>>();
            let rhs = convex_combine(&weights, &images).unwrap();
            assert_eq!(lhs, rhs, "affinity failed for {src}");
        }
    }

    #[test]
    fn type_mismatches_are_reported() {
        let env = SemEnv::empty();
        let config = DenoteConfig::default();
        assert!(matches!(
            denote(&env, &parse("(0) (0)").unwrap(), &config),
            Err(SemError::TypeMismatch(_))
        ));
        assert!(matches!(
            denote(&env, &PTerm::var("ghost"), &config),
            Err(SemError::TypeMismatch(_))
        ));
        let not_endo = denote(&env, &parse("\\x:nat. \\y:nat. x").unwrap(), &config).unwrap();
        assert!(matches!(
            fix_iterate(&not_endo, 3),
            Err(SemError::TypeMismatch(_))
        ));
        let id = denote(&env, &parse("\\x:nat. x").unwrap(), &config).unwrap();
        let wrong_arg = apply_sem(&id, &id);
        assert!(matches!(wrong_arg, Err(SemError::TypeMismatch(_))));
    }

    #[test]
    fn combine_sem_interpolates_functions() {
        let env = SemEnv::empty();
        let config = DenoteConfig::default();
        let s = denote(&env, &parse("\\x:nat. succ(x)").unwrap(), &config).unwrap();
        let i = denote(&env, &parse("\\x:nat. x").unwrap(), &config).unwrap();
        let mix = combine_sem(&[(rat(1, 2), s), (rat(1, 2), i)]).unwrap();
        let out = apply_sem(&mix, &SemValue::Nat(SubDist::dirac(4))).unwrap();
        assert_eq!(
            out.as_nat().unwrap(),
            &SubDist::from_pairs([(4, rat(1, 2)), (5, rat(1, 2))]).unwrap()
        );
    }

    #[test]
    fn values_cross_thread_boundaries() {
        let env = SemEnv::empty();
        let config = DenoteConfig::default();
        let f = denote(&env, &parse("\\x:nat. succ(x)").unwrap(), &config).unwrap();
        let handle = std::thread::spawn(move || {
            apply_sem(&f, &SemValue::Nat(SubDist::dirac(0)))
                .unwrap()
                .as_nat()
                .unwrap()
                .clone()
        });
        assert_eq!(handle.join().unwrap(), SubDist::dirac(1));
    }
}
