//! Seeded random generation of the workbench's objects: rationals, finite
//! sub-distributions, sub-stochastic matrices, and well-typed terms. Used by
//! the test suites; deterministic for a fixed seed.

use crate::fpc::{nat_type, unit_type, unit_value, FTerm, FType};
use crate::prob::{rat_nat, Prob, Rat};
use crate::stoch::{FiniteSubDist, StochMatrix};
use crate::subdist::SubDist;
use crate::syntax::{PTerm, PType};
use num::bigint::BigInt;
use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    rng: ChaCha8Rng,
    names: usize,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), names: 0 }
    }

    fn fresh(&mut self) -> String {
        self.names += 1;
        format!("v{}", self.names)
    }

    pub fn usize_below(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.usize_below(items.len())]
    }

    pub fn flip(&mut self, num: u32, den: u32) -> bool {
        self.rng.gen_range(0..den) < num
    }

    /// A rational in [0, 1] with denominator at most `den_bound`.
    pub fn rat01(&mut self, den_bound: u64) -> Rat {
        let den = self.rng.gen_range(1..=den_bound);
        let num = self.rng.gen_range(0..=den);
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn prob(&mut self, den_bound: u64) -> Prob {
        Prob::new(self.rat01(den_bound)).expect("rat01 stays in range")
    }

    /// Nonnegative weights with Σ ≤ 1, sharing one denominator.
    pub fn sub_weights(&mut self, n: usize) -> Vec<Rat> {
        let raw: Vec<u64> = (0..n).map(|_| self.rng.gen_range(0..=4u64)).collect();
        let slack = self.rng.gen_range(0..=3u64);
        let den = raw.iter().sum::<u64>() + slack;
        if den == 0 {
            return vec![Rat::zero(); n];
        }
        raw.iter()
            .map(|w| Rat::new(BigInt::from(*w), BigInt::from(den)))
            .collect()
    }

    /// Weights with Σ exactly 1 (n must be positive).
    pub fn convex_weights(&mut self, n: usize) -> Vec<Rat> {
        loop {
            let raw: Vec<u64> = (0..n).map(|_| self.rng.gen_range(0..=4u64)).collect();
            let den: u64 = raw.iter().sum();
            if den > 0 {
                return raw
                    .iter()
                    .map(|w| Rat::new(BigInt::from(*w), BigInt::from(den)))
                    .collect();
            }
        }
    }

    pub fn subdist(&mut self, max_index: u64) -> SubDist {
        let n = self.rng.gen_range(0..=4usize);
        let weights = self.sub_weights(n);
        let pairs = weights
            .into_iter()
            .map(|w| (self.rng.gen_range(0..=max_index), w))
            .collect::<Vec<_>>();
        SubDist::from_pairs(pairs).expect("sub_weights keep mass under 1")
    }

    pub fn finite_subdist(&mut self, arity: usize) -> FiniteSubDist {
        FiniteSubDist::new(self.sub_weights(arity)).expect("sub_weights keep mass under 1")
    }

    pub fn substochastic(&mut self, rows: usize, cols: usize) -> StochMatrix {
        let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(cols);
        for _ in 0..cols {
            columns.push(self.sub_weights(rows));
        }
        let entries = (0..rows)
            .map(|i| columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        StochMatrix::new(rows, cols, entries).expect("columns are sub-stochastic")
    }

    /// A pair (A, B) with A ≤ B entrywise, both sub-stochastic.
    pub fn ascending_pair(&mut self, rows: usize, cols: usize) -> (StochMatrix, StochMatrix) {
        let upper = self.substochastic(rows, cols);
        let entries = (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| {
                        let scale = rat_nat(self.rng.gen_range(0..=4)) / rat_nat(4);
                        upper.entry(i, j) * scale
                    })
                    .collect()
            })
            .collect();
        let lower = StochMatrix::new(rows, cols, entries).expect("scaled-down columns stay valid");
        (lower, upper)
    }

    /// A closed well-typed term of ground type, built type-directed so it
    /// never gets stuck. With allow_fix it may diverge; without it the term
    /// denotes exactly at any iteration budget.
    pub fn ppcf_nat(&mut self, depth: usize, allow_fix: bool) -> PTerm {
        self.ppcf_nat_open(&[], depth, allow_fix)
    }

    /// Like ppcf_nat but over the given free-variable context, so the
    /// result may mention those variables.
    pub fn ppcf_nat_open(
        &mut self,
        ctx: &[(String, PType)],
        depth: usize,
        allow_fix: bool,
    ) -> PTerm {
        let mut ctx = ctx.to_vec();
        self.ppcf_term(&mut ctx, &PType::Nat, depth, allow_fix)
    }

    fn ppcf_var_of(&mut self, ctx: &[(String, PType)], ty: &PType) -> Option<PTerm> {
        let hits: Vec<&String> =
            ctx.iter().filter(|(_, t)| t == ty).map(|(x, _)| x).collect();
        if hits.is_empty() {
            None
        } else {
            Some(PTerm::var(hits[self.usize_below(hits.len())]))
        }
    }

    fn ppcf_term(
        &mut self,
        ctx: &mut Vec<(String, PType)>,
        ty: &PType,
        depth: usize,
        allow_fix: bool,
    ) -> PTerm {
        match ty {
            PType::Nat => {
                if depth == 0 {
                    return match self.usize_below(3) {
                        0 => PTerm::Num(self.rng.gen_range(0..=3)),
                        1 => PTerm::Coin(self.prob(6)),
                        _ => self
                            .ppcf_var_of(ctx, &PType::Nat)
                            .unwrap_or(PTerm::Num(self.rng.gen_range(0..=3))),
                    };
                }
                // Leaves get three slots out of nine so deep terms stay
                // common; Succ and If get two slots each.
                match self.usize_below(if allow_fix { 9 } else { 8 }) {
                    0 => PTerm::Num(self.rng.gen_range(0..=3)),
                    1 => PTerm::Coin(self.prob(6)),
                    2 => self
                        .ppcf_var_of(ctx, &PType::Nat)
                        .unwrap_or(PTerm::Num(self.rng.gen_range(0..=3))),
                    3 | 4 => PTerm::succ(self.ppcf_term(ctx, ty, depth - 1, allow_fix)),
                    5 | 6 => {
                        let scrutinee = self.ppcf_term(ctx, &PType::Nat, depth - 1, allow_fix);
                        let zero = self.ppcf_term(ctx, ty, depth - 1, allow_fix);
                        let binder = self.fresh();
                        ctx.push((binder.clone(), PType::Nat));
                        let succ = self.ppcf_term(ctx, ty, depth - 1, allow_fix);
                        ctx.pop();
                        PTerm::iff(scrutinee, zero, &binder, succ)
                    }
                    7 => {
                        let dom = if self.flip(1, 2) {
                            PType::Nat
                        } else {
                            PType::arrow(PType::Nat, PType::Nat)
                        };
                        let fun_ty = PType::arrow(dom.clone(), ty.clone());
                        let fun = self.ppcf_term(ctx, &fun_ty, depth - 1, allow_fix);
                        let arg = self.ppcf_term(ctx, &dom, depth - 1, allow_fix);
                        PTerm::app(fun, arg)
                    }
                    _ => {
                        let gen_ty = PType::arrow(ty.clone(), ty.clone());
                        PTerm::fix(self.ppcf_term(ctx, &gen_ty, depth - 1, allow_fix))
                    }
                }
            }
            PType::Arrow(dom, cod) => {
                if depth > 0 && self.flip(1, 5) {
                    if let Some(v) = self.ppcf_var_of(ctx, ty) {
                        return v;
                    }
                }
                let binder = self.fresh();
                ctx.push((binder.clone(), dom.as_ref().clone()));
                let body =
                    self.ppcf_term(ctx, cod, depth.saturating_sub(1), allow_fix);
                ctx.pop();
                PTerm::lam(&binder, dom.as_ref().clone(), body)
            }
        }
    }

    /// λx. body with exactly one occurrence of x, no fix: denotes a map
    /// that preserves convex combinations exactly.
    pub fn ppcf_linear_lambda(&mut self, depth: usize) -> PTerm {
        let body = self.linear_body("x", depth);
        PTerm::lam("x", PType::Nat, body)
    }

    fn linear_body(&mut self, hole: &str, depth: usize) -> PTerm {
        if depth == 0 {
            return PTerm::var(hole);
        }
        match self.usize_below(5) {
            0 => PTerm::var(hole),
            1 => PTerm::succ(self.linear_body(hole, depth - 1)),
            2 => {
                let zero = self.ppcf_nat(1, false);
                let binder = self.fresh();
                PTerm::iff(self.linear_body(hole, depth - 1), zero, &binder, {
                    PTerm::succ(PTerm::var(&binder))
                })
            }
            3 => {
                let scrutinee = self.ppcf_nat(1, false);
                let binder = self.fresh();
                PTerm::iff(
                    scrutinee,
                    self.linear_body(hole, depth - 1),
                    &binder,
                    PTerm::var(&binder),
                )
            }
            _ => {
                let fun = self.fresh();
                PTerm::app(
                    PTerm::lam(&fun, PType::Nat, PTerm::succ(PTerm::var(&fun))),
                    self.linear_body(hole, depth - 1),
                )
            }
        }
    }

    fn fpc_pool(&mut self) -> FType {
        let bool_ty = FType::sum(unit_type(), unit_type());
        let list1 = FType::mu(
            "X",
            FType::sum(unit_type(), FType::prod(unit_type(), FType::tvar("X"))),
        );
        let pool = [
            unit_type(),
            bool_ty.clone(),
            nat_type(),
            FType::prod(unit_type(), bool_ty),
            FType::arrow(unit_type(), unit_type()),
            list1,
        ];
        pool[self.usize_below(pool.len())].clone()
    }

    /// A closed normal value of a pool type, by structural inhabitation.
    pub fn fpc_value(&mut self, fuel: usize) -> (FTerm, FType) {
        let ty = self.fpc_pool();
        let v = self.inhabit(&ty, fuel);
        (v, ty)
    }

    fn inhabit(&mut self, ty: &FType, fuel: usize) -> FTerm {
        match ty {
            FType::TVar(x) => panic!("cannot inhabit the free type variable {x}"),
            FType::Sum(l, r) => {
                if fuel == 0 || self.flip(2, 3) {
                    FTerm::inl(l.as_ref().clone(), r.as_ref().clone(), self.inhabit(l, fuel))
                } else {
                    FTerm::inr(r.as_ref().clone(), l.as_ref().clone(), self.inhabit(r, fuel))
                }
            }
            FType::Prod(l, r) => {
                FTerm::pair(self.inhabit(l, fuel), self.inhabit(r, fuel))
            }
            FType::Arrow(dom, cod) => {
                // The identity is the only safe pick when the codomain is
                // empty (as in the encoded unit 0 -> 0).
                if dom == cod && (**cod == crate::fpc::void_type() || self.flip(1, 2)) {
                    let x = self.fresh();
                    return FTerm::lam(&x, dom.as_ref().clone(), FTerm::var(&x));
                }
                let x = self.fresh();
                FTerm::lam(&x, dom.as_ref().clone(), self.inhabit(cod, fuel))
            }
            FType::Mu(x, body) => {
                let unfolded = crate::fpc::type_subst(body, x, ty);
                assert_ne!(&unfolded, ty, "cannot inhabit the empty type");
                FTerm::intro(ty.clone(), self.inhabit(&unfolded, fuel.saturating_sub(1)))
            }
        }
    }

    /// A value wrapped in one to three cancel-style redexes, still closed
    /// and of the same type; normalizing recovers some value of that type.
    pub fn fpc_program(&mut self, fuel: usize) -> (FTerm, FType) {
        let (mut m, ty) = self.fpc_value(fuel);
        for _ in 0..self.rng.gen_range(1..=3usize) {
            m = self.fpc_wrap(m, &ty, fuel);
        }
        (m, ty)
    }

    fn fpc_wrap(&mut self, m: FTerm, ty: &FType, fuel: usize) -> FTerm {
        match self.usize_below(5) {
            0 => {
                let x = self.fresh();
                FTerm::app(FTerm::lam(&x, ty.clone(), FTerm::var(&x)), m)
            }
            1 => FTerm::fst(FTerm::pair(m, unit_value())),
            2 => FTerm::snd(FTerm::pair(unit_value(), m)),
            3 => {
                let other = self.fpc_pool();
                let x = self.fresh();
                let y = self.fresh();
                let fallback = self.inhabit(ty, fuel);
                FTerm::case(
                    FTerm::inl(ty.clone(), other, m),
                    &x,
                    FTerm::var(&x),
                    &y,
                    fallback,
                )
            }
            _ => {
                // Z is unused in the body, so the unfolding is ty itself.
                let constant = FType::mu("Z", ty.clone());
                FTerm::elim(FTerm::intro(constant, m))
            }
        }
    }
}
