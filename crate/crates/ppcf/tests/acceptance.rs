//! The exit gate: nine numbered checks over the bundled corpus and fresh
//! random instances, one printed pass/fail line each. Checks are exact
//! rational computations except where a statistical band is stated.

use num::{One, Signed, ToPrimitive, Zero};
use ppcf::adequacy::{check_adequacy, check_invariance, check_kstep};
use ppcf::denotational::{denote, DenoteConfig, SemEnv};
use ppcf::exec::{sample_many, tally};
use ppcf::fpc::{
    is_value, nat_literal, nat_type, normalize, step_fpc, typecheck_fpc, FTerm, FType, Normalized,
    TermCtx, TypeCtx,
};
use ppcf::generate::Gen;
use ppcf::operational::{distribution, prob_numeral, step, StepOutcome};
use ppcf::prob::{pow2_neg, rat, Rat};
use ppcf::skew::{skew_leq, skew_sum_combine, SkewSumElem};
use ppcf::stoch::{block_diag, copair, inj1, inj2, kleisli_mult, FiniteSubDist, StochMatrix};
use ppcf::subdist::{convex_combine, pointwise_leq, scale, DistError, SubDist};
use ppcf::syntax::{parse, subst, typecheck, PTerm, PType, TypingCtx};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

fn corpus_term(name: &str) -> PTerm {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    let text =
        fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn ground(m: &PTerm, cfg: &DenoteConfig) -> SubDist {
    denote(&SemEnv::empty(), m, cfg)
        .expect("corpus terms denote")
        .as_nat()
        .expect("ground type")
        .clone()
}

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn run(&mut self, number: usize, label: &str, budget: Option<Duration>, body: impl FnOnce()) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(body));
        let elapsed = start.elapsed();
        let over_budget = outcome.is_ok() && budget.is_some_and(|b| elapsed > b);
        let pass = outcome.is_ok() && !over_budget;
        println!(
            "criterion {number} ({label}): {} in {:.2}s",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if let Err(payload) = outcome {
            let message = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("panic without message");
            self.failures.push(format!("criterion {number}: {message}"));
        } else if over_budget {
            self.failures.push(format!(
                "criterion {number}: {:.2}s exceeded the {:.0?} budget",
                elapsed.as_secs_f64(),
                budget.unwrap()
            ));
        }
    }
}

#[test]
fn acceptance_gate() {
    let mut gate = Gate { failures: Vec::new() };

    gate.run(1, "coin exactness", Some(Duration::from_secs(1)), || {
        let mut gen = Gen::new(1);
        let cfg = DenoteConfig::default();
        for _ in 0..20 {
            let kappa = gen.prob(97);
            let coin = PTerm::Coin(kappa.clone());
            let dist = distribution(&coin, 1).unwrap();
            assert!(dist.residual().is_zero());
            assert_eq!(&dist.weight(&PTerm::Num(0)), kappa.rat());
            assert_eq!(&dist.weight(&PTerm::Num(1)), kappa.complement().rat());
            let den = ground(&coin, &cfg);
            assert_eq!(&den.weight(0), kappa.rat());
            assert_eq!(&den.weight(1), kappa.complement().rat());
        }
    });

    gate.run(2, "adequacy on the corpus", Some(Duration::from_secs(10)), || {
        let cfg = DenoteConfig::default();
        let tol = pow2_neg(40);
        let programs: [(&str, fn(u64) -> Rat); 6] = [
            ("geometric.ppcf", |n| pow2_neg(n as u32 + 1)),
            ("biased_walk.ppcf", |n| rat(2, 3i64.pow(n as u32 + 1))),
            ("cascade_two.ppcf", |n| match n {
                0 => rat(1, 2),
                1 => rat(1, 6),
                2 => rat(1, 3),
                _ => Rat::zero(),
            }),
            ("cascade_three.ppcf", |n| match n {
                0 => rat(1, 8),
                1 => rat(19, 40),
                2 => rat(2, 5),
                _ => Rat::zero(),
            }),
            ("cascade_four.ppcf", |n| match n {
                0 => rat(1, 6),
                1 => rat(1, 6),
                2 => rat(1, 4),
                3 => rat(5, 12),
                _ => Rat::zero(),
            }),
            ("diverge.ppcf", |_| Rat::zero()),
        ];
        for (name, oracle) in programs {
            let m = corpus_term(name);
            for n in 0..=5u64 {
                let report = check_adequacy(&m, n, 200, &cfg, &tol)
                    .unwrap_or_else(|e| panic!("{name}, n={n}: {e}"));
                assert!(report.pass, "{name}, n={n}: gap {}", report.gap);
                assert_eq!(report.op_lower, oracle(n), "{name}, n={n}: operational side");
                assert_eq!(report.den_lower, oracle(n), "{name}, n={n}: denotational side");
            }
        }
    });

    gate.run(3, "exact invariance on 200 random terms", Some(Duration::from_secs(30)), || {
        // Cap far above any numeral a depth-6 fix-free term can reach, so
        // truncation never perturbs the exact comparison.
        let cfg = DenoteConfig { fix_iters: 60, support_cap: 1024 };
        let tol = Rat::zero();
        for seed in 0..200u64 {
            let m = Gen::new(seed).ppcf_nat(6, false);
            let inv = check_invariance(&m, &cfg, &tol).unwrap();
            assert!(inv.exact && inv.pass, "seed {seed}: invariance defect {}", inv.defect);
            for k in 0..=5 {
                let rep = check_kstep(&m, k, &cfg, &tol).unwrap();
                assert!(rep.exact && rep.pass, "seed {seed}, k={k}: defect {}", rep.defect);
            }
        }
    });

    gate.run(4, "monotone convergence on the corpus", None, || {
        let names = [
            "geometric.ppcf",
            "biased_walk.ppcf",
            "cascade_two.ppcf",
            "cascade_three.ppcf",
            "cascade_four.ppcf",
            "diverge.ppcf",
        ];
        let mut violations = 0usize;
        for name in names {
            let m = corpus_term(name);
            for n in 0..=5u64 {
                let mut last = Rat::zero();
                for k in (0..=60).step_by(10) {
                    let p = prob_numeral(&m, n, k).unwrap();
                    if p < last {
                        violations += 1;
                    }
                    last = p;
                }
            }
            let mut prev: Option<SubDist> = None;
            for d in (0..=60).step_by(10) {
                let den = ground(&m, &DenoteConfig { fix_iters: d, support_cap: 64 });
                if let Some(p) = &prev {
                    if !pointwise_leq(p, &den) {
                        violations += 1;
                    }
                }
                prev = Some(den);
            }
        }
        assert_eq!(violations, 0, "monotonicity violations found");
    });

    gate.run(5, "Lawvere algebra laws", Some(Duration::from_secs(5)), || {
        let mut gen = Gen::new(5);
        for _ in 0..100 {
            // Monad laws for the flattening of finite sub-distributions.
            let n = 1 + gen.usize_below(5);
            let mid_arity = 1 + gen.usize_below(5);
            let point_arity = 1 + gen.usize_below(5);
            let d = gen.finite_subdist(n);
            let mids: Vec<FiniteSubDist> =
                (0..n).map(|_| gen.finite_subdist(mid_arity)).collect();
            let points: Vec<FiniteSubDist> =
                (0..mid_arity).map(|_| gen.finite_subdist(point_arity)).collect();
            let i = gen.usize_below(n);
            assert_eq!(
                kleisli_mult(&FiniteSubDist::dirac(i, n), &mids).unwrap(),
                mids[i]
            );
            let etas: Vec<FiniteSubDist> = (0..n).map(|j| FiniteSubDist::dirac(j, n)).collect();
            assert_eq!(kleisli_mult(&d, &etas).unwrap(), d);
            let lhs =
                kleisli_mult(&kleisli_mult(&d, &mids).unwrap(), &points).unwrap();
            let flattened: Vec<FiniteSubDist> =
                mids.iter().map(|mid| kleisli_mult(mid, &points).unwrap()).collect();
            assert_eq!(lhs, kleisli_mult(&d, &flattened).unwrap());

            // Category laws.
            let (p, m_dim, n_dim, q) = (
                1 + gen.usize_below(5),
                1 + gen.usize_below(5),
                1 + gen.usize_below(5),
                1 + gen.usize_below(5),
            );
            let a = gen.substochastic(p, m_dim);
            let b = gen.substochastic(m_dim, n_dim);
            let c = gen.substochastic(n_dim, q);
            assert_eq!(
                a.compose(&b).unwrap().compose(&c).unwrap(),
                a.compose(&b.compose(&c).unwrap()).unwrap()
            );
            assert_eq!(StochMatrix::identity(p).compose(&a).unwrap(), a);
            assert_eq!(a.compose(&StochMatrix::identity(m_dim)).unwrap(), a);

            // Coproduct universal property.
            let (n1, n2) = (1 + gen.usize_below(4), 1 + gen.usize_below(4));
            let a1 = gen.substochastic(p, n1);
            let a2 = gen.substochastic(p, n2);
            let cp = copair(&a1, &a2).unwrap();
            assert_eq!(cp.compose(&inj1(n1, n2)).unwrap(), a1);
            assert_eq!(cp.compose(&inj2(n1, n2)).unwrap(), a2);
            let arbitrary = gen.substochastic(p, n1 + n2);
            assert_eq!(
                copair(
                    &arbitrary.compose(&inj1(n1, n2)).unwrap(),
                    &arbitrary.compose(&inj2(n1, n2)).unwrap()
                )
                .unwrap(),
                arbitrary
            );

            // Functoriality of the monoidal sum.
            let f1 = gen.substochastic(p, n1);
            let g1 = gen.substochastic(n1, q);
            let f2 = gen.substochastic(m_dim, n2);
            let g2 = gen.substochastic(n2, n_dim);
            assert_eq!(
                block_diag(&f1, &f2).compose(&block_diag(&g1, &g2)).unwrap(),
                block_diag(&f1.compose(&g1).unwrap(), &f2.compose(&g2).unwrap())
            );
            assert_eq!(
                block_diag(&StochMatrix::identity(p), &StochMatrix::identity(q)),
                StochMatrix::identity(p + q)
            );
        }
    });

    gate.run(6, "convex and skew-sum axioms", Some(Duration::from_secs(5)), || {
        let mut gen = Gen::new(6);
        let combine = |ws: &[Rat], ds: &[&SubDist]| -> Result<SubDist, DistError> {
            let owned: Vec<SubDist> = ds.iter().map(|d| (*d).clone()).collect();
            convex_combine(ws, &owned)
        };
        for _ in 0..200 {
            // Barycenter law: nested combinations flatten to product weights.
            let xs: Vec<SubDist> = (0..3).map(|_| gen.subdist(6)).collect();
            let r = gen.sub_weights(2);
            let s: Vec<Vec<Rat>> = (0..2).map(|_| gen.sub_weights(3)).collect();
            let inner: Vec<SubDist> =
                s.iter().map(|row| convex_combine(row, &xs).unwrap()).collect();
            let nested = convex_combine(&r, &inner).unwrap();
            let flat: Vec<Rat> = (0..3)
                .map(|j| {
                    r.iter().zip(&s).fold(Rat::zero(), |acc, (ri, row)| acc + ri * &row[j])
                })
                .collect();
            assert_eq!(nested, convex_combine(&flat, &xs).unwrap());

            // Scale and convex_combine cohere.
            let x = gen.subdist(6);
            let lam = gen.rat01(9);
            let mu = gen.rat01(9);
            assert_eq!(
                scale(&lam, &scale(&mu, &x).unwrap()).unwrap(),
                scale(&(lam.clone() * &mu), &x).unwrap()
            );
            assert_eq!(convex_combine(&[lam.clone()], &[x.clone()]).unwrap(), scale(&lam, &x).unwrap());
            let ws = gen.sub_weights(2);
            let ys = vec![gen.subdist(6), gen.subdist(6)];
            let scaled: Vec<Rat> = ws.iter().map(|w| w * &lam).collect();
            assert_eq!(
                convex_combine(&scaled, &ys).unwrap(),
                scale(&lam, &convex_combine(&ws, &ys).unwrap()).unwrap()
            );

            // Skew-sum unit and order.
            let pool: Vec<SkewSumElem<SubDist, SubDist>> =
                (0..4).map(|_| skew_elem(&mut gen)).collect();
            let hit = gen.usize_below(pool.len());
            let mut unit = vec![Rat::zero(); pool.len()];
            unit[hit] = Rat::one();
            let picked = skew_sum_combine(&unit, &pool, combine, combine).unwrap();
            assert_eq!(picked, pool[hit]);
            let leq = |e1: &SkewSumElem<SubDist, SubDist>,
                       e2: &SkewSumElem<SubDist, SubDist>| {
                skew_leq(e1, e2, |a, b| pointwise_leq(a, b), |a, b| pointwise_leq(a, b))
            };
            for e in &pool {
                assert!(leq(e, e));
            }
            let below = SkewSumElem::pure_left(gen.subdist(4));
            let above = SkewSumElem::pure_right(gen.subdist(4));
            assert!(leq(&below, &above));
            if leq(&pool[0], &pool[1]) && leq(&pool[1], &pool[0]) {
                assert_eq!(pool[0], pool[1]);
            }
        }
    });

    gate.run(7, "pPCF subject reduction and substitution", None, || {
        let empty = TypingCtx::empty();
        for seed in 0..500u64 {
            let mut gen = Gen::new(seed);
            let m = gen.ppcf_nat(5, true);
            let mut frontier = vec![m];
            for _ in 0..3 {
                let mut next = Vec::new();
                for term in frontier {
                    match step(&term).unwrap() {
                        StepOutcome::WeakNormal => {}
                        StepOutcome::Det(successor) => next.push(successor),
                        StepOutcome::Branch { if_heads, if_tails, .. } => {
                            next.push(if_heads);
                            next.push(if_tails);
                        }
                    }
                }
                for successor in &next {
                    assert_eq!(
                        typecheck(&empty, successor).unwrap_or_else(|e| panic!("seed {seed}: {e}")),
                        PType::Nat,
                        "seed {seed}"
                    );
                }
                frontier = next;
            }

            let hole_ty = if gen.flip(1, 2) {
                PType::Nat
            } else {
                PType::arrow(PType::Nat, PType::Nat)
            };
            let open = gen.ppcf_nat_open(&[("h".to_string(), hole_ty.clone())], 3, true);
            let ctx = TypingCtx::empty().extend("h", hole_ty.clone());
            assert_eq!(typecheck(&ctx, &open).unwrap(), PType::Nat, "seed {seed}");
            let filler = match hole_ty {
                PType::Nat => gen.ppcf_nat(3, true),
                PType::Arrow(..) => gen.ppcf_linear_lambda(2),
            };
            assert_eq!(typecheck(&empty, &filler).unwrap(), hole_ty, "seed {seed}");
            let closed = subst(&open, "h", &filler);
            assert_eq!(typecheck(&empty, &closed).unwrap(), PType::Nat, "seed {seed}");
        }
    });

    gate.run(8, "FPC progress, preservation, cancellation", None, || {
        let theta = TypeCtx::empty();
        let gamma = TermCtx::empty();
        for seed in 0..200u64 {
            let (m, ty) = Gen::new(seed).fpc_program(3);
            let mut seen = vec![m.clone()];
            let mut frontier = vec![m.clone()];
            while let Some(t) = frontier.pop() {
                assert!(
                    is_value(&t) || !step_fpc(&t).is_empty(),
                    "seed {seed}: stuck non-value"
                );
                for s in step_fpc(&t) {
                    if !seen.contains(&s) {
                        assert!(seen.len() < 2000, "seed {seed}: graph too large");
                        seen.push(s.clone());
                        frontier.push(s);
                    }
                }
            }
            for t in &seen {
                assert_eq!(
                    typecheck_fpc(&theta, &gamma, t)
                        .unwrap_or_else(|e| panic!("seed {seed}: {e}")),
                    ty,
                    "seed {seed}"
                );
            }
            let wrapped = FTerm::elim(FTerm::intro(FType::mu("Z", ty.clone()), m.clone()));
            let successors = step_fpc(&wrapped);
            assert_eq!(successors.first(), Some(&m), "seed {seed}: cancellation missing");
        }
        let one = nat_literal(1);
        assert_eq!(typecheck_fpc(&theta, &gamma, &one).unwrap(), nat_type());
        match normalize(&one, 10) {
            Normalized::Normal(v) => assert_eq!(v, one),
            Normalized::OutOfFuel(_) => panic!("succ(zero) is already normal"),
        }
    });

    gate.run(9, "sampler statistics", None, || {
        let geometric = corpus_term("geometric.ppcf");
        let runs = 100_000;
        let batch = sample_many(&geometric, 0, runs, 10_000).unwrap();
        let t = tally(&batch);
        assert_eq!(t.total(), runs);
        assert_eq!(t.timeouts, 0);
        assert_eq!(t.other_values, 0);
        let freq = t.frequency(0);
        let sigma = (0.25 / runs as f64).sqrt();
        let dev = (freq - rat(1, 2)).abs().to_f64().unwrap();
        assert!(dev <= 3.0 * sigma, "frequency of 0 off by {dev:.5} > {:.5}", 3.0 * sigma);
        let again = sample_many(&geometric, 0, runs, 10_000).unwrap();
        assert_eq!(batch, again);
    });

    if !gate.failures.is_empty() {
        for failure in &gate.failures {
            eprintln!("{failure}");
        }
        panic!("{} of 9 acceptance criteria failed", gate.failures.len());
    }
}

fn skew_elem(gen: &mut Gen) -> SkewSumElem<SubDist, SubDist> {
    match gen.usize_below(3) {
        0 => SkewSumElem::pure_left(gen.subdist(4)),
        1 => SkewSumElem::pure_right(gen.subdist(4)),
        _ => {
            let lambda = loop {
                let l = gen.rat01(7);
                if !l.is_zero() && !l.is_one() {
                    break l;
                }
            };
            SkewSumElem::mixed(gen.subdist(4), gen.subdist(4), lambda).unwrap()
        }
    }
}
