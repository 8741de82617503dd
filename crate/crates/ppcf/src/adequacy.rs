//! Executable bridges between the two semantics: one-step invariance, the
//! k-step unfolding identity, the adequacy comparison at ground type, and
//! the if-decomposition of limit probabilities.
//!
//! Both semantics produce certified lower bounds of the same limit, so no
//! check ever claims which finite-stage number is larger; fix-free terms
//! must agree exactly, fix-bearing terms within an explicit tolerance.

use crate::denotational::{denote, DenoteConfig, SemEnv, SemError};
use crate::operational::{distribution, power_row, prob_numeral, step, StepOutcome, StuckError};
use crate::prob::{show_rat, Rat};
use crate::subdist::{convex_combine, SubDist};
use crate::syntax::{subst, PTerm};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error(transparent)]
    Stuck(#[from] StuckError),
    #[error(transparent)]
    Sem(#[from] SemError),
    #[error("harness setup: {0}")]
    Setup(String),
}

/// Outcome of an equational check, with both sides kept for diagnosis.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub pass: bool,
    /// Required exact equality (term is fix-free)?
    pub exact: bool,
    /// sup-norm distance between the two sides.
    pub defect: Rat,
    pub lhs: SubDist,
    pub rhs: SubDist,
    pub detail: String,
}

impl CheckReport {
    fn compare(lhs: SubDist, rhs: SubDist, exact: bool, tol: &Rat, what: &str) -> CheckReport {
        let defect = crate::subdist::sup_diff(&lhs, &rhs);
        let pass = if exact { lhs == rhs } else { defect <= *tol };
        let detail = if pass {
            format!("{what}: defect {}", show_rat(&defect))
        } else {
            format!(
                "{what}: defect {} exceeds {}",
                show_rat(&defect),
                if exact { "exact equality".to_string() } else { show_rat(tol) }
            )
        };
        CheckReport { pass, exact, defect, lhs, rhs, detail }
    }
}

fn ground(m: &PTerm, cfg: &DenoteConfig) -> Result<SubDist, HarnessError> {
    Ok(denote(&SemEnv::empty(), m, cfg)?.as_nat()?.clone())
}

/// One-step invariance: [[m]] against the kappa-weighted sum of the
/// denotations of m's one-step successors, both at the same config.
pub fn check_invariance(
    m: &PTerm,
    cfg: &DenoteConfig,
    tol: &Rat,
) -> Result<CheckReport, HarnessError> {
    let lhs = ground(m, cfg)?;
    let successors: Vec<(Rat, PTerm)> = match step(m)? {
        StepOutcome::WeakNormal => {
            // Self-loop of weight one: trivially invariant.
            vec![(Rat::from_integer(1.into()), m.clone())]
        }
        StepOutcome::Det(next) => vec![(Rat::from_integer(1.into()), next)],
        StepOutcome::Branch { kappa, if_heads, if_tails } => vec![
            (kappa.rat().clone(), if_heads),
            (kappa.complement().rat().clone(), if_tails),
        ],
    };
    let weights: Vec<Rat> = successors.iter().map(|(w, _)| w.clone()).collect();
    let dists = successors
        .iter()
        .map(|(_, term)| ground(term, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let rhs = convex_combine(&weights, &dists)
        .map_err(|e| HarnessError::Setup(e.to_string()))?;
    Ok(CheckReport::compare(lhs, rhs, !m.has_fix(), tol, "one-step invariance"))
}

/// k-step identity: [[m]] against the Prob^k-weighted sum of successor
/// denotations, summing over the full row (unabsorbed terms included).
pub fn check_kstep(
    m: &PTerm,
    k: usize,
    cfg: &DenoteConfig,
    tol: &Rat,
) -> Result<CheckReport, HarnessError> {
    let lhs = ground(m, cfg)?;
    let row = power_row(m, k)?;
    let mut weights = Vec::with_capacity(row.len());
    let mut dists = Vec::with_capacity(row.len());
    for (term, w) in &row {
        weights.push(w.clone());
        dists.push(ground(term, cfg)?);
    }
    let rhs = convex_combine(&weights, &dists)
        .map_err(|e| HarnessError::Setup(e.to_string()))?;
    Ok(CheckReport::compare(lhs, rhs, !m.has_fix(), tol, &format!("{k}-step identity")))
}

/// Side-by-side lower bounds for the limit probability of reaching the
/// numeral n: operational at opDepth, denotational at (fixIters,
/// supportCap). Passing means the two bounds agree within tol.
#[derive(Debug, Clone, PartialEq)]
pub struct AdequacyReport {
    pub term: PTerm,
    pub n: u64,
    pub op_lower: Rat,
    pub den_lower: Rat,
    pub gap: Rat,
    pub op_depth: usize,
    pub fix_iters: usize,
    pub support_cap: u64,
    pub tol: Rat,
    pub pass: bool,
}

impl Serialize for AdequacyReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Depths {
            #[serde(rename = "opDepth")]
            op_depth: usize,
            #[serde(rename = "fixIters")]
            fix_iters: usize,
            #[serde(rename = "supportCap")]
            support_cap: u64,
        }
        let mut map = serializer.serialize_map(Some(7))?;
        map.serialize_entry("term", &self.term.to_string())?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("opLower", &show_rat(&self.op_lower))?;
        map.serialize_entry("denLower", &show_rat(&self.den_lower))?;
        map.serialize_entry("gap", &show_rat(&self.gap))?;
        map.serialize_entry(
            "depths",
            &Depths {
                op_depth: self.op_depth,
                fix_iters: self.fix_iters,
                support_cap: self.support_cap,
            },
        )?;
        map.serialize_entry("pass", &self.pass)?;
        map.end()
    }
}

pub fn check_adequacy(
    m: &PTerm,
    n: u64,
    op_depth: usize,
    cfg: &DenoteConfig,
    tol: &Rat,
) -> Result<AdequacyReport, HarnessError> {
    let op_lower = prob_numeral(m, n, op_depth)?;
    let den_lower = ground(m, cfg)?.weight(n);
    let gap = if op_lower >= den_lower {
        op_lower.clone() - &den_lower
    } else {
        den_lower.clone() - &op_lower
    };
    let pass = gap <= *tol;
    Ok(AdequacyReport {
        term: m.clone(),
        n,
        op_lower,
        den_lower,
        gap,
        op_depth,
        fix_iters: cfg.fix_iters,
        support_cap: cfg.support_cap,
        tol: tol.clone(),
        pass,
    })
}

/// Finite-depth if-decomposition, z-substituted reading:
///   Prob_{if(M,P,z.Q),n}  vs  Prob_{M,0} Prob_{P,n} + sum_k Prob_{M,k+1} Prob_{Q[z|->k],n}
/// Both sides are lower bounds of the same limit; they must agree up to
/// the residual slack of every distribution involved.
#[derive(Debug, Clone, PartialEq)]
pub struct IfEquationReport {
    pub lhs: Rat,
    pub rhs: Rat,
    pub slack: Rat,
    pub pass: bool,
}

pub fn check_if_equation(
    m: &PTerm,
    p: &PTerm,
    z: &str,
    q: &PTerm,
    n: u64,
    depth: usize,
) -> Result<IfEquationReport, HarnessError> {
    let scrutinized = PTerm::If {
        scrutinee: Box::new(m.clone()),
        zero: Box::new(p.clone()),
        binder: z.to_string(),
        succ: Box::new(q.clone()),
    };
    let whole = distribution(&scrutinized, depth)?;
    let lhs = whole.weight(&PTerm::Num(n));

    let m_dist = distribution(m, depth)?;
    let p_dist = distribution(p, depth)?;
    let mut rhs = m_dist.weight(&PTerm::Num(0)) * p_dist.weight(&PTerm::Num(n));
    let mut slack = whole.residual() + m_dist.residual() + p_dist.residual();
    for (term, w) in m_dist.outcomes() {
        let k = match term {
            PTerm::Num(idx) if *idx >= 1 => idx - 1,
            _ => continue,
        };
        let branch = distribution(&subst(q, z, &PTerm::Num(k)), depth)?;
        rhs += w * &branch.weight(&PTerm::Num(n));
        slack += w * branch.residual();
    }
    let defect = if lhs >= rhs { lhs.clone() - &rhs } else { rhs.clone() - &lhs };
    Ok(IfEquationReport { pass: defect <= slack, lhs, rhs, slack })
}
