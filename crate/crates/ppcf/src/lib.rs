//! Workbench for probabilistic PCF, built twice and checked for agreement:
//! once as an exact small-step probabilistic rewrite system, once as an
//! order-theoretic denotational semantics over rational sub-distributions.
//! The supporting algebra (sub-stochastic matrices with Kleisli composition,
//! skew sums of convex sets) and an FPC front-end with recursive types live
//! here too.

pub mod adequacy;
pub mod denotational;
pub mod exec;
pub mod fpc;
pub mod generate;
pub mod operational;
pub mod prob;
pub mod skew;
pub mod stoch;
pub mod subdist;
pub mod syntax;
