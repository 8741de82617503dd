//! Skew sums of convex structures: A ⊎ B ⊎ (A × B × (0,1)) with the skewed
//! convex combination and the componentwise order in which every pure-A
//! element sits below every pure-B element.
//!
//! The construction is generic: callers supply the convex-combination and
//! order callbacks of the two component structures. Weight vectors with sum
//! strictly below 1 are accepted and fed through the same formula; the
//! algebraic laws are only claimed (and tested) for weight sum exactly 1.

use crate::prob::{show_rat, Rat};
use crate::subdist::DistError;
use num::{One, Signed, Zero};

/// An element of the skew sum: pure-A at λ=0, pure-B at λ=1, a genuine pair
/// strictly in between. Absent components are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewSumElem<A, B> {
    left: Option<A>,
    right: Option<B>,
    lambda: Rat,
}

impl<A, B> SkewSumElem<A, B> {
    pub fn pure_left(a: A) -> Self {
        SkewSumElem { left: Some(a), right: None, lambda: Rat::zero() }
    }

    pub fn pure_right(b: B) -> Self {
        SkewSumElem { left: None, right: Some(b), lambda: Rat::one() }
    }

    pub fn mixed(a: A, b: B, lambda: Rat) -> Result<Self, DistError> {
        if lambda <= Rat::zero() || lambda >= Rat::one() {
            return Err(DistError::Weight(format!(
                "mixed element needs 0 < lambda < 1, got {}",
                show_rat(&lambda)
            )));
        }
        SkewSumElem { left: Some(a), right: Some(b), lambda }.validated()
    }

    fn validated(self) -> Result<Self, DistError> {
        let ok = if self.lambda.is_zero() {
            self.left.is_some() && self.right.is_none()
        } else if self.lambda.is_one() {
            self.left.is_none() && self.right.is_some()
        } else {
            self.left.is_some() && self.right.is_some()
        };
        if ok {
            Ok(self)
        } else {
            Err(DistError::Weight("malformed skew-sum element".to_string()))
        }
    }

    pub fn left(&self) -> Option<&A> {
        self.left.as_ref()
    }

    pub fn right(&self) -> Option<&B> {
        self.right.as_ref()
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }
}

fn check_weights(weights: &[Rat], len: usize) -> Result<(), DistError> {
    if weights.len() != len {
        return Err(DistError::Dimension(format!(
            "{} weights vs {} elements",
            weights.len(),
            len
        )));
    }
    let mut total = Rat::zero();
    for w in weights {
        if w.is_negative() {
            return Err(DistError::Weight(format!("negative weight {}", show_rat(w))));
        }
        total += w;
    }
    if total > Rat::one() {
        return Err(DistError::Weight(format!("weights sum to {}", show_rat(&total))));
    }
    Ok(())
}

/// Σ_i r_i·(a_i, b_i, λ_i). With s = Σ_i r_i λ_i the result is
/// (Σ_i [r_i(1−λ_i)/(1−s)]·a_i, Σ_i [r_iλ_i/s]·b_i, s), landing wholly in A
/// when s = 0 and wholly in B when s = 1. Component combinations are
/// delegated to the callbacks, which may receive empty slices (the zero
/// combination) when one side gets no weight.
pub fn skew_sum_combine<A, B, FA, FB>(
    weights: &[Rat],
    elems: &[SkewSumElem<A, B>],
    mut combine_a: FA,
    mut combine_b: FB,
) -> Result<SkewSumElem<A, B>, DistError>
where
    FA: FnMut(&[Rat], &[&A]) -> Result<A, DistError>,
    FB: FnMut(&[Rat], &[&B]) -> Result<B, DistError>,
{
    check_weights(weights, elems.len())?;
    let s = weights
        .iter()
        .zip(elems)
        .fold(Rat::zero(), |acc, (r, e)| acc + r * &e.lambda);

    let mut a_weights = Vec::new();
    let mut a_parts: Vec<&A> = Vec::new();
    if !s.is_one() {
        let denom = Rat::one() - &s;
        for (r, e) in weights.iter().zip(elems) {
            let coeff = r * (Rat::one() - &e.lambda) / &denom;
            if !coeff.is_zero() {
                a_weights.push(coeff);
                a_parts.push(e.left().expect("lambda < 1 element has a left part"));
            }
        }
    }

    let mut b_weights = Vec::new();
    let mut b_parts: Vec<&B> = Vec::new();
    if !s.is_zero() {
        for (r, e) in weights.iter().zip(elems) {
            let coeff = r * &e.lambda / &s;
            if !coeff.is_zero() {
                b_weights.push(coeff);
                b_parts.push(e.right().expect("lambda > 0 element has a right part"));
            }
        }
    }

    let left = if s.is_one() { None } else { Some(combine_a(&a_weights, &a_parts)?) };
    let right = if s.is_zero() { None } else { Some(combine_b(&b_weights, &b_parts)?) };
    SkewSumElem { left, right, lambda: s }.validated()
}

/// The skew order: λ ≤ μ and the component orders wherever both components
/// exist. Absent components compare vacuously, which in particular makes
/// every pure-A element ≤ every pure-B element.
pub fn skew_leq<A, B, FA, FB>(
    e1: &SkewSumElem<A, B>,
    e2: &SkewSumElem<A, B>,
    mut leq_a: FA,
    mut leq_b: FB,
) -> bool
where
    FA: FnMut(&A, &A) -> bool,
    FB: FnMut(&B, &B) -> bool,
{
    if e1.lambda > e2.lambda {
        return false;
    }
    if let (Some(a1), Some(a2)) = (e1.left(), e2.left()) {
        if !leq_a(a1, a2) {
            return false;
        }
    }
    if let (Some(b1), Some(b2)) = (e1.right(), e2.right()) {
        if !leq_b(b1, b2) {
            return false;
        }
    }
    true
}
