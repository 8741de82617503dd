//! Finite sub-stochastic matrix algebra: arrows n→m are m×n matrices with
//! nonnegative rational entries and column sums ≤ 1, composition is matrix
//! multiplication, and finite coproducts are block assembly. Column j is the
//! sub-distribution image of source index j; the strict (column sum = 1)
//! arrows are recognized by a predicate rather than a separate type.

use crate::prob::{show_rat, Rat};
use num::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StochError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("order violation: {0}")]
    Order(String),
    #[error("invalid matrix: {0}")]
    Invalid(String),
}

/// A sub-distribution on the finite index set 0..n, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSubDist {
    weights: Vec<Rat>,
}

impl FiniteSubDist {
    pub fn new(weights: Vec<Rat>) -> Result<FiniteSubDist, StochError> {
        let mut total = Rat::zero();
        for w in &weights {
            if w.is_negative() {
                return Err(StochError::Invalid(format!("negative weight {}", show_rat(w))));
            }
            total += w;
        }
        if total > Rat::one() {
            return Err(StochError::Invalid(format!("mass {} exceeds 1", show_rat(&total))));
        }
        Ok(FiniteSubDist { weights })
    }

    pub fn zero(arity: usize) -> FiniteSubDist {
        FiniteSubDist { weights: vec![Rat::zero(); arity] }
    }

    pub fn dirac(point: usize, arity: usize) -> FiniteSubDist {
        let mut d = FiniteSubDist::zero(arity);
        d.weights[point] = Rat::one();
        d
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, i: usize) -> &Rat {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn mass(&self) -> Rat {
        self.weights.iter().fold(Rat::zero(), |acc, w| acc + w)
    }
}

/// Reindexing along a total map `f: 0..m → 0..k`; mass is preserved.
pub fn pushforward(f: &[usize], target_arity: usize, d: &FiniteSubDist) -> FiniteSubDist {
    assert_eq!(f.len(), d.arity(), "pushforward map must cover the source");
    let mut weights = vec![Rat::zero(); target_arity];
    for (x, w) in d.weights().iter().enumerate() {
        weights[f[x]] += w;
    }
    FiniteSubDist { weights }
}

/// Monad multiplication: flattens an outer sub-distribution over a family of
/// sub-distributions into Σ_i outer(i)·inner_i.
pub fn kleisli_mult(
    outer: &FiniteSubDist,
    inner: &[FiniteSubDist],
) -> Result<FiniteSubDist, StochError> {
    if outer.arity() != inner.len() {
        return Err(StochError::Dimension(format!(
            "outer arity {} vs family size {}",
            outer.arity(),
            inner.len()
        )));
    }
    let point_arity = inner.first().map(|d| d.arity()).unwrap_or(0);
    if inner.iter().any(|d| d.arity() != point_arity) {
        return Err(StochError::Dimension("family members have unequal arities".to_string()));
    }
    let mut weights = vec![Rat::zero(); point_arity];
    for (w, d) in outer.weights().iter().zip(inner) {
        if w.is_zero() {
            continue;
        }
        for (x, dw) in d.weights().iter().enumerate() {
            weights[x] += w * dw;
        }
    }
    FiniteSubDist::new(weights)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rat>>,
}

impl StochMatrix {
    /// Validates shape, nonnegativity, and column sums ≤ 1.
    pub fn new(rows: usize, cols: usize, entries: Vec<Vec<Rat>>) -> Result<StochMatrix, StochError> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(StochError::Dimension(format!("entries are not {rows}x{cols}")));
        }
        let m = StochMatrix { rows, cols, entries };
        for j in 0..cols {
            let mut total = Rat::zero();
            for i in 0..rows {
                let e = m.entry(i, j);
                if e.is_negative() {
                    return Err(StochError::Invalid(format!(
                        "negative entry {} at ({i},{j})",
                        show_rat(e)
                    )));
                }
                total += e;
            }
            if total > Rat::one() {
                return Err(StochError::Invalid(format!(
                    "column {j} sums to {}",
                    show_rat(&total)
                )));
            }
        }
        Ok(m)
    }

    /// Convenience over `new` for nonempty literal rows.
    pub fn from_rows(entries: Vec<Vec<Rat>>) -> Result<StochMatrix, StochError> {
        let rows = entries.len();
        let cols = entries.first().map(|r| r.len()).unwrap_or(0);
        StochMatrix::new(rows, cols, entries)
    }

    pub fn zero(rows: usize, cols: usize) -> StochMatrix {
        StochMatrix { rows, cols, entries: vec![vec![Rat::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> StochMatrix {
        let mut m = StochMatrix::zero(n, n);
        for i in 0..n {
            m.entries[i][i] = Rat::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i][j]
    }

    pub fn column(&self, j: usize) -> FiniteSubDist {
        FiniteSubDist { weights: (0..self.rows).map(|i| self.entry(i, j).clone()).collect() }
    }

    /// Strict stochasticity: every column sums to exactly 1.
    pub fn is_stochastic(&self) -> bool {
        (0..self.cols).all(|j| self.column(j).mass().is_one())
    }

    /// self : p×m composed with other : m×n, i.e. the arrow n→p.
    pub fn compose(&self, other: &StochMatrix) -> Result<StochMatrix, StochError> {
        if self.cols != other.rows {
            return Err(StochError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = StochMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    let a = self.entry(i, k);
                    let b = other.entry(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                out.entries[i][j] = acc;
            }
        }
        for j in 0..out.cols {
            assert!(
                out.column(j).mass() <= Rat::one(),
                "composition broke sub-stochasticity"
            );
        }
        Ok(out)
    }
}

/// K₁ = (1_{n1} ; 0_{n2}), the first coproduct injection as an (n1+n2)×n1 block.
pub fn inj1(n1: usize, n2: usize) -> StochMatrix {
    let mut m = StochMatrix::zero(n1 + n2, n1);
    for i in 0..n1 {
        m.entries[i][i] = Rat::one();
    }
    m
}

/// K₂ = (0_{n1} ; 1_{n2}).
pub fn inj2(n1: usize, n2: usize) -> StochMatrix {
    let mut m = StochMatrix::zero(n1 + n2, n2);
    for i in 0..n2 {
        m.entries[n1 + i][i] = Rat::one();
    }
    m
}

/// (A1 A2): the copairing out of a coproduct, by column concatenation.
pub fn copair(a1: &StochMatrix, a2: &StochMatrix) -> Result<StochMatrix, StochError> {
    if a1.rows != a2.rows {
        return Err(StochError::Dimension(format!(
            "row counts {} vs {}",
            a1.rows, a2.rows
        )));
    }
    let entries = (0..a1.rows)
        .map(|i| {
            let mut row = a1.entries[i].clone();
            row.extend(a2.entries[i].iter().cloned());
            row
        })
        .collect();
    Ok(StochMatrix { rows: a1.rows, cols: a1.cols + a2.cols, entries })
}

/// (A1 0 ; 0 A2), the monoidal sum of arrows.
pub fn block_diag(a1: &StochMatrix, a2: &StochMatrix) -> StochMatrix {
    let mut m = StochMatrix::zero(a1.rows + a2.rows, a1.cols + a2.cols);
    for i in 0..a1.rows {
        for j in 0..a1.cols {
            m.entries[i][j] = a1.entry(i, j).clone();
        }
    }
    for i in 0..a2.rows {
        for j in 0..a2.cols {
            m.entries[a1.rows + i][a1.cols + j] = a2.entry(i, j).clone();
        }
    }
    m
}

pub fn entrywise_leq(a: &StochMatrix, b: &StochMatrix) -> bool {
    a.rows == b.rows
        && a.cols == b.cols
        && (0..a.rows).all(|i| (0..a.cols).all(|j| a.entry(i, j) <= b.entry(i, j)))
}

/// Least upper bound of a finite ascending chain (its last element). The
/// input is checked to be ascending.
pub fn chain_sup(chain: &[StochMatrix]) -> Result<StochMatrix, StochError> {
    let mut iter = chain.iter();
    let first = iter
        .next()
        .ok_or_else(|| StochError::Order("empty chain has no supremum".to_string()))?;
    let mut prev = first;
    for next in iter {
        if !entrywise_leq(prev, next) {
            return Err(StochError::Order("chain is not ascending".to_string()));
        }
        prev = next;
    }
    Ok(prev.clone())
}

impl Serialize for StochMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            rows: usize,
            cols: usize,
            entries: Vec<Vec<String>>,
        }
        Repr {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(show_rat).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StochMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<StochMatrix, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            rows: usize,
            cols: usize,
            entries: Vec<Vec<String>>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let entries: Result<Vec<Vec<Rat>>, _> = repr
            .entries
            .iter()
            .map(|row| row.iter().map(|s| crate::prob::parse_rat(s)).collect())
            .collect();
        StochMatrix::new(repr.rows, repr.cols, entries.map_err(D::Error::custom)?)
            .map_err(D::Error::custom)
    }
}
