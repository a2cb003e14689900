//! Quantified Boolean formulas with a 3-CNF matrix.
//!
//! Variables are numbered from 1. A [`QbfFormula`] lists its prefix outermost
//! first; the matrix is a list of three-literal clauses (literals may repeat).

mod normal;
mod qdimacs;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use normal::{normalize, NormalizedQbf, Provenance};
pub use qdimacs::{parse_qdimacs, write_qdimacs, QdimacsError};

/// Default cap on quantified variables for exhaustive evaluation.
pub const DEFAULT_EVAL_LIMIT: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn symbol(self) -> char {
        match self {
            Quantifier::Exists => 'e',
            Quantifier::Forall => 'a',
        }
    }
}

/// A signed variable index: `+v` is `x_v`, `-v` is its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lit(pub i32);

impl Lit {
    pub fn pos(var: u32) -> Lit {
        Lit(var as i32)
    }

    pub fn neg(var: u32) -> Lit {
        Lit(-(var as i32))
    }

    pub fn new(var: u32, positive: bool) -> Lit {
        if positive {
            Lit::pos(var)
        } else {
            Lit::neg(var)
        }
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Lit {
        Lit(-self.0)
    }

    /// Value under `value(var)`.
    #[inline]
    pub fn eval(self, value: impl Fn(u32) -> bool) -> bool {
        value(self.var()) == self.is_positive()
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.var())
        } else {
            write!(f, "~x{}", self.var())
        }
    }
}

pub type Clause = [Lit; 3];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QbfFormula {
    pub num_vars: u32,
    /// `(quantifier, variable)`, outermost first.
    pub prefix: Vec<(Quantifier, u32)>,
    pub clauses: Vec<Clause>,
}

impl QbfFormula {
    /// Builds a formula and checks that every variable is in range, quantified
    /// at most once, and that every literal's variable is quantified.
    pub fn new(num_vars: u32, prefix: Vec<(Quantifier, u32)>, clauses: Vec<Clause>) -> Result<Self> {
        let f = QbfFormula { num_vars, prefix, clauses };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        let mut quantified = vec![false; self.num_vars as usize + 1];
        for &(_, v) in &self.prefix {
            if v == 0 || v > self.num_vars {
                return Err(Error::InvalidArgument(format!("prefix variable {v} out of range 1..={}", self.num_vars)));
            }
            if std::mem::replace(&mut quantified[v as usize], true) {
                return Err(Error::InvalidArgument(format!("variable {v} quantified twice")));
            }
        }
        for (j, c) in self.clauses.iter().enumerate() {
            for l in c {
                if l.0 == 0 || l.var() > self.num_vars || !quantified[l.var() as usize] {
                    return Err(Error::InvalidArgument(format!("clause {} uses unquantified literal {}", j + 1, l.0)));
                }
            }
        }
        Ok(())
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn quantifier_of(&self, var: u32) -> Option<Quantifier> {
        self.prefix.iter().find(|&&(_, v)| v == var).map(|&(q, _)| q)
    }

    pub fn eval_matrix(&self, value: impl Fn(u32) -> bool) -> bool {
        eval_clauses(&self.clauses, value)
    }

    /// Number of distinct clauses mentioning each variable (index `v`; slot 0
    /// unused). A clause such as `(x ∨ x ∨ ¬x)` counts once.
    pub fn occurrences(&self) -> Vec<usize> {
        occurrences(self.num_vars, &self.clauses)
    }
}

impl fmt::Display for QbfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(q, v) in &self.prefix {
            let sym = if q == Quantifier::Exists { "∃" } else { "∀" };
            write!(f, "{sym}x{v} ")?;
        }
        for (j, c) in self.clauses.iter().enumerate() {
            if j > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "({} ∨ {} ∨ {})", c[0], c[1], c[2])?;
        }
        Ok(())
    }
}

pub(crate) fn eval_clauses(clauses: &[Clause], value: impl Fn(u32) -> bool) -> bool {
    clauses.iter().all(|c| c.iter().any(|l| l.eval(&value)))
}

pub(crate) fn occurrences(num_vars: u32, clauses: &[Clause]) -> Vec<usize> {
    let mut occ = vec![0usize; num_vars as usize + 1];
    for c in clauses {
        for (k, l) in c.iter().enumerate() {
            if c[..k].iter().all(|p| p.var() != l.var()) {
                occ[l.var() as usize] += 1;
            }
        }
    }
    occ
}

/// Game-tree evaluation with the default variable limit.
pub fn evaluate_qbf(formula: &QbfFormula) -> Result<bool> {
    evaluate_qbf_with_limit(formula, DEFAULT_EVAL_LIMIT)
}

/// Recurses over the prefix outermost first: `∃` is an OR over both values,
/// `∀` an AND, the leaves evaluate the matrix. Short-circuits.
pub fn evaluate_qbf_with_limit(formula: &QbfFormula, limit: usize) -> Result<bool> {
    let k = formula.prefix.len();
    if k > limit.min(63) {
        return Err(Error::LimitExceeded { what: "quantified variables", limit: limit as u64, actual: k as u64 });
    }
    // Matrix over prefix positions: bit p of the assignment is the value of
    // the p-th prefix variable.
    let mut pos = vec![usize::MAX; formula.num_vars as usize + 1];
    for (p, &(_, v)) in formula.prefix.iter().enumerate() {
        pos[v as usize] = p;
    }
    let clauses: Vec<[(u64, bool); 3]> = formula
        .clauses
        .iter()
        .map(|c| c.map(|l| (1u64 << pos[l.var() as usize], l.is_positive())))
        .collect();
    let quants: Vec<Quantifier> = formula.prefix.iter().map(|&(q, _)| q).collect();
    Ok(game(&quants, &clauses, 0, 0))
}

fn game(quants: &[Quantifier], clauses: &[[(u64, bool); 3]], depth: usize, assign: u64) -> bool {
    if depth == quants.len() {
        return clauses.iter().all(|c| c.iter().any(|&(bit, pos)| (assign & bit != 0) == pos));
    }
    let lo = game(quants, clauses, depth + 1, assign);
    match quants[depth] {
        Quantifier::Exists => lo || game(quants, clauses, depth + 1, assign | 1 << depth),
        Quantifier::Forall => lo && game(quants, clauses, depth + 1, assign | 1 << depth),
    }
}
