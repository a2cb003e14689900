//! Normal form required by the circuit compiler:
//!
//! * variables `x_1..x_n`, `n` odd, prefix `Q_n x_n ... ∃x_1` with `x_i`
//!   existential iff `i` is odd (strict alternation, `x_1` innermost);
//! * every variable occurs in at most four clauses;
//! * the matrix is false under the all-zero assignment;
//! * at least two clauses.

use serde::{Deserialize, Serialize};

use super::{eval_clauses, occurrences, Clause, Lit, QbfFormula, Quantifier};
use crate::error::{Error, Result};

pub const MAX_OCCURRENCES: usize = 4;

/// Where a variable of the normalized formula came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Input variable `var`, unchanged.
    Original { var: u32 },
    /// The `copy`-th (1-based) copy of input variable `var`, created because
    /// `var` occurred in more than four clauses.
    Copy { var: u32, copy: u32 },
    /// Fresh existential variable of an appended all-positive clause.
    Fresh,
    /// Padding variable with no occurrences.
    Dummy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizedQbf {
    formula: QbfFormula,
    /// Entry `i - 1` describes `x_i`.
    provenance: Vec<Provenance>,
}

impl NormalizedQbf {
    /// Accepts a formula that is already in normal form.
    pub fn from_formula(formula: QbfFormula) -> Result<Self> {
        let v = Self::violations(&formula);
        if !v.is_empty() {
            return Err(Error::NotNormalized(v));
        }
        let provenance = (1..=formula.num_vars).map(|var| Provenance::Original { var }).collect();
        Ok(NormalizedQbf { formula, provenance })
    }

    /// Every way in which `f` fails the normal form; empty iff it is normal.
    pub fn violations(f: &QbfFormula) -> Vec<String> {
        let mut out = Vec::new();
        let n = f.num_vars;
        let expected: Vec<(Quantifier, u32)> = (1..=n).rev().map(|i| (quantifier_at(i), i)).collect();
        if n.is_multiple_of(2) {
            out.push(format!("number of variables {n} is even"));
        }
        if f.prefix.len() != n as usize || f.prefix.iter().zip(&expected).any(|(a, b)| a.1 != b.1) {
            out.push("prefix must quantify x_n, ..., x_1 in that order".into());
        } else {
            for (&(q, i), &(want, _)) in f.prefix.iter().zip(&expected) {
                if q != want {
                    out.push(format!("quantifier of x_{i} must be {want:?}"));
                }
            }
        }
        for (v, &k) in occurrences(n, &f.clauses).iter().enumerate().skip(1) {
            if k > MAX_OCCURRENCES {
                out.push(format!("x_{v} occurs in {k} clauses"));
            }
        }
        if f.clauses.iter().any(|c| c.iter().any(|l| l.0 == 0 || l.var() > n)) {
            out.push("literal out of range".into());
        } else if f.eval_matrix(|_| false) {
            out.push("matrix is true at the all-zero assignment".into());
        }
        if f.clauses.len() < 2 {
            out.push(format!("matrix has {} clauses, need at least 2", f.clauses.len()));
        }
        out
    }

    pub fn formula(&self) -> &QbfFormula {
        &self.formula
    }

    pub fn into_formula(self) -> QbfFormula {
        self.formula
    }

    pub fn n(&self) -> usize {
        self.formula.num_vars as usize
    }

    pub fn m(&self) -> usize {
        self.formula.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.formula.clauses
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn quantifier(&self, i: usize) -> Quantifier {
        quantifier_at(i as u32)
    }

    /// Matrix value with `x_v` = bit `v - 1` of `assignment`.
    pub fn eval_matrix_bits(&self, assignment: u64) -> bool {
        eval_clauses(&self.formula.clauses, |v| assignment >> (v - 1) & 1 == 1)
    }

    /// Truth of `Q_{i-1} x_{i-1} ... ∃x_1 φ(x_1, ..., x_{i-1}, a_i, ..., a_n)`,
    /// where `a[k]` is the value of `x_{i+k}`.
    pub fn eval_suffix(&self, i: usize, a: &[bool]) -> Result<bool> {
        let n = self.n();
        if i == 0 || i > n {
            return Err(Error::InvalidArgument(format!("suffix index {i} outside 1..={n}")));
        }
        if a.len() != n - i + 1 {
            return Err(Error::InvalidArgument(format!(
                "assignment for x_{i}..x_{n} needs {} values, got {}",
                n - i + 1,
                a.len()
            )));
        }
        if i - 1 > super::DEFAULT_EVAL_LIMIT {
            return Err(Error::LimitExceeded {
                what: "quantified variables",
                limit: super::DEFAULT_EVAL_LIMIT as u64,
                actual: i as u64 - 1,
            });
        }
        let mut values = vec![false; n + 1];
        values[i..].copy_from_slice(a);
        Ok(self.suffix_game(i - 1, &mut values))
    }

    fn suffix_game(&self, j: usize, values: &mut [bool]) -> bool {
        if j == 0 {
            return eval_clauses(&self.formula.clauses, |v| values[v as usize]);
        }
        values[j] = false;
        let lo = self.suffix_game(j - 1, values);
        let short = match self.quantifier(j) {
            Quantifier::Exists => lo,
            Quantifier::Forall => !lo,
        };
        if short {
            return lo;
        }
        values[j] = true;
        let hi = self.suffix_game(j - 1, values);
        values[j] = false;
        hi
    }

    /// All values of [`eval_suffix`](Self::eval_suffix) for one `i`, indexed
    /// by the assignment with `x_{i+k}` in bit `k`.
    pub fn suffix_table(&self, i: usize) -> Result<Vec<bool>> {
        let n = self.n();
        if i == 0 || i > n {
            return Err(Error::InvalidArgument(format!("suffix index {i} outside 1..={n}")));
        }
        if n > super::DEFAULT_EVAL_LIMIT {
            return Err(Error::LimitExceeded {
                what: "variables for a truth table",
                limit: super::DEFAULT_EVAL_LIMIT as u64,
                actual: n as u64,
            });
        }
        let mut table: Vec<bool> = (0..1u64 << n).map(|a| self.eval_matrix_bits(a)).collect();
        for j in 1..i {
            let q = self.quantifier(j);
            table = table
                .chunks_exact(2)
                .map(|p| match q {
                    Quantifier::Exists => p[0] || p[1],
                    Quantifier::Forall => p[0] && p[1],
                })
                .collect();
        }
        Ok(table)
    }

    /// The formula's truth value.
    pub fn is_true(&self) -> Result<bool> {
        super::evaluate_qbf(&self.formula)
    }
}

/// `x_i` is existential iff `i` is odd.
pub fn quantifier_at(i: u32) -> Quantifier {
    if i % 2 == 1 {
        Quantifier::Exists
    } else {
        Quantifier::Forall
    }
}

/// Rewrites any formula into the normal form without changing its truth
/// value.
///
/// 1. A variable occurring in `k > 4` clauses is replaced by copies
///    `c_1..c_k`, one per clause, tied together by the implication cycle
///    `(¬c_j ∨ c_{j+1} ∨ c_{j+1})`. `c_1` keeps the variable's place and
///    quantifier; the other copies are existential and innermost. A broken
///    cycle falsifies the matrix, so the existential player always keeps the
///    copies equal.
/// 2. If the matrix is true at all-zero, or has fewer than two clauses, an
///    all-positive clause over three fresh innermost existential variables is
///    appended (repeatedly, until there are two clauses).
/// 3. Variables are relabelled from the innermost outwards, with dummy
///    variables inserted wherever two neighbours share a quantifier, and
///    padded until `n` is odd and at least 3.
pub fn normalize(f: &QbfFormula) -> NormalizedQbf {
    let mut prov: Vec<Provenance> = (0..=f.num_vars).map(|var| Provenance::Original { var }).collect();
    let mut clauses = f.clauses.clone();
    let mut next_var = f.num_vars + 1;

    // Unquantified matrix variables are bound outermost-existentially.
    let mut quantified = vec![false; f.num_vars as usize + 1];
    for &(_, v) in &f.prefix {
        quantified[v as usize] = true;
    }
    let mut free: Vec<u32> = clauses.iter().flatten().map(|l| l.var()).filter(|&v| !quantified[v as usize]).collect();
    free.sort_unstable();
    free.dedup();
    let mut prefix: Vec<(Quantifier, u32)> = free.into_iter().map(|v| (Quantifier::Exists, v)).collect();
    prefix.extend_from_slice(&f.prefix);

    // Pass 1: occurrence bounding.
    let occ = occurrences(f.num_vars, &clauses);
    let mut innermost: Vec<u32> = Vec::new();
    let mut cycle_clauses: Vec<Clause> = Vec::new();
    for v in 1..=f.num_vars {
        let k = occ[v as usize];
        if k <= MAX_OCCURRENCES {
            continue;
        }
        let mut copies = vec![v];
        prov[v as usize] = Provenance::Copy { var: v, copy: 1 };
        for copy in 2..=k as u32 {
            copies.push(next_var);
            prov.push(Provenance::Copy { var: v, copy });
            innermost.push(next_var);
            next_var += 1;
        }
        let mut j = 0;
        for c in clauses.iter_mut() {
            if c.iter().any(|l| l.var() == v) {
                for l in c.iter_mut().filter(|l| l.var() == v) {
                    *l = Lit::new(copies[j], l.is_positive());
                }
                j += 1;
            }
        }
        for j in 0..k {
            let (a, b) = (copies[j], copies[(j + 1) % k]);
            cycle_clauses.push([Lit::neg(a), Lit::pos(b), Lit::pos(b)]);
        }
    }
    clauses.extend(cycle_clauses);

    // Pass 2: make the all-zero assignment falsify the matrix.
    while clauses.len() < 2 || eval_clauses(&clauses, |_| false) {
        let fresh = [next_var, next_var + 1, next_var + 2];
        next_var += 3;
        prov.extend([Provenance::Fresh; 3]);
        innermost.extend(fresh);
        clauses.push(fresh.map(Lit::pos));
    }
    prefix.extend(innermost.into_iter().map(|v| (Quantifier::Exists, v)));

    // Pass 3: relabel innermost-first with strict alternation.
    let mut relabel = vec![0u32; next_var as usize];
    let mut new_prov: Vec<Provenance> = Vec::new();
    for &(q, v) in prefix.iter().rev() {
        let mut idx = new_prov.len() as u32 + 1;
        if quantifier_at(idx) != q {
            new_prov.push(Provenance::Dummy);
            idx += 1;
        }
        relabel[v as usize] = idx;
        new_prov.push(prov[v as usize]);
    }
    while new_prov.len().is_multiple_of(2) || new_prov.len() < 3 {
        new_prov.push(Provenance::Dummy);
    }
    let n = new_prov.len() as u32;
    let clauses = clauses.iter().map(|c| c.map(|l| Lit::new(relabel[l.var() as usize], l.is_positive()))).collect();
    let prefix = (1..=n).rev().map(|i| (quantifier_at(i), i)).collect();
    let formula = QbfFormula { num_vars: n, prefix, clauses };
    debug_assert!(NormalizedQbf::violations(&formula).is_empty());
    NormalizedQbf { formula, provenance: new_prov }
}
