//! Exhaustive degenerate-set and vital-set analysis for small circuits.
//!
//! A set `N ⊇ {I, O}` is degenerate when silencing `V ∖ N` leaves the
//! circuit's non-triviality unchanged. Subsets are indexed by bitmasks over
//! the free neurons `F = V ∖ {I, O}` in id order. After one simulation per
//! subset, a subset-OR transform yields for every `S ⊆ F` whether some
//! degenerate set lies inside `S ∪ {I, O}`; minimality and the vital-set
//! condition both reduce to lookups in that table (a set hits every
//! degenerate set iff its complement contains none). Silencing can revive a
//! dead circuit through removed inhibition, so degeneracy is not assumed to
//! be monotone anywhere.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::circuit::{Circuit, NeuronId, SilenceMask};
use crate::error::{Error, Result};
use crate::sim::is_nontrivial;

/// Default cap on the number of free neurons for exhaustive enumeration.
pub const DEFAULT_MAX_FREE: usize = 16;

/// Subsets simulated per parallel task.
const GRAY_CHUNK: usize = 256;

/// Limits shared by every analysis in this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisConfig {
    /// Largest `|V ∖ {I, O}|` enumerated exhaustively.
    pub max_free: usize,
    /// Largest number of subsets examined by [`decide_k_degenerate`].
    pub max_subsets: u64,
    /// Simulation budget per subset; `None` is the full `2^|V| + 1` (capped),
    /// made exact by cycle detection.
    pub budget: Option<u64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { max_free: DEFAULT_MAX_FREE, max_subsets: 1 << DEFAULT_MAX_FREE, budget: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerateReport {
    pub base_nontrivial: bool,
    /// Every degenerate set, by size then lexicographically by neuron id.
    pub degenerate_sets: Vec<Vec<String>>,
    pub minimal_sets: Vec<Vec<String>>,
    pub minimum_sets: Vec<Vec<String>>,
    pub minimum_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VitalReport {
    /// `k -> ` every `S ⊆ V ∖ {I, O}` with `|S| = k` meeting every degenerate set.
    pub vital_sets_by_size: BTreeMap<usize, Vec<Vec<String>>>,
    pub one_vital_neurons: Vec<String>,
}

/// The raw per-subset table behind both reports.
struct Table<'c> {
    circuit: &'c Circuit,
    free: Vec<NeuronId>,
    base_nontrivial: bool,
    /// `degenerate[S]` for `S ⊆ F`.
    degenerate: Vec<bool>,
    /// `contains[S]`: some degenerate `T ⊆ S`.
    contains: Vec<bool>,
}

fn free_neurons(circuit: &Circuit) -> Vec<NeuronId> {
    circuit.ids().filter(|&v| v != circuit.input() && v != circuit.output()).collect()
}

/// Silences every free neuron outside `keep`.
fn mask_keeping(circuit: &Circuit, free: &[NeuronId], keep: impl Fn(usize) -> bool) -> SilenceMask {
    let mut mask = SilenceMask::empty(circuit);
    for (k, &v) in free.iter().enumerate() {
        if !keep(k) {
            mask.insert(v).expect("free neuron belongs to the circuit");
        }
    }
    mask
}

fn base_nontrivial(circuit: &Circuit, cfg: &AnalysisConfig) -> Result<bool> {
    is_nontrivial(circuit, &SilenceMask::empty(circuit), cfg.budget)
}

/// Whether `keep ∪ {I, O}` is degenerate.
pub fn is_degenerate(circuit: &Circuit, keep: &[NeuronId], budget: Option<u64>) -> Result<bool> {
    let base = is_nontrivial(circuit, &SilenceMask::empty(circuit), budget)?;
    let free = free_neurons(circuit);
    let mask = mask_keeping(circuit, &free, |k| keep.contains(&free[k]));
    Ok(is_nontrivial(circuit, &mask, budget)? == base)
}

impl<'c> Table<'c> {
    fn build(circuit: &'c Circuit, cfg: &AnalysisConfig) -> Result<Self> {
        let free = free_neurons(circuit);
        if free.len() > cfg.max_free {
            return Err(Error::LimitExceeded {
                what: "free neurons for exhaustive enumeration",
                limit: cfg.max_free as u64,
                actual: free.len() as u64,
            });
        }
        let base = base_nontrivial(circuit, cfg)?;
        // Ranks are split into chunks; within a chunk subsets follow the Gray
        // code, so consecutive masks differ in a single neuron.
        let total = 1usize << free.len();
        let chunk = total.min(GRAY_CHUNK);
        let parts = (0..total / chunk)
            .into_par_iter()
            .map(|c| {
                let first = c * chunk;
                let gray = |r: usize| r ^ (r >> 1);
                let mut s = gray(first);
                let mut mask = mask_keeping(circuit, &free, |k| s >> k & 1 == 1);
                let mut out = Vec::with_capacity(chunk);
                for r in first..first + chunk {
                    if r > first {
                        let k = r.trailing_zeros() as usize;
                        s ^= 1 << k;
                        mask.toggle(free[k].index());
                    }
                    out.push((s, is_nontrivial(circuit, &mask, cfg.budget)? == base));
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut degenerate = vec![false; total];
        for (s, d) in parts.into_iter().flatten() {
            degenerate[s] = d;
        }
        let mut contains = degenerate.clone();
        for k in 0..free.len() {
            for s in 0..contains.len() {
                if s >> k & 1 == 1 && contains[s ^ 1 << k] {
                    contains[s] = true;
                }
            }
        }
        Ok(Table { circuit, free, base_nontrivial: base, degenerate, contains })
    }

    fn full(&self) -> usize {
        (1usize << self.free.len()) - 1
    }

    fn is_minimal(&self, s: usize) -> bool {
        self.degenerate[s] && (0..self.free.len()).all(|k| s >> k & 1 == 0 || !self.contains[s ^ 1 << k])
    }

    /// `S` meets every degenerate set iff `F ∖ S` contains none.
    fn is_vital(&self, s: usize) -> bool {
        !self.contains[self.full() ^ s]
    }

    /// Neuron names of `{I, O} ∪ S` in id order.
    fn with_terminals(&self, s: usize) -> Vec<String> {
        let c = self.circuit;
        let mut ids: Vec<NeuronId> = vec![c.input(), c.output()];
        ids.extend(self.members(s));
        ids.sort();
        ids.into_iter().map(|v| c.name(v).to_string()).collect()
    }

    fn members(&self, s: usize) -> impl Iterator<Item = NeuronId> + '_ {
        self.free.iter().enumerate().filter(move |(k, _)| s >> k & 1 == 1).map(|(_, &v)| v)
    }

    fn names(&self, s: usize) -> Vec<String> {
        self.members(s).map(|v| self.circuit.name(v).to_string()).collect()
    }

    /// Subsets of `F` ordered by size, then by their sorted id lists.
    fn ordered(&self, pred: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut out: Vec<usize> = (0..=self.full()).filter(|&s| pred(s)).collect();
        out.sort_by_key(|&s| (s.count_ones(), self.members(s).collect::<Vec<_>>()));
        out
    }
}

/// All degenerate, minimal and minimum degenerate sets.
pub fn enumerate_degenerate(circuit: &Circuit, cfg: &AnalysisConfig) -> Result<DegenerateReport> {
    let table = Table::build(circuit, cfg)?;
    let degenerate = table.ordered(|s| table.degenerate[s]);
    let minimal = table.ordered(|s| table.is_minimal(s));
    // V itself is always degenerate, so the list is never empty.
    let min_free = degenerate.iter().map(|s| s.count_ones()).min().expect("V is degenerate");
    let minimum: Vec<usize> = degenerate.iter().copied().filter(|s| s.count_ones() == min_free).collect();
    let names = |v: &[usize]| v.iter().map(|&s| table.with_terminals(s)).collect();
    Ok(DegenerateReport {
        base_nontrivial: table.base_nontrivial,
        degenerate_sets: names(&degenerate),
        minimal_sets: names(&minimal),
        minimum_sets: names(&minimum),
        minimum_size: min_free as usize + 2,
    })
}

/// All vital sets of size `1..=k_max` and the 1-vital neurons.
pub fn enumerate_vital(circuit: &Circuit, k_max: usize, cfg: &AnalysisConfig) -> Result<VitalReport> {
    let table = Table::build(circuit, cfg)?;
    let mut by_size = BTreeMap::new();
    for s in table.ordered(|s| s != 0 && s.count_ones() as usize <= k_max && table.is_vital(s)) {
        by_size.entry(s.count_ones() as usize).or_insert_with(Vec::new).push(table.names(s));
    }
    let one = (0..table.free.len()).filter(|&k| table.is_vital(1 << k)).map(|k| table.circuit.name(table.free[k]).to_string());
    Ok(VitalReport { vital_sets_by_size: by_size, one_vital_neurons: one.collect() })
}

/// Whether some degenerate set has exactly `k` neurons. Examines the
/// `C(|F|, k - 2)` candidates directly, so large circuits are fine for small
/// `k`.
pub fn decide_k_degenerate(circuit: &Circuit, k: usize, cfg: &AnalysisConfig) -> Result<bool> {
    let n = circuit.len();
    if k < 2 || k > n {
        return Ok(false);
    }
    let free = free_neurons(circuit);
    let r = k - 2;
    let count = binomial(free.len() as u64, r as u64);
    if count > cfg.max_subsets {
        return Err(Error::LimitExceeded { what: "candidate subsets", limit: cfg.max_subsets, actual: count });
    }
    let base = base_nontrivial(circuit, cfg)?;
    let combos: Vec<Vec<usize>> = Combinations::new(free.len(), r).collect();
    let hits = combos
        .par_iter()
        .map(|combo| {
            let mask = mask_keeping(circuit, &free, |j| combo.contains(&j));
            is_nontrivial(circuit, &mask, cfg.budget).map(|nt| nt == base)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(hits.into_iter().any(|h| h))
}

/// Whether a minimal degenerate set of size at least 3 exists. Every
/// degenerate set contains `{I, O}`, so when `{I, O}` is degenerate it is the
/// only minimal one; otherwise `V` is degenerate and contains a minimal
/// degenerate set, necessarily larger than 2. One simulation decides it.
pub fn decide_minimal_ge3(circuit: &Circuit, cfg: &AnalysisConfig) -> Result<bool> {
    Ok(!is_degenerate(circuit, &[], cfg.budget)?)
}

/// Whether the minimum degenerate size is at least 3; equivalent to
/// [`decide_minimal_ge3`] by the same argument.
pub fn decide_minimum_ge3(circuit: &Circuit, cfg: &AnalysisConfig) -> Result<bool> {
    decide_minimal_ge3(circuit, cfg)
}

/// Whether some neuron lies in every degenerate set.
///
/// If `{I, O}` is degenerate the answer is no. Otherwise a neuron `v` is
/// accepted on the certificate that the base circuit is non-trivial and `O`
/// cannot reach its threshold once `v` is silent, whatever the other neurons
/// do: then every set avoiding `v` is trivial, hence not degenerate. Failing
/// a certificate, small circuits are enumerated and larger ones report
/// [`Error::LimitExceeded`].
pub fn one_vital_nonempty(circuit: &Circuit, cfg: &AnalysisConfig) -> Result<bool> {
    if is_degenerate(circuit, &[], cfg.budget)? {
        return Ok(false);
    }
    if !output_cut_certificates(circuit).is_empty() && base_nontrivial(circuit, cfg)? {
        return Ok(true);
    }
    Ok(!enumerate_vital(circuit, 1, cfg)?.one_vital_neurons.is_empty())
}

/// Parents `v` of `O` such that the largest input `O` can receive with `v`
/// silent stays below its threshold. For a non-trivial circuit each of them
/// is 1-vital. A self-loop on `O` is ignored: it cannot cause the first firing.
pub fn output_cut_certificates(circuit: &Circuit) -> Vec<NeuronId> {
    let out = circuit.neuron(circuit.output());
    let best = |skip: Option<NeuronId>| -> i64 {
        out.parents
            .iter()
            .zip(&out.weights)
            .filter(|&(&p, _)| Some(p) != skip && p != circuit.output())
            .map(|(_, &w)| (w as i64).max(0))
            .sum::<i64>()
    };
    let mut certs: Vec<NeuronId> = out
        .parents
        .iter()
        .copied()
        .filter(|&v| v != circuit.input() && v != circuit.output() && best(Some(v)) < out.threshold as i64)
        .collect();
    certs.dedup();
    certs
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, j| acc.saturating_mul(n - j) / (j + 1))
}

/// `r`-element subsets of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    idx: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, r: usize) -> Self {
        Combinations { n, idx: (r <= n).then(|| (0..r).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.idx.clone()?;
        let r = cur.len();
        let mut next = cur.clone();
        let mut i = r;
        loop {
            if i == 0 {
                self.idx = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - r + i {
                next[i] += 1;
                for j in i + 1..r {
                    next[j] = next[j - 1] + 1;
                }
                self.idx = Some(next);
                break;
            }
        }
        Some(cur)
    }
}
