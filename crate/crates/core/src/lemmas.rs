//! Simulation-based checks of the timing behaviour of compiled circuits.
//!
//! Every check runs one simulation of `C_φ` from the initial condition and
//! compares the recorded trajectories of the stage neurons against
//! predictions computed from the formula alone: the counter assignment at
//! time `t >= 2n` is `x(t) = (t - 2n) mod 2^n` (bit `i - 1` is `x_i`), and
//! quantified suffixes are decided by exhaustive evaluation.
//!
//! Two versions of the stage characterization are provided.
//! [`check_induction_lemma`] tests the per-time-step statements:
//!
//! 1. odd `i`: `s_{i,0}(t+m+i) = 1` iff `Q_{i-1}x_{i-1}...∃x_1 φ` is true
//!    with `x_i..x_n` taken from `x(t)`;
//! 2. even `i`: `s_{i,1}(t+m+i) = 1` iff `x_i(t) = 1` and the `(i-1)`-suffix
//!    is true at `x(t)`;
//! 3. even `i`: `s'_{i,0}(t+m+i) = 1` iff `x_i(t) = 0` and the same;
//! 4. even `i`: `s_{i,0}(t+m+i) = 1` iff some `t'` in `[W, t)` satisfies
//!    item 3's condition, `W` being the start of `t`'s aligned `2^i` window;
//!
//! together with the silence of each neuron before `2n + m + i` (`+1` for
//! item 4). Items 1 (for odd `i >= 3`) and 2 to 4 (for even `i >= 4`) do not
//! hold per time step: `s_{i,0}` for odd `i >= 3` can only fire while
//! `x_{i-1} = 1`, i.e. in the second half of each `2^{i-1}` block, whatever
//! the value of the suffix formula. [`check_induction_lemma_blockwise`]
//! tests the block-level statements that do hold: the per-step predictions
//! are replaced by "fires somewhere in the block" (items 1 to 3) and by the
//! latch value at the block boundaries (item 4).

use std::collections::HashSet;

use serde::Serialize;

use crate::circuit::{NeuronId, SilenceMask};
use crate::counter::counter_value;
use crate::error::Result;
use crate::reduction::{z_name, ReductionArtifacts};
use crate::sim::{run, Engine, RunConfig, Trace};

/// At most this many failures are kept verbatim in a report.
pub const MAX_RECORDED_FAILURES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    pub check: String,
    pub i: usize,
    pub t: u64,
    pub neuron: String,
    pub expected: bool,
    pub actual: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    /// Number of individual predictions compared.
    pub checked: u64,
    pub failure_count: u64,
    /// The first failures, in check order.
    pub failures: Vec<CheckFailure>,
}

impl LemmaReport {
    pub fn ok(&self) -> bool {
        self.failure_count == 0
    }

    fn expect(&mut self, check: &str, i: usize, t: u64, neuron: &str, expected: bool, actual: bool) {
        self.checked += 1;
        if expected != actual {
            self.failure_count += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(CheckFailure { check: check.into(), i, t, neuron: neuron.into(), expected, actual });
            }
        }
    }

    /// Appends `other`'s counts and failures.
    pub fn merge(&mut self, other: LemmaReport) {
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        let room = MAX_RECORDED_FAILURES - self.failures.len();
        self.failures.extend(other.failures.into_iter().take(room));
    }

    /// Failure counts per check label, in first-seen order.
    pub fn summary(&self) -> Vec<(String, u64)> {
        let mut out: Vec<(String, u64)> = Vec::new();
        for f in &self.failures {
            match out.iter_mut().find(|(c, _)| *c == f.check) {
                Some(e) => e.1 += 1,
                None => out.push((f.check.clone(), 1)),
            }
        }
        out
    }
}

/// Trajectories of a set of neurons over `0..=horizon`.
struct Recording {
    trace: Trace,
}

impl Recording {
    fn new(art: &ReductionArtifacts, ids: Vec<NeuronId>, horizon: u64) -> Result<Self> {
        let cfg = RunConfig {
            budget: Some(horizon),
            detect_cycles: false,
            stop_at_output: false,
            watched: ids,
            ..Default::default()
        };
        let (_, trace) = run(&art.circuit, &SilenceMask::empty(&art.circuit), &cfg)?;
        Ok(Recording { trace })
    }

    fn col(&self, id: NeuronId) -> Vec<bool> {
        self.trace.column(id).expect("neuron is watched")
    }
}

/// Counter assignment at `t >= 2n`: bit `i - 1` is `x_i(t)`.
fn assignment(art: &ReductionArtifacts, t: u64) -> u64 {
    counter_value(art.n, t)
}

fn x_at(art: &ReductionArtifacts, i: usize, t: u64) -> bool {
    assignment(art, t) >> (i - 1) & 1 == 1
}

/// `suffix[i][a >> (i-1)]`: truth of the `i`-suffix with `x_i..x_n` from `a`.
fn suffix_tables(art: &ReductionArtifacts) -> Result<Vec<Vec<bool>>> {
    let mut out = vec![Vec::new()];
    for i in 1..=art.n {
        out.push(art.formula.suffix_table(i)?);
    }
    Ok(out)
}

fn suffix(tables: &[Vec<bool>], i: usize, a: u64) -> bool {
    tables[i][(a >> (i - 1)) as usize]
}

/// Number of counter periods covered by the verification window.
pub const WINDOW_PERIODS: u64 = 2;

/// End (exclusive) of the verification window `[2n, 2n + 2 * 2^n)`.
fn window_end(art: &ReductionArtifacts) -> u64 {
    2 * art.n as u64 + (WINDOW_PERIODS << art.n)
}

/// Horizon covering the window plus the pipeline delay.
fn lemma_horizon(art: &ReductionArtifacts) -> u64 {
    window_end(art) + (art.m + art.n) as u64 + 1
}

fn stage_neurons(art: &ReductionArtifacts) -> Vec<NeuronId> {
    art.stages.iter().flat_map(|s| [Some(s.s0), s.s0_prime, s.s1]).flatten().collect()
}

/// `s_{1,0}` is silent up to `2n + m + 1` and afterwards fires exactly when
/// `t - 2n - m - 1` is congruent mod `2^n` to the encoding of a satisfying
/// assignment. Checked over two counter periods.
pub fn check_base_claim(art: &ReductionArtifacts) -> Result<LemmaReport> {
    let (n, m) = (art.n as u64, art.m as u64);
    let period = 1u64 << art.n;
    let start = 2 * n + m + 1;
    let horizon = start + 2 * period;
    let s10 = art.s0(1);
    let rec = Recording::new(art, vec![s10], horizon)?;
    let s = rec.col(s10);
    let satisfying: HashSet<u64> = (0..period).filter(|&a| art.formula.eval_matrix_bits(a)).collect();
    let mut report = LemmaReport::default();
    for t in 0..=horizon {
        let expected = t > start && satisfying.contains(&((t - start) % period));
        report.expect("base", 1, t, "s_1_0", expected, s[t as usize]);
    }
    Ok(report)
}

/// The per-time-step stage characterization (see the module docs).
pub fn check_induction_lemma(art: &ReductionArtifacts) -> Result<LemmaReport> {
    let (n, m) = (art.n as u64, art.m as u64);
    let horizon = lemma_horizon(art);
    let rec = Recording::new(art, stage_neurons(art), horizon)?;
    let tables = suffix_tables(art)?;
    let window_end = window_end(art);
    let mut report = LemmaReport::default();
    let name = |id| art.circuit.name(id).to_string();

    for i in 1..=art.n {
        let st = art.stages[i - 1];
        let d = m + i as u64;
        let s0 = rec.col(st.s0);
        if i % 2 == 1 {
            let label = "item 1";
            warmup(&mut report, label, i, &name(st.s0), &s0, 2 * n + d);
            for t in 2 * n..window_end {
                let expected = suffix(&tables, i, assignment(art, t));
                report.expect(label, i, t + d, &name(st.s0), expected, s0[(t + d) as usize]);
            }
            continue;
        }
        let (sp_id, s1_id) = (st.s0_prime.unwrap(), st.s1.unwrap());
        let (sp, s1) = (rec.col(sp_id), rec.col(s1_id));
        warmup(&mut report, "item 2", i, &name(s1_id), &s1, 2 * n + d);
        warmup(&mut report, "item 3", i, &name(sp_id), &sp, 2 * n + d);
        warmup(&mut report, "item 4", i, &name(st.s0), &s0, 2 * n + d + 1);
        let cond = |t: u64| suffix(&tables, i - 1, assignment(art, t));
        for t in 2 * n..window_end {
            let (xi, ok) = (x_at(art, i, t), cond(t));
            report.expect("item 2", i, t + d, &name(s1_id), xi && ok, s1[(t + d) as usize]);
            report.expect("item 3", i, t + d, &name(sp_id), !xi && ok, sp[(t + d) as usize]);
        }
        let w = 1u64 << i;
        for t in 2 * n + 1..window_end {
            let start = 2 * n + (t - 2 * n) / w * w;
            let expected = (start..t).any(|tp| !x_at(art, i, tp) && cond(tp));
            report.expect("item 4", i, t + d, &name(st.s0), expected, s0[(t + d) as usize]);
        }
    }
    Ok(report)
}

fn warmup(report: &mut LemmaReport, label: &str, i: usize, neuron: &str, col: &[bool], until: u64) {
    for t in 0..until.min(col.len() as u64) {
        report.expect(label, i, t, neuron, false, col[t as usize]);
    }
}

/// The block-level stage characterization (see the module docs). For stage
/// `i`, blocks are the aligned intervals of length `2^{i-1}` (odd `i`) or
/// `2^{i-2}` (even `i`) starting at `2n`, over which the suffix formula is
/// constant.
pub fn check_induction_lemma_blockwise(art: &ReductionArtifacts) -> Result<LemmaReport> {
    let (n, m) = (art.n as u64, art.m as u64);
    let horizon = lemma_horizon(art);
    let rec = Recording::new(art, stage_neurons(art), horizon)?;
    let tables = suffix_tables(art)?;
    let base = 2 * n;
    let window_end = window_end(art);
    let mut report = LemmaReport::default();
    let name = |id| art.circuit.name(id).to_string();
    let fired = |col: &[bool], from: u64, len: u64, d: u64| (from..from + len).any(|t| col[(t + d) as usize]);

    for i in 1..=art.n {
        let st = art.stages[i - 1];
        let d = m + i as u64;
        let s0 = rec.col(st.s0);
        if i % 2 == 1 {
            let label = "item 1";
            warmup(&mut report, label, i, &name(st.s0), &s0, base + d);
            let len = 1u64 << (i - 1);
            for b in (base..window_end).step_by(len as usize) {
                let expected = suffix(&tables, i, assignment(art, b));
                report.expect(label, i, b + d, &name(st.s0), expected, fired(&s0, b, len, d));
            }
            continue;
        }
        let (sp_id, s1_id) = (st.s0_prime.unwrap(), st.s1.unwrap());
        let (sp, s1) = (rec.col(sp_id), rec.col(s1_id));
        warmup(&mut report, "item 2", i, &name(s1_id), &s1, base + d);
        warmup(&mut report, "item 3", i, &name(sp_id), &sp, base + d);
        warmup(&mut report, "item 4", i, &name(st.s0), &s0, base + d + 1);
        let len = 1u64 << (i - 2);
        let cond = |b: u64| suffix(&tables, i - 1, assignment(art, b));
        for b in (base..window_end).step_by(len as usize) {
            let (xi, ok) = (x_at(art, i, b), cond(b));
            report.expect("item 2", i, b + d, &name(s1_id), xi && ok, fired(&s1, b, len, d));
            report.expect("item 3", i, b + d, &name(sp_id), !xi && ok, fired(&sp, b, len, d));
        }
        // Latch value at each block boundary strictly inside a 2^i window.
        let w = 1u64 << i;
        for start in (base..window_end).step_by(w as usize) {
            for r in 1..4 {
                let b_next = start + r * len;
                let expected = (0..r).map(|k| start + k * len).any(|b| !x_at(art, i, b) && cond(b));
                report.expect("item 4", i, b_next + d, &name(st.s0), expected, s0[(b_next + d) as usize]);
            }
        }
    }
    Ok(report)
}

/// The flip detector, reset and latch claims for the stage pairs
/// `(s_{i,0}, z_{i+1,m+i})`, even `i`:
///
/// * `p_{i+1}(t) ∨ q_{i+1}(t)` iff `t = l 2^i + 2n + m + i - 1`, `l >= 1`;
/// * `s_{i,0}(t) = z_{i+1,m+i}(t) = 0` at `t = l 2^i + 2n + m + i`, `l >= 1`;
/// * once both are 1 inside `[l 2^i + 2n+m+i+1, (l+1) 2^i + 2n+m+i-1]`,
///   both stay 1 to the end of that interval.
pub fn check_timing_claims(art: &ReductionArtifacts) -> Result<LemmaReport> {
    let (n, m) = (art.n as u64, art.m as u64);
    let horizon = lemma_horizon(art);
    let mut ids = stage_neurons(art);
    for (&i, &(p, q)) in &art.pq_neurons {
        ids.extend([p, q, art.neuron(&z_name(i, art.m + i - 1))?]);
    }
    let rec = Recording::new(art, ids, horizon)?;
    let mut report = LemmaReport::default();

    for (&j, &(p, q)) in &art.pq_neurons {
        let (pc, qc) = (rec.col(p), rec.col(q));
        let half = 1u64 << (j - 1);
        let offset = 2 * n + m + j as u64 - 2;
        for t in 0..=horizon {
            let expected = t >= offset + half && (t - offset).is_multiple_of(half);
            let name = format!("p_{j}|q_{j}");
            report.expect("flip detector", j, t, &name, expected, pc[t as usize] || qc[t as usize]);
        }
    }
    for i in (2..art.n).step_by(2) {
        let s0 = rec.col(art.s0(i));
        let z = rec.col(art.neuron(&z_name(i + 1, art.m + i))?);
        let w = 1u64 << i;
        let offset = 2 * n + m + i as u64;
        let mut l = 1;
        while l * w + offset <= horizon {
            let t = l * w + offset;
            report.expect("reset", i, t, &format!("s_{i}_0"), false, s0[t as usize]);
            report.expect("reset", i, t, &z_name(i + 1, art.m + i), false, z[t as usize]);
            l += 1;
        }
        let mut l = 0;
        while (l + 1) * w + offset - 1 <= horizon {
            let (lo, hi) = (l * w + offset + 1, (l + 1) * w + offset - 1);
            if let Some(t0) = (lo..=hi).find(|&t| s0[t as usize] && z[t as usize]) {
                for t in t0..=hi {
                    report.expect("latch", i, t, &format!("s_{i}_0"), true, s0[t as usize] && z[t as usize]);
                }
            }
            l += 1;
        }
    }
    Ok(report)
}

/// Base claim, block-level stage items and timing claims in one report.
pub fn check_all(art: &ReductionArtifacts) -> Result<LemmaReport> {
    let mut report = check_base_claim(art)?;
    report.merge(check_induction_lemma_blockwise(art)?);
    report.merge(check_timing_claims(art)?);
    Ok(report)
}

/// A single-weight change `parents[slot] -> dst` from `from` to `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Mutation {
    pub dst: NeuronId,
    pub slot: usize,
    pub from: i32,
    pub to: i32,
}

impl Mutation {
    pub fn apply(&self, art: &ReductionArtifacts) -> ReductionArtifacts {
        art.with_circuit(art.circuit.with_weight(self.dst, self.slot, self.to))
    }
}

/// Every replacement of one weight by another value in `-2..=2` that changes
/// the Boolean function of the target neuron. The edge into `O` is skipped:
/// no stage item observes it.
pub fn weight_mutations(art: &ReductionArtifacts) -> Vec<Mutation> {
    let c = &art.circuit;
    let mut out = Vec::new();
    for dst in c.ids() {
        if dst == c.output() {
            continue;
        }
        let neuron = c.neuron(dst);
        for slot in 0..neuron.parents.len() {
            let from = neuron.weights[slot];
            for to in -2..=2 {
                if to != from && changes_function(&neuron.weights, neuron.threshold, slot, to) {
                    out.push(Mutation { dst, slot, from, to });
                }
            }
        }
    }
    out
}

/// The subset of [`weight_mutations`] that is activated: at some step of the
/// unmutated run within the verification horizon, the mutated neuron would
/// compute a different value. Mutants outside this set cannot be told apart
/// from the original by any trajectory check over that horizon.
pub fn activated_weight_mutations(art: &ReductionArtifacts) -> Result<Vec<Mutation>> {
    let c = &art.circuit;
    let mut pending = weight_mutations(art);
    let mut active = vec![false; pending.len()];
    let mut engine = Engine::new(c, SilenceMask::empty(c))?;
    for _ in 0..lemma_horizon(art) {
        let state = engine.state();
        for (k, m) in pending.iter().enumerate() {
            if active[k] {
                continue;
            }
            let neuron = c.neuron(m.dst);
            let sum = |w: &dyn Fn(usize) -> i32| -> i64 {
                (0..neuron.parents.len()).filter(|&j| state.get(neuron.parents[j])).map(|j| w(j) as i64).sum()
            };
            let old = sum(&|j| neuron.weights[j]) >= neuron.threshold as i64;
            let new = sum(&|j| if j == m.slot { m.to } else { neuron.weights[j] }) >= neuron.threshold as i64;
            active[k] = old != new;
        }
        engine.advance();
    }
    let mut k = 0;
    pending.retain(|_| {
        k += 1;
        active[k - 1]
    });
    Ok(pending)
}

fn changes_function(weights: &[i32], threshold: i32, slot: usize, to: i32) -> bool {
    let k = weights.len();
    if k > 20 {
        return true;
    }
    let sum = |a: u32, w: &dyn Fn(usize) -> i32| -> i64 {
        (0..k).filter(|&j| a >> j & 1 == 1).map(|j| w(j) as i64).sum()
    };
    (0..1u32 << k).any(|a| {
        let old = sum(a, &|j| weights[j]) >= threshold as i64;
        let new = sum(a, &|j| if j == slot { to } else { weights[j] }) >= threshold as i64;
        old != new
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::{Lit, QbfFormula, Quantifier::*};
    use crate::reduction::compile_formula;

    fn efe(clauses: &[[i32; 3]]) -> ReductionArtifacts {
        let f = QbfFormula::new(3, vec![(Exists, 3), (Forall, 2), (Exists, 1)], clauses.iter().map(|c| c.map(Lit)).collect())
            .unwrap();
        compile_formula(&f).unwrap()
    }

    #[test]
    fn base_claim_holds() {
        for clauses in [&[[1, 2, 3], [-1, 2, 2]][..], &[[1, 1, 1], [-1, -1, -1]], &[[2, 3, 3], [1, -2, -2]]] {
            let r = check_base_claim(&efe(clauses)).unwrap();
            assert!(r.ok(), "{:?}", r.failures);
        }
    }

    #[test]
    fn blockwise_and_timing_hold() {
        let art = efe(&[[1, 2, 3], [-1, 2, 2], [1, -3, -3]]);
        let r = check_induction_lemma_blockwise(&art).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        let r = check_timing_claims(&art).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn per_step_item_one_fails_on_upper_odd_stage() {
        // ∀x2 ∃x1 (x1 ∨ x2 ∨ x3)(¬x1 ∨ ¬x2 ∨ x3) is true for both x3, yet
        // s_3_0 can only fire while x2 = 1.
        let art = efe(&[[1, 2, 3], [-1, -2, 3]]);
        let r = check_induction_lemma(&art).unwrap();
        assert!(!r.ok());
        assert!(r.failures.iter().all(|f| f.check == "item 1" && f.i == 3 && f.expected && !f.actual));
        assert!(check_induction_lemma_blockwise(&art).unwrap().ok());
    }

    #[test]
    fn mutations_change_functions() {
        assert!(!changes_function(&[1, 1], 1, 0, 2));
        assert!(changes_function(&[1, 1], 2, 0, 0));
        // weight 0 input of a threshold-0 neuron: any non-negative weight is inert
        assert!(!changes_function(&[0], 0, 0, 1));
        assert!(changes_function(&[0], 0, 0, -1));
        // ∃x1 φ is x2 ∨ x3, so the stage-2 latch sees both outcomes.
        let art = efe(&[[1, 2, 2], [-1, 2, 3]]);
        let muts = weight_mutations(&art);
        assert!(muts.iter().all(|m| m.dst != art.circuit.output() && m.from != m.to));
        let active = activated_weight_mutations(&art).unwrap();
        assert!(!active.is_empty() && active.len() < muts.len());
        assert!(active.iter().all(|m| muts.contains(m)));
        let killed = active.iter().filter(|m| !check_all(&m.apply(&art)).unwrap().ok()).count();
        assert_eq!(killed, active.len());
    }
}
