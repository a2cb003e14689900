//! Synchronous discrete-time simulation.
//!
//! [`run`] is the packed engine: states are bit vectors, every step evaluates
//! each neuron over a compressed parent layout, and a set of 128-bit state
//! digests detects recurrence. A recurring state means the trajectory is
//! periodic from then on, so if `O` has not fired yet it never will.
//!
//! [`run_reference`] is the naive engine kept for differential testing: one
//! `bool` per neuron, evaluation straight from the [`ThresholdNeuron`]
//! records, no cycle shortcut.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::circuit::{initial_state, Circuit, NeuronId, SilenceMask, StateVector};
use crate::error::Result;

/// Upper bound applied to every budget unless configured otherwise.
pub const DEFAULT_HARD_CAP: u64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    OutputFired,
    BudgetExhausted,
    CycleDetected,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::OutputFired => "output-fired",
            Termination::BudgetExhausted => "budget-exhausted",
            Termination::CycleDetected => "cycle-detected",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub output_fired: bool,
    pub first_output_time: Option<u64>,
    pub steps_executed: u64,
    pub terminated_by: Termination,
}

impl SimOutcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("outcome serializes")
    }
}

/// Watched neuron values, one row per time step starting at `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    watched: Vec<NeuronId>,
    names: Vec<String>,
    rows: usize,
    bits: Vec<u8>,
}

impl Trace {
    fn new(circuit: &Circuit, watched: &[NeuronId]) -> Self {
        Trace {
            watched: watched.to_vec(),
            names: watched.iter().map(|&id| circuit.name(id).to_string()).collect(),
            rows: 0,
            bits: Vec::new(),
        }
    }

    fn push(&mut self, mut bit: impl FnMut(NeuronId) -> bool) {
        for &id in &self.watched {
            self.bits.push(bit(id) as u8);
        }
        self.rows += 1;
    }

    pub fn watched(&self) -> &[NeuronId] {
        &self.watched
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of rows, i.e. `steps_executed + 1`.
    pub fn len(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn row(&self, t: usize) -> &[u8] {
        let w = self.watched.len();
        &self.bits[t * w..(t + 1) * w]
    }

    /// Value of the `col`-th watched neuron at time `t`.
    pub fn get(&self, t: usize, col: usize) -> bool {
        self.bits[t * self.watched.len() + col] == 1
    }

    pub fn column(&self, id: NeuronId) -> Option<Vec<bool>> {
        let col = self.watched.iter().position(|&w| w == id)?;
        Some((0..self.rows).map(|t| self.get(t, col)).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for n in &self.names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for t in 0..self.rows {
            write!(out, "{t}").unwrap();
            for &b in self.row(t) {
                write!(out, ",{b}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Maximum number of step applications. `None` means `2^|V| + 1`.
    pub budget: Option<u64>,
    pub hard_cap: u64,
    pub watched: Vec<NeuronId>,
    pub detect_cycles: bool,
    /// Stop at the first step where `O` is stimulated.
    pub stop_at_output: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { budget: None, hard_cap: DEFAULT_HARD_CAP, watched: Vec::new(), detect_cycles: true, stop_at_output: true }
    }
}

impl RunConfig {
    pub fn with_budget(budget: u64) -> Self {
        RunConfig { budget: Some(budget), ..Default::default() }
    }

    pub fn watch(mut self, ids: impl IntoIterator<Item = NeuronId>) -> Self {
        self.watched = ids.into_iter().collect();
        self
    }

    /// Budget actually applied to a circuit of `len` neurons.
    pub fn effective_budget(&self, len: usize) -> u64 {
        self.budget.unwrap_or_else(|| full_budget(len)).min(self.hard_cap)
    }
}

/// `2^len + 1`, saturating: enough steps to either see `O` fire or revisit a
/// state.
pub fn full_budget(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len).saturating_add(1)
    }
}

/// One synchronous update with silencing applied to the result.
pub fn step(circuit: &Circuit, state: &StateVector, mask: &SilenceMask) -> StateVector {
    let mut next = StateVector::zeros(circuit.len());
    step_into(circuit, state, mask, &mut next);
    next
}

fn step_into(circuit: &Circuit, cur: &StateVector, mask: &SilenceMask, next: &mut StateVector) {
    let csr = circuit.csr();
    let n = circuit.len();
    let cur = cur.words();
    let out = next.words_mut();
    let mask = mask.words();
    for (wi, slot) in out.iter_mut().enumerate() {
        let base = wi * 64;
        let end = (base + 64).min(n);
        let mut word = 0u64;
        for v in base..end {
            let lo = csr.offsets[v] as usize;
            let hi = csr.offsets[v + 1] as usize;
            let mut acc: i64 = 0;
            for (&p, &w) in csr.parents[lo..hi].iter().zip(&csr.weights[lo..hi]) {
                let bit = (cur[(p >> 6) as usize] >> (p & 63)) & 1;
                acc += (w as i64) & (bit as i64).wrapping_neg();
            }
            word |= ((acc >= csr.thresholds[v] as i64) as u64) << (v - base);
        }
        *slot = word & !mask[wi];
    }
}

/// Stateful stepping over a borrowed circuit; used by the verifiers that need
/// to inspect many neurons per step without building a trace.
pub struct Engine<'c> {
    circuit: &'c Circuit,
    mask: SilenceMask,
    cur: StateVector,
    next: StateVector,
    time: u64,
}

impl<'c> Engine<'c> {
    pub fn new(circuit: &'c Circuit, mask: SilenceMask) -> Result<Self> {
        let cur = initial_state(circuit, &mask)?;
        Ok(Engine { circuit, next: StateVector::zeros(circuit.len()), cur, mask, time: 0 })
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn state(&self) -> &StateVector {
        &self.cur
    }

    #[inline]
    pub fn get(&self, id: NeuronId) -> bool {
        self.cur.get(id)
    }

    pub fn advance(&mut self) {
        step_into(self.circuit, &self.cur, &self.mask, &mut self.next);
        std::mem::swap(&mut self.cur, &mut self.next);
        self.time += 1;
    }
}

fn digest(words: &[u64]) -> u128 {
    #[inline]
    fn fmix(mut x: u64) -> u64 {
        x ^= x >> 33;
        x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
        x ^= x >> 33;
        x = x.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
        x ^ (x >> 33)
    }
    let mut a = 0x9e37_79b9_7f4a_7c15u64;
    let mut b = 0x6a09_e667_f3bc_c908u64 ^ words.len() as u64;
    for &w in words {
        a = (a ^ w).wrapping_mul(0xbf58_476d_1ce4_e5b9).rotate_left(27);
        b = (b.rotate_left(31) ^ fmix(w)).wrapping_mul(0x94d0_49bb_1331_11eb);
    }
    ((fmix(a) as u128) << 64) | fmix(b ^ a) as u128
}

/// Packed simulation from the initial condition.
pub fn run(circuit: &Circuit, mask: &SilenceMask, cfg: &RunConfig) -> Result<(SimOutcome, Trace)> {
    let budget = cfg.effective_budget(circuit.len());
    let output = circuit.output();
    let mut engine = Engine::new(circuit, mask.clone())?;
    let mut trace = Trace::new(circuit, &cfg.watched);
    trace.push(|id| engine.get(id));

    let mut seen: HashMap<u128, u64> = HashMap::new();
    if cfg.detect_cycles {
        seen.insert(digest(engine.state().words()), 0);
    }
    let mut first_output = None;
    let mut terminated_by = Termination::BudgetExhausted;
    while engine.time() < budget {
        engine.advance();
        let t = engine.time();
        trace.push(|id| engine.get(id));
        if engine.get(output) && first_output.is_none() {
            first_output = Some(t);
            if cfg.stop_at_output {
                terminated_by = Termination::OutputFired;
                break;
            }
        }
        if cfg.detect_cycles {
            let d = digest(engine.state().words());
            match seen.get(&d) {
                Some(&earlier) => {
                    if replay_state(circuit, mask, earlier)? == *engine.state() {
                        terminated_by = Termination::CycleDetected;
                        break;
                    }
                }
                None => {
                    seen.insert(d, t);
                }
            }
        }
    }
    let outcome = SimOutcome {
        output_fired: first_output.is_some(),
        first_output_time: first_output,
        steps_executed: engine.time(),
        terminated_by,
    };
    Ok((outcome, trace))
}

// Digest hits are confirmed by recomputing the earlier state instead of
// storing every full state.
fn replay_state(circuit: &Circuit, mask: &SilenceMask, t: u64) -> Result<StateVector> {
    let mut e = Engine::new(circuit, mask.clone())?;
    for _ in 0..t {
        e.advance();
    }
    Ok(e.cur)
}

/// Naive per-neuron simulation with the same contract as [`run`] but no
/// packing and no cycle detection.
pub fn run_reference(circuit: &Circuit, mask: &SilenceMask, cfg: &RunConfig) -> Result<(SimOutcome, Trace)> {
    let budget = cfg.effective_budget(circuit.len());
    let n = circuit.len();
    let init = initial_state(circuit, mask)?;
    let silenced: Vec<bool> = circuit.ids().map(|id| mask.contains(id)).collect();
    let mut state: Vec<bool> = circuit.ids().map(|id| init.get(id)).collect();
    let mut trace = Trace::new(circuit, &cfg.watched);
    trace.push(|id| state[id.index()]);
    let mut first_output = None;
    let mut terminated_by = Termination::BudgetExhausted;
    let mut t = 0u64;
    while t < budget {
        let next: Vec<bool> =
            (0..n).map(|v| !silenced[v] && circuit.neurons()[v].fires(|p| state[p.index()])).collect();
        state = next;
        t += 1;
        trace.push(|id| state[id.index()]);
        if state[circuit.output().index()] && first_output.is_none() {
            first_output = Some(t);
            if cfg.stop_at_output {
                terminated_by = Termination::OutputFired;
                break;
            }
        }
    }
    let outcome =
        SimOutcome { output_fired: first_output.is_some(), first_output_time: first_output, steps_executed: t, terminated_by };
    Ok((outcome, trace))
}

/// Whether `O` fires at some `t > 0` under the given silencing.
pub fn is_nontrivial(circuit: &Circuit, mask: &SilenceMask, budget: Option<u64>) -> Result<bool> {
    let cfg = RunConfig { budget, ..Default::default() };
    Ok(run(circuit, mask, &cfg)?.0.output_fired)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    fn chain() -> Circuit {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let a = b.gate("A", 1, &[(i, 1)]).unwrap();
        let o = b.gate("O", 1, &[(a, 1)]).unwrap();
        b.set_output(o);
        b.build().unwrap()
    }

    fn state_of(c: &Circuit, ones: &[&str]) -> StateVector {
        let mut s = StateVector::zeros(c.len());
        for n in ones {
            s.set(c.lookup(n).unwrap(), true);
        }
        s
    }

    #[test]
    fn and_gate_fires_on_both_inputs() {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let u1 = b.neuron("u1", 1).unwrap();
        let u2 = b.neuron("u2", 1).unwrap();
        let v = b.gate("v", 2, &[(u1, 1), (u2, 1)]).unwrap();
        let o = b.gate("O", 1, &[(v, 1)]).unwrap();
        b.wire(u1, &[(i, 1)]).unwrap();
        b.set_output(o);
        let c = b.build().unwrap();
        let next = step(&c, &state_of(&c, &["u1", "u2"]), &SilenceMask::empty(&c));
        assert!(next.get(v));
        let next = step(&c, &state_of(&c, &["u1"]), &SilenceMask::empty(&c));
        assert!(!next.get(v));
    }

    #[test]
    fn negative_weight_blocks_or_not() {
        // v <- I or not x, realized as [I - x >= 0]
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let x = b.neuron("x", 1).unwrap();
        let v = b.gate("v", 0, &[(i, 1), (x, -1)]).unwrap();
        let o = b.gate("O", 1, &[(v, 1)]).unwrap();
        b.set_output(o);
        let c = b.build().unwrap();
        let next = step(&c, &state_of(&c, &["x"]), &SilenceMask::empty(&c));
        assert!(!next.get(v));
        let next = step(&c, &state_of(&c, &[]), &SilenceMask::empty(&c));
        assert!(next.get(v));
    }

    #[test]
    fn chain_fires_at_two() {
        let c = chain();
        let (out, trace) = run(&c, &SilenceMask::empty(&c), &RunConfig::default().watch(c.ids())).unwrap();
        assert!(out.output_fired);
        assert_eq!(out.first_output_time, Some(2));
        assert_eq!(out.terminated_by, Termination::OutputFired);
        assert_eq!(trace.to_csv(), "t,I,A,O\n0,1,0,0\n1,0,1,0\n2,0,0,1\n");
    }

    #[test]
    fn silenced_chain_cycles_without_output() {
        let c = chain();
        let mask = SilenceMask::from_names(&c, ["A"]).unwrap();
        let (out, _) = run(&c, &mask, &RunConfig::default()).unwrap();
        assert!(!out.output_fired);
        assert_eq!(out.first_output_time, None);
        // t=1 is the all-zero state, which repeats at t=2.
        assert_eq!(out.terminated_by, Termination::CycleDetected);
        assert_eq!(out.steps_executed, 2);
        assert!(!is_nontrivial(&c, &mask, None).unwrap());
        assert!(is_nontrivial(&c, &SilenceMask::empty(&c), None).unwrap());
    }

    #[test]
    fn constant_zero_output_is_trivial() {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        b.gate("A", 1, &[(i, 1)]).unwrap();
        let o = b.neuron("O", 1).unwrap();
        b.set_output(o);
        let c = b.build().unwrap();
        assert!(!is_nontrivial(&c, &SilenceMask::empty(&c), None).unwrap());
    }

    #[test]
    fn two_cycle_has_period_four() {
        // u <- not v, v <- u
        let mut b = CircuitBuilder::new();
        b.input("I").unwrap();
        let u = b.neuron("u", 0).unwrap();
        let v = b.neuron("v", 1).unwrap();
        b.edge(v, u, -1).unwrap();
        b.edge(u, v, 1).unwrap();
        let o = b.neuron("O", 1).unwrap();
        b.set_output(o);
        let c = b.build().unwrap();
        let cfg = RunConfig { budget: Some(12), detect_cycles: false, ..Default::default() }.watch([u, v]);
        let (_, trace) = run(&c, &SilenceMask::empty(&c), &cfg).unwrap();
        // (u,v): t0 (0,0) t1 (1,0) t2 (1,1) t3 (0,1) t4 (0,0) ...
        let expected = [[0, 0], [1, 0], [1, 1], [0, 1]];
        for t in 0..trace.len() {
            assert_eq!(trace.row(t), expected[t % 4], "t={t}");
        }
    }

    #[test]
    fn budget_is_inclusive_of_firing_step() {
        let c = chain();
        let (out, _) = run(&c, &SilenceMask::empty(&c), &RunConfig::with_budget(2)).unwrap();
        assert_eq!(out.first_output_time, Some(2));
        let (out, _) = run(&c, &SilenceMask::empty(&c), &RunConfig::with_budget(1)).unwrap();
        assert!(!out.output_fired);
        assert_eq!(out.terminated_by, Termination::BudgetExhausted);
        assert_eq!(out.steps_executed, 1);
    }

    #[test]
    fn hard_cap_saturates_budget() {
        let cfg = RunConfig { hard_cap: 10, ..Default::default() };
        assert_eq!(cfg.effective_budget(100), 10);
        assert_eq!(full_budget(3), 9);
        assert_eq!(full_budget(70), u64::MAX);
    }

    #[test]
    fn outcome_json_keys() {
        let o = SimOutcome {
            output_fired: true,
            first_output_time: Some(2),
            steps_executed: 2,
            terminated_by: Termination::OutputFired,
        };
        assert_eq!(
            o.to_json(),
            r#"{"output_fired":true,"first_output_time":2,"steps_executed":2,"terminated_by":"output-fired"}"#
        );
    }

    #[test]
    fn reference_matches_packed_on_chain() {
        let c = chain();
        let cfg = RunConfig::default().watch(c.ids());
        let m = SilenceMask::empty(&c);
        assert_eq!(run(&c, &m, &cfg).unwrap(), run_reference(&c, &m, &cfg).unwrap());
    }
}
