//! Threshold circuit data model.
//!
//! A [`Circuit`] is an immutable directed graph of threshold neurons. Every
//! neuron `v` computes `[sum_i w_i * u_i(t) >= b_v]` over its ordered parent
//! list, with a uniform delay of one step. Two neurons are designated: the
//! input `I` (stimulated only at `t = 0`) and the output `O`.
//!
//! Circuits are assembled with a [`CircuitBuilder`]. The builder only rejects
//! structural nonsense (duplicate names, dangling ids, `I == O`); everything
//! else, including the degree and weight bounds, is reported by
//! [`Circuit::validate`].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index of a neuron inside one circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NeuronId(pub u32);

impl NeuronId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NeuronId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A neuron computing `[sum_i weights[i] * parents[i] >= threshold]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdNeuron {
    pub name: String,
    pub parents: Vec<NeuronId>,
    pub weights: Vec<i32>,
    pub threshold: i32,
}

impl ThresholdNeuron {
    /// Evaluates the threshold function on parent values given by `bit`.
    pub fn fires(&self, mut bit: impl FnMut(NeuronId) -> bool) -> bool {
        let sum: i64 = self
            .parents
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| if bit(p) { w as i64 } else { 0 })
            .sum();
        sum >= self.threshold as i64
    }
}

/// Opt-in structural bounds checked by [`Circuit::validate`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitFlags {
    /// Every weight and threshold has absolute value at most 2.
    pub bounded_weights: bool,
    /// Every neuron has total degree (in + out) at most 6.
    pub bounded_degree: bool,
}

impl CircuitFlags {
    pub const BOUNDED: CircuitFlags = CircuitFlags { bounded_weights: true, bounded_degree: true };
}

pub const MAX_ABS_WEIGHT: i32 = 2;
pub const MAX_DEGREE: usize = 6;

/// Compressed parent layout used by the packed simulator.
#[derive(Clone, Debug, Default)]
pub(crate) struct Csr {
    pub offsets: Vec<u32>,
    pub parents: Vec<u32>,
    pub weights: Vec<i32>,
    pub thresholds: Vec<i32>,
}

#[derive(Clone, Debug)]
pub struct Circuit {
    neurons: Vec<ThresholdNeuron>,
    by_name: HashMap<String, NeuronId>,
    input: NeuronId,
    output: NeuronId,
    flags: CircuitFlags,
    csr: Csr,
}

/// Structural equality: same neurons in the same order, same `I` and `O`.
/// Flags are not part of the identity.
impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.neurons == other.neurons && self.input == other.input && self.output == other.output
    }
}

impl Eq for Circuit {}

impl Circuit {
    pub fn len(&self) -> usize {
        self.neurons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neurons.is_empty()
    }

    pub fn input(&self) -> NeuronId {
        self.input
    }

    pub fn output(&self) -> NeuronId {
        self.output
    }

    pub fn flags(&self) -> CircuitFlags {
        self.flags
    }

    pub fn with_flags(mut self, flags: CircuitFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn neuron(&self, id: NeuronId) -> &ThresholdNeuron {
        &self.neurons[id.index()]
    }

    pub fn neurons(&self) -> &[ThresholdNeuron] {
        &self.neurons
    }

    pub fn ids(&self) -> impl Iterator<Item = NeuronId> + '_ {
        (0..self.neurons.len() as u32).map(NeuronId)
    }

    pub fn name(&self, id: NeuronId) -> &str {
        &self.neurons[id.index()].name
    }

    pub fn id(&self, name: &str) -> Option<NeuronId> {
        self.by_name.get(name).copied()
    }

    /// Like [`Circuit::id`] but reports unknown names as an error.
    pub fn lookup(&self, name: &str) -> Result<NeuronId> {
        self.id(name).ok_or_else(|| Error::UnknownNeuron(name.to_string()))
    }

    /// All edges `(src, dst, weight)` in emission order: destinations in index
    /// order, parents in their declared order.
    pub fn edges(&self) -> impl Iterator<Item = (NeuronId, NeuronId, i32)> + '_ {
        self.neurons.iter().enumerate().flat_map(|(d, n)| {
            n.parents.iter().zip(&n.weights).map(move |(&p, &w)| (p, NeuronId(d as u32), w))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.neurons.iter().map(|n| n.parents.len()).sum()
    }

    /// Children lists reconstructed from the parent lists.
    pub fn children(&self) -> Vec<Vec<NeuronId>> {
        let mut out = vec![Vec::new(); self.len()];
        for (src, dst, _) in self.edges() {
            out[src.index()].push(dst);
        }
        out
    }

    /// Total degree of every neuron: in-degree plus out-degree, each edge
    /// counted once per endpoint. A self-loop counts once.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.len()];
        for (src, dst, _) in self.edges() {
            deg[dst.index()] += 1;
            if src != dst {
                deg[src.index()] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub(crate) fn csr(&self) -> &Csr {
        &self.csr
    }

    /// Reports every invariant violation. The report is empty iff the circuit
    /// is valid under its flags.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let input = self.neuron(self.input);
        if !input.parents.is_empty() {
            violations.push(Violation::InputHasParents { input: input.name.clone() });
        }
        if input.threshold < 1 {
            violations.push(Violation::InputNotSilent { input: input.name.clone(), threshold: input.threshold });
        }
        let out_name = self.name(self.output).to_string();
        for (src, dst, _) in self.edges() {
            if src == self.output {
                violations.push(Violation::OutputHasChildren {
                    output: out_name.clone(),
                    child: self.name(dst).to_string(),
                });
            }
        }
        for n in &self.neurons {
            let mut seen = Vec::with_capacity(n.parents.len());
            for &p in &n.parents {
                if seen.contains(&p) {
                    violations.push(Violation::DuplicateParent {
                        neuron: n.name.clone(),
                        parent: self.name(p).to_string(),
                    });
                } else {
                    seen.push(p);
                }
            }
        }
        if self.flags.bounded_weights {
            for n in &self.neurons {
                for (&p, &w) in n.parents.iter().zip(&n.weights) {
                    if w.abs() > MAX_ABS_WEIGHT {
                        violations.push(Violation::WeightOutOfBounds {
                            neuron: n.name.clone(),
                            parent: self.name(p).to_string(),
                            weight: w,
                        });
                    }
                }
                if n.threshold.abs() > MAX_ABS_WEIGHT {
                    violations.push(Violation::ThresholdOutOfBounds { neuron: n.name.clone(), threshold: n.threshold });
                }
            }
        }
        let degrees = self.degrees();
        if self.flags.bounded_degree {
            for (i, &d) in degrees.iter().enumerate() {
                if d > MAX_DEGREE {
                    violations.push(Violation::DegreeOutOfBounds { neuron: self.neurons[i].name.clone(), degree: d });
                }
            }
        }
        ValidationReport {
            violations,
            max_degree: degrees.iter().copied().max().unwrap_or(0),
            max_abs_weight: self
                .neurons
                .iter()
                .flat_map(|n| n.weights.iter().copied().chain(std::iter::once(n.threshold)))
                .map(i32::abs)
                .max()
                .unwrap_or(0),
        }
    }

    /// Returns a copy with the weight of `dst`'s `slot`-th parent replaced.
    pub fn with_weight(&self, dst: NeuronId, slot: usize, weight: i32) -> Circuit {
        let mut b = CircuitBuilder::from_circuit(self);
        b.neurons[dst.index()].weights[slot] = weight;
        b.build().expect("rewiring a valid circuit keeps it well-formed")
    }

    /// Returns a copy with `id`'s threshold replaced.
    pub fn with_threshold(&self, id: NeuronId, threshold: i32) -> Circuit {
        let mut b = CircuitBuilder::from_circuit(self);
        b.neurons[id.index()].threshold = threshold;
        b.build().expect("rewiring a valid circuit keeps it well-formed")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InputHasParents { input: String },
    InputNotSilent { input: String, threshold: i32 },
    OutputHasChildren { output: String, child: String },
    DuplicateParent { neuron: String, parent: String },
    WeightOutOfBounds { neuron: String, parent: String, weight: i32 },
    ThresholdOutOfBounds { neuron: String, threshold: i32 },
    DegreeOutOfBounds { neuron: String, degree: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InputHasParents { input } => write!(f, "input has incoming edge ({input})"),
            Violation::InputNotSilent { input, threshold } => {
                write!(f, "input {input} is not constant-0 after t=0 (threshold {threshold})")
            }
            Violation::OutputHasChildren { output, child } => {
                write!(f, "output has outgoing edge ({output} -> {child})")
            }
            Violation::DuplicateParent { neuron, parent } => write!(f, "duplicate parent {parent} of {neuron}"),
            Violation::WeightOutOfBounds { neuron, parent, weight } => {
                write!(f, "weight {weight} on {parent} -> {neuron} exceeds |{MAX_ABS_WEIGHT}|")
            }
            Violation::ThresholdOutOfBounds { neuron, threshold } => {
                write!(f, "threshold {threshold} of {neuron} exceeds |{MAX_ABS_WEIGHT}|")
            }
            Violation::DegreeOutOfBounds { neuron, degree } => {
                write!(f, "degree {degree} of {neuron} exceeds {MAX_DEGREE}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub max_degree: usize,
    pub max_abs_weight: i32,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'.')
}

/// Incremental circuit construction. Neurons are declared first (fixing their
/// indices), edges may then be added in any order; the order of edges into a
/// neuron fixes its parent order.
#[derive(Clone, Debug, Default)]
pub struct CircuitBuilder {
    neurons: Vec<ThresholdNeuron>,
    by_name: HashMap<String, NeuronId>,
    input: Option<NeuronId>,
    output: Option<NeuronId>,
    flags: CircuitFlags,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_circuit(c: &Circuit) -> Self {
        CircuitBuilder {
            neurons: c.neurons.clone(),
            by_name: c.by_name.clone(),
            input: Some(c.input),
            output: Some(c.output),
            flags: c.flags,
        }
    }

    pub fn len(&self) -> usize {
        self.neurons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neurons.is_empty()
    }

    pub fn flags(&mut self, flags: CircuitFlags) -> &mut Self {
        self.flags = flags;
        self
    }

    pub fn neuron(&mut self, name: impl Into<String>, threshold: i32) -> Result<NeuronId> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(Error::InvalidName(name));
        }
        if self.by_name.contains_key(&name) {
            return Err(Error::DuplicateNeuron(name));
        }
        let id = NeuronId(self.neurons.len() as u32);
        self.by_name.insert(name.clone(), id);
        self.neurons.push(ThresholdNeuron { name, parents: Vec::new(), weights: Vec::new(), threshold });
        Ok(id)
    }

    /// Declares the input neuron: no parents, threshold 1 (constant 0 after
    /// the initial step).
    pub fn input(&mut self, name: impl Into<String>) -> Result<NeuronId> {
        let id = self.neuron(name, 1)?;
        self.input = Some(id);
        Ok(id)
    }

    pub fn set_input(&mut self, id: NeuronId) -> &mut Self {
        self.input = Some(id);
        self
    }

    pub fn set_output(&mut self, id: NeuronId) -> &mut Self {
        self.output = Some(id);
        self
    }

    pub fn id(&self, name: &str) -> Option<NeuronId> {
        self.by_name.get(name).copied()
    }

    pub fn set_threshold(&mut self, id: NeuronId, threshold: i32) -> &mut Self {
        self.neurons[id.index()].threshold = threshold;
        self
    }

    pub fn edge(&mut self, src: NeuronId, dst: NeuronId, weight: i32) -> Result<&mut Self> {
        let n = self.neurons.len();
        for id in [src, dst] {
            if id.index() >= n {
                return Err(Error::UnknownNeuron(id.to_string()));
            }
        }
        let d = &mut self.neurons[dst.index()];
        d.parents.push(src);
        d.weights.push(weight);
        Ok(self)
    }

    /// Declares `name` as `[sum w_i * parent_i >= threshold]` in one call.
    pub fn gate(&mut self, name: impl Into<String>, threshold: i32, inputs: &[(NeuronId, i32)]) -> Result<NeuronId> {
        let id = self.neuron(name, threshold)?;
        self.wire(id, inputs)?;
        Ok(id)
    }

    /// Appends the given weighted parents to an already declared neuron.
    pub fn wire(&mut self, dst: NeuronId, inputs: &[(NeuronId, i32)]) -> Result<()> {
        for &(src, w) in inputs {
            self.edge(src, dst, w)?;
        }
        Ok(())
    }

    pub fn rename(&mut self, id: NeuronId, new_name: impl Into<String>) -> Result<()> {
        let new_name = new_name.into();
        if !valid_name(&new_name) {
            return Err(Error::InvalidName(new_name));
        }
        if self.by_name.contains_key(&new_name) {
            return Err(Error::DuplicateNeuron(new_name));
        }
        let old = std::mem::replace(&mut self.neurons[id.index()].name, new_name.clone());
        self.by_name.remove(&old);
        self.by_name.insert(new_name, id);
        Ok(())
    }

    pub fn build(self) -> Result<Circuit> {
        let input = self.input.ok_or(Error::MissingTerminal("input"))?;
        let output = self.output.ok_or(Error::MissingTerminal("output"))?;
        if input == output {
            return Err(Error::InputIsOutput);
        }
        let mut csr = Csr {
            offsets: Vec::with_capacity(self.neurons.len() + 1),
            parents: Vec::new(),
            weights: Vec::new(),
            thresholds: Vec::with_capacity(self.neurons.len()),
        };
        csr.offsets.push(0);
        for n in &self.neurons {
            csr.parents.extend(n.parents.iter().map(|p| p.0));
            csr.weights.extend_from_slice(&n.weights);
            csr.offsets.push(csr.parents.len() as u32);
            csr.thresholds.push(n.threshold);
        }
        Ok(Circuit { neurons: self.neurons, by_name: self.by_name, input, output, flags: self.flags, csr })
    }
}

/// A set of neurons forced to 0 at every step, `t = 0` included.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SilenceMask {
    words: Vec<u64>,
    len: usize,
}

impl SilenceMask {
    pub fn empty(circuit: &Circuit) -> Self {
        SilenceMask { words: vec![0; words_for(circuit.len())], len: circuit.len() }
    }

    pub fn from_ids(circuit: &Circuit, ids: impl IntoIterator<Item = NeuronId>) -> Result<Self> {
        let mut m = Self::empty(circuit);
        for id in ids {
            m.insert(id)?;
        }
        Ok(m)
    }

    pub fn from_names<'a>(circuit: &Circuit, names: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut m = Self::empty(circuit);
        for name in names {
            m.insert(circuit.lookup(name)?)?;
        }
        Ok(m)
    }

    pub fn insert(&mut self, id: NeuronId) -> Result<()> {
        if id.index() >= self.len {
            return Err(Error::UnknownNeuron(id.to_string()));
        }
        self.words[id.index() / 64] |= 1 << (id.index() % 64);
        Ok(())
    }

    pub fn remove(&mut self, id: NeuronId) {
        if id.index() < self.len {
            self.words[id.index() / 64] &= !(1 << (id.index() % 64));
        }
    }

    #[inline]
    pub fn toggle(&mut self, index: usize) {
        self.words[index / 64] ^= 1 << (index % 64);
    }

    #[inline]
    pub fn contains(&self, id: NeuronId) -> bool {
        id.index() < self.len && (self.words[id.index() / 64] >> (id.index() % 64)) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ids(&self) -> impl Iterator<Item = NeuronId> + '_ {
        (0..self.len).filter(|&i| (self.words[i / 64] >> (i % 64)) & 1 == 1).map(|i| NeuronId(i as u32))
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// One bit per neuron: the circuit's configuration at one time step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateVector {
    words: Vec<u64>,
    len: usize,
}

impl StateVector {
    pub fn zeros(len: usize) -> Self {
        StateVector { words: vec![0; words_for(len)], len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, id: NeuronId) -> bool {
        (self.words[id.index() / 64] >> (id.index() % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, id: NeuronId, value: bool) {
        let (w, b) = (id.index() / 64, id.index() % 64);
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = NeuronId> + '_ {
        (0..self.len).filter(|&i| (self.words[i / 64] >> (i % 64)) & 1 == 1).map(|i| NeuronId(i as u32))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub(crate) fn apply_mask(&mut self, mask: &SilenceMask) {
        for (w, m) in self.words.iter_mut().zip(mask.words()) {
            *w &= !m;
        }
    }
}

/// The configuration at `t = 0`: only `I` is stimulated, unless silenced.
pub fn initial_state(circuit: &Circuit, mask: &SilenceMask) -> Result<StateVector> {
    if mask.len != circuit.len() {
        return Err(Error::MaskMismatch { mask: mask.len, circuit: circuit.len() });
    }
    let mut s = StateVector::zeros(circuit.len());
    s.set(circuit.input(), true);
    s.apply_mask(mask);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn chain() -> Circuit {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let a = b.gate("A", 1, &[(i, 1)]).unwrap();
        let o = b.gate("O", 1, &[(a, 1)]).unwrap();
        b.set_output(o);
        b.build().unwrap()
    }

    #[test]
    fn initial_state_sets_only_input() {
        let c = chain();
        let s = initial_state(&c, &SilenceMask::empty(&c)).unwrap();
        assert_eq!(s.ones().collect::<Vec<_>>(), vec![c.input()]);
    }

    #[test]
    fn silencing_input_zeroes_everything() {
        let c = chain();
        let m = SilenceMask::from_names(&c, ["I"]).unwrap();
        assert_eq!(initial_state(&c, &m).unwrap().count_ones(), 0);
    }

    #[test]
    fn silencing_output_keeps_input() {
        let c = chain();
        let m = SilenceMask::from_names(&c, ["O"]).unwrap();
        let s = initial_state(&c, &m).unwrap();
        assert!(s.get(c.lookup("I").unwrap()));
        assert!(!s.get(c.lookup("A").unwrap()));
        assert!(!s.get(c.lookup("O").unwrap()));
    }

    #[test]
    fn unknown_mask_name_is_an_error() {
        let c = chain();
        assert!(matches!(SilenceMask::from_names(&c, ["B"]), Err(Error::UnknownNeuron(_))));
    }

    #[test]
    fn output_with_child_is_reported() {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let o = b.gate("O", 1, &[(i, 1)]).unwrap();
        b.gate("X", 1, &[(o, 1)]).unwrap();
        b.set_output(o);
        let report = b.build().unwrap().validate();
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].to_string().starts_with("output has outgoing edge"));
    }

    #[test]
    fn input_with_parent_and_duplicates_are_reported() {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let a = b.gate("A", 1, &[(i, 1), (i, 1)]).unwrap();
        let o = b.gate("O", 1, &[(a, 1)]).unwrap();
        b.edge(a, i, 1).unwrap();
        b.set_output(o);
        let v = b.build().unwrap().validate().violations;
        assert!(v.contains(&Violation::InputHasParents { input: "I".into() }));
        assert!(v.contains(&Violation::DuplicateParent { neuron: "A".into(), parent: "I".into() }));
    }

    #[test]
    fn bounds_only_checked_when_flagged() {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let o = b.gate("O", 3, &[(i, 3)]).unwrap();
        b.set_output(o);
        let c = b.build().unwrap();
        assert!(c.validate().is_valid());
        let v = c.with_flags(CircuitFlags::BOUNDED).validate().violations;
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn degree_counts_in_and_out() {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let hub = b.gate("H", 1, &[(i, 1)]).unwrap();
        let mut last = hub;
        for k in 0..6 {
            last = b.gate(format!("L{k}"), 1, &[(hub, 1)]).unwrap();
        }
        b.set_output(last);
        let c = b.build().unwrap().with_flags(CircuitFlags::BOUNDED);
        let r = c.validate();
        assert_eq!(r.max_degree, 7);
        assert_eq!(r.violations, vec![Violation::DegreeOutOfBounds { neuron: "H".into(), degree: 7 }]);
    }

    #[test]
    fn builder_rejects_bad_names_and_terminals() {
        let mut b = CircuitBuilder::new();
        assert!(matches!(b.neuron("has space", 1), Err(Error::InvalidName(_))));
        let i = b.input("I").unwrap();
        assert!(matches!(b.neuron("I", 1), Err(Error::DuplicateNeuron(_))));
        b.set_output(i);
        assert!(matches!(b.build(), Err(Error::InputIsOutput)));
    }

    #[test]
    fn children_match_parent_lists() {
        let c = chain();
        let kids = c.children();
        for (src, dst, _) in c.edges() {
            assert!(kids[src.index()].contains(&dst));
        }
        assert_eq!(kids.iter().map(Vec::len).sum::<usize>(), c.edge_count());
    }
}
