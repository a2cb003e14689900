//! The `n`-bit binary counter gadget.
//!
//! Started from the usual initial condition, the gadget's bit neurons
//! `x_{1,2n}, x_{2,2n}, x_{3,2n-2}, ..., x_{n,4}` (least significant first)
//! read all zeros until `t = 2n` and then encode `(t - 2n) mod 2^n`.
//!
//! Raw bits `x_{i,0}` toggle with period `2^i`: `x_{1,0}` is a two-neuron
//! oscillator, `x_{2,0}` a self-inverting loop through `x_{2,0}'`, and each
//! higher bit flips when the carry `y_{i-1}` (an AND of the lower raw bits)
//! fires. The delay chains `x_{i,1..}` re-align the bits, whose carries
//! arrive with staggered latency.

use serde::Serialize;

use crate::circuit::{Circuit, CircuitBuilder, NeuronId, SilenceMask};
use crate::error::{Error, Result};
use crate::sim::Engine;

/// Neurons of a counter embedded in some builder.
#[derive(Clone, Debug)]
pub(crate) struct CounterNeurons {
    /// `x_{i,0}` at index `i - 1`.
    pub raw: Vec<NeuronId>,
    /// Bit neurons at index `i - 1`.
    pub bits: Vec<NeuronId>,
}

/// Length of the delay chain behind `x_{i,0}`.
pub fn chain_len(n: usize, i: usize) -> usize {
    if i == 1 {
        2 * n
    } else {
        2 * n + 4 - 2 * i
    }
}

/// Number of neurons in the `n`-bit counter.
pub fn counter_size(n: usize) -> usize {
    let core = 5 + n.saturating_sub(2) + 4 * n.saturating_sub(2);
    core + (1..=n).map(|i| chain_len(n, i)).sum::<usize>()
}

/// Emits the counter's neurons and edges into `b`. Neuron order: `I`, the
/// bit-1/bit-2 oscillators, the higher raw bits, the carry logic, then the
/// delay chains bit by bit.
pub(crate) fn build_counter(b: &mut CircuitBuilder, n: usize) -> Result<CounterNeurons> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("counter needs n >= 2, got {n}")));
    }
    let input = b.input("I")?;
    let x10 = b.neuron("x_1_0", 1)?;
    let xp10 = b.neuron("xp_1_0", 1)?;
    let x20 = b.neuron("x_2_0", 1)?;
    let xp20 = b.neuron("xp_2_0", 0)?;
    let mut raw = vec![x10, x20];
    for i in 3..=n {
        raw.push(b.neuron(format!("x_{i}_0"), 1)?);
    }
    let mut ys = Vec::new();
    let mut abs = Vec::new();
    for i in 2..n {
        let yp = b.neuron(format!("yp_{i}"), if i == 2 { 1 } else { 2 })?;
        let y = b.neuron(format!("y_{i}"), 1)?;
        let a = b.neuron(format!("a_{i}"), 1)?;
        let bb = b.neuron(format!("b_{i}"), 1)?;
        ys.push((yp, y));
        abs.push((a, bb));
    }

    b.wire(x10, &[(input, 1), (xp10, 1)])?;
    b.wire(xp10, &[(x10, 1)])?;
    b.wire(xp20, &[(input, 1), (x20, -1)])?;
    b.wire(x20, &[(xp20, 1)])?;
    for i in 2..n {
        let (yp, y) = ys[i - 2];
        if i == 2 {
            b.wire(yp, &[(raw[1], 1)])?;
        } else {
            b.wire(yp, &[(raw[i - 1], 1), (ys[i - 3].1, 1)])?;
        }
        b.wire(y, &[(yp, 1)])?;
        let (a, bb) = abs[i - 2];
        b.wire(a, &[(y, 1), (raw[i], -1)])?;
        b.wire(bb, &[(raw[i], 1), (y, -1)])?;
    }
    for i in 3..=n {
        let (a, bb) = abs[i - 3];
        b.wire(raw[i - 1], &[(a, 1), (bb, 1)])?;
    }

    let mut bits = Vec::with_capacity(n);
    for i in 1..=n {
        let mut prev = raw[i - 1];
        for j in 1..=chain_len(n, i) {
            prev = b.gate(format!("x_{i}_{j}"), 1, &[(prev, 1)])?;
        }
        bits.push(prev);
    }
    Ok(CounterNeurons { raw, bits })
}

#[derive(Clone, Debug)]
pub struct CounterLayout {
    pub n: usize,
    pub circuit: Circuit,
    /// Bit neuron of bit `i` at index `i - 1`, least significant first.
    pub bit_neurons: Vec<NeuronId>,
    /// `x_{i,0}` at index `i - 1`.
    pub raw_bits: Vec<NeuronId>,
    /// Time at which the bit neurons start counting from zero.
    pub warmup: u64,
}

impl CounterLayout {
    /// Same layout around a different circuit with the same neuron names,
    /// e.g. a mutant.
    pub fn with_circuit(&self, circuit: Circuit) -> CounterLayout {
        CounterLayout { circuit, ..self.clone() }
    }
}

/// Builds the `n`-bit counter. A standalone counter has no natural output;
/// the most significant bit neuron `x_{n,4}`, which feeds nothing, serves as
/// `O`.
pub fn gen_counter(n: usize) -> Result<CounterLayout> {
    let mut b = CircuitBuilder::new();
    let c = build_counter(&mut b, n)?;
    b.set_output(c.bits[n - 1]);
    Ok(CounterLayout { n, circuit: b.build()?, bit_neurons: c.bits, raw_bits: c.raw, warmup: 2 * n as u64 })
}

/// Closed form of `x_{1,0}(t)`: on exactly at odd times.
pub fn expected_x1(t: u64) -> bool {
    t % 2 == 1
}

/// Closed form of `x_{i,0}(t)` for `i >= 2`: off until `2^{i-1} + 2i - 5`,
/// then toggling every `2^{i-1}` steps.
pub fn expected_raw_bit(i: usize, t: u64) -> bool {
    assert!(i >= 2, "raw bit index starts at 2");
    let half = 1u64 << (i - 1);
    let shift = 2 * i as u64;
    if t + 5 <= half + shift {
        return false;
    }
    ((t + 4 - shift) / half) % 2 == 1
}

/// Value of raw bit `i` (1-based) at time `t`, covering `i = 1` too.
pub fn expected_raw(i: usize, t: u64) -> bool {
    if i == 1 {
        expected_x1(t)
    } else {
        expected_raw_bit(i, t)
    }
}

/// Closed form of the carry `y_i(t)` for `2 <= i <= n - 1`: on at
/// `l 2^i + 2i - 4` and `l 2^i + 2i - 3` for every `l >= 1`.
pub fn expected_y(i: usize, t: u64) -> bool {
    assert!(i >= 2, "carry index starts at 2");
    let period = 1u64 << i;
    let offset = 2 * i as u64 - 4;
    if t < period + offset {
        return false;
    }
    (t - offset) % period <= 1
}

/// Integer encoded by the bit neurons at time `t`.
pub fn counter_value(n: usize, t: u64) -> u64 {
    let warmup = 2 * n as u64;
    if t < warmup {
        0
    } else {
        (t - warmup) % (1u64 << n)
    }
}

/// Value of bit `i` (1-based) of the counter output at time `t`.
pub fn expected_bit(n: usize, i: usize, t: u64) -> bool {
    counter_value(n, t) >> (i - 1) & 1 == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub neuron: String,
    pub t: u64,
    pub expected: bool,
    pub actual: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FirstFiring {
    pub neuron: String,
    pub time: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterReport {
    pub n: usize,
    pub horizon: u64,
    /// Steps simulated (`horizon`, or fewer on mismatch).
    pub steps: u64,
    pub mismatch: Option<Mismatch>,
    /// Observed first firing of every raw bit, carry and bit neuron.
    pub first_firings: Vec<FirstFiring>,
}

impl CounterReport {
    pub fn ok(&self) -> bool {
        self.mismatch.is_none()
    }

    pub fn first_firing(&self, name: &str) -> Option<u64> {
        self.first_firings.iter().find(|f| f.neuron == name).and_then(|f| f.time)
    }
}

pub fn default_horizon(n: usize) -> u64 {
    2 * n as u64 + 4 * (1u64 << n)
}

/// Simulates `gen_counter(n)` and compares every neuron with its closed form
/// at every step up to `horizon` (default `2n + 4 * 2^n`).
pub fn verify_counter(n: usize, horizon: Option<u64>) -> Result<CounterReport> {
    verify_layout(&gen_counter(n)?, horizon)
}

/// Like [`verify_counter`] but for a given layout, whose circuit may have
/// been altered.
pub fn verify_layout(layout: &CounterLayout, horizon: Option<u64>) -> Result<CounterReport> {
    let n = layout.n;
    let horizon = horizon.unwrap_or_else(|| default_horizon(n));
    let c = &layout.circuit;

    // (neuron, closed form) for every neuron with a predicted trajectory.
    type Pred = Box<dyn Fn(u64) -> bool>;
    let mut checks: Vec<(NeuronId, Pred)> = Vec::new();
    let mut watched_first = Vec::new();
    checks.push((c.input(), Box::new(|t| t == 0)));
    checks.push((c.lookup("xp_1_0")?, Box::new(|t| t >= 1 && expected_x1(t - 1))));
    for i in 1..=n {
        let raw = layout.raw_bits[i - 1];
        watched_first.push(raw);
        checks.push((raw, Box::new(move |t| expected_raw(i, t))));
        for j in 1..=chain_len(n, i) as u64 {
            let id = c.lookup(&format!("x_{i}_{j}"))?;
            checks.push((id, Box::new(move |t| t >= j && expected_raw(i, t - j))));
        }
    }
    for i in 2..n {
        let y = c.lookup(&format!("y_{i}"))?;
        watched_first.push(y);
        checks.push((y, Box::new(move |t| expected_y(i, t))));
    }
    watched_first.extend(layout.bit_neurons.iter().copied());

    let mut first: Vec<Option<u64>> = vec![None; watched_first.len()];
    let mut engine = Engine::new(c, SilenceMask::empty(c))?;
    let mut mismatch = None;
    'steps: loop {
        let t = engine.time();
        for (id, f) in &checks {
            let (expected, actual) = (f(t), engine.get(*id));
            if expected != actual {
                mismatch = Some(Mismatch { neuron: c.name(*id).to_string(), t, expected, actual });
                break 'steps;
            }
        }
        let mut value = 0u64;
        for (k, &id) in layout.bit_neurons.iter().enumerate() {
            value |= (engine.get(id) as u64) << k;
        }
        if value != counter_value(n, t) {
            let k = (value ^ counter_value(n, t)).trailing_zeros() as usize;
            let id = layout.bit_neurons[k];
            let actual = engine.get(id);
            mismatch = Some(Mismatch { neuron: c.name(id).to_string(), t, expected: !actual, actual });
            break;
        }
        for (slot, &id) in first.iter_mut().zip(&watched_first) {
            if slot.is_none() && engine.get(id) {
                *slot = Some(t);
            }
        }
        if t >= horizon {
            break;
        }
        engine.advance();
    }
    let first_firings = watched_first
        .iter()
        .zip(first)
        .map(|(&id, time)| FirstFiring { neuron: c.name(id).to_string(), time })
        .collect();
    Ok(CounterReport { n, horizon, steps: engine.time(), mismatch, first_firings })
}
