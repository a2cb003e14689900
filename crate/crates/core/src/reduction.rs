//! Compiler from normalized quantified Boolean formulas to threshold circuits.
//!
//! The compiled circuit `C_φ` embeds the `n`-bit counter, whose bit neurons
//! (renamed `x_1..x_n`) enumerate every assignment once per period of `2^n`
//! steps. Clause neurons `c_j` and the AND-pyramid `d_{j,l}` make `s_{1,0}`
//! fire `m + 1` steps after the counter shows a satisfying assignment. For
//! every higher variable a small stage combines the previous stage's output
//! over one counter block:
//!
//! * even `i` (universal): `s_{i,1}` and `s'_{i,0}` split the previous stage
//!   by the value of `x_i`; `s_{i,0}` latches with `z_{i+1,m+i}` until
//!   `p_{i+1}`/`q_{i+1}` (which detect a flip of `x_{i+1}`) reset the latch,
//!   remembering whether the `x_i = 0` half succeeded;
//! * odd `i > 1` (existential): `s_{i,0}` fires when the `x_{i-1} = 1` half
//!   succeeds while the latch still holds the `x_{i-1} = 0` result.
//!
//! `O` copies `s_{n,0}`, so it fires within `t_max = 2^n + 3n + m + 2` steps
//! iff the formula is true.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::circuit::{Circuit, CircuitBuilder, CircuitFlags, NeuronId, SilenceMask};
use crate::counter::{build_counter, counter_size};
use crate::error::{Error, Result};
use crate::qbf::{normalize, NormalizedQbf, QbfFormula};
use crate::sim::{run, RunConfig, SimOutcome};

/// Largest normalized `n` that [`solve_via_circuit`] will simulate.
pub const DEFAULT_SOLVE_LIMIT: usize = 24;

/// The `s` neurons of one stage `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stage {
    pub s0: NeuronId,
    /// `s'_{i,0}`, even `i` only.
    pub s0_prime: Option<NeuronId>,
    /// `s_{i,1}`, even `i` only.
    pub s1: Option<NeuronId>,
}

#[derive(Clone, Debug)]
pub struct ReductionArtifacts {
    pub circuit: Circuit,
    pub formula: NormalizedQbf,
    pub n: usize,
    pub m: usize,
    /// Step budget that suffices to see `O` fire if it ever does.
    pub t_max: u64,
    /// `x_i` at index `i - 1`.
    pub var_neurons: Vec<NeuronId>,
    /// Stage `i` at index `i - 1`.
    pub stages: Vec<Stage>,
    /// `c_j` at index `j - 1`.
    pub clause_neurons: Vec<NeuronId>,
    /// `(p_i, q_i)` for odd `i > 1`.
    pub pq_neurons: BTreeMap<usize, (NeuronId, NeuronId)>,
}

pub fn t_max(n: usize, m: usize) -> u64 {
    (1u64 << n) + 3 * n as u64 + m as u64 + 2
}

/// Number of neurons of `C_φ` for `n` variables and `m` clauses.
pub fn reduction_size(n: usize, m: usize) -> usize {
    let z: usize = (2..=n).map(|i| m + i - 1).sum();
    let odd_stages = (n - 1) / 2;
    let even_stages = (n - 1) / 2;
    let pyramid = if m >= 2 { m * (m - 1) / 2 } else { 0 };
    counter_size(n) + z + 2 * odd_stages + 1 + 3 * even_stages + odd_stages + m + pyramid + 1
}

/// Names used by the compiler.
pub fn z_name(i: usize, j: usize) -> String {
    format!("z_{i}_{j}")
}

impl ReductionArtifacts {
    pub fn s0(&self, i: usize) -> NeuronId {
        self.stages[i - 1].s0
    }

    /// Same artifacts around a different circuit with the same neuron names
    /// and order, e.g. a mutant.
    pub fn with_circuit(&self, circuit: Circuit) -> ReductionArtifacts {
        ReductionArtifacts { circuit, ..self.clone() }
    }

    pub fn neuron(&self, name: &str) -> Result<NeuronId> {
        self.circuit.lookup(name)
    }

    /// Simulates from the initial condition for at most `t_max` steps,
    /// stopping when `O` fires.
    pub fn simulate(&self) -> Result<SimOutcome> {
        let cfg = RunConfig { budget: Some(self.t_max), detect_cycles: false, ..Default::default() };
        Ok(run(&self.circuit, &SilenceMask::empty(&self.circuit), &cfg)?.0)
    }

    /// Metadata document: sizes, `t_max`, name maps and variable provenance.
    pub fn metadata(&self) -> Value {
        let c = &self.circuit;
        let name = |id: NeuronId| c.name(id).to_string();
        let stages: Vec<Value> = self
            .stages
            .iter()
            .enumerate()
            .map(|(k, s)| {
                json!({
                    "i": k + 1,
                    "s0": name(s.s0),
                    "s0prime": s.s0_prime.map(name),
                    "s1": s.s1.map(name),
                })
            })
            .collect();
        let pq: Vec<Value> =
            self.pq_neurons.iter().map(|(&i, &(p, q))| json!({"i": i, "p": name(p), "q": name(q)})).collect();
        json!({
            "n": self.n,
            "m": self.m,
            "t_max": self.t_max,
            "neurons": c.len(),
            "edges": c.edge_count(),
            "input": name(c.input()),
            "output": name(c.output()),
            "var_neurons": self.var_neurons.iter().map(|&id| name(id)).collect::<Vec<_>>(),
            "clause_neurons": self.clause_neurons.iter().map(|&id| name(id)).collect::<Vec<_>>(),
            "stages": stages,
            "pq_neurons": pq,
            "provenance": self.formula.provenance(),
        })
    }
}

/// Builds `C_φ`. Requires `n >= 3`.
pub fn compile(q: &NormalizedQbf) -> Result<ReductionArtifacts> {
    let (n, m) = (q.n(), q.m());
    if n < 3 {
        return Err(Error::NotNormalized(vec![format!("need at least 3 variables, got {n}")]));
    }
    let mut b = CircuitBuilder::new();
    b.flags(CircuitFlags::BOUNDED);
    let counter = build_counter(&mut b, n)?;
    for i in 1..=n {
        b.rename(counter.bits[i - 1], format!("x_{i}"))?;
    }
    let x = counter.bits.clone();
    let odd = |i: usize| i % 2 == 1;

    // Declarations.
    let mut z: Vec<Vec<NeuronId>> = vec![Vec::new(); n + 1];
    for i in 2..=n {
        for j in 1..=m + i - 1 {
            z[i].push(b.neuron(z_name(i, j), 1)?);
        }
    }
    let zz = |i: usize, j: usize| z[i][j - 1];
    let mut pq = BTreeMap::new();
    for i in (3..=n).step_by(2) {
        let p = b.neuron(format!("p_{i}"), 1)?;
        let qq = b.neuron(format!("q_{i}"), 1)?;
        pq.insert(i, (p, qq));
    }
    let mut clause_neurons = Vec::with_capacity(m);
    for j in 1..=m {
        clause_neurons.push(b.neuron(format!("c_{j}"), 1)?);
    }
    let mut d: BTreeMap<(usize, usize), NeuronId> = BTreeMap::new();
    for j in 2..=m {
        for l in 1..j {
            let thr = if (j == 2 && l == 1) || (j > 2 && l == j - 1) { 2 } else { 1 };
            d.insert((j, l), b.neuron(format!("d_{j}_{l}"), thr)?);
        }
    }
    let mut stages = Vec::with_capacity(n);
    for i in 1..=n {
        let stage = if i % 2 == 0 {
            let sp = b.neuron(format!("sp_{i}_0"), 1)?;
            let s0 = b.neuron(format!("s_{i}_0"), 1)?;
            let s1 = b.neuron(format!("s_{i}_1"), 2)?;
            Stage { s0, s0_prime: Some(sp), s1: Some(s1) }
        } else {
            let s0 = b.neuron(format!("s_{i}_0"), if i == 1 { 1 } else { 2 })?;
            Stage { s0, s0_prime: None, s1: None }
        };
        stages.push(stage);
    }
    let out = b.neuron("O", 1)?;
    b.set_output(out);

    // Wiring.
    for i in 2..=n {
        b.wire(zz(i, 1), &[(x[i - 1], 1)])?;
        let copies = if odd(i) { m + i - 2 } else { m + i - 1 };
        for j in 2..=copies {
            b.wire(zz(i, j), &[(zz(i, j - 1), 1)])?;
        }
    }
    for (&i, &(p, qq)) in &pq {
        let (early, late) = (zz(i, m + i - 3), zz(i, m + i - 2));
        b.wire(p, &[(early, 1), (late, -1)])?;
        b.wire(qq, &[(late, 1), (early, -1)])?;
        let prev = stages[i - 2];
        b.wire(zz(i, m + i - 1), &[(prev.s0_prime.unwrap(), 1), (prev.s0, 1), (p, -2), (qq, -2)])?;
    }
    for (j, clause) in q.clauses().iter().enumerate() {
        let mut vars: Vec<(u32, bool)> = Vec::new();
        let mut tautology = false;
        for l in clause {
            match vars.iter().find(|v| v.0 == l.var()) {
                Some(&(_, pos)) => tautology |= pos != l.is_positive(),
                None => vars.push((l.var(), l.is_positive())),
            }
        }
        let c = clause_neurons[j];
        if tautology {
            // Always satisfied: keep the wiring, drop the influence.
            b.wire(c, &vars.iter().map(|&(v, _)| (x[v as usize - 1], 0)).collect::<Vec<_>>())?;
            b.set_threshold(c, 0);
        } else {
            let neg = vars.iter().filter(|v| !v.1).count() as i32;
            let inputs: Vec<_> = vars.iter().map(|&(v, pos)| (x[v as usize - 1], if pos { 1 } else { -1 })).collect();
            b.wire(c, &inputs)?;
            b.set_threshold(c, 1 - neg);
        }
    }
    if m >= 2 {
        b.wire(d[&(2, 1)], &[(clause_neurons[0], 1), (clause_neurons[1], 1)])?;
        for j in 3..=m {
            b.wire(d[&(j, 1)], &[(clause_neurons[j - 1], 1)])?;
            for l in 2..j - 1 {
                b.wire(d[&(j, l)], &[(d[&(j, l - 1)], 1)])?;
            }
            b.wire(d[&(j, j - 1)], &[(d[&(j - 1, j - 2)], 1), (d[&(j, j - 2)], 1)])?;
        }
        b.wire(stages[0].s0, &[(d[&(m, m - 1)], 1)])?;
    } else {
        b.wire(stages[0].s0, &[(clause_neurons[0], 1)])?;
    }
    for i in 2..=n {
        let prev = stages[i - 2];
        let st = stages[i - 1];
        if i % 2 == 0 {
            let (sp, s1) = (st.s0_prime.unwrap(), st.s1.unwrap());
            let zi = zz(i, m + i - 1);
            b.wire(sp, &[(prev.s0, 1), (zi, -1)])?;
            let (p, qq) = pq[&(i + 1)];
            b.wire(st.s0, &[(sp, 1), (zz(i + 1, m + i), 1), (p, -2), (qq, -2)])?;
            b.wire(s1, &[(prev.s0, 1), (zi, 1)])?;
        } else {
            b.wire(st.s0, &[(prev.s0, 1), (prev.s1.unwrap(), 1)])?;
        }
    }
    b.wire(out, &[(stages[n - 1].s0, 1)])?;

    let circuit = b.build()?;
    debug_assert_eq!(circuit.len(), reduction_size(n, m));
    Ok(ReductionArtifacts {
        circuit,
        formula: q.clone(),
        n,
        m,
        t_max: t_max(n, m),
        var_neurons: x,
        stages,
        clause_neurons,
        pq_neurons: pq,
    })
}

/// Checks the normal form, then compiles.
pub fn compile_formula(f: &QbfFormula) -> Result<ReductionArtifacts> {
    compile(&NormalizedQbf::from_formula(f.clone())?)
}

/// Decides `f` by normalizing, compiling and simulating `C_φ` for `t_max`
/// steps.
pub fn solve_via_circuit(f: &QbfFormula) -> Result<bool> {
    solve_via_circuit_with_limit(f, DEFAULT_SOLVE_LIMIT)
}

pub fn solve_via_circuit_with_limit(f: &QbfFormula, max_n: usize) -> Result<bool> {
    let q = normalize(f);
    if q.n() > max_n {
        return Err(Error::LimitExceeded { what: "normalized variables", limit: max_n as u64, actual: q.n() as u64 });
    }
    Ok(compile(&q)?.simulate()?.output_fired)
}
