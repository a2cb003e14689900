//! Oracles and generators shared by the integration tests. Everything here is
//! written independently of the library's own algorithms.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use nckt::sim::{full_budget, run_reference, RunConfig};
use nckt::{Circuit, CircuitBuilder, Lit, NeuronId, QbfFormula, Quantifier, SilenceMask};
use rand::seq::SliceRandom;
use rand::Rng;

/// Decides a closed formula by building the full truth table of the matrix
/// over the prefix order and folding it one quantifier at a time, innermost
/// first.
pub fn truth_table_qbf(f: &QbfFormula) -> bool {
    let k = f.prefix.len();
    assert!(k <= 22, "oracle is exponential");
    // Bit j of an index is the value of the prefix variable at position k-1-j.
    let mut pos_of = vec![usize::MAX; f.num_vars as usize + 1];
    for (p, &(_, v)) in f.prefix.iter().enumerate() {
        pos_of[v as usize] = k - 1 - p;
    }
    let mut table: Vec<bool> = (0..1usize << k)
        .map(|a| {
            f.clauses.iter().all(|c| c.iter().any(|l| ((a >> pos_of[l.var() as usize]) & 1 == 1) == (l.0 > 0)))
        })
        .collect();
    for p in (0..k).rev() {
        let q = f.prefix[p].0;
        table = table
            .chunks(2)
            .map(|pair| match q {
                Quantifier::Exists => pair[0] || pair[1],
                Quantifier::Forall => pair[0] && pair[1],
            })
            .collect();
    }
    table[0]
}

/// Alternating prefix over `n` variables, `x_n` outermost, `∃` on odd indices.
pub fn alternating_prefix(n: u32) -> Vec<(Quantifier, u32)> {
    (1..=n).rev().map(|v| (if v % 2 == 1 { Quantifier::Exists } else { Quantifier::Forall }, v)).collect()
}

fn random_lit(rng: &mut impl Rng, var: u32) -> Lit {
    Lit::new(var, rng.gen())
}

/// Random 3-CNF with the alternating prefix. With `max_occ`, no variable
/// appears in more than that many clauses (fewer clauses are produced when
/// the budget runs out).
pub fn random_formula(rng: &mut impl Rng, n: u32, m: usize, max_occ: Option<usize>) -> QbfFormula {
    let mut occ = vec![0usize; n as usize + 1];
    let mut clauses = Vec::new();
    'clauses: for _ in 0..m {
        let mut clause: Vec<Lit> = Vec::new();
        for _ in 0..3 {
            let usable: Vec<u32> = (1..=n)
                .filter(|&v| clause.iter().any(|l| l.var() == v) || max_occ.is_none_or(|cap| occ[v as usize] < cap))
                .collect();
            let Some(&v) = usable.choose(rng) else { break 'clauses };
            clause.push(random_lit(rng, v));
        }
        let mut seen = BTreeSet::new();
        for l in &clause {
            if seen.insert(l.var()) {
                occ[l.var() as usize] += 1;
            }
        }
        clauses.push([clause[0], clause[1], clause[2]]);
    }
    QbfFormula::new(n, alternating_prefix(n), clauses).unwrap()
}

/// Random formula with an arbitrary prefix order and quantifiers, possibly
/// leaving variables unused.
pub fn random_general_formula(rng: &mut impl Rng, n: u32, m: usize) -> QbfFormula {
    let mut vars: Vec<u32> = (1..=n).collect();
    vars.shuffle(rng);
    let prefix = vars.iter().map(|&v| (if rng.gen() { Quantifier::Exists } else { Quantifier::Forall }, v)).collect();
    let clauses = (0..m)
        .map(|_| {
            [0; 3].map(|_| {
                let v = rng.gen_range(1..=n);
                random_lit(rng, v)
            })
        })
        .collect();
    QbfFormula::new(n, prefix, clauses).unwrap()
}

/// Random circuit on `len >= 2` neurons: `I`, then `v1..`, with `O` a random
/// non-input neuron. Up to four distinct parents each (self-loops allowed),
/// weights and thresholds in `-2..=2`.
pub fn random_circuit(rng: &mut impl Rng, len: usize) -> Circuit {
    let mut b = CircuitBuilder::new();
    let mut ids = vec![b.input("I").unwrap()];
    for k in 1..len {
        ids.push(b.neuron(format!("v{k}"), rng.gen_range(-2..=2)).unwrap());
    }
    for &dst in &ids[1..] {
        let mut parents = ids.clone();
        parents.shuffle(rng);
        for &src in parents.iter().take(rng.gen_range(0..=4)) {
            b.edge(src, dst, rng.gen_range(-2..=2)).unwrap();
        }
    }
    b.set_output(ids[rng.gen_range(1..len)]);
    b.build().unwrap()
}

/// Non-triviality with the reference engine and the full budget.
pub fn naive_nontrivial(c: &Circuit, mask: &SilenceMask) -> bool {
    let cfg = RunConfig::with_budget(full_budget(c.len()));
    run_reference(c, mask, &cfg).unwrap().0.output_fired
}

pub type NameSet = BTreeSet<String>;

/// Degenerate, minimal, minimum and vital sets by plain enumeration over
/// `Vec<bool>` subsets.
pub struct NaiveAnalysis {
    pub base_nontrivial: bool,
    pub degenerate: BTreeSet<NameSet>,
    pub minimal: BTreeSet<NameSet>,
    pub minimum: BTreeSet<NameSet>,
    pub vital_by_size: BTreeMap<usize, BTreeSet<NameSet>>,
}

pub fn naive_analysis(c: &Circuit, k_max: usize) -> NaiveAnalysis {
    let free: Vec<NeuronId> = c.ids().filter(|&v| v != c.input() && v != c.output()).collect();
    assert!(free.len() <= 12);
    let base = naive_nontrivial(c, &SilenceMask::empty(c));
    let subsets = |len: usize| -> Vec<Vec<bool>> {
        (0..1u32 << len).map(|s| (0..len).map(|k| s >> k & 1 == 1).collect()).collect()
    };
    let mut degenerate = BTreeSet::new();
    for keep in subsets(free.len()) {
        let silenced = free.iter().zip(&keep).filter(|(_, &k)| !k).map(|(&v, _)| v);
        let mask = SilenceMask::from_ids(c, silenced).unwrap();
        if naive_nontrivial(c, &mask) == base {
            let mut set: NameSet = free.iter().zip(&keep).filter(|(_, &k)| k).map(|(&v, _)| c.name(v).to_string()).collect();
            set.insert(c.name(c.input()).to_string());
            set.insert(c.name(c.output()).to_string());
            degenerate.insert(set);
        }
    }
    let minimal: BTreeSet<NameSet> = degenerate
        .iter()
        .filter(|s| !degenerate.iter().any(|t| t != *s && t.is_subset(s)))
        .cloned()
        .collect();
    let min_size = degenerate.iter().map(|s| s.len()).min().unwrap();
    let minimum = degenerate.iter().filter(|s| s.len() == min_size).cloned().collect();
    let mut vital_by_size: BTreeMap<usize, BTreeSet<NameSet>> = BTreeMap::new();
    for pick in subsets(free.len()) {
        let set: NameSet = free.iter().zip(&pick).filter(|(_, &k)| k).map(|(&v, _)| c.name(v).to_string()).collect();
        if set.is_empty() || set.len() > k_max {
            continue;
        }
        if degenerate.iter().all(|d| !d.is_disjoint(&set)) {
            vital_by_size.entry(set.len()).or_default().insert(set);
        }
    }
    NaiveAnalysis { base_nontrivial: base, degenerate, minimal, minimum, vital_by_size }
}

pub fn to_sets(lists: &[Vec<String>]) -> BTreeSet<NameSet> {
    lists.iter().map(|l| l.iter().cloned().collect()).collect()
}

/// Hand-built circuits with known degenerate structure.
pub mod hand {
    use super::*;

    fn finish(mut b: CircuitBuilder, o: NeuronId) -> Circuit {
        b.set_output(o);
        b.build().unwrap()
    }

    /// `I -> A -> O`.
    pub fn chain() -> Circuit {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let a = b.gate("A", 1, &[(i, 1)]).unwrap();
        let o = b.gate("O", 1, &[(a, 1)]).unwrap();
        finish(b, o)
    }

    /// `O` needs two units of input but only gets one.
    pub fn dead() -> Circuit {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let a = b.gate("A", 1, &[(i, 1)]).unwrap();
        let o = b.gate("O", 2, &[(a, 1)]).unwrap();
        finish(b, o)
    }

    /// `I -> A -> O` and `I -> B -> O`, `O` an OR.
    pub fn parallel() -> Circuit {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let a = b.gate("A", 1, &[(i, 1)]).unwrap();
        let bb = b.gate("B", 1, &[(i, 1)]).unwrap();
        let o = b.gate("O", 1, &[(a, 1), (bb, 1)]).unwrap();
        finish(b, o)
    }

    /// A dead circuit revived by silencing its inhibitor `H`.
    pub fn inhibited() -> Circuit {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let a = b.gate("A", 1, &[(i, 1)]).unwrap();
        let h = b.gate("H", 1, &[(i, 1)]).unwrap();
        let o = b.gate("O", 1, &[(a, 1), (h, -1)]).unwrap();
        finish(b, o)
    }

    /// A ring oscillator feeding an AND with a delayed copy of `I`.
    pub fn ring(len: usize) -> Circuit {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let mut ring = Vec::new();
        for k in 0..len {
            ring.push(b.neuron(format!("r{k}"), 1).unwrap());
        }
        b.edge(i, ring[0], 1).unwrap();
        for k in 0..len {
            b.edge(ring[k], ring[(k + 1) % len], 1).unwrap();
        }
        let d = b.gate("D", 1, &[(i, 1)]).unwrap();
        let late = b.gate("L", 1, &[(d, 1), (ring[len - 1], 1)]).unwrap();
        let o = b.gate("O", 2, &[(late, 1), (ring[0], 1)]).unwrap();
        finish(b, o)
    }

    /// Two-stage majority: `O` fires once two of three relays agree.
    pub fn majority() -> Circuit {
        let mut b = CircuitBuilder::new();
        let i = b.input("I").unwrap();
        let r: Vec<NeuronId> = (0..3).map(|k| b.gate(format!("R{k}"), 1, &[(i, 1)]).unwrap()).collect();
        let o = b.gate("O", 2, &r.iter().map(|&x| (x, 1)).collect::<Vec<_>>()).unwrap();
        finish(b, o)
    }

    pub fn all() -> Vec<(&'static str, Circuit)> {
        vec![
            ("chain", chain()),
            ("dead", dead()),
            ("parallel", parallel()),
            ("inhibited", inhibited()),
            ("ring4", ring(4)),
            ("ring8", ring(8)),
            ("majority", majority()),
        ]
    }
}
