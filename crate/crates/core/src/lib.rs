//! Discrete-time recurrent threshold circuits: construction, simulation, a
//! binary counter gadget, a compiler from quantified Boolean formulas to
//! circuits, and exhaustive analysis of degenerate circuits and vital sets.

pub mod circuit;
pub mod counter;
pub mod error;
pub mod format;
pub mod hardness;
pub mod lemmas;
pub mod qbf;
pub mod reduction;
pub mod sim;

pub use circuit::{
    initial_state, Circuit, CircuitBuilder, CircuitFlags, NeuronId, SilenceMask, StateVector, ThresholdNeuron,
    ValidationReport, Violation,
};
pub use counter::{gen_counter, verify_counter, CounterLayout};
pub use error::{Error, Result};
pub use format::{read_circuit, write_circuit, FormatError};
pub use hardness::{
    decide_k_degenerate, decide_minimal_ge3, decide_minimum_ge3, enumerate_degenerate, enumerate_vital,
    one_vital_nonempty, AnalysisConfig, DegenerateReport, VitalReport,
};
pub use lemmas::{check_base_claim, check_induction_lemma, check_induction_lemma_blockwise, LemmaReport};
pub use qbf::{evaluate_qbf, normalize, parse_qdimacs, Lit, NormalizedQbf, QbfFormula, Quantifier};
pub use reduction::{compile, solve_via_circuit, ReductionArtifacts};
pub use sim::{is_nontrivial, run, run_reference, step, RunConfig, SimOutcome, Termination, Trace};
