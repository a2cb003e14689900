//! Run the stage checkers on a compiled instance and count surviving
//! weight mutants.
use nckt::lemmas::{activated_weight_mutations, check_all, check_timing_claims};
use nckt::{check_base_claim, check_induction_lemma, check_induction_lemma_blockwise, compile, normalize, parse_qdimacs};

const FORMULA: &str = "p cnf 3 2
e 3 0
a 2 0
e 1 0
1 2 2 0
-1 2 3 0
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let art = compile(&normalize(&parse_qdimacs(FORMULA)?))?;
    for (name, r) in [
        ("base claim", check_base_claim(&art)?),
        ("per-step stage items", check_induction_lemma(&art)?),
        ("block-level stage items", check_induction_lemma_blockwise(&art)?),
        ("timing claims", check_timing_claims(&art)?),
    ] {
        println!("{name}: {} checks, {} failures {:?}", r.checked, r.failure_count, r.summary());
    }

    let mutants = activated_weight_mutations(&art)?;
    let mut survivors = 0;
    for m in &mutants {
        if check_all(&m.apply(&art))?.ok() {
            survivors += 1;
        }
    }
    println!("{} activated mutants, {survivors} survive", mutants.len());
    Ok(())
}
