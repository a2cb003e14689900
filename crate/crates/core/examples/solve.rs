//! Decide a QBF by compiling it into a circuit and simulating it.
use nckt::{compile, evaluate_qbf, normalize, parse_qdimacs};

const FORMULA: &str = "p cnf 3 2
e 3 0
a 2 0
e 1 0
1 2 3 0
-1 -2 3 0
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let formula = parse_qdimacs(FORMULA)?;
    let normalized = normalize(&formula);
    let art = compile(&normalized)?;
    println!(
        "normalized n={} m={}: {} neurons, {} edges, t_max={}",
        normalized.n(),
        normalized.m(),
        art.circuit.len(),
        art.circuit.edge_count(),
        art.t_max
    );
    let out = art.simulate()?;
    println!("circuit says {}, first output at {:?}", out.output_fired, out.first_output_time);
    println!("game search says {}", evaluate_qbf(&formula)?);
    Ok(())
}
