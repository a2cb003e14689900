//! Degenerate and vital sets of a small circuit, and the decision views on a
//! compiled QBF instance.
use nckt::{
    compile, decide_k_degenerate, decide_minimal_ge3, enumerate_degenerate, enumerate_vital, normalize,
    one_vital_nonempty, parse_qdimacs, read_circuit, AnalysisConfig,
};

const CIRCUIT: &str = "nckt 1
n I 1
n A 1
n B 1
n C 1
n O 1
e I A 1
e I B 1
e A C 1
e B C 1
e C O 1
I I
O O
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = AnalysisConfig::default();
    let c = read_circuit(CIRCUIT)?;
    let deg = enumerate_degenerate(&c, &cfg)?;
    println!("degenerate: {}", serde_json::to_string(&deg)?);
    let vital = enumerate_vital(&c, 2, &cfg)?;
    println!("vital: {}", serde_json::to_string(&vital)?);

    let f = parse_qdimacs("p cnf 3 2\ne 3 0\na 2 0\ne 1 0\n1 2 3 0\n-1 -2 3 0\n")?;
    let art = compile(&normalize(&f))?;
    let circuit = &art.circuit;
    println!("compiled circuit with {} neurons", circuit.len());
    println!("2-degenerate set exists: {}", decide_k_degenerate(circuit, 2, &cfg)?);
    println!("minimal degenerate set of size >= 3: {}", decide_minimal_ge3(circuit, &cfg)?);
    println!("some neuron is 1-vital: {}", one_vital_nonempty(circuit, &cfg)?);
    Ok(())
}
