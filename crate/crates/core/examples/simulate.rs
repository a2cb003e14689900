//! Write a small circuit in the text format, read it back and simulate it,
//! once freely and once with a neuron silenced.
use nckt::{read_circuit, run, write_circuit, RunConfig, SilenceMask};

const TEXT: &str = "nckt 1
n I 1
n A 1
n B 1
n O 2
e I A 1
e I B 1
e A O 1
e B O 1
I I
O O
";

fn main() -> nckt::Result<()> {
    let circuit = read_circuit(TEXT)?;
    print!("{}", write_circuit(&circuit));

    let cfg = RunConfig::default().watch(circuit.ids());
    let (out, trace) = run(&circuit, &SilenceMask::empty(&circuit), &cfg)?;
    println!("free run: {}", out.to_json());
    print!("{}", trace.to_csv());

    let a = circuit.id("A").expect("A exists");
    let (out, _) = run(&circuit, &SilenceMask::from_ids(&circuit, [a])?, &RunConfig::default())?;
    println!("A silenced: {}", out.to_json());
    Ok(())
}
