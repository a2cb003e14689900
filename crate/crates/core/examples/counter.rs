//! Build the binary counter and print its value for the first few steps.
use nckt::counter::counter_value;
use nckt::{gen_counter, run, verify_counter, RunConfig, SilenceMask};

fn main() -> nckt::Result<()> {
    let n = 4;
    let layout = gen_counter(n)?;
    println!("counter n={n}: {} neurons, {} edges", layout.circuit.len(), layout.circuit.edge_count());

    let cfg = RunConfig { budget: Some(2 * n as u64 + 20), detect_cycles: false, stop_at_output: false, ..Default::default() }
        .watch(layout.bit_neurons.iter().copied());
    let (_, trace) = run(&layout.circuit, &SilenceMask::empty(&layout.circuit), &cfg)?;
    for t in 0..trace.len() {
        let value: u64 = (0..n).map(|k| (trace.get(t, k) as u64) << k).sum();
        println!("t={t:>2} value={value:>2} closed form={}", counter_value(n, t as u64));
    }

    let report = verify_counter(n, None)?;
    println!("verified over {} steps: {}", report.steps, report.ok());
    Ok(())
}
