//! A classical protocol with no information loss next to its purified
//! quantum analogue, which loses information.
use qcc_lab::reductions::paradox_demo;

fn main() -> qcc_lab::Result<()> {
    let r = paradox_demo()?;
    println!("classical: error {}, IL {}, terms {:?}", r.classical_error, r.classical_il, r.classical_terms);
    println!("quantum:   error {:.3e}, IL {:.6}", r.quantum_error, r.quantum_il);
    for t in &r.quantum_terms {
        println!("  round {} {}->{}: {:.6}", t.round, t.sender, t.receiver, t.value);
    }
    Ok(())
}
