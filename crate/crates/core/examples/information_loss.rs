//! Conditional information loss of the shipped two-party protocols, and the
//! prefix-by-prefix information profile against qubits sent.
use qcc_lab::protocol::{cleve_profile, fixtures, information_loss};
use qcc_lab::reductions::and_distribution;

fn main() -> qcc_lab::Result<()> {
    let and = and_distribution();
    for (name, p) in [
        ("and2", fixtures::and2()),
        ("paradox", fixtures::paradox()),
        ("zero-round", fixtures::zero_round()),
    ] {
        let r = information_loss(&p, &and)?;
        let terms: Vec<String> = r.terms.iter().map(|t| format!("{:.4}", t.value)).collect();
        println!("{name:<10} IL {:.6}  terms [{}]", r.total, terms.join(", "));
    }

    let p = fixtures::disj(2, 2);
    let dist = and.with_arity(2)?;
    println!("disj n=2 k=2 IL {:.6}", information_loss(&p, &dist)?.total);
    for e in cleve_profile(&p, &dist)? {
        println!(
            "  t={} {}->{}  I={:.4}  2*sent={}",
            e.time,
            e.from,
            e.to,
            e.information,
            2 * e.sent
        );
    }
    Ok(())
}
