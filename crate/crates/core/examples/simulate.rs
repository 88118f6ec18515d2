//! Run the two-round AND protocol on every input pair and read off the
//! answer distribution.
use qcc_lab::protocol::{error_probability, fixtures, simulate};

fn main() -> qcc_lab::Result<()> {
    let p = fixtures::and2();
    println!(
        "{} rounds, {} qubits sent, width {}",
        p.rounds.len(),
        p.communication(),
        p.registers.total_width()
    );
    for (x, y) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let trace = simulate(&p, &fixtures::two_party_inputs(&[x], &[y]))?;
        println!("x={x} y={y}  Pr[ans] = {:?}", trace.answer_distribution());
    }
    println!("error {}", error_probability(&p, &fixtures::and_cases())?);

    let noisy = fixtures::noisy_and(0.6);
    println!(
        "noisy variant error {:.6} (cos^2 0.6 = {:.6})",
        error_probability(&noisy, &fixtures::and_cases())?,
        0.6f64.cos().powi(2)
    );
    Ok(())
}
