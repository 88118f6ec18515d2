//! Purify two random states and build the local unitary that aligns the
//! purifications; its overlap is the fidelity.
use qcc_lab::metrics::fidelity;
use qcc_lab::purify::{purify, uhlmann_transition, Completion};
use qcc_lab::qmat::{random_density, random_unitary, SeededRng};

fn main() -> qcc_lab::Result<()> {
    let mut rng = SeededRng::new(3);
    for (d, r1, r2) in [(2, 2, 1), (4, 4, 4), (4, 2, 3)] {
        let a = random_density(d, r1, &mut rng)?;
        let b = random_density(d, r2, &mut rng)?;
        let phi1 = purify(&a)?;
        let phi2 = purify(&b)?.apply_on(&["K"], &random_unitary(d, &mut rng))?;
        let before = phi1.inner(&phi2)?.norm();
        let t = uhlmann_transition(&phi1, &phi2, &["K"], Completion::default())?;
        println!(
            "d={d} ranks=({r1},{r2})  before {before:.6}  after {:.6}  B {:.6}",
            t.overlap,
            fidelity(&a, &b)?
        );
    }
    Ok(())
}
