//! Monotone sensitivity of a few set functions.
use qcc_lab::reductions::{monotone_sensitivity, BooleanSetFunction};

fn main() -> qcc_lab::Result<()> {
    for n in [3, 6, 10] {
        let f = BooleanSetFunction::empty_indicator(n)?;
        println!("[S empty], n={n:<2}  {}", monotone_sensitivity(&f));
    }
    for k in 1..=4 {
        let f = BooleanSetFunction::threshold(4, k)?;
        println!("|S| >= {k}, n=4   {}  table {}", monotone_sensitivity(&f), f.to_hex());
    }
    let f = BooleanSetFunction::from_hex("0x8000", None)?;
    println!("0x8000 on n={}    {}", f.n(), monotone_sensitivity(&f));
    Ok(())
}
