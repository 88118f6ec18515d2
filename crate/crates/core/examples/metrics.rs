//! Distances and information functionals on a handful of one-qubit states.
use qcc_lab::metrics::{
    fidelity, fuchs_caves, relative_entropy, trace_distance, von_neumann_entropy,
    encoding_information, EncodingEnsemble,
};
use qcc_lab::qmat::{basis_vector, CVector, DensityOperator, C64};

fn pure(v: [f64; 2]) -> DensityOperator {
    let v = CVector::from_iterator(2, v.iter().map(|&x| C64::new(x, 0.0)));
    DensityOperator::from_pure(&v.normalize()).unwrap()
}

fn main() -> qcc_lab::Result<()> {
    let zero = DensityOperator::from_pure(&basis_vector(2, 0))?;
    let plus = pure([1.0, 1.0]);
    let mixed = DensityOperator::maximally_mixed(2);

    println!("trace distance |0>,|+>   {:.6}", trace_distance(&zero, &plus)?);
    println!("fidelity |0>,|+>         {:.6}", fidelity(&zero, &plus)?);
    println!("entropy I/2              {:.6}", von_neumann_entropy(&mixed));
    println!("S(|0> || I/2)            {:.6}", relative_entropy(&zero, &mixed)?.value());
    println!("S(I/2 || |0>)            {:?}", relative_entropy(&mixed, &zero)?.value());

    let fc = fuchs_caves(&mixed, &plus)?;
    println!(
        "optimal measurement      {:.6} (fidelity {:.6}, regularized {})",
        fc.value,
        fidelity(&mixed, &plus)?,
        fc.regularized
    );

    let bit = EncodingEnsemble::uniform(vec![zero, plus])?;
    println!("uniform bit into |0>,|+> {:.6} bits", encoding_information(&bit));
    Ok(())
}
