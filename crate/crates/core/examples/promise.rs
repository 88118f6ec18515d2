//! Sample promise instances and run the three-party toy on them.
use qcc_lab::protocol::{fixtures, simulate};
use qcc_lab::qmat::SeededRng;
use qcc_lab::reductions::{promise_instances, PromiseKind};

fn main() -> qcc_lab::Result<()> {
    let mut rng = SeededRng::new(1);
    let kind = PromiseKind::Disjointness { parties: 3 };
    let p = fixtures::promise3(2);
    for inst in promise_instances(kind, 2, 6, &mut rng)? {
        let trace = simulate(&p, &fixtures::party_inputs(&inst.inputs))?;
        let dist = trace.answer_distribution();
        println!("{:?} label {}  Pr[ans=1] {:.3}", inst.inputs, inst.label, dist[1]);
    }

    let linf = PromiseKind::Linf { m: 3 };
    for inst in promise_instances(linf, 3, 4, &mut rng)? {
        println!("L-inf {:?} label {}", inst.inputs, inst.label);
    }
    Ok(())
}
