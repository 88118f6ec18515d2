//! Walk the distance chain of an AND protocol and compare every step with
//! its bound.
use qcc_lab::protocol::fixtures;
use qcc_lab::reductions::{and_distribution, round_elimination_audit};

fn main() -> qcc_lab::Result<()> {
    for (name, p) in [("and2", fixtures::and2()), ("noisy", fixtures::noisy_and(0.4))] {
        let r = round_elimination_audit(&p, &and_distribution())?;
        println!("{name}: error {:.4}, eta {:.4}", r.error, r.eta);
        for s in &r.steps {
            let bound = s.link_bound.map_or("-".to_string(), |b| format!("{b:.4}"));
            println!(
                "  t={} mover {} cost {:.4} delta {:.4} link bound {}",
                s.time, s.mover, s.cost, s.delta, bound
            );
        }
        println!(
            "  final {:.4} >= {:.4}; links {}, endpoint {}, chain sum {}",
            r.delta_final,
            r.endpoint_bound,
            r.links_hold(),
            r.endpoint_holds(),
            r.chain_sum_holds()
        );
    }
    Ok(())
}
