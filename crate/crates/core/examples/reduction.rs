//! Turn a disjointness protocol into an AND protocol by fixing all but one
//! coordinate, then compare its information loss with both bounds.
use qcc_lab::protocol::fixtures;
use qcc_lab::reductions::{and_distribution, reduction_report};

fn main() -> qcc_lab::Result<()> {
    let p = fixtures::disj(2, 2);
    for j in 0..2 {
        let r = reduction_report(&p, j, None, &and_distribution())?;
        println!(
            "coordinate {j}, dhat {:?}: error {:.3}, {:.4} <= IL {:.4} <= {:.4}",
            r.dhat, r.derived_error, r.lower_bound, r.loss.total, r.upper_bound
        );
        for t in &r.terms {
            println!(
                "  D={} round {}: derived {:.4} <= source {:.4}",
                t.d, t.round, t.derived, t.source
            );
        }
    }
    Ok(())
}
