//! Exact check that one pruning step never lowers the expected potential.

use frs_listrec::prune::PruneParams;
use frs_listrec::verify::audit_monotonicity;
use frs_listrec::{FrsCode, Rational};

fn main() -> frs_listrec::Result<()> {
    let code = FrsCode::new(37, 8, 4, 4)?;
    let params = PruneParams::new(Rational::new(1, 4)?, Rational::new(1, 8)?)?;
    let rep = audit_monotonicity(&code, 4, 50, &params, 0)?;
    print!("{}", rep.table());
    println!("counterexamples: {}", rep.counterexamples.len());
    Ok(())
}
