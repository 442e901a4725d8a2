//! Estimate how often FPRUNE keeps a close codeword alive.

use frs_listrec::prune::PruneParams;
use frs_listrec::verify::{estimate_fprune_success, pruning_instance};
use frs_listrec::{stream_rng, FrsCode, Rational};

fn main() -> frs_listrec::Result<()> {
    let code = FrsCode::new(37, 8, 4, 4)?;
    let params = PruneParams::new(Rational::new(1, 4)?, Rational::new(1, 8)?)?;
    let inst = pruning_instance(&code, 3, 2, 3, &mut stream_rng(1, 0))?;
    let rep = estimate_fprune_success(&code, &inst.h, &inst.c, &inst.lists, &params, 5_000, 1)?;
    print!("{}", rep.table());
    Ok(())
}
