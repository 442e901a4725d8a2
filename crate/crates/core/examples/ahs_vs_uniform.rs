//! Weighted pinning against uniform pinning on the same received word.

use frs_listrec::verify::{estimate_ahs_success, estimate_uniform_success, pruning_instance};
use frs_listrec::{stream_rng, AffineSpace, FrsCode, Rational};

fn main() -> frs_listrec::Result<()> {
    let code = FrsCode::new(37, 8, 4, 4)?;
    let inst = pruning_instance(&code, 3, 1, 3, &mut stream_rng(2, 0))?;
    let space = AffineSpace::linear(inst.h.clone());
    let eps = Rational::new(1, 4)?;
    for rep in [
        estimate_ahs_success(&code, &space, &inst.y, &inst.c, &eps, 2_000, 2)?,
        estimate_uniform_success(&code, &space, &inst.y, &inst.c, &eps, 2_000, 2)?,
    ] {
        print!("{}", rep.table());
    }
    Ok(())
}
