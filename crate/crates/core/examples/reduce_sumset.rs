//! Pin coordinates until the subspace collapses, then build the sum-set.

use frs_listrec::verify::{planted_lists_in, random_subspace};
use frs_listrec::{reduce, stream_rng, FrsCode};

fn main() -> frs_listrec::Result<()> {
    let code = FrsCode::new(13, 6, 5, 2)?;
    let mut rng = stream_rng(3, 0);
    let h = random_subspace(&code, 3, &mut rng)?;
    let lists = planted_lists_in(&code, &h, 2, 1, &mut rng)?;

    let mut pinned = Vec::new();
    for i in 0..code.n() {
        if h.zero_on(&pinned).is_zero() {
            break;
        }
        pinned.push(i);
    }
    let (p, cert) = reduce(&h, &pinned, &lists)?;
    println!("pinned {pinned:?}, positions {:?}", cert.positions);
    println!("sum-set of shape ({}, {}), at most {} elements", p.u(), p.v(), p.size_bound());
    for (j, a) in p.summands().iter().enumerate() {
        println!("A_{j}: {} vectors", a.len());
    }
    println!("{} distinct members", p.enumerate(1_000_000)?.len());
    Ok(())
}
