//! Exhaustive subspace-design check over every line of a small code.

use frs_listrec::verify::{verify_design, DesignMode};
use frs_listrec::FrsCode;

fn main() -> frs_listrec::Result<()> {
    let code = FrsCode::new(37, 8, 4, 4)?;
    let rep = verify_design(&code, 1, DesignMode::Exhaustive, 0, 1_000_000)?;
    print!("{}", rep.table());
    println!("passed: {}", rep.passed());
    Ok(())
}
