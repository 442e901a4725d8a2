//! Exact list sizes next to both closed-form bounds over a grid of epsilon.

use frs_listrec::verify::bounds_table;
use frs_listrec::{FrsCode, Rational};

fn main() -> frs_listrec::Result<()> {
    let code = FrsCode::new(37, 8, 4, 4)?;
    let grid = [Rational::new(1, 2)?, Rational::new(1, 4)?, Rational::new(1, 8)?];
    let table = bounds_table(&code, 2, 2, &grid, 5, 0, 1_000_000)?;
    print!("{}", table.table());
    Ok(())
}
