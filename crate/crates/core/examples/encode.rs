//! Encode a message and look at the folded symbols.

use frs_listrec::FrsCode;

fn main() -> frs_listrec::Result<()> {
    let code = FrsCode::new(37, 8, 4, 4)?;
    println!("gamma = {}, rate = {}", code.gamma(), code.rate());
    let word = code.encode(&[3, 1, 4, 1])?;
    for (i, sym) in word.symbols.iter().enumerate() {
        println!("c_{i} = {sym:?}");
    }
    Ok(())
}
