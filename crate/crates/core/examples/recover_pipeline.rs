//! Plant two codewords in noisy lists and recover them.

use frs_listrec::recovery::planted_instance;
use frs_listrec::{recover, stream_rng, FrsCode, Rational, RecoveryConfig};

fn main() -> frs_listrec::Result<()> {
    let code = FrsCode::new(37, 8, 3, 4)?;
    let planted = planted_instance(&code, 2, 2, 1, Rational::new(1, 4)?, &mut stream_rng(5, 0))?;
    let cfg = RecoveryConfig {
        seed: 5,
        exact_filter: true,
        ..RecoveryConfig::default()
    };
    let out = recover(&code, &planted.instance, &cfg, 1_000_000)?;
    println!("r = {}, t = {}, sum-set shape {:?}", out.r, out.t, out.shape);
    let found = out.filtered.clone().unwrap_or_default();
    println!("{} codewords within the radius", found.len());
    for c in &planted.planted {
        println!("planted codeword recovered: {}", found.contains(c));
    }
    Ok(())
}
