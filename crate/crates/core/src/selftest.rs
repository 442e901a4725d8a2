//! The fixed-seed acceptance corpus behind `listrec selftest`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use rand::Rng;

use crate::error::{Error, Result};
use crate::frs::FrsCode;
use crate::gf::Rational;
use crate::prune::{trace_length_bound, PruneParams};
use crate::recovery::{list_within, planted_instance, pruning_radius, recover_in, RecoveryConfig, Radius};
use crate::stream_rng;
use crate::sumset::reduce;
use crate::verify::{
    audit_monotonicity, check_list_size, estimate_ahs_success, estimate_fprune_success, estimate_uniform_success,
    planted_lists_in, pruning_instance, random_subspace, verify_design, DesignMode, EstimatorReport, ListSizeCheck,
};
use crate::vspace::AffineSpace;

pub const DEFAULT_SEED: u64 = 7;

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub run: fn(u64) -> Result<Outcome>,
}

pub const CRITERIA: &[Criterion] = &[
    Criterion { id: "C1", title: "subspace design, all lines of FRS(37,8,4,4)", run: c1_design },
    Criterion { id: "C2", title: "potential monotonicity, 100 instances", run: c2_monotonicity },
    Criterion { id: "C3", title: "FPRUNE success floor, 10^4 trials", run: c3_success_floor },
    Criterion { id: "C4", title: "list-size bound on exhaustive instances", run: c4_list_size },
    Criterion { id: "C5", title: "REDUCE containment and shape", run: c5_reduce },
    Criterion { id: "C6", title: "coverage of planted lists, t' = 1 and 3", run: c6_coverage },
    Criterion { id: "C7", title: "AHS floor vs uniform floor", run: c7_ahs_vs_uniform },
    Criterion { id: "C8", title: "BCZ bound consistency", run: c8_bcz },
    Criterion { id: "C9", title: "trace-length bound", run: c9_trace_length },
    Criterion { id: "C10", title: "byte-identical recover reports", run: c10_determinism },
];

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

fn code_37_8_4_4() -> Result<FrsCode> {
    FrsCode::new(37, 8, 4, 4)
}

fn cached<T: Clone + Send + 'static>(
    cell: &'static OnceLock<Mutex<HashMap<u64, T>>>,
    seed: u64,
    compute: impl FnOnce(u64) -> Result<T>,
) -> Result<T> {
    let map = cell.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().expect("cache lock").get(&seed) {
        return Ok(v.clone());
    }
    let v = compute(seed)?;
    map.lock().expect("cache lock").insert(seed, v.clone());
    Ok(v)
}

pub fn c1_design(seed: u64) -> Result<Outcome> {
    let t0 = Instant::now();
    let code = code_37_8_4_4()?;
    let rep = verify_design(&code, 1, DesignMode::Exhaustive, seed, 1_000_000)?;
    let secs = t0.elapsed().as_secs_f64();
    let pass = rep.passed() && rep.subspaces_checked == 52_060 && rep.max_statistic <= r(1, 8) && secs <= 60.0;
    Ok(Outcome {
        pass,
        detail: format!(
            "{} subspaces, max statistic {} <= {}, {} violations",
            rep.subspaces_checked, rep.max_statistic, rep.bound, rep.violation_count
        ),
    })
}

pub fn c2_monotonicity(seed: u64) -> Result<Outcome> {
    let t0 = Instant::now();
    let code = code_37_8_4_4()?;
    let params = PruneParams::new(r(1, 4), r(1, 8))?;
    let rep = audit_monotonicity(&code, 4, 100, &params, seed)?;
    let secs = t0.elapsed().as_secs_f64();
    Ok(Outcome {
        pass: rep.passed() && rep.checked == 100 && secs <= 120.0,
        detail: format!(
            "{} checked (by dim {:?}), {} trivial, {} excluded, {} counterexamples",
            rep.checked,
            &rep.by_dim[1..],
            rep.trivial,
            rep.excluded,
            rep.counterexamples.len()
        ),
    })
}

static C3_CACHE: OnceLock<Mutex<HashMap<u64, (EstimatorReport, f64)>>> = OnceLock::new();

/// FPRUNE on a planted 3-dimensional instance; also feeds the trace check.
pub fn c3_report(seed: u64) -> Result<(EstimatorReport, f64)> {
    cached(&C3_CACHE, seed, |seed| {
        let t0 = Instant::now();
        let code = code_37_8_4_4()?;
        let params = PruneParams::new(r(1, 4), r(1, 8))?;
        let inst = pruning_instance(&code, 3, 2, 3, &mut stream_rng(seed, 0))?;
        let rep = estimate_fprune_success(&code, &inst.h, &inst.c, &inst.lists, &params, 10_000, seed)?;
        Ok((rep, t0.elapsed().as_secs_f64()))
    })
}

pub fn c3_success_floor(seed: u64) -> Result<Outcome> {
    let (rep, secs) = c3_report(seed)?;
    Ok(Outcome {
        pass: rep.hypothesis && rep.pass == Some(true) && secs <= 120.0,
        detail: format!(
            "estimate {:.4} vs floor {} ({:.4}) - {:.4}",
            rep.estimate,
            rep.floor,
            rep.floor.to_f64(),
            rep.z_margin
        ),
    })
}

static LIST_SIZE_CACHE: OnceLock<Mutex<HashMap<u64, Vec<ListSizeCheck>>>> = OnceLock::new();

/// 54 exhaustive list-size instances over a grid of `(r, ell, eta, eta')`.
pub fn list_size_corpus(seed: u64) -> Result<Vec<ListSizeCheck>> {
    cached(&LIST_SIZE_CACHE, seed, |seed| {
        let code = code_37_8_4_4()?;
        let grid = [(r(1, 4), r(1, 8)), (r(1, 8), r(1, 8)), (r(1, 8), r(1, 4))];
        let mut out = Vec::new();
        let mut stream = 0u64;
        for dim in 1..=3 {
            for ell in 1..=3 {
                for (eta, eta_prime) in &grid {
                    let params = PruneParams::new(eta.clone(), eta_prime.clone())?;
                    for _ in 0..2 {
                        let mut rng = stream_rng(seed, stream);
                        stream += 1;
                        let h = random_subspace(&code, dim, &mut rng)?;
                        let lists = planted_lists_in(&code, &h, ell, 3, &mut rng)?;
                        out.push(check_list_size(&code, &h, &lists, &params, 1_000_000)?);
                    }
                }
            }
        }
        Ok(out)
    })
}

pub fn c4_list_size(seed: u64) -> Result<Outcome> {
    let checks = list_size_corpus(seed)?;
    let bad = checks.iter().filter(|c| !c.within_list_size_bound()).count();
    let max = checks.iter().map(|c| c.exact).max().unwrap_or(0);
    Ok(Outcome {
        pass: checks.len() >= 50 && bad == 0,
        detail: format!("{} instances, largest list {max}, {bad} violations", checks.len()),
    })
}

pub fn c5_reduce(seed: u64) -> Result<Outcome> {
    let code = FrsCode::new(13, 6, 5, 2)?;
    let n = code.n();
    let mut checked = 0;
    let mut failures = Vec::new();
    for j in 0..120u64 {
        let mut rng = stream_rng(seed, j);
        let dim = rng.gen_range(1..=4usize);
        let h = random_subspace(&code, dim, &mut rng)?;
        let mut order: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let mut pinned = Vec::new();
        for &i in &order {
            if h.zero_on(&pinned).is_zero() {
                break;
            }
            pinned.push(i);
        }
        let ell = rng.gen_range(1..=3usize);
        let lists = planted_lists_in(&code, &h, ell, 2, &mut rng)?;
        let (p, _) = reduce(&h, &pinned, &lists)?;
        let members = p.enumerate(1_000_000)?;
        let shape = code.shape();
        let space = AffineSpace::linear(h.clone());
        let agreeing = space.elements(1_000_000)?.filter(|c| {
            pinned.iter().all(|&t| lists.contains(t, shape.symbol(c, t)))
        });
        let mut ok = p.summands().len() <= pinned.len() && p.summands().iter().all(|a| a.len() <= ell);
        for c in agreeing {
            ok &= members.binary_search(&c).is_ok();
        }
        checked += 1;
        if !ok {
            failures.push(j);
        }
    }
    Ok(Outcome {
        pass: checked >= 100 && failures.is_empty(),
        detail: format!("{checked} instances, failures at {failures:?}"),
    })
}

#[derive(Debug, Clone)]
pub struct CoverageStats {
    /// `(t', t, covered runs, total runs)`.
    pub rows: Vec<(u32, usize, usize, usize)>,
    pub trace_bound: usize,
    pub max_trace_len: usize,
    pub trace_violations: usize,
}

static C6_CACHE: OnceLock<Mutex<HashMap<u64, CoverageStats>>> = OnceLock::new();

/// 200 recover runs per `t'` on planted FRS(37,8,3,4) instances.
pub fn coverage_stats(seed: u64) -> Result<CoverageStats> {
    cached(&C6_CACHE, seed, |seed| {
        let code = FrsCode::new(37, 8, 3, 4)?;
        let whole = AffineSpace::linear(code.as_subspace().clone());
        let params = PruneParams::new(r(1, 4), r(1, 8))?;
        let radius = pruning_radius(&code.tau(code.k()), &params);
        let bound = trace_length_bound(code.k(), params.eta_prime());
        let mut stats = CoverageStats {
            rows: Vec::new(),
            trace_bound: bound,
            max_trace_len: 0,
            trace_violations: 0,
        };
        for t_prime in [1u32, 3] {
            let mut covered = 0;
            let mut t = 0;
            for j in 0..200u64 {
                let mut rng = stream_rng(seed, (t_prime as u64) << 32 | j);
                let planted = planted_instance(&code, 2, 2, 3, r(3, 8), &mut rng)?;
                let list = list_within(&whole, &planted.instance, &Radius::Below(radius.clone()), 1_000_000)?;
                let cfg = RecoveryConfig {
                    eta: params.eta().clone(),
                    eta_prime: params.eta_prime().clone(),
                    t_prime: Rational::from(t_prime as i64),
                    seed: rng.gen(),
                    ..RecoveryConfig::default()
                };
                let out = recover_in(&whole, &planted.instance, &cfg, 1_000_000)?;
                t = out.t;
                for tr in out.traces().filter(|tr| !tr.failed) {
                    stats.max_trace_len = stats.max_trace_len.max(tr.pinned.len());
                    stats.trace_violations += (tr.pinned.len() > bound) as usize;
                }
                covered += out.covers(&list, 1_000_000)? as usize;
            }
            stats.rows.push((t_prime, t, covered, 200));
        }
        Ok(stats)
    })
}

/// Whether `hits/total` clears `floor` less three standard errors.
fn clears(hits: usize, total: usize, floor: f64) -> bool {
    let p = hits as f64 / total as f64;
    let se = (p * (1.0 - p) / total as f64).sqrt();
    p >= floor - 3.0 * se
}

pub fn c6_coverage(seed: u64) -> Result<Outcome> {
    let stats = coverage_stats(seed)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for &(tp, t, covered, total) in &stats.rows {
        let floor = 1.0 - (-(tp as f64)).exp();
        pass &= clears(covered, total, floor);
        parts.push(format!("t'={tp} (t={t}): {covered}/{total} vs {floor:.3}"));
    }
    Ok(Outcome {
        pass,
        detail: parts.join("; "),
    })
}

pub fn c7_ahs_vs_uniform(seed: u64) -> Result<Outcome> {
    let code = code_37_8_4_4()?;
    let inst = pruning_instance(&code, 3, 1, 3, &mut stream_rng(seed, 0))?;
    let space = AffineSpace::linear(inst.h.clone());
    let eps = r(1, 4);
    let ahs = estimate_ahs_success(&code, &space, &inst.y, &inst.c, &eps, 2000, seed)?;
    let uni = estimate_uniform_success(&code, &space, &inst.y, &inst.c, &eps, 2000, seed)?;
    Ok(Outcome {
        pass: ahs.pass == Some(true) && uni.pass == Some(true) && ahs.estimate > uni.estimate,
        detail: format!(
            "ahs {:.4} (floor {}), uniform {:.4} (floor {})",
            ahs.estimate, ahs.floor, uni.estimate, uni.floor
        ),
    })
}

pub fn c8_bcz(seed: u64) -> Result<Outcome> {
    let checks = list_size_corpus(seed)?;
    let bad = checks.iter().filter(|c| !c.within_bcz_bound()).count();
    let better = checks.iter().find(|c| c.bcz_bound <= c.list_size_bound);
    let detail = match better {
        Some(c) => format!(
            "{bad} violations; at r={}, ell={}, eta={}, eta'={}: bcz {:.2} <= list-size {:.2}",
            c.r, c.ell, c.eta, c.eta_prime, c.bcz_bound, c.list_size_bound
        ),
        None => format!("{bad} violations; BCZ never below the list-size bound"),
    };
    Ok(Outcome {
        pass: bad == 0 && better.is_some(),
        detail,
    })
}

pub fn c9_trace_length(seed: u64) -> Result<Outcome> {
    let (c3, _) = c3_report(seed)?;
    let c6 = coverage_stats(seed)?;
    let bound3 = c3.trace_bound.ok_or_else(|| Error::Precondition("missing trace bound".into()))?;
    Ok(Outcome {
        pass: c3.trace_violations == 0 && c6.trace_violations == 0,
        detail: format!(
            "C3: max |T| {} <= {bound3}; C6: max |T| {} <= {}",
            c3.max_trace_len, c6.max_trace_len, c6.trace_bound
        ),
    })
}

pub fn c10_determinism(seed: u64) -> Result<Outcome> {
    let dir = std::env::temp_dir().join(format!("listrec-selftest-{}-{seed}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| Error::Precondition(e.to_string()))?;
    let mut outputs = Vec::new();
    let mut codes = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.join(name);
        let seed_s = seed.to_string();
        let args = [
            "listrec", "recover", "--planted", "2", "--ell", "2", "--noise", "1/8", "--seed", &seed_s, "--out",
        ];
        let mut argv: Vec<std::ffi::OsString> = args.iter().map(Into::into).collect();
        argv.push(path.clone().into());
        codes.push(crate::cli::run(argv));
        outputs.push(std::fs::read(&path).unwrap_or_default());
    }
    let _ = std::fs::remove_dir_all(&dir);
    let same = !outputs[0].is_empty() && outputs[0] == outputs[1];
    Ok(Outcome {
        pass: codes.iter().all(|&c| c == 0) && same,
        detail: format!("exit codes {codes:?}, {} bytes, identical: {same}", outputs[0].len()),
    })
}
