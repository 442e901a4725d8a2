//! The recovery pipeline and its bound calculators.
//!
//! [`recover`] acquires an affine space containing the list (either the whole
//! code or the hull of the exact list), moves it to the origin, runs
//! [`fprune`] `t` times and hands every successful trace to [`reduce`]. The
//! result is a union of sum-sets that contains every codeword of the list
//! with probability at least `1 - e^{-t'}`.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frs::{CodeParams, Codeword, FrsCode};
use crate::gf::Rational;
use crate::instance::random_symbol;
pub use crate::instance::{hamming_distance_to_lists, ListRecoveryInstance};
use crate::prune::{fprune, trace_length_bound, PruneParams, PruneTrace};
use crate::stream_rng;
use crate::sumset::{reduce, SumSet};
use crate::vspace::{translate_to_linear, AffineSpace, Vector};

/// A distance threshold, inclusive or strict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Radius {
    AtMost(Rational),
    Below(Rational),
}

impl Radius {
    /// Largest admissible number of disagreeing coordinates out of `n`, or
    /// `None` if even zero disagreements fail.
    pub fn max_disagreements(&self, n: usize) -> Option<usize> {
        let scaled = |r: &Rational| r.clone() * Rational::from(n);
        let m = match self {
            Radius::AtMost(r) => scaled(r).floor(),
            Radius::Below(r) => scaled(r).ceil() - 1,
        };
        if m < 0.into() {
            None
        } else {
            Some(m.to_usize().unwrap_or(usize::MAX).min(n))
        }
    }
}

/// Every element of `space` within `radius` of the lists.
pub fn list_within(
    space: &AffineSpace,
    inst: &ListRecoveryInstance,
    radius: &Radius,
    limit: u64,
) -> Result<Vec<Vector>> {
    inst.check_shape(space.shape())?;
    let n = inst.n();
    let Some(max_bad) = radius.max_disagreements(n) else {
        // still validate the limit so callers see a consistent contract
        let _ = space.elements(limit)?;
        return Ok(Vec::new());
    };
    Ok(space
        .elements(limit)?
        .filter(|c| n - inst.agreement_count(c) <= max_bad)
        .collect())
}

/// All codewords at distance at most `delta` from the product of the lists,
/// by full enumeration of the code.
pub fn exact_list(code: &FrsCode, inst: &ListRecoveryInstance, limit: u64) -> Result<Vec<Codeword>> {
    let space = AffineSpace::linear(code.as_subspace().clone());
    let radius = Radius::AtMost(inst.delta().clone());
    Ok(list_within(&space, inst, &radius, limit)?
        .iter()
        .map(|c| Codeword::from_flat(code.s(), c))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Step1Mode {
    #[default]
    WholeCode,
    OracleHull,
}

impl std::str::FromStr for Step1Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "whole-code" => Ok(Self::WholeCode),
            "oracle-hull" => Ok(Self::OracleHull),
            other => Err(Error::InvalidParams(format!(
                "unknown step-1 mode {other:?} (expected whole-code or oracle-hull)"
            ))),
        }
    }
}

/// An affine space containing the list, or `None` when the list is empty.
pub fn step1_affine_space(
    code: &FrsCode,
    inst: &ListRecoveryInstance,
    mode: Step1Mode,
    limit: u64,
) -> Result<Option<AffineSpace>> {
    inst.check_shape(&code.shape())?;
    match mode {
        Step1Mode::WholeCode => Ok(Some(AffineSpace::linear(code.as_subspace().clone()))),
        Step1Mode::OracleHull => {
            let list: Vec<Vector> = exact_list(code, inst, limit)?.iter().map(Codeword::flatten).collect();
            AffineSpace::hull(code.shape(), &list)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    /// Dimension budget; defaults to the dimension of the acquired space.
    pub r: Option<usize>,
    pub eta: Rational,
    pub eta_prime: Rational,
    /// Repetitions; derived from `t_prime` when absent.
    pub t: Option<usize>,
    pub t_prime: Rational,
    pub seed: u64,
    pub step1_mode: Step1Mode,
    pub exact_filter: bool,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        Self {
            r: None,
            eta: Rational::new(1, 4).expect("nonzero denominator"),
            eta_prime: Rational::new(1, 8).expect("nonzero denominator"),
            t: None,
            t_prime: Rational::one(),
            seed: 0,
            step1_mode: Step1Mode::WholeCode,
            exact_filter: false,
        }
    }
}

impl RecoveryConfig {
    pub fn prune_params(&self) -> Result<PruneParams> {
        PruneParams::new(self.eta.clone(), self.eta_prime.clone())
    }

    fn validate(&self) -> Result<()> {
        self.prune_params()?;
        if self.t == Some(0) {
            return Err(Error::InvalidParams("t must be at least 1".into()));
        }
        if !self.t_prime.is_positive() && self.t.is_none() {
            return Err(Error::InvalidParams("t' must be positive".into()));
        }
        Ok(())
    }
}

/// `ceil(((r + eta)/eta) (r ln ell + ln(r/eta + 1) + t'))`, at least 1.
pub fn repetitions(r: usize, eta: &Rational, ell: usize, t_prime: &Rational) -> usize {
    let eta = eta.to_f64();
    let r = r as f64;
    let ln_ell = (ell.max(1) as f64).ln();
    let t = ((r + eta) / eta) * (r * ln_ell + (r / eta + 1.0).ln() + t_prime.to_f64());
    (t.ceil() as usize).max(1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step1Info {
    pub mode: Step1Mode,
    /// `None` when the list was empty.
    pub dim: Option<usize>,
}

/// One repetition: its trace and, unless the run got stuck, its sum-set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub index: u64,
    pub trace: PruneTrace,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sumset: Option<SumSet>,
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryOutput {
    pub step1: Step1Info,
    /// Offset added back to every sum-set.
    pub offset: Option<Vector>,
    pub r: usize,
    pub t: usize,
    /// Declared `(u, v)` shape of every sum-set.
    pub shape: (usize, usize),
    pub runs: Vec<RunRecord>,
    /// Sum-set members inside the acquired space within distance `delta`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub filtered: Option<Vec<Vector>>,
}

impl RecoveryOutput {
    pub fn sumsets(&self) -> impl Iterator<Item = &SumSet> {
        self.runs.iter().filter_map(|r| r.sumset.as_ref())
    }

    pub fn traces(&self) -> impl Iterator<Item = &PruneTrace> {
        self.runs.iter().map(|r| &r.trace)
    }

    /// Union of all sum-sets, sorted.
    pub fn union(&self, limit: u64) -> Result<Vec<Vector>> {
        let mut acc = BTreeSet::new();
        for p in self.sumsets() {
            acc.extend(p.enumerate(limit)?);
        }
        Ok(acc.into_iter().collect())
    }

    /// Whether every word of `targets` lies in some sum-set.
    pub fn covers(&self, targets: &[Vector], limit: u64) -> Result<bool> {
        if targets.is_empty() {
            return Ok(true);
        }
        let union = self.union(limit)?;
        Ok(targets.iter().all(|c| union.binary_search(c).is_ok()))
    }
}

/// Runs the full pipeline.
pub fn recover(
    code: &FrsCode,
    inst: &ListRecoveryInstance,
    cfg: &RecoveryConfig,
    limit: u64,
) -> Result<RecoveryOutput> {
    cfg.validate()?;
    let params = cfg.prune_params()?;
    let step1 = step1_affine_space(code, inst, cfg.step1_mode, limit).map_err(|e| match e {
        Error::LimitExceeded { .. } => Error::Step1Infeasible(e.to_string()),
        other => other,
    })?;
    let Some(space) = step1 else {
        let r = cfg.r.unwrap_or(0);
        return Ok(RecoveryOutput {
            step1: Step1Info {
                mode: cfg.step1_mode,
                dim: None,
            },
            offset: None,
            r,
            t: 0,
            shape: (trace_length_bound(r, params.eta_prime()), inst.ell()),
            runs: Vec::new(),
            filtered: cfg.exact_filter.then(Vec::new),
        });
    };
    recover_in(&space, inst, cfg, limit)
}

/// Steps 2 onward for a given affine space.
pub fn recover_in(
    space: &AffineSpace,
    inst: &ListRecoveryInstance,
    cfg: &RecoveryConfig,
    limit: u64,
) -> Result<RecoveryOutput> {
    cfg.validate()?;
    let params = cfg.prune_params()?;
    let dim = space.dim();
    let r = cfg.r.unwrap_or(dim);
    if dim > r {
        return Err(Error::InvalidParams(format!(
            "acquired space has dimension {dim}, above the budget r = {r}"
        )));
    }
    let t = cfg
        .t
        .unwrap_or_else(|| repetitions(r, params.eta(), inst.ell(), &cfg.t_prime));
    let u = trace_length_bound(r, params.eta_prime());
    let v = inst.ell();
    let (h, shifted, offset) = translate_to_linear(space, inst);

    let runs = (1..=t as u64)
        .into_par_iter()
        .map(|index| {
            let mut rng = stream_rng(cfg.seed, index);
            let trace = fprune(&h, &params, &mut rng);
            if trace.failed {
                return Ok(RunRecord {
                    index,
                    trace,
                    sumset: None,
                    failed: true,
                });
            }
            let (p, _) = reduce(&h, &trace.pinned, &shifted)?;
            let p = p.with_bounds(u, v)?.translate(&offset);
            Ok(RunRecord {
                index,
                trace,
                sumset: Some(p),
                failed: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = RecoveryOutput {
        step1: Step1Info {
            mode: cfg.step1_mode,
            dim: Some(dim),
        },
        offset: Some(offset),
        r,
        t,
        shape: (u, v),
        runs,
        filtered: None,
    };
    if cfg.exact_filter {
        let radius = Radius::AtMost(inst.delta().clone());
        let max_bad = radius.max_disagreements(inst.n());
        let mut keep = BTreeSet::new();
        for c in out.union(limit)? {
            let close = max_bad.is_some_and(|m| inst.n() - inst.agreement_count(&c) <= m);
            if close && space.contains(&c)? {
                keep.insert(c);
            }
        }
        out.filtered = Some(keep.into_iter().collect());
    }
    Ok(out)
}

/// `1 - (tau + eta)/(1 - eta')`: lists are pruned correctly strictly inside
/// this radius.
pub fn pruning_radius(tau: &Rational, params: &PruneParams) -> Rational {
    Rational::one()
        - (tau.clone() + params.eta().clone())
            .checked_div(&params.shrink())
            .expect("eta' < 1")
}

/// `ell^{min(r, ceil((1/eta')(1 + max(0, ln(r eta')))))} * (r/eta + 1)`.
pub fn bound_list_size(r: usize, eta: &Rational, eta_prime: &Rational, ell: usize) -> f64 {
    let exponent = trace_length_bound(r, eta_prime);
    let tail = match Rational::from(r).checked_div(eta) {
        Ok(x) => (x + Rational::one()).to_f64(),
        Err(_) => f64::INFINITY,
    };
    (ell as f64).powi(exponent as i32) * tail
}

/// `(ell/(tau + eps))^{(tau + eps)/eps}`; infinite when `eps <= 0`.
pub fn bound_bcz(ell: usize, tau: &Rational, epsilon: &Rational) -> f64 {
    if !epsilon.is_positive() {
        return f64::INFINITY;
    }
    let te = tau.clone() + epsilon.clone();
    let base = ell as f64 / te.to_f64();
    let exp = te.checked_div(epsilon).expect("eps > 0").to_f64();
    base.powf(exp)
}

/// `eps` for which the BCZ radius `1 - tau - eps` equals the pruning radius.
pub fn matching_bcz_epsilon(tau: &Rational, params: &PruneParams) -> Rational {
    Rational::one() - pruning_radius(tau, params) - tau.clone()
}

/// Parameters instantiated for an FRS code of rate `R` at radius
/// `1 - R - eps` with input lists of size `ell`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremParams {
    pub r: usize,
    pub s0: Rational,
    pub eta: Rational,
    pub eta_prime: Rational,
    pub sumset_dim_bound: usize,
    pub t: usize,
}

pub fn frs_theorem_params(rate: &Rational, epsilon: &Rational, ell: usize) -> Result<TheoremParams> {
    if !epsilon.is_positive() || *epsilon >= Rational::one() - rate.clone() {
        return Err(Error::InvalidParams(format!(
            "epsilon = {epsilon} must lie in (0, 1 - R) = (0, {})",
            Rational::one() - rate.clone()
        )));
    }
    if ell == 0 {
        return Err(Error::InvalidParams("ell must be at least 1".into()));
    }
    let ell_q = Rational::from(ell);
    let r_exact = (Rational::from(4i64) * ell_q.clone()).checked_div(epsilon)?;
    let r = r_exact
        .ceil()
        .to_usize()
        .ok_or_else(|| Error::InvalidParams("r does not fit in usize".into()))?;
    let re = rate.clone() + epsilon.clone();
    let s0 = (Rational::from(16i64) * re.clone() * ell_q).checked_div(&epsilon.pow(2))?;
    let eta = epsilon.checked_div(&Rational::from(4i64))?;
    let eta_prime = epsilon.checked_div(&(Rational::from(2i64) * re.clone()))?;
    let ref_ = re.to_f64();
    let dim = 2.0 * ref_ * (2.0 * std::f64::consts::E * ell as f64 / ref_).ln() / epsilon.to_f64();
    let t = repetitions(r, &eta, ell, &Rational::one());
    Ok(TheoremParams {
        r,
        s0,
        eta,
        eta_prime,
        sumset_dim_bound: dim.ceil() as usize,
        t,
    })
}

/// A list-recovery instance built around known codewords.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedInstance {
    pub instance: ListRecoveryInstance,
    pub planted: Vec<Vector>,
}

/// Lists holding the symbols of `planted`, padded with random distinct
/// symbols to size `ell`; then, per planted word, `corrupt` random
/// coordinates have its symbol swapped for a random non-list symbol.
/// A symbol shared with another planted word that is not corrupted there
/// stays in the list.
pub fn plant_lists<R: Rng + ?Sized>(
    shape: crate::vspace::Shape,
    planted: &[Vector],
    ell: usize,
    corrupt: usize,
    delta: Rational,
    rng: &mut R,
) -> Result<ListRecoveryInstance> {
    let n = shape.n;
    if corrupt > n {
        return Err(Error::InvalidParams(format!("cannot corrupt {corrupt} of {n} coordinates")));
    }
    let alphabet = (shape.q() as f64).powi(shape.s as i32);
    if ell as f64 > alphabet - 1.0 {
        return Err(Error::InvalidParams(format!("ell = {ell} leaves no room for noise symbols")));
    }
    for c in planted {
        shape.check(c)?;
    }
    let mut lists: Vec<Vec<Vector>> = (0..n)
        .map(|i| {
            let mut l: Vec<Vector> = Vec::new();
            for c in planted {
                let sym = shape.symbol(c, i).to_vec();
                if !l.contains(&sym) {
                    l.push(sym);
                }
            }
            l
        })
        .collect();
    if lists.iter().any(|l| l.len() > ell) {
        return Err(Error::InvalidParams(format!(
            "{} planted words do not fit lists of size {ell}",
            planted.len()
        )));
    }
    for l in lists.iter_mut() {
        while l.len() < ell {
            let sym = random_symbol(shape, rng);
            if !l.contains(&sym) {
                l.push(sym);
            }
        }
    }
    let hits: Vec<Vec<usize>> = planted
        .iter()
        .map(|_| index::sample(rng, n, corrupt).into_vec())
        .collect();
    for (j, c) in planted.iter().enumerate() {
        for &i in &hits[j] {
            let sym = shape.symbol(c, i);
            let shared = planted
                .iter()
                .enumerate()
                .any(|(m, d)| m != j && !hits[m].contains(&i) && shape.symbol(d, i) == sym);
            if shared {
                continue;
            }
            let l = &mut lists[i];
            let Some(pos) = l.iter().position(|x| x == sym) else {
                continue;
            };
            l.swap_remove(pos);
            loop {
                let fresh = random_symbol(shape, rng);
                if fresh != sym && !l.contains(&fresh) {
                    l.push(fresh);
                    break;
                }
            }
        }
    }
    ListRecoveryInstance::new(shape.s, lists, ell, delta)
}

/// `p` random codewords planted into lists of size `ell`.
pub fn planted_instance<R: Rng + ?Sized>(
    code: &FrsCode,
    p: usize,
    ell: usize,
    corrupt: usize,
    delta: Rational,
    rng: &mut R,
) -> Result<PlantedInstance> {
    let planted: Vec<Vector> = (0..p).map(|_| code.random_codeword(rng).flatten()).collect();
    let instance = plant_lists(code.shape(), &planted, ell, corrupt, delta, rng)?;
    Ok(PlantedInstance { instance, planted })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub planted: Vec<Vector>,
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub list_size: f64,
    pub bcz: f64,
}

/// Everything a recovery run emits, in a fixed field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub config: RecoveryConfig,
    pub code_params: CodeParams,
    pub step1: Step1Info,
    pub r: usize,
    pub t: usize,
    pub shape: (usize, usize),
    pub offset: Option<Vector>,
    pub runs: Vec<RunRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub filtered: Option<Vec<Vector>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coverage: Option<Coverage>,
    pub bounds: Bounds,
}

impl RecoveryReport {
    pub fn new(
        code: &FrsCode,
        cfg: &RecoveryConfig,
        output: RecoveryOutput,
        ell: usize,
        planted: Option<&[Vector]>,
        limit: u64,
    ) -> Result<Self> {
        let params = cfg.prune_params()?;
        let coverage = match planted {
            Some(p) => Some(Coverage {
                planted: p.to_vec(),
                covered: output.covers(p, limit)?,
            }),
            None => None,
        };
        let tau = code.tau(output.r);
        let bounds = Bounds {
            list_size: bound_list_size(output.r, params.eta(), params.eta_prime(), ell),
            bcz: bound_bcz(ell, &tau, &matching_bcz_epsilon(&tau, &params)),
        };
        Ok(Self {
            config: cfg.clone(),
            code_params: code.params(),
            step1: output.step1,
            r: output.r,
            t: output.t,
            shape: output.shape,
            offset: output.offset,
            runs: output.runs,
            filtered: output.filtered,
            coverage,
            bounds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn code13() -> FrsCode {
        FrsCode::new(13, 3, 2, 2).unwrap()
    }

    #[test]
    fn radius_counts() {
        assert_eq!(Radius::AtMost(r(1, 4)).max_disagreements(8), Some(2));
        assert_eq!(Radius::Below(r(1, 4)).max_disagreements(8), Some(1));
        assert_eq!(Radius::Below(r(3, 10)).max_disagreements(8), Some(2));
        assert_eq!(Radius::Below(Rational::zero()).max_disagreements(8), None);
        assert_eq!(Radius::AtMost(Rational::one()).max_disagreements(8), Some(8));
    }

    #[test]
    fn exact_list_examples() {
        let code = code13();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = code.random_codeword(&mut rng);
        let inst = ListRecoveryInstance::from_word(2, &c.flatten(), Rational::zero()).unwrap();
        assert_eq!(exact_list(&code, &inst, 1000).unwrap(), vec![c.clone()]);
        let all = inst.clone().with_delta(Rational::one()).unwrap();
        assert_eq!(exact_list(&code, &all, 1000).unwrap().len(), 169);

        let d = code.encode(&[5, 7]).unwrap();
        let lists: Vec<Vec<Vec<u32>>> = (0..3)
            .map(|i| vec![c.symbols[i].clone(), d.symbols[i].clone()])
            .collect();
        let two = ListRecoveryInstance::new(2, lists, 2, Rational::zero()).unwrap();
        let mut want = vec![c.clone(), d.clone()];
        want.sort_by(|a, b| a.flatten().cmp(&b.flatten()));
        want.dedup();
        assert_eq!(exact_list(&code, &two, 1000).unwrap(), want);
        assert!(matches!(exact_list(&code, &two, 100), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn step1_examples() {
        let code = code13();
        let empty = ListRecoveryInstance::new(2, vec![vec![]; 3], 1, Rational::zero()).unwrap();
        assert_eq!(step1_affine_space(&code, &empty, Step1Mode::OracleHull, 1000).unwrap(), None);
        let c = code.encode(&[1, 2]).unwrap().flatten();
        let single = ListRecoveryInstance::from_word(2, &c, Rational::zero()).unwrap();
        let a = step1_affine_space(&code, &single, Step1Mode::OracleHull, 1000)
            .unwrap()
            .unwrap();
        assert_eq!(a.dim(), 0);
        assert_eq!(a.offset(), c.as_slice());
        let whole = step1_affine_space(&code, &single, Step1Mode::WholeCode, 1000)
            .unwrap()
            .unwrap();
        assert_eq!(whole.dim(), 2);
    }

    #[test]
    fn noiseless_singletons_are_covered() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = code.random_codeword(&mut rng).flatten();
        let inst = ListRecoveryInstance::from_word(4, &c, Rational::zero()).unwrap();
        let cfg = RecoveryConfig {
            seed: 5,
            exact_filter: true,
            ..RecoveryConfig::default()
        };
        let out = recover(&code, &inst, &cfg, 1 << 20).unwrap();
        assert!(out.covers(&[c.clone()], 1 << 20).unwrap());
        assert_eq!(out.filtered.as_deref(), Some(&[c][..]));
        for p in out.sumsets() {
            assert!(p.summands().len() <= out.shape.0);
            assert!(p.summands().iter().all(|a| a.len() <= 1));
        }
    }

    #[test]
    fn empty_list_short_circuits() {
        let code = code13();
        let empty = ListRecoveryInstance::new(2, vec![vec![]; 3], 1, Rational::zero()).unwrap();
        let cfg = RecoveryConfig {
            step1_mode: Step1Mode::OracleHull,
            ..RecoveryConfig::default()
        };
        let out = recover(&code, &empty, &cfg, 1000).unwrap();
        assert!(out.runs.is_empty());
        assert_eq!(out.step1.dim, None);
    }

    #[test]
    fn recover_is_deterministic_and_rejects_budget_overflow() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let planted = planted_instance(&code, 2, 2, 2, r(1, 4), &mut rng).unwrap();
        let cfg = RecoveryConfig {
            seed: 9,
            ..RecoveryConfig::default()
        };
        let a = recover(&code, &planted.instance, &cfg, 1 << 20).unwrap();
        let b = recover(&code, &planted.instance, &cfg, 1 << 20).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.runs.len(), a.t);
        let tight = RecoveryConfig {
            r: Some(3),
            ..cfg
        };
        assert!(recover(&code, &planted.instance, &tight, 1 << 20).is_err());
    }

    #[test]
    fn planted_lists_have_the_requested_noise() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for corrupt in 0..=3 {
            let p = planted_instance(&code, 2, 3, corrupt, Rational::zero(), &mut rng).unwrap();
            assert!(p.instance.lists().iter().all(|l| l.len() == 3));
            for c in &p.planted {
                let bad = 8 - p.instance.agreement_count(c);
                assert!(bad <= corrupt);
            }
        }
        assert!(planted_instance(&code, 3, 2, 0, Rational::zero(), &mut rng).is_err());
    }

    #[test]
    fn list_size_bound_examples() {
        assert_eq!(bound_list_size(4, &r(1, 4), &r(1, 2), 2), 272.0);
        assert_eq!(bound_list_size(4, &r(1, 4), &r(1, 2), 1), 17.0);
        // tiny eta' clamps the exponent at r
        assert_eq!(bound_list_size(3, &r(1, 2), &r(1, 100), 2), 8.0 * 7.0);
    }

    #[test]
    fn bcz_bound_examples() {
        assert!((bound_bcz(2, &r(1, 4), &r(1, 4)) - 16.0).abs() < 1e-9);
        assert!((bound_bcz(1, &r(1, 4), &r(1, 4)) - 4.0).abs() < 1e-9);
        assert!(bound_bcz(2, &r(1, 8), &r(1, 2)) < bound_bcz(2, &r(1, 8), &r(1, 4)));
        assert_eq!(bound_bcz(2, &r(1, 8), &Rational::zero()), f64::INFINITY);
    }

    #[test]
    fn theorem_params_example() {
        let p = frs_theorem_params(&r(1, 8), &r(1, 4), 2).unwrap();
        assert_eq!(p.r, 32);
        assert_eq!(p.s0, Rational::from(192i64));
        assert_eq!(p.eta, r(1, 16));
        assert_eq!(p.eta_prime, r(1, 3));
        assert_eq!(p.sumset_dim_bound, 11);
        assert_eq!(p.t, repetitions(32, &r(1, 16), 2, &Rational::one()));
        assert!(frs_theorem_params(&r(1, 8), &r(7, 8), 2).is_err());
        assert!(frs_theorem_params(&r(1, 8), &r(9, 8), 2).is_err());
    }

    #[test]
    fn repetitions_formula() {
        // ((3 + 1/4)/(1/4)) (3 ln 2 + ln 13 + 1) = 13 * 5.6444... = 73.38
        assert_eq!(repetitions(3, &r(1, 4), 2, &Rational::one()), 74);
        assert_eq!(repetitions(3, &r(1, 4), 2, &Rational::from(3i64)), 100);
        assert_eq!(repetitions(0, &r(1, 4), 2, &Rational::one()), 1);
    }

    #[test]
    fn pruning_radius_and_matching_epsilon() {
        let params = PruneParams::new(r(1, 4), r(1, 8)).unwrap();
        // 1 - (1/4 + 1/4) / (7/8) = 3/7
        assert_eq!(pruning_radius(&r(1, 4), &params), r(3, 7));
        let eps = matching_bcz_epsilon(&r(1, 4), &params);
        assert_eq!(Rational::one() - r(1, 4) - eps, r(3, 7));
    }

    #[test]
    fn report_serializes_in_a_stable_order() {
        let code = code13();
        let c = code.encode(&[1, 1]).unwrap().flatten();
        let inst = ListRecoveryInstance::from_word(2, &c, Rational::zero()).unwrap();
        let cfg = RecoveryConfig {
            t: Some(3),
            ..RecoveryConfig::default()
        };
        let out = recover(&code, &inst, &cfg, 1000).unwrap();
        let rep = RecoveryReport::new(&code, &cfg, out, 1, Some(&[c]), 1000).unwrap();
        assert_eq!(rep.coverage.as_ref().map(|c| c.covered), Some(true));
        let json = serde_json::to_value(&rep).unwrap();
        let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
        assert!(keys.contains(&&"bounds".to_string()));
    }
}
