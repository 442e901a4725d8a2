//! Empirical checks of the statements the pipeline relies on.
//!
//! Every check runs on small codes where the relevant sets can be enumerated
//! outright. Exact statements (the design property, the potential step) are
//! compared as rationals; probabilistic floors are compared one-sided at
//! three standard errors.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frs::{CodeParams, FrsCode};
use crate::gf::Rational;
use crate::instance::{random_symbol, ListRecoveryInstance};
use crate::prune::{
    expected_potential_step, fprune, potential, prune_ahs, prune_uniform, trace_length_bound, PruneParams,
};
use crate::recovery::{bound_bcz, bound_list_size, list_within, matching_bcz_epsilon, plant_lists, pruning_radius, Radius};
use crate::stream_rng;
use crate::vspace::{AffineSpace, Subspace, Vector};

/// Aligned plain-text columns.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: ToString>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(|c| c.to_string()).collect());
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols = self.header.len();
        let mut width: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |f: &mut fmt::Formatter<'_>, cells: &[String]| -> fmt::Result {
            let parts: Vec<String> = (0..cols)
                .map(|j| format!("{:>w$}", cells.get(j).map_or("", String::as_str), w = width[j]))
                .collect();
            writeln!(f, "{}", parts.join("  ").trim_end())
        };
        line(f, &self.header)?;
        for row in &self.rows {
            line(f, row)?;
        }
        Ok(())
    }
}

fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.4}")
    } else {
        "inf".into()
    }
}

/// A linear subspace of `code` spanned by `r` random codewords; rank
/// deficient draws are redrawn.
pub fn random_subspace<R: Rng + ?Sized>(code: &FrsCode, r: usize, rng: &mut R) -> Result<Subspace> {
    if r > code.k() {
        return Err(Error::InvalidParams(format!(
            "no {r}-dimensional subspace in a code of dimension {}",
            code.k()
        )));
    }
    loop {
        let words: Vec<Vector> = (0..r).map(|_| code.random_codeword(rng).flatten()).collect();
        let h = Subspace::span(code.shape(), words)?;
        if h.dim() == r {
            return Ok(h);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesignMode {
    Exhaustive,
    Sampled(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignViolation {
    /// Message-space basis of the offending subspace.
    pub messages: Vec<Vec<u32>>,
    pub statistic: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignReport {
    pub code_params: CodeParams,
    pub r: usize,
    pub mode: DesignMode,
    pub subspaces_checked: u64,
    pub max_statistic: Rational,
    /// `r * tau(r)`.
    pub bound: Rational,
    pub violation_count: u64,
    /// The first few violations in enumeration order.
    pub violations: Vec<DesignViolation>,
}

impl DesignReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(["q", "n", "k", "s", "r", "checked", "max_statistic", "bound", "violations"]);
        let p = &self.code_params;
        t.row([
            p.q.to_string(),
            p.n.to_string(),
            p.k.to_string(),
            p.s.to_string(),
            self.r.to_string(),
            self.subspaces_checked.to_string(),
            self.max_statistic.to_string(),
            self.bound.to_string(),
            self.violation_count.to_string(),
        ]);
        t
    }
}

const KEPT_VIOLATIONS: usize = 16;

/// Number of `r`-dimensional subspaces of `F_q^k`.
pub fn gaussian_binomial(q: u32, k: usize, r: usize) -> f64 {
    if r > k {
        return 0.0;
    }
    let q = q as f64;
    (0..r)
        .map(|i| (q.powi((k - i) as i32) - 1.0) / (q.powi((i + 1) as i32) - 1.0))
        .product()
}

/// All `r`-subsets of `0..k` in lexicographic order.
fn combinations(k: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            go(i + 1, k, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, r, &mut Vec::new(), &mut out);
    out
}

struct Partial {
    checked: u64,
    max: Rational,
    count: u64,
    kept: Vec<DesignViolation>,
}

impl Partial {
    fn empty() -> Self {
        Self {
            checked: 0,
            max: Rational::zero(),
            count: 0,
            kept: Vec::new(),
        }
    }

    fn one(messages: Vec<Vec<u32>>, statistic: Rational, bound: &Rational) -> Self {
        let bad = statistic > *bound;
        Self {
            checked: 1,
            max: statistic.clone(),
            count: bad as u64,
            kept: if bad {
                vec![DesignViolation { messages, statistic }]
            } else {
                Vec::new()
            },
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.checked += other.checked;
        self.max = self.max.max(other.max);
        self.count += other.count;
        self.kept.extend(other.kept);
        self.kept.truncate(KEPT_VIOLATIONS);
        self
    }
}

fn statistic_of(code: &FrsCode, messages: &[Vec<u32>]) -> Result<Rational> {
    let words = messages
        .iter()
        .map(|m| code.encode_flat(m))
        .collect::<Result<Vec<_>>>()?;
    Subspace::span(code.shape(), words)?.design_statistic()
}

/// Checks `sum_i dim H_i / n <= r tau(r)` over `r`-dimensional subspaces.
pub fn verify_design(code: &FrsCode, r: usize, mode: DesignMode, seed: u64, limit: u64) -> Result<DesignReport> {
    verify_design_with_tau(code, r, mode, seed, limit, code.tau(r))
}

/// [`verify_design`] against an arbitrary `tau(r)`.
pub fn verify_design_with_tau(
    code: &FrsCode,
    r: usize,
    mode: DesignMode,
    seed: u64,
    limit: u64,
    tau: Rational,
) -> Result<DesignReport> {
    if r == 0 || r > code.k() {
        return Err(Error::InvalidParams(format!("r = {r} must lie in 1..={}", code.k())));
    }
    let bound = Rational::from(r) * tau;
    let q = code.q();
    let k = code.k();
    let partial = match mode {
        DesignMode::Exhaustive => {
            let count = gaussian_binomial(q, k, r);
            if count > limit as f64 {
                return Err(Error::LimitExceeded { count, limit });
            }
            let mut acc = Partial::empty();
            for pivots in combinations(k, r) {
                // free entries: right of each pivot, off the pivot columns
                let free: Vec<(usize, usize)> = pivots
                    .iter()
                    .enumerate()
                    .flat_map(|(row, &p)| {
                        let pivots = &pivots;
                        (p + 1..k).filter(move |j| !pivots.contains(j)).map(move |j| (row, j))
                    })
                    .collect();
                let total = (q as u64).pow(free.len() as u32);
                let part = (0..total)
                    .into_par_iter()
                    .map(|mut idx| {
                        let mut m = vec![vec![0u32; k]; r];
                        for (row, &p) in pivots.iter().enumerate() {
                            m[row][p] = 1;
                        }
                        for &(row, j) in &free {
                            m[row][j] = (idx % q as u64) as u32;
                            idx /= q as u64;
                        }
                        let stat = statistic_of(code, &m)?;
                        Ok::<_, Error>(Partial::one(m, stat, &bound))
                    })
                    .try_reduce(Partial::empty, |a, b| Ok(a.merge(b)))?;
                acc = acc.merge(part);
            }
            acc
        }
        DesignMode::Sampled(n) => (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(seed, i);
                let m = loop {
                    let m: Vec<Vec<u32>> = (0..r).map(|_| code.random_message(&mut rng)).collect();
                    let words = m.iter().map(|x| code.encode_flat(x)).collect::<Result<Vec<_>>>()?;
                    if Subspace::span(code.shape(), words)?.dim() == r {
                        break m;
                    }
                };
                let stat = statistic_of(code, &m)?;
                Ok::<_, Error>(Partial::one(m, stat, &bound))
            })
            .try_reduce(Partial::empty, |a, b| Ok(a.merge(b)))?,
    };
    Ok(DesignReport {
        code_params: code.params(),
        r,
        mode,
        subspaces_checked: partial.checked,
        max_statistic: partial.max,
        bound,
        violation_count: partial.count,
        violations: partial.kept,
    })
}

/// Monte Carlo estimate of a one-sided probability floor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub estimator: String,
    pub trials: u64,
    /// Runs counted as successes (for FPRUNE: `X_{c,T} = 1`).
    pub successes: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub floor: Rational,
    /// `3 * std_error`.
    pub z_margin: f64,
    /// Whether the instance meets the statement's distance hypothesis.
    pub hypothesis: bool,
    /// `None` when the hypothesis fails.
    pub pass: Option<bool>,
    /// FPRUNE only: runs that got stuck.
    #[serde(default)]
    pub stuck: u64,
    /// FPRUNE only: length bound and the number of traces exceeding it.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace_bound: Option<usize>,
    #[serde(default)]
    pub max_trace_len: usize,
    #[serde(default)]
    pub trace_violations: u64,
}

impl EstimatorReport {
    fn from_values(estimator: &str, values: &[f64], successes: u64, floor: Rational, hypothesis: bool) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let std_error = (var / n).sqrt();
        let z_margin = 3.0 * std_error;
        let pass = hypothesis.then(|| mean >= floor.to_f64() - z_margin);
        Self {
            estimator: estimator.into(),
            trials: values.len() as u64,
            successes,
            estimate: mean,
            std_error,
            floor,
            z_margin,
            hypothesis,
            pass,
            stuck: 0,
            trace_bound: None,
            max_trace_len: 0,
            trace_violations: 0,
        }
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(["estimator", "trials", "successes", "estimate", "floor", "margin", "hypothesis", "pass"]);
        t.row([
            self.estimator.clone(),
            self.trials.to_string(),
            self.successes.to_string(),
            fmt_f64(self.estimate),
            format!("{} ({})", self.floor, fmt_f64(self.floor.to_f64())),
            fmt_f64(self.z_margin),
            self.hypothesis.to_string(),
            self.pass.map_or("n/a".into(), |p| p.to_string()),
        ]);
        t
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParams("need at least one trial".into()));
    }
    Ok(())
}

/// Mean of `X_{c,T} (1 - eta')^|T|` over FPRUNE runs on `h`, against
/// `eta/(r + eta)`.
pub fn estimate_fprune_success(
    code: &FrsCode,
    h: &Subspace,
    c: &[u32],
    lists: &ListRecoveryInstance,
    params: &PruneParams,
    trials: u64,
    seed: u64,
) -> Result<EstimatorReport> {
    check_trials(trials)?;
    lists.check_shape(h.shape())?;
    if !h.contains(c)? {
        return Err(Error::Precondition("planted word is not in H".into()));
    }
    let r = h.dim();
    let radius = pruning_radius(&code.tau(r), params);
    let hypothesis = r >= 1 && lists.distance(c) < radius;
    let shape = *h.shape();
    let shrink = params.shrink().to_f64();
    let bound = trace_length_bound(r, params.eta_prime());
    let runs: Vec<(f64, bool, bool, usize)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let trace = fprune(h, params, &mut rng);
            let x = !trace.failed && trace.pinned.iter().all(|&t| lists.contains(t, shape.symbol(c, t)));
            let value = if x { shrink.powi(trace.pinned.len() as i32) } else { 0.0 };
            (value, x, trace.failed, trace.pinned.len())
        })
        .collect();
    let values: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let successes = runs.iter().filter(|r| r.1).count() as u64;
    let floor = params
        .eta()
        .checked_div(&(Rational::from(r) + params.eta().clone()))?;
    let mut rep = EstimatorReport::from_values("fprune", &values, successes, floor, hypothesis);
    rep.stuck = runs.iter().filter(|r| r.2).count() as u64;
    rep.trace_bound = Some(bound);
    rep.max_trace_len = runs.iter().filter(|r| !r.2).map(|r| r.3).max().unwrap_or(0);
    rep.trace_violations = runs.iter().filter(|r| !r.2 && r.3 > bound).count() as u64;
    Ok(rep)
}

fn word_distance(shape: &crate::vspace::Shape, a: &[u32], b: &[u32]) -> Rational {
    let bad = (0..shape.n).filter(|&i| shape.symbol(a, i) != shape.symbol(b, i)).count();
    Rational::from(bad)
        .checked_div(&Rational::from(shape.n))
        .expect("n is positive")
}

fn estimate_pinning<F>(name: &str, h: &AffineSpace, c: &[u32], trials: u64, seed: u64, floor: Rational, hypothesis: bool, run: F) -> Result<EstimatorReport>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> Option<Vector> + Sync,
{
    check_trials(trials)?;
    if !h.contains(c)? {
        return Err(Error::Precondition("planted word is not in H".into()));
    }
    let hits: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|i| run(&mut stream_rng(seed, i)).as_deref() == Some(c))
        .collect();
    let values: Vec<f64> = hits.iter().map(|&b| b as u8 as f64).collect();
    let successes = hits.iter().filter(|&&b| b).count() as u64;
    Ok(EstimatorReport::from_values(name, &values, successes, floor, hypothesis))
}

/// How often weighted pinning to `y` returns exactly `c`, against
/// `eps/(r + eps)`.
pub fn estimate_ahs_success(
    code: &FrsCode,
    h: &AffineSpace,
    y: &[u32],
    c: &[u32],
    epsilon: &Rational,
    trials: u64,
    seed: u64,
) -> Result<EstimatorReport> {
    h.shape().check(y)?;
    let r = h.dim();
    let hypothesis = word_distance(h.shape(), c, y) < Rational::one() - code.tau(r) - epsilon.clone();
    let floor = epsilon.checked_div(&(Rational::from(r) + epsilon.clone()))?;
    estimate_pinning("ahs", h, c, trials, seed, floor, hypothesis, |rng| {
        prune_ahs(h, y, epsilon, rng).codeword
    })
}

/// How often uniform pinning to `y` returns exactly `c`, against `eps^r`.
pub fn estimate_uniform_success(
    code: &FrsCode,
    h: &AffineSpace,
    y: &[u32],
    c: &[u32],
    epsilon: &Rational,
    trials: u64,
    seed: u64,
) -> Result<EstimatorReport> {
    h.shape().check(y)?;
    let r = h.dim();
    let hypothesis = word_distance(h.shape(), c, y) < code.relative_distance() - epsilon.clone();
    let floor = epsilon.pow(r as u32);
    estimate_pinning("uniform", h, c, trials, seed, floor, hypothesis, |rng| {
        prune_uniform(h, y, rng).codeword
    })
}

/// One potential-step instance, kept verbatim when it breaks the inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityCase {
    pub basis: Vec<Vector>,
    pub pinned: Vec<usize>,
    pub c: Vector,
    pub lists: ListRecoveryInstance,
    pub before: Rational,
    pub after: Option<Rational>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub code_params: CodeParams,
    pub params: PruneParams,
    pub checked: u64,
    /// Instances whose potential was already 0.
    pub trivial: u64,
    /// Draws rejected by the distance hypothesis.
    pub excluded: u64,
    pub by_dim: Vec<u64>,
    pub counterexamples: Vec<MonotonicityCase>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(["eta", "eta'", "checked", "trivial", "excluded", "counterexamples"]);
        t.row([
            self.params.eta().to_string(),
            self.params.eta_prime().to_string(),
            self.checked.to_string(),
            self.trivial.to_string(),
            self.excluded.to_string(),
            self.counterexamples.len().to_string(),
        ]);
        t
    }
}

struct Draw {
    basis: Vec<Vector>,
    pinned: Vec<usize>,
    h: Subspace,
    c: Vector,
    lists: ListRecoveryInstance,
}

fn draw_monotonicity_instance<R: Rng + ?Sized>(code: &FrsCode, max_dim: usize, rng: &mut R) -> Result<Draw> {
    let shape = code.shape();
    let n = shape.n;
    let d = rng.gen_range(1..=max_dim.min(code.k()));
    let g = random_subspace(code, d, rng)?;
    let mut pinned: Vec<usize> = Vec::new();
    for _ in 0..rng.gen_range(0..=2usize) {
        let options: Vec<usize> = (0..n)
            .filter(|i| !pinned.contains(i))
            .filter(|&i| {
                let mut t = pinned.clone();
                t.push(i);
                g.zero_on(&t).dim() >= 1
            })
            .collect();
        if options.is_empty() {
            break;
        }
        pinned.push(options[rng.gen_range(0..options.len())]);
    }
    let h = g.zero_on(&pinned);
    let coeffs: Vec<u32> = (0..h.dim()).map(|_| rng.gen_range(0..shape.q())).collect();
    let c = h.combine(&coeffs);
    let ell = rng.gen_range(1..=3usize);
    let keep_pins = rng.gen_bool(0.9);
    let extra = rng.gen_range(0..=n);
    let mut agree: Vec<bool> = (0..n).map(|_| false).collect();
    for &t in &pinned {
        agree[t] = keep_pins;
    }
    for i in rand::seq::index::sample(rng, n, extra) {
        if !(pinned.contains(&i) && !keep_pins) {
            agree[i] = true;
        }
    }
    let lists: Vec<Vec<Vector>> = (0..n)
        .map(|i| {
            let ci = shape.symbol(&c, i).to_vec();
            let mut l = Vec::new();
            if agree[i] {
                l.push(ci.clone());
            }
            while l.len() < ell {
                let sym = random_symbol(shape, rng);
                if sym != ci && !l.contains(&sym) {
                    l.push(sym);
                }
            }
            l
        })
        .collect();
    let lists = ListRecoveryInstance::new(shape.s, lists, ell, Rational::zero())?;
    Ok(Draw {
        basis: g.basis().to_vec(),
        pinned,
        h,
        c,
        lists,
    })
}

/// Checks the potential step `E[f(H_i, c, T + {i})] >= f(H, c, T)` exactly
/// on `instances` random draws that meet the distance hypothesis.
pub fn audit_monotonicity(
    code: &FrsCode,
    max_dim: usize,
    instances: u64,
    params: &PruneParams,
    seed: u64,
) -> Result<MonotonicityReport> {
    if max_dim == 0 {
        return Err(Error::InvalidParams("max_dim must be at least 1".into()));
    }
    let attempts_cap = instances.saturating_mul(50).max(1000);
    let mut report = MonotonicityReport {
        code_params: code.params(),
        params: params.clone(),
        checked: 0,
        trivial: 0,
        excluded: 0,
        by_dim: vec![0; max_dim.min(code.k()) + 1],
        counterexamples: Vec::new(),
    };
    let mut stream = 0u64;
    while report.checked < instances {
        if stream >= attempts_cap {
            return Err(Error::Precondition(format!(
                "only {} of {instances} hypothesis-satisfying draws after {stream} attempts",
                report.checked
            )));
        }
        let mut rng = stream_rng(seed, stream);
        stream += 1;
        let draw = draw_monotonicity_instance(code, max_dim, &mut rng)?;
        let radius = pruning_radius(&code.tau(draw.h.dim()), params);
        if draw.lists.distance(&draw.c) >= radius {
            report.excluded += 1;
            continue;
        }
        report.checked += 1;
        report.by_dim[draw.h.dim()] += 1;
        let before = potential(&draw.h, &draw.c, &draw.pinned, &draw.lists, params)?;
        if before.is_zero() {
            report.trivial += 1;
        }
        let case = |after: Option<Rational>, note: &str| MonotonicityCase {
            basis: draw.basis.clone(),
            pinned: draw.pinned.clone(),
            c: draw.c.clone(),
            lists: draw.lists.clone(),
            before: before.clone(),
            after,
            note: note.into(),
        };
        match expected_potential_step(&draw.h, &draw.c, &draw.pinned, &draw.lists, params) {
            Ok(after) if after >= before => {}
            Ok(after) => report.counterexamples.push(case(Some(after), "expected step below potential")),
            Err(e) => report.counterexamples.push(case(None, &e.to_string())),
        }
    }
    Ok(report)
}

/// Exact list size inside one space against both closed-form bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListSizeCheck {
    pub r: usize,
    pub ell: usize,
    pub eta: Rational,
    pub eta_prime: Rational,
    pub tau: Rational,
    /// `1 - (tau + eta)/(1 - eta')`; counted words are strictly closer.
    pub radius: Rational,
    pub exact: usize,
    pub list_size_bound: f64,
    /// `eps` giving the BCZ statement the same radius.
    pub bcz_epsilon: Rational,
    pub bcz_bound: f64,
}

impl ListSizeCheck {
    pub fn within_list_size_bound(&self) -> bool {
        (self.exact as f64) <= self.list_size_bound
    }

    pub fn within_bcz_bound(&self) -> bool {
        (self.exact as f64) <= self.bcz_bound
    }
}

/// Counts `{c in H : Delta(c, lists) < radius}` by enumeration of `h`.
pub fn check_list_size(
    code: &FrsCode,
    h: &Subspace,
    lists: &ListRecoveryInstance,
    params: &PruneParams,
    limit: u64,
) -> Result<ListSizeCheck> {
    let r = h.dim();
    let tau = code.tau(r);
    let radius = pruning_radius(&tau, params);
    let exact = list_within(&AffineSpace::linear(h.clone()), lists, &Radius::Below(radius.clone()), limit)?.len();
    let bcz_epsilon = matching_bcz_epsilon(&tau, params);
    Ok(ListSizeCheck {
        r,
        ell: lists.ell(),
        eta: params.eta().clone(),
        eta_prime: params.eta_prime().clone(),
        list_size_bound: bound_list_size(r, params.eta(), params.eta_prime(), lists.ell()),
        bcz_bound: bound_bcz(lists.ell(), &tau, &bcz_epsilon),
        tau,
        radius,
        exact,
        bcz_epsilon,
    })
}

/// Lists of size `ell` planting `ell` random elements of `h`, each with up
/// to `max_corrupt` coordinates knocked out.
pub fn planted_lists_in<R: Rng + ?Sized>(
    code: &FrsCode,
    h: &Subspace,
    ell: usize,
    max_corrupt: usize,
    rng: &mut R,
) -> Result<ListRecoveryInstance> {
    let q = code.q();
    let planted: Vec<Vector> = (0..ell)
        .map(|_| {
            let coeffs: Vec<u32> = (0..h.dim()).map(|_| rng.gen_range(0..q)).collect();
            h.combine(&coeffs)
        })
        .collect();
    let corrupt = rng.gen_range(0..=max_corrupt.min(code.n()));
    plant_lists(code.shape(), &planted, ell, corrupt, Rational::zero(), rng)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub epsilon: Rational,
    pub eta: Rational,
    pub eta_prime: Rational,
    pub radius: Rational,
    pub instances: u64,
    pub exact_max: usize,
    pub list_size_bound: f64,
    pub bcz_bound: f64,
    pub violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub code_params: CodeParams,
    pub r: usize,
    pub ell: usize,
    pub tau: Rational,
    pub rows: Vec<BoundsRow>,
}

impl BoundsTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.violations == 0)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(["eps", "eta", "eta'", "radius", "instances", "exact_max", "list_size", "bcz"]);
        for r in &self.rows {
            t.row([
                r.epsilon.to_string(),
                r.eta.to_string(),
                r.eta_prime.to_string(),
                r.radius.to_string(),
                r.instances.to_string(),
                r.exact_max.to_string(),
                fmt_f64(r.list_size_bound),
                fmt_f64(r.bcz_bound),
            ]);
        }
        t
    }
}

/// Pruning parameters for a row of [`bounds_table`]: `eta = eps/4`,
/// `eta' = eps/(2(tau + eps))`.
pub fn row_params(tau: &Rational, epsilon: &Rational) -> Result<PruneParams> {
    let eta = epsilon.checked_div(&Rational::from(4i64))?;
    let eta_prime = epsilon.checked_div(&(Rational::from(2i64) * (tau.clone() + epsilon.clone())))?;
    PruneParams::new(eta, eta_prime)
}

/// Exhaustive list sizes over random `r`-dimensional subspaces with
/// planted lists, one row per `eps`.
pub fn bounds_table(
    code: &FrsCode,
    r: usize,
    ell: usize,
    epsilon_grid: &[Rational],
    instances_per_row: u64,
    seed: u64,
    limit: u64,
) -> Result<BoundsTable> {
    let tau = code.tau(r);
    let mut rows = Vec::new();
    for (j, eps) in epsilon_grid.iter().enumerate() {
        let params = row_params(&tau, eps)?;
        let checks = (0..instances_per_row)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(seed, ((j as u64) << 32) | i);
                let h = random_subspace(code, r, &mut rng)?;
                let lists = planted_lists_in(code, &h, ell, code.n() / 2, &mut rng)?;
                check_list_size(code, &h, &lists, &params, limit)
            })
            .collect::<Result<Vec<_>>>()?;
        let first = checks.first();
        rows.push(BoundsRow {
            epsilon: eps.clone(),
            eta: params.eta().clone(),
            eta_prime: params.eta_prime().clone(),
            radius: pruning_radius(&tau, &params),
            instances: instances_per_row,
            exact_max: checks.iter().map(|c| c.exact).max().unwrap_or(0),
            list_size_bound: first.map_or_else(
                || bound_list_size(r, params.eta(), params.eta_prime(), ell),
                |c| c.list_size_bound,
            ),
            bcz_bound: first.map_or_else(
                || bound_bcz(ell, &tau, &matching_bcz_epsilon(&tau, &params)),
                |c| c.bcz_bound,
            ),
            violations: checks
                .iter()
                .filter(|c| !c.within_list_size_bound() || !c.within_bcz_bound())
                .count() as u64,
        });
    }
    Ok(BoundsTable {
        code_params: code.params(),
        r,
        ell,
        tau,
        rows,
    })
}

/// A linear space with one planted element and lists that miss it on a
/// chosen set of coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruningInstance {
    pub h: Subspace,
    pub c: Vector,
    /// `c` with the missed coordinates replaced by other symbols.
    pub y: Vector,
    pub lists: ListRecoveryInstance,
    pub missed: Vec<usize>,
}

/// Random `r`-dimensional `H` in `code`, nonzero `c in H`, lists of size
/// `ell` holding `c_i` except on `corrupt` random coordinates.
pub fn pruning_instance<R: Rng + ?Sized>(
    code: &FrsCode,
    r: usize,
    ell: usize,
    corrupt: usize,
    rng: &mut R,
) -> Result<PruningInstance> {
    let shape = code.shape();
    let n = shape.n;
    if corrupt > n || ell == 0 {
        return Err(Error::InvalidParams(format!("need ell >= 1 and corrupt <= {n}")));
    }
    let h = random_subspace(code, r, rng)?;
    let c = loop {
        let coeffs: Vec<u32> = (0..r).map(|_| rng.gen_range(0..shape.q())).collect();
        let c = h.combine(&coeffs);
        if r == 0 || c.iter().any(|&x| x != 0) {
            break c;
        }
    };
    let mut missed = rand::seq::index::sample(rng, n, corrupt).into_vec();
    missed.sort_unstable();
    let mut y = c.clone();
    let mut lists = Vec::with_capacity(n);
    for i in 0..n {
        let ci = shape.symbol(&c, i).to_vec();
        let mut l: Vec<Vector> = Vec::new();
        if missed.binary_search(&i).is_ok() {
            let yi = loop {
                let sym = random_symbol(shape, rng);
                if sym != ci {
                    break sym;
                }
            };
            y[shape.positions(i)].copy_from_slice(&yi);
        } else {
            l.push(ci.clone());
        }
        while l.len() < ell {
            let sym = random_symbol(shape, rng);
            if sym != ci && !l.contains(&sym) {
                l.push(sym);
            }
        }
        lists.push(l);
    }
    let lists = ListRecoveryInstance::new(shape.s, lists, ell, Rational::zero())?;
    Ok(PruningInstance { h, c, y, lists, missed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn gaussian_binomial_counts() {
        assert_eq!(gaussian_binomial(37, 4, 1), 52060.0);
        assert_eq!(gaussian_binomial(2, 3, 1), 7.0);
        assert_eq!(gaussian_binomial(2, 4, 2), 35.0);
        assert_eq!(combinations(4, 2).len(), 6);
    }

    #[test]
    fn exhaustive_enumeration_visits_every_subspace_once() {
        // q = 2, k = 3, r = 2: seven planes
        let code = FrsCode::new(13, 3, 3, 2).unwrap();
        let rep = verify_design(&code, 2, DesignMode::Exhaustive, 0, 1 << 20).unwrap();
        assert_eq!(rep.subspaces_checked as f64, gaussian_binomial(13, 3, 2));
        assert!(rep.passed(), "{:?}", rep.violations);
    }

    #[test]
    fn design_check_on_a_small_code() {
        let code = FrsCode::new(13, 6, 5, 2).unwrap();
        let rep = verify_design(&code, 1, DesignMode::Exhaustive, 0, 1 << 20).unwrap();
        assert_eq!(rep.subspaces_checked, (13u64.pow(5) - 1) / 12);
        assert!(rep.passed());
        assert_eq!(rep.bound, code.tau(1));
        // halving tau must be caught
        let bad = verify_design_with_tau(&code, 1, DesignMode::Exhaustive, 0, 1 << 20, code.tau(1) * r(1, 2)).unwrap();
        assert!(!bad.passed());
        assert!(bad.max_statistic > bad.bound);
        assert!(bad.violations.len() <= KEPT_VIOLATIONS);
    }

    #[test]
    fn sampled_design_check_beyond_s() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let rep = verify_design(&code, 4, DesignMode::Sampled(200), 3, 0).unwrap();
        assert_eq!(rep.subspaces_checked, 200);
        assert!(rep.passed());
        assert!(verify_design(&code, 2, DesignMode::Exhaustive, 0, 10).is_err());
        // r = k: the code itself is the only subspace
        assert_eq!(verify_design(&code, 4, DesignMode::Exhaustive, 0, 10).unwrap().subspaces_checked, 1);
    }

    #[test]
    fn fprune_estimator_with_full_agreement() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random_subspace(&code, 1, &mut rng).unwrap();
        let c = h.basis()[0].clone();
        let lists = ListRecoveryInstance::from_word(4, &c, Rational::zero()).unwrap();
        let params = PruneParams::new(r(1, 4), Rational::zero()).unwrap();
        let rep = estimate_fprune_success(&code, &h, &c, &lists, &params, 200, 0).unwrap();
        assert_eq!(rep.estimate, 1.0);
        assert_eq!(rep.pass, Some(true));
        assert_eq!(rep.max_trace_len, 1);
    }

    #[test]
    fn fprune_estimator_flags_hypothesis_violations() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = random_subspace(&code, 2, &mut rng).unwrap();
        let c = h.basis()[0].clone();
        let lists = ListRecoveryInstance::random(code.shape(), 1, Rational::zero(), &mut rng);
        let params = PruneParams::new(r(1, 4), r(1, 8)).unwrap();
        let rep = estimate_fprune_success(&code, &h, &c, &lists, &params, 50, 0).unwrap();
        assert!(!rep.hypothesis);
        assert_eq!(rep.pass, None);
        let outside = code.random_codeword(&mut rng).flatten();
        if !h.contains(&outside).unwrap() {
            assert!(estimate_fprune_success(&code, &h, &outside, &lists, &params, 5, 0).is_err());
        }
    }

    #[test]
    fn ahs_estimator_on_exact_word() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dir = random_subspace(&code, 3, &mut rng).unwrap();
        let c = code.random_codeword(&mut rng).flatten();
        let h = AffineSpace::new(c.clone(), dir).unwrap();
        let rep = estimate_ahs_success(&code, &h, &c, &c, &r(1, 4), 100, 0).unwrap();
        assert_eq!(rep.estimate, 1.0);
        assert_eq!(rep.pass, Some(true));
        let uni = estimate_uniform_success(&code, &h, &c, &c, &r(1, 4), 100, 0).unwrap();
        assert_eq!(uni.estimate, 1.0);
        assert_eq!(uni.floor, r(1, 64));
    }

    #[test]
    fn monotonicity_audit_small() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let params = PruneParams::new(r(1, 4), r(1, 8)).unwrap();
        let rep = audit_monotonicity(&code, 3, 20, &params, 7).unwrap();
        assert_eq!(rep.checked, 20);
        assert!(rep.passed(), "{:?}", rep.counterexamples);
        let again = audit_monotonicity(&code, 3, 20, &params, 7).unwrap();
        assert_eq!(rep, again);
    }

    #[test]
    fn list_size_check_counts_planted_words() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = random_subspace(&code, 2, &mut rng).unwrap();
        let planted: Vec<Vector> = (0..2).map(|j| h.basis()[j].clone()).collect();
        let lists = plant_lists(code.shape(), &planted, 2, 0, Rational::zero(), &mut rng).unwrap();
        let params = PruneParams::new(r(1, 8), r(1, 8)).unwrap();
        let check = check_list_size(&code, &h, &lists, &params, 1 << 20).unwrap();
        assert!(check.exact >= 2);
        assert!(check.within_list_size_bound());
        assert!(check.within_bcz_bound());
        assert_eq!(Rational::one() - check.tau.clone() - check.bcz_epsilon.clone(), check.radius);
    }

    #[test]
    fn bounds_table_rows_grow_as_eps_shrinks() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let grid = [r(1, 2), r(1, 4), r(1, 8)];
        let t = bounds_table(&code, 2, 2, &grid, 5, 1, 1 << 20).unwrap();
        assert!(t.passed());
        assert_eq!(t.rows.len(), 3);
        for w in t.rows.windows(2) {
            assert!(w[0].list_size_bound <= w[1].list_size_bound);
            assert!(w[0].bcz_bound <= w[1].bcz_bound);
        }
        let text = t.table().to_string();
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn pruning_instance_misses_exactly_the_chosen_coordinates() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let inst = pruning_instance(&code, 3, 2, 3, &mut rng).unwrap();
        assert_eq!(inst.h.dim(), 3);
        assert!(inst.h.contains(&inst.c).unwrap());
        assert_eq!(inst.lists.agreement_count(&inst.c), 5);
        let sh = code.shape();
        for i in 0..8 {
            let differs = sh.symbol(&inst.c, i) != sh.symbol(&inst.y, i);
            assert_eq!(differs, inst.missed.contains(&i));
        }
    }

    #[test]
    fn table_aligns_columns() {
        let mut t = Table::new(["a", "bbb"]);
        t.row(["10", "2"]);
        assert_eq!(t.to_string(), " a  bbb\n10    2\n");
    }
}
