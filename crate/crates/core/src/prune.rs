//! Subspace pruning.
//!
//! Three strategies share the same skeleton (pin a random coordinate, shrink
//! the space, repeat until dimension 0) and differ in how the coordinate is
//! drawn:
//!
//! * [`prune_uniform`]: uniform over all coordinates, pinning to a received word.
//! * [`prune_ahs`]: weights `dim H_i + eps` over coordinates that shrink
//!   but do not empty the space, pinning to a received word.
//! * [`fprune`]: received-word oblivious. Works on a linear space, pins
//!   coordinates to zero, and only considers coordinates whose weight
//!   `wt(H_i) = dim H_i + eta` is at most `(1 - eta') wt(H)`.
//!
//! All sampling is done on exact integer weights; no floating point is
//! involved in choosing coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Rational;
use crate::instance::ListRecoveryInstance;
use crate::vspace::{AffineSpace, Subspace, Vector};

/// `eta > 0`, `0 <= eta' < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneParams {
    eta: Rational,
    eta_prime: Rational,
}

impl PruneParams {
    pub fn new(eta: Rational, eta_prime: Rational) -> Result<Self> {
        if !eta.is_positive() {
            return Err(Error::InvalidParams(format!("eta must be positive, got {eta}")));
        }
        if eta_prime.is_negative() || eta_prime >= Rational::one() {
            return Err(Error::InvalidParams(format!(
                "eta' must lie in [0, 1), got {eta_prime}"
            )));
        }
        Ok(Self { eta, eta_prime })
    }

    pub fn eta(&self) -> &Rational {
        &self.eta
    }

    pub fn eta_prime(&self) -> &Rational {
        &self.eta_prime
    }

    /// `1 - eta'`
    pub fn shrink(&self) -> Rational {
        Rational::one() - &self.eta_prime
    }
}

/// `dim + eta`.
pub fn wt(dim: usize, eta: &Rational) -> Rational {
    Rational::from(dim) + eta
}

/// Weights of the qualifying coordinates of one pruning step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    /// `Some(wt(H_i))` when coordinate `i` qualifies.
    pub weights: Vec<Option<Rational>>,
    pub total: Rational,
}

impl WeightProfile {
    pub fn qualifying(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.as_ref().map(|_| i))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.total.is_zero()
    }

    /// `p_i = w_i / W`, zero for non-qualifying coordinates.
    pub fn probability(&self, i: usize) -> Rational {
        match &self.weights[i] {
            Some(w) => w.checked_div(&self.total).expect("qualifying implies W > 0"),
            None => Rational::zero(),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let pairs: Vec<(usize, &Rational)> = self
            .weights
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.as_ref().map(|w| (i, w)))
            .collect();
        sample_weighted(&pairs, rng)
    }
}

/// Draws index `i` with probability `w_i / sum(w)`, on integers scaled by
/// the common denominator.
fn sample_weighted<R: Rng + ?Sized>(weights: &[(usize, &Rational)], rng: &mut R) -> usize {
    let denom = weights
        .iter()
        .fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
    let scaled: Vec<u64> = weights
        .iter()
        .map(|(_, w)| {
            (w.numer() * (&denom / w.denom()))
                .to_u64()
                .expect("scaled weight fits in u64")
        })
        .collect();
    let total: u64 = scaled.iter().sum();
    assert!(total > 0, "sampling from an empty weight profile");
    let mut u = rng.gen_range(0..total);
    for ((i, _), w) in weights.iter().zip(&scaled) {
        if u < *w {
            return *i;
        }
        u -= w;
    }
    unreachable!("u < total")
}

/// Children `H_i` and the step's weight profile.
fn profile_with_children(h: &Subspace, params: &PruneParams) -> (Vec<Subspace>, WeightProfile) {
    let children: Vec<Subspace> = (0..h.shape().n)
        .map(|i| h.coordinate_zero_subspace(i))
        .collect();
    let cap = params.shrink() * wt(h.dim(), &params.eta);
    let weights: Vec<Option<Rational>> = children
        .iter()
        .map(|c| {
            let w = wt(c.dim(), &params.eta);
            // at eta' = 0 the threshold admits H_i = H; such a pin makes no progress
            (w <= cap && c.dim() < h.dim()).then_some(w)
        })
        .collect();
    let total = weights.iter().flatten().cloned().sum();
    (children, WeightProfile { weights, total })
}

pub fn weight_profile(h: &Subspace, params: &PruneParams) -> WeightProfile {
    profile_with_children(h, params).1
}

/// Coordinates pinned by one [`fprune`] run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneTrace {
    pub pinned: Vec<usize>,
    /// Dimension after each pin.
    pub dims: Vec<usize>,
    pub failed: bool,
}

/// Oblivious aggressive pruning of a linear space down to `{0}`.
///
/// If no coordinate qualifies at positive dimension the run stops with
/// `failed = true`.
pub fn fprune<R: Rng + ?Sized>(h: &Subspace, params: &PruneParams, rng: &mut R) -> PruneTrace {
    let mut trace = PruneTrace {
        pinned: Vec::new(),
        dims: Vec::new(),
        failed: false,
    };
    let mut current = h.clone();
    while !current.is_zero() {
        let (mut children, profile) = profile_with_children(&current, params);
        if profile.is_empty() {
            trace.failed = true;
            break;
        }
        let i = profile.sample(rng);
        current = children.swap_remove(i);
        trace.pinned.push(i);
        trace.dims.push(current.dim());
    }
    trace
}

/// `min(r, ceil((1/eta') (1 + max(0, ln(r eta')))))`, or `r` when `eta' = 0`.
pub fn trace_length_bound(r: usize, eta_prime: &Rational) -> usize {
    if eta_prime.is_zero() {
        return r;
    }
    let r_eta = Rational::from(r) * eta_prime;
    let inv = eta_prime.recip().expect("eta' > 0");
    let steps = if r_eta <= Rational::one() {
        // ln term clamps to 0; stay exact
        inv.ceil().to_usize().unwrap_or(usize::MAX)
    } else {
        let v = inv.to_f64() * (1.0 + r_eta.to_f64().ln());
        v.ceil() as usize
    };
    r.min(steps)
}

/// Result of a received-word pruning run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinnedOutcome {
    pub pinned: Vec<usize>,
    pub codeword: Option<Vector>,
}

/// Pinning to `y` at uniformly random coordinates.
pub fn prune_uniform<R: Rng + ?Sized>(h: &AffineSpace, y: &[u32], rng: &mut R) -> PinnedOutcome {
    let shape = *h.shape();
    let mut current = h.clone();
    let mut pinned = Vec::new();
    loop {
        if current.dim() == 0 {
            return PinnedOutcome {
                pinned,
                codeword: Some(current.offset().to_vec()),
            };
        }
        let i = rng.gen_range(0..shape.n);
        pinned.push(i);
        match current.restrict_coordinate(i, shape.symbol(y, i)) {
            Some(next) => current = next,
            None => {
                return PinnedOutcome {
                    pinned,
                    codeword: None,
                }
            }
        }
    }
}

/// Pinning to `y` with weights `dim H_i + eps` on coordinates where
/// `H_i = {h : h_i = y_i}` is neither empty nor all of `H`.
pub fn prune_ahs<R: Rng + ?Sized>(
    h: &AffineSpace,
    y: &[u32],
    epsilon: &Rational,
    rng: &mut R,
) -> PinnedOutcome {
    let shape = *h.shape();
    let mut current = h.clone();
    let mut pinned = Vec::new();
    loop {
        if current.dim() == 0 {
            return PinnedOutcome {
                pinned,
                codeword: Some(current.offset().to_vec()),
            };
        }
        let mut children: Vec<Option<AffineSpace>> = (0..shape.n)
            .map(|i| {
                current
                    .restrict_coordinate(i, shape.symbol(y, i))
                    .filter(|c| c.dim() < current.dim())
            })
            .collect();
        let weights: Vec<(usize, Rational)> = children
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|c| (i, wt(c.dim(), epsilon))))
            .collect();
        if weights.is_empty() {
            return PinnedOutcome {
                pinned,
                codeword: None,
            };
        }
        let refs: Vec<(usize, &Rational)> = weights.iter().map(|(i, w)| (*i, w)).collect();
        let i = sample_weighted(&refs, rng);
        pinned.push(i);
        current = children[i].take().expect("sampled coordinate has a child");
    }
}

/// Potential of a pruning state: 0 if `c` leaves a list on `T`, otherwise
/// `(1 - eta')^|T| / wt(H)`. Requires `H` to vanish on `T`.
pub fn potential(
    h: &Subspace,
    c: &[u32],
    pinned: &[usize],
    lists: &ListRecoveryInstance,
    params: &PruneParams,
) -> Result<Rational> {
    let shape = h.shape();
    if let Some(&t) = pinned.iter().find(|&&t| !h.vanishes_on(t)) {
        return Err(Error::Precondition(format!(
            "subspace is not zero on pinned coordinate {t}"
        )));
    }
    if pinned.iter().any(|&t| !lists.contains(t, shape.symbol(c, t))) {
        return Ok(Rational::zero());
    }
    let distinct = {
        let mut v = pinned.to_vec();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    Ok(params
        .shrink()
        .pow(distinct as u32)
        .checked_div(&wt(h.dim(), &params.eta))?)
}

/// `sum_{i in Q} p_i * potential(H_i, c, T + {i})`, computed exactly.
pub fn expected_potential_step(
    h: &Subspace,
    c: &[u32],
    pinned: &[usize],
    lists: &ListRecoveryInstance,
    params: &PruneParams,
) -> Result<Rational> {
    if h.is_zero() {
        return Err(Error::Precondition("expected step needs dim(H) >= 1".into()));
    }
    if !h.contains(c)? {
        return Err(Error::Precondition("c is not in H".into()));
    }
    let (children, profile) = profile_with_children(h, params);
    if profile.is_empty() {
        return Err(Error::Precondition("no coordinate qualifies".into()));
    }
    let mut acc = Rational::zero();
    for i in profile.qualifying() {
        let mut next_pinned = pinned.to_vec();
        if !next_pinned.contains(&i) {
            next_pinned.push(i);
        }
        let f = potential(&children[i], c, &next_pinned, lists, params)?;
        acc = acc + profile.probability(i) * f;
    }
    Ok(acc)
}
