//! Sum-sets `A_1 + ... + A_u` and the reduction from an agreement set to one.
//!
//! Given a linear space `H` that collapses to `{0}` once the coordinates of
//! `T` are pinned to zero, [`reduce`] finds `dim H` independent flat
//! positions inside `T` and, for each pinned coordinate `t` and each list
//! symbol `b in L_t`, solves for the unique element of `H` that matches `b`
//! on `t`'s independent positions and vanishes on every other independent
//! position. Every `c in H` with `c_t in L_t` for all `t in T` is then a sum
//! of one element from each summand.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::ListRecoveryInstance;
use crate::vspace::{AffineSpace, Shape, ShapeRepr, Subspace, Vector};

/// A `(u, v)` sum-set: at most `u` summands, each of at most `v` vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumSet {
    shape: Shape,
    u: usize,
    v: usize,
    summands: Vec<Vec<Vector>>,
}

#[derive(Serialize, Deserialize)]
struct SumSetRepr {
    shape: ShapeRepr,
    u: usize,
    v: usize,
    summands: Vec<Vec<Vector>>,
}

impl Serialize for SumSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SumSetRepr {
            shape: ShapeRepr::from(&self.shape),
            u: self.u,
            v: self.v,
            summands: self.summands.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SumSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = SumSetRepr::deserialize(deserializer)?;
        let shape = r.shape.to_shape().map_err(serde::de::Error::custom)?;
        SumSet::new(shape, r.u, r.v, r.summands).map_err(serde::de::Error::custom)
    }
}

impl SumSet {
    pub fn new(shape: Shape, u: usize, v: usize, summands: Vec<Vec<Vector>>) -> Result<Self> {
        if summands.len() > u {
            return Err(Error::InvalidParams(format!(
                "{} summands exceed u = {u}",
                summands.len()
            )));
        }
        for a in &summands {
            if a.len() > v {
                return Err(Error::InvalidParams(format!(
                    "summand of size {} exceeds v = {v}",
                    a.len()
                )));
            }
            for x in a {
                shape.check(x)?;
            }
        }
        Ok(Self {
            shape,
            u,
            v,
            summands,
        })
    }

    /// The empty sum, representing `{0}`.
    pub fn empty(shape: Shape, v: usize) -> Self {
        Self {
            shape,
            u: 0,
            v,
            summands: Vec::new(),
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn summands(&self) -> &[Vec<Vector>] {
        &self.summands
    }

    /// Re-declares the `(u, v)` bounds; fails if the summands do not fit.
    pub fn with_bounds(self, u: usize, v: usize) -> Result<Self> {
        Self::new(self.shape, u, v, self.summands)
    }

    /// Upper bound on the number of represented vectors.
    pub fn size_bound(&self) -> f64 {
        self.summands.iter().map(|a| a.len() as f64).product()
    }

    /// Shifts the represented set by `offset`. An empty sum becomes the
    /// single summand `{offset}`.
    pub fn translate(mut self, offset: &[u32]) -> Self {
        if offset.iter().all(|&x| x == 0) {
            return self;
        }
        match self.summands.first_mut() {
            Some(first) => {
                for x in first.iter_mut() {
                    *x = self.shape.add(x, offset);
                }
            }
            None => {
                self.summands.push(vec![offset.to_vec()]);
                self.u = self.u.max(1);
                self.v = self.v.max(1);
            }
        }
        self
    }

    /// All represented vectors, deduplicated and sorted.
    pub fn enumerate(&self, limit: u64) -> Result<Vec<Vector>> {
        let count = self.size_bound();
        if count > limit as f64 {
            return Err(Error::LimitExceeded { count, limit });
        }
        let mut acc: BTreeSet<Vector> = BTreeSet::from([self.shape.zero_vector()]);
        for a in &self.summands {
            acc = acc
                .iter()
                .flat_map(|x| a.iter().map(move |y| (x, y)))
                .map(|(x, y)| self.shape.add(x, y))
                .collect();
        }
        Ok(acc.into_iter().collect())
    }

    pub fn contains(&self, v: &[u32], limit: u64) -> Result<bool> {
        self.shape.check(v)?;
        Ok(self.enumerate(limit)?.binary_search_by(|x| x.as_slice().cmp(v)).is_ok())
    }
}

pub fn enumerate_sumset(p: &SumSet, limit: u64) -> Result<Vec<Vector>> {
    p.enumerate(limit)
}

pub fn sumset_member(p: &SumSet, v: &[u32], limit: u64) -> Result<bool> {
    p.contains(v, limit)
}

/// Pinned coordinates and, per coordinate, the rows used as independent
/// positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementCertificate {
    pub pinned: Vec<usize>,
    pub positions: Vec<Vec<usize>>,
}

impl AgreementCertificate {
    /// Flat indices of all independent positions, in scan order.
    pub fn flat_positions(&self, s: usize) -> Vec<usize> {
        self.pinned
            .iter()
            .zip(&self.positions)
            .flat_map(|(&t, rows)| rows.iter().map(move |&j| t * s + j))
            .collect()
    }
}

/// Turns an agreement set `T` into summand sets, one per coordinate of `T`
/// that carries independent positions.
pub fn reduce(
    h: &Subspace,
    pinned: &[usize],
    lists: &ListRecoveryInstance,
) -> Result<(SumSet, AgreementCertificate)> {
    let shape = *h.shape();
    lists.check_shape(&shape)?;
    let mut t: Vec<usize> = pinned.to_vec();
    t.sort_unstable();
    t.dedup();
    if let Some(&bad) = t.iter().find(|&&i| i >= shape.n) {
        return Err(Error::InvalidParams(format!("coordinate {bad} out of range")));
    }
    if !h.zero_on(&t).is_zero() {
        return Err(Error::Precondition(
            "H has nonzero elements vanishing on every pinned coordinate".into(),
        ));
    }

    let cols: Vec<usize> = t.iter().flat_map(|&i| shape.positions(i)).collect();
    let independent = h.independent_positions(&cols);
    debug_assert_eq!(independent.len(), h.dim());
    let positions: Vec<Vec<usize>> = t
        .iter()
        .map(|&i| {
            independent
                .iter()
                .filter(|&&p| p / shape.s == i)
                .map(|&p| p % shape.s)
                .collect()
        })
        .collect();

    let space = AffineSpace::linear(h.clone());
    let mut summands = Vec::new();
    for (&ti, rows) in t.iter().zip(&positions) {
        if rows.is_empty() {
            continue;
        }
        let mut summand: Vec<Vector> = Vec::new();
        for beta in lists.list(ti) {
            let values: Vec<u32> = independent
                .iter()
                .map(|&p| {
                    if p / shape.s == ti {
                        beta[p % shape.s]
                    } else {
                        0
                    }
                })
                .collect();
            let solved = space
                .restrict(&independent, &values)
                .filter(|a| a.dim() == 0)
                .ok_or_else(|| {
                    Error::Precondition("independent positions do not determine H".into())
                })?;
            let c = solved.offset().to_vec();
            if !summand.contains(&c) {
                summand.push(c);
            }
        }
        summands.push(summand);
    }

    let sumset = SumSet::new(shape, t.len(), lists.ell(), summands)?;
    Ok((
        sumset,
        AgreementCertificate {
            pinned: t,
            positions,
        },
    ))
}
