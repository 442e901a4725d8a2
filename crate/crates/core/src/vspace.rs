//! Linear and affine subspaces of (F_q^s)^n.
//!
//! Vectors are flat `Vec<u32>` of length `s * n`; coordinate `i` (0-based),
//! row `j` lives at flat index `i * s + j`. Subspaces keep their basis in
//! reduced row-echelon form, so two equal subspaces compare equal
//! structurally. Affine spaces reduce their offset against the direction's
//! pivots for the same reason.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{PrimeField, Rational};
use crate::instance::ListRecoveryInstance;

pub type Vector = Vec<u32>;

/// Ambient space descriptor: `n` coordinates of `s` symbols over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    pub n: usize,
    pub s: usize,
    pub field: PrimeField,
}

impl Shape {
    pub fn new(n: usize, s: usize, field: PrimeField) -> Self {
        Self { n, s, field }
    }

    /// Flat vector length `s * n`.
    pub fn len(&self) -> usize {
        self.n * self.s
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn q(&self) -> u32 {
        self.field.modulus()
    }

    pub fn zero_vector(&self) -> Vector {
        vec![0; self.len()]
    }

    /// Flat positions of coordinate `i`.
    pub fn positions(&self, i: usize) -> std::ops::Range<usize> {
        i * self.s..(i + 1) * self.s
    }

    pub fn symbol<'a>(&self, v: &'a [u32], i: usize) -> &'a [u32] {
        &v[self.positions(i)]
    }

    pub fn check(&self, v: &[u32]) -> Result<()> {
        if v.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: v.len(),
            });
        }
        if let Some(&x) = v.iter().find(|&&x| x >= self.q()) {
            return Err(Error::ShapeMismatch(format!(
                "entry {x} not reduced modulo {}",
                self.q()
            )));
        }
        Ok(())
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vector {
        a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[u32], b: &[u32]) -> Vector {
        a.iter().zip(b).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }

    pub fn scale(&self, c: u32, a: &[u32]) -> Vector {
        a.iter().map(|&x| self.field.mul(c, x)).collect()
    }

    /// `acc += c * v` in place.
    pub fn axpy(&self, acc: &mut [u32], c: u32, v: &[u32]) {
        if c == 0 {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.field.mul_add(*a, c, x);
        }
    }
}

/// Enumeration limit for exhaustive oracles: `LISTREC_ENUM_LIMIT`, default 10^6.
pub fn enum_limit() -> u64 {
    std::env::var("LISTREC_ENUM_LIMIT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(1_000_000)
}

/// `q^dim` as a float, for limit checks that must not overflow.
pub fn count_elements(q: u32, dim: usize) -> f64 {
    (q as f64).powi(dim as i32)
}

fn check_limit(q: u32, dim: usize, limit: u64) -> Result<()> {
    let count = count_elements(q, dim);
    if count > limit as f64 {
        return Err(Error::LimitExceeded { count, limit });
    }
    Ok(())
}

/// Row reduction of `rows` restricted to the column list `cols`, carrying
/// a payload per row. Returns `(echelon, pivots, kernel)`:
/// `echelon` rows are fully reduced on `cols` (pivot entry 1, zero elsewhere
/// in pivot columns); `pivots[k]` is the index into `cols` of row `k`'s pivot;
/// `kernel` holds payloads of rows whose restriction vanished.
struct Reduction {
    echelon: Vec<(Vector, Vector)>,
    pivots: Vec<usize>,
    kernel: Vec<Vector>,
}

fn reduce_on(field: &PrimeField, rows: Vec<(Vector, Vector)>, width: usize) -> Reduction {
    let mut rows = rows;
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].0[col] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = field.inv(rows[rank].0[col]).expect("pivot is nonzero");
        {
            let (left, right) = &mut rows[rank];
            for x in left.iter_mut().chain(right.iter_mut()) {
                *x = field.mul(*x, inv);
            }
        }
        let (pivot_left, pivot_right) = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row.0[col] == 0 {
                continue;
            }
            let c = field.neg(row.0[col]);
            for (a, &x) in row.0.iter_mut().zip(&pivot_left) {
                *a = field.mul_add(*a, c, x);
            }
            for (a, &x) in row.1.iter_mut().zip(&pivot_right) {
                *a = field.mul_add(*a, c, x);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let kernel = rows.split_off(rank).into_iter().map(|(_, p)| p).collect();
    Reduction {
        echelon: rows,
        pivots,
        kernel,
    }
}

/// An F_q-linear subspace stored in reduced row-echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    shape: Shape,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(shape: Shape) -> Self {
        Self {
            shape,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Span of arbitrary vectors.
    pub fn span<I>(shape: Shape, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vector>,
    {
        let mut rows = Vec::new();
        for v in vectors {
            shape.check(&v)?;
            rows.push((v, Vec::new()));
        }
        Ok(Self::from_rows(shape, rows))
    }

    fn from_rows(shape: Shape, rows: Vec<(Vector, Vector)>) -> Self {
        let red = reduce_on(&shape.field, rows, shape.len());
        Self {
            shape,
            basis: red.echelon.into_iter().map(|(l, _)| l).collect(),
            pivots: red.pivots,
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Linear combination of the basis with the given coefficients.
    pub fn combine(&self, coeffs: &[u32]) -> Vector {
        let mut acc = self.shape.zero_vector();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            self.shape.axpy(&mut acc, *c, b);
        }
        acc
    }

    /// Residual of `v` after elimination against the basis.
    pub fn residual(&self, v: &[u32]) -> Vector {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = r[p];
            if c != 0 {
                self.shape.axpy(&mut r, self.shape.field.neg(c), b);
            }
        }
        r
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        self.shape.check(v)?;
        Ok(self.residual(v).iter().all(|&x| x == 0))
    }

    /// Every basis vector vanishes on coordinate `i`.
    pub fn vanishes_on(&self, i: usize) -> bool {
        let pos = self.shape.positions(i);
        self.basis.iter().all(|b| b[pos.clone()].iter().all(|&x| x == 0))
    }

    /// `{h in H : h_t = 0 for all t in coords}`.
    pub fn zero_on(&self, coords: &[usize]) -> Subspace {
        let cols: Vec<usize> = coords
            .iter()
            .flat_map(|&i| self.shape.positions(i))
            .collect();
        let rows = self
            .basis
            .iter()
            .map(|b| (cols.iter().map(|&c| b[c]).collect(), b.clone()))
            .collect();
        let red = reduce_on(&self.shape.field, rows, cols.len());
        let rows = red.kernel.into_iter().map(|v| (v, Vec::new())).collect();
        Self::from_rows(self.shape, rows)
    }

    /// `H_i = {h in H : h_i = 0}`.
    pub fn coordinate_zero_subspace(&self, i: usize) -> Subspace {
        self.zero_on(&[i])
    }

    /// `(sum_i dim H_i) / n`.
    pub fn design_statistic(&self) -> Result<Rational> {
        if self.is_zero() {
            return Err(Error::ZeroDimensional);
        }
        let total: usize = (0..self.shape.n)
            .map(|i| self.coordinate_zero_subspace(i).dim())
            .sum();
        Ok(Rational::from(total).checked_div(&Rational::from(self.shape.n))?)
    }

    /// All `q^dim` elements, each exactly once.
    pub fn elements(&self, limit: u64) -> Result<Elements<'_>> {
        check_limit(self.shape.q(), self.dim(), limit)?;
        Ok(Elements {
            space: self,
            digits: vec![0; self.dim()],
            current: self.shape.zero_vector(),
            done: false,
        })
    }

    /// Projection rank onto flat positions `cols`, with the pivot positions
    /// found by scanning `cols` in order.
    pub fn independent_positions(&self, cols: &[usize]) -> Vec<usize> {
        let rows = self
            .basis
            .iter()
            .map(|b| (cols.iter().map(|&c| b[c]).collect(), Vec::new()))
            .collect();
        reduce_on(&self.shape.field, rows, cols.len())
            .pivots
            .into_iter()
            .map(|k| cols[k])
            .collect()
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            shape: ShapeRepr::from(&self.shape),
            basis: self.basis.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(deserializer)?;
        let shape = repr.shape.to_shape().map_err(serde::de::Error::custom)?;
        Subspace::span(shape, repr.basis).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    shape: ShapeRepr,
    basis: Vec<Vector>,
}

/// JSON form of a [`Shape`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct ShapeRepr {
    pub n: usize,
    pub s: usize,
    pub q: u32,
}

impl From<&Shape> for ShapeRepr {
    fn from(s: &Shape) -> Self {
        Self {
            n: s.n,
            s: s.s,
            q: s.q(),
        }
    }
}

impl ShapeRepr {
    pub fn to_shape(self) -> Result<Shape> {
        Ok(Shape::new(self.n, self.s, PrimeField::new(self.q as u64)?))
    }
}

/// Odometer over basis coefficients; each step adds one basis vector.
pub struct Elements<'a> {
    space: &'a Subspace,
    digits: Vec<u32>,
    current: Vector,
    done: bool,
}

impl Iterator for Elements<'_> {
    type Item = Vector;

    fn next(&mut self) -> Option<Vector> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let q = self.space.shape.q();
        let mut k = 0;
        loop {
            if k == self.digits.len() {
                self.done = true;
                break;
            }
            self.space
                .shape
                .axpy(&mut self.current, 1, &self.space.basis[k]);
            self.digits[k] += 1;
            if self.digits[k] < q {
                break;
            }
            // q additions wrapped the vector back; carry
            self.digits[k] = 0;
            k += 1;
        }
        Some(out)
    }
}

/// `offset + direction`, with the offset reduced against the direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSpace {
    offset: Vector,
    direction: Subspace,
}

impl AffineSpace {
    pub fn new(offset: Vector, direction: Subspace) -> Result<Self> {
        direction.shape.check(&offset)?;
        let offset = direction.residual(&offset);
        Ok(Self { offset, direction })
    }

    pub fn linear(direction: Subspace) -> Self {
        Self {
            offset: direction.shape.zero_vector(),
            direction,
        }
    }

    pub fn point(shape: Shape, v: Vector) -> Result<Self> {
        Self::new(v, Subspace::zero(shape))
    }

    /// Smallest affine space through all points; `None` for no points.
    pub fn hull(shape: Shape, points: &[Vector]) -> Result<Option<Self>> {
        let Some(first) = points.first() else {
            return Ok(None);
        };
        let diffs = points[1..].iter().map(|p| shape.sub(p, first));
        let direction = Subspace::span(shape, diffs)?;
        Ok(Some(Self::new(first.clone(), direction)?))
    }

    pub fn offset(&self) -> &[u32] {
        &self.offset
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn shape(&self) -> &Shape {
        &self.direction.shape
    }

    pub fn dim(&self) -> usize {
        self.direction.dim()
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        self.shape().check(v)?;
        let d = self.shape().sub(v, &self.offset);
        Ok(self.direction.residual(&d).iter().all(|&x| x == 0))
    }

    /// `{h in A : h[p] = values[k] for p = positions[k]}`, or `None` if empty.
    pub fn restrict(&self, positions: &[usize], values: &[u32]) -> Option<AffineSpace> {
        let shape = *self.shape();
        let field = shape.field;
        let rows = self
            .direction
            .basis
            .iter()
            .map(|b| (positions.iter().map(|&c| b[c]).collect(), b.clone()))
            .collect();
        let red = reduce_on(&field, rows, positions.len());
        // residual target = values - offset|positions
        let mut target: Vec<u32> = positions
            .iter()
            .zip(values)
            .map(|(&p, &v)| field.sub(v, self.offset[p]))
            .collect();
        let mut offset = self.offset.clone();
        for ((left, payload), &pc) in red.echelon.iter().zip(&red.pivots) {
            let c = target[pc];
            if c == 0 {
                continue;
            }
            let neg = field.neg(c);
            for (t, &x) in target.iter_mut().zip(left) {
                *t = field.mul_add(*t, neg, x);
            }
            shape.axpy(&mut offset, c, payload);
        }
        if target.iter().any(|&x| x != 0) {
            return None;
        }
        let direction = Subspace::span(shape, red.kernel).expect("kernel rows have the ambient shape");
        Some(AffineSpace::new(offset, direction).expect("offset has the ambient shape"))
    }

    /// `{h in A : h_i = symbol}`.
    pub fn restrict_coordinate(&self, i: usize, symbol: &[u32]) -> Option<AffineSpace> {
        let pos: Vec<usize> = self.shape().positions(i).collect();
        self.restrict(&pos, symbol)
    }

    pub fn elements(&self, limit: u64) -> Result<impl Iterator<Item = Vector> + '_> {
        let shape = *self.shape();
        Ok(self
            .direction
            .elements(limit)?
            .map(move |d| shape.add(&d, &self.offset)))
    }
}

impl Serialize for AffineSpace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            offset: &'a [u32],
            direction: &'a Subspace,
        }
        Repr {
            offset: &self.offset,
            direction: &self.direction,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AffineSpace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            offset: Vector,
            direction: Subspace,
        }
        let r = Repr::deserialize(deserializer)?;
        AffineSpace::new(r.offset, r.direction).map_err(serde::de::Error::custom)
    }
}

/// Moves an affine problem to the origin: returns the direction subspace,
/// lists shifted by the offset, and the offset to add back to results.
pub fn translate_to_linear(
    space: &AffineSpace,
    lists: &ListRecoveryInstance,
) -> (Subspace, ListRecoveryInstance, Vector) {
    let offset = space.offset().to_vec();
    (
        space.direction().clone(),
        lists.translate(space.shape(), &offset),
        offset,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frs::FrsCode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn shape(q: u64, n: usize, s: usize) -> Shape {
        Shape::new(n, s, PrimeField::new(q).unwrap())
    }

    #[test]
    fn span_examples() {
        let sh = shape(7, 3, 2);
        let v = vec![1, 0, 0, 0, 2, 3];
        let w = sh.scale(2, &v);
        assert_eq!(Subspace::span(sh, [v.clone(), w]).unwrap().dim(), 1);
        assert_eq!(Subspace::span(sh, []).unwrap().dim(), 0);
        let a = vec![1, 2, 0, 0, 0, 0];
        let b = vec![0, 0, 0, 0, 5, 1];
        assert_eq!(Subspace::span(sh, [a, b]).unwrap().dim(), 2);
        assert!(Subspace::span(sh, [vec![1, 2]]).is_err());
    }

    #[test]
    fn coordinate_zero_examples() {
        let sh = shape(7, 3, 2);
        let h = Subspace::span(sh, [vec![1, 0, 0, 0, 2, 3]]).unwrap();
        assert_eq!(h.coordinate_zero_subspace(1), h);
        assert_eq!(h.coordinate_zero_subspace(0).dim(), 0);
    }

    #[test]
    fn coordinate_zero_on_small_frs_matches_brute_force() {
        // k = 2 <= s: a nonzero line cannot vanish on two points
        // k = 3: vanishing on two points leaves a 1-dim family
        for (k, want_dim) in [(2usize, 0usize), (3, 1)] {
            let code = FrsCode::new(13, 3, k, 2).unwrap();
            let h = code.as_subspace();
            for i in 0..3 {
                let mut zero_count = 0u32;
                for m in 0..13u32.pow(k as u32) {
                    let msg: Vec<u32> = (0..k).map(|j| (m / 13u32.pow(j as u32)) % 13).collect();
                    let c = code.encode(&msg).unwrap().flatten();
                    if c[2 * i] == 0 && c[2 * i + 1] == 0 {
                        zero_count += 1;
                    }
                }
                assert_eq!(zero_count, 13u32.pow(want_dim as u32));
                assert_eq!(h.coordinate_zero_subspace(i).dim(), want_dim);
            }
        }
    }

    #[test]
    fn membership_examples() {
        let sh = shape(7, 3, 2);
        let v = vec![1, 0, 0, 0, 2, 3];
        let h = Subspace::span(sh, [v.clone()]).unwrap();
        assert!(h.contains(&sh.zero_vector()).unwrap());
        let e = vec![0, 1, 0, 0, 0, 0];
        assert!(!h.contains(&sh.add(&v, &e)).unwrap());
        let a = AffineSpace::new(vec![3, 3, 3, 3, 3, 3], h.clone()).unwrap();
        assert!(a.contains(&[3, 3, 3, 3, 3, 3]).unwrap());
        assert!(h.contains(&[1, 2]).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let sh = shape(5, 2, 2);
        assert_eq!(
            Subspace::zero(sh).elements(10).unwrap().collect::<Vec<_>>(),
            vec![vec![0; 4]]
        );
        let sh3 = shape(3, 2, 1);
        let one = Subspace::span(sh3, [vec![1, 2]]).unwrap();
        let got: HashSet<Vector> = one.elements(10).unwrap().collect();
        assert_eq!(got.len(), 3);
        let two = Subspace::span(sh, [vec![1, 0, 1, 0], vec![0, 1, 0, 3]]).unwrap();
        let got: HashSet<Vector> = two.elements(100).unwrap().collect();
        assert_eq!(got.len(), 25);
        assert!(matches!(two.elements(24), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn design_statistic_examples() {
        let sh = shape(7, 3, 2);
        let no_zero = Subspace::span(sh, [vec![1, 1, 2, 2, 3, 3]]).unwrap();
        assert_eq!(no_zero.design_statistic().unwrap(), Rational::zero());
        let one_zero = Subspace::span(sh, [vec![1, 0, 0, 0, 2, 3]]).unwrap();
        assert_eq!(one_zero.design_statistic().unwrap(), Rational::new(1, 3).unwrap());
        assert!(matches!(
            Subspace::zero(sh).design_statistic(),
            Err(Error::ZeroDimensional)
        ));
    }

    #[test]
    fn full_code_design_statistic_under_bound() {
        let code = FrsCode::new(37, 8, 4, 4).unwrap();
        let stat = code.as_subspace().design_statistic().unwrap();
        let bound = Rational::from(4usize) * code.tau(4);
        assert_eq!(bound, Rational::from(2usize));
        assert!(stat <= bound);
    }

    #[test]
    fn affine_restrict_matches_brute_force() {
        let code = FrsCode::new(13, 4, 3, 2).unwrap();
        let h = code.as_subspace();
        let sh = *h.shape();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let off = code.random_codeword(&mut rng).flatten();
            let dir = Subspace::span(sh, [code.random_codeword(&mut rng).flatten(), code.random_codeword(&mut rng).flatten()]).unwrap();
            let a = AffineSpace::new(off, dir).unwrap();
            let i = rng.gen_range(0..4);
            let sym: Vec<u32> = (0..2).map(|_| rng.gen_range(0..13)).collect();
            let expected: HashSet<Vector> = a
                .elements(1000)
                .unwrap()
                .filter(|v| sh.symbol(v, i) == sym.as_slice())
                .collect();
            match a.restrict_coordinate(i, &sym) {
                None => assert!(expected.is_empty()),
                Some(r) => {
                    let got: HashSet<Vector> = r.elements(1000).unwrap().collect();
                    assert_eq!(got, expected);
                }
            }
        }
    }

    #[test]
    fn hull_of_point_is_zero_dimensional() {
        let sh = shape(7, 2, 2);
        let a = AffineSpace::hull(sh, &[vec![1, 2, 3, 4]]).unwrap().unwrap();
        assert_eq!(a.dim(), 0);
        assert!(AffineSpace::hull(sh, &[]).unwrap().is_none());
    }

    #[test]
    fn translation_preserves_distance_and_membership() {
        let code = FrsCode::new(13, 3, 2, 2).unwrap();
        let sh = *code.as_subspace().shape();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = code.random_codeword(&mut rng).flatten();
        let d = code.random_codeword(&mut rng).flatten();
        let a = AffineSpace::new(c.clone(), Subspace::span(sh, [d.clone()]).unwrap()).unwrap();
        let lists = ListRecoveryInstance::random(sh, 2, Rational::zero(), &mut rng);
        let (lin, moved, off) = translate_to_linear(&a, &lists);
        for v in a.elements(1000).unwrap() {
            let w = sh.sub(&v, &off);
            assert!(lin.contains(&w).unwrap());
            assert_eq!(lists.distance(&v), moved.distance(&w));
        }
        let zero = AffineSpace::linear(lin.clone());
        let (lin2, moved2, off2) = translate_to_linear(&zero, &lists);
        assert_eq!(lin2, lin);
        assert_eq!(moved2, lists);
        assert!(off2.iter().all(|&x| x == 0));
    }

    #[test]
    fn subspace_json_round_trip_is_canonical() {
        let sh = shape(7, 3, 2);
        let h = Subspace::span(sh, [vec![2, 0, 0, 0, 4, 6], vec![0, 1, 1, 0, 0, 0]]).unwrap();
        let json = serde_json::to_string(&h).unwrap();
        assert!(json.contains("\"shape\":{\"n\":3,\"s\":2,\"q\":7}"));
        let back: Subspace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, h);
    }

    proptest::proptest! {
        #[test]
        fn span_is_canonical(seed in 0u64..500) {
            let sh = shape(11, 3, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = rng.gen_range(0..4);
            let vs: Vec<Vector> = (0..k).map(|_| (0..6).map(|_| rng.gen_range(0..11)).collect()).collect();
            let h = Subspace::span(sh, vs.clone()).unwrap();
            let mut shuffled: Vec<Vector> = vs.iter().rev().map(|v| sh.scale(rng.gen_range(1..11), v)).collect();
            if !shuffled.is_empty() {
                let extra = sh.add(&shuffled[0], &vs[0]);
                shuffled.push(extra);
            }
            let h2 = Subspace::span(sh, shuffled).unwrap();
            proptest::prop_assert_eq!(&h, &h2);
            for i in 0..3 {
                proptest::prop_assert!(h.coordinate_zero_subspace(i).dim() + 2 >= h.dim());
            }
            let els: HashSet<Vector> = h.elements(10_000).unwrap().collect();
            proptest::prop_assert_eq!(els.len() as f64, count_elements(11, h.dim()));
            for e in &els {
                proptest::prop_assert!(h.contains(e).unwrap());
            }
        }
    }
}
