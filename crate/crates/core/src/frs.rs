//! Folded Reed-Solomon codes over prime fields.
//!
//! A message `f` (coefficients, degree `< k`) maps to `n` symbols in F_q^s;
//! symbol `i` is `(f(a_i), f(a_i g), ..., f(a_i g^(s-1)))` with `g` the
//! smallest primitive root of F_q and `a_i = g^(s*i)`. Those `s*n`
//! evaluation points are distinct powers of `g` whenever `s*n <= q - 1`.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{PrimeField, Rational};
use crate::vspace::{Shape, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrsCode {
    field: PrimeField,
    n: usize,
    k: usize,
    s: usize,
    gamma: u32,
    alphas: Vec<u32>,
    /// `points[i * s + j] = alphas[i] * gamma^j`
    points: Vec<u32>,
    space: Subspace,
}

/// JSON form of the code parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub gamma: u32,
    pub alphas: Vec<u32>,
}

/// `n` symbols of height `s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Codeword {
    pub symbols: Vec<Vec<u32>>,
}

impl Codeword {
    pub fn from_flat(s: usize, flat: &[u32]) -> Self {
        Self {
            symbols: flat.chunks(s).map(<[u32]>::to_vec).collect(),
        }
    }

    pub fn flatten(&self) -> Vector {
        self.symbols.concat()
    }

    pub fn n(&self) -> usize {
        self.symbols.len()
    }
}

impl FrsCode {
    pub fn new(q: u64, n: usize, k: usize, s: usize) -> Result<Self> {
        let field = PrimeField::new(q)?;
        if n == 0 || s == 0 {
            return Err(Error::InvalidCode("n and s must be positive".into()));
        }
        if q <= (s * n) as u64 {
            return Err(Error::InvalidCode(format!(
                "need q > s*n, got q = {q}, s*n = {}",
                s * n
            )));
        }
        if k == 0 || k > s * n {
            return Err(Error::InvalidCode(format!(
                "need 1 <= k <= s*n = {}, got k = {k}",
                s * n
            )));
        }
        let gamma = field.primitive_root();
        let alphas: Vec<u32> = (0..n).map(|i| field.pow(gamma, (s * i) as u64)).collect();
        let points = alphas
            .iter()
            .flat_map(|&a| (0..s).map(move |j| field.mul(a, field.pow(gamma, j as u64))))
            .collect();
        let shape = Shape::new(n, s, field);
        let mut code = Self {
            field,
            n,
            k,
            s,
            gamma,
            alphas,
            points,
            space: Subspace::zero(shape),
        };
        code.check_evaluation_points()?;
        let monomials = (0..k).map(|d| {
            let mut m = vec![0; k];
            m[d] = 1;
            code.encode_flat(&m).expect("unit message has length k")
        });
        code.space = Subspace::span(shape, monomials)?;
        debug_assert_eq!(code.space.dim(), k);
        Ok(code)
    }

    /// `alphas[i] * gamma^t != alphas[j]` for `i != j`, `t < s`, alphas distinct.
    pub fn check_evaluation_points(&self) -> Result<()> {
        let distinct: HashSet<u32> = self.alphas.iter().copied().collect();
        if distinct.len() != self.n {
            return Err(Error::InvalidCode("evaluation points are not distinct".into()));
        }
        for (i, &ai) in self.alphas.iter().enumerate() {
            let mut x = ai;
            for t in 0..self.s {
                for (j, &aj) in self.alphas.iter().enumerate() {
                    if i != j && x == aj {
                        return Err(Error::InvalidCode(format!(
                            "alpha_{i} * gamma^{t} equals alpha_{j}"
                        )));
                    }
                }
                x = self.field.mul(x, self.gamma);
            }
        }
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.modulus()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn alphas(&self) -> &[u32] {
        &self.alphas
    }

    pub fn shape(&self) -> Shape {
        *self.space.shape()
    }

    /// The whole code as a `k`-dimensional subspace of (F_q^s)^n.
    pub fn as_subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn params(&self) -> CodeParams {
        CodeParams {
            q: self.q(),
            n: self.n,
            k: self.k,
            s: self.s,
            gamma: self.gamma,
            alphas: self.alphas.clone(),
        }
    }

    /// `R = k / (s n)`.
    pub fn rate(&self) -> Rational {
        Rational::from(self.k)
            .checked_div(&Rational::from(self.s * self.n))
            .expect("s*n > 0")
    }

    /// Distinct codewords agree on at most `floor((k-1)/s)` coordinates.
    pub fn max_agreement(&self) -> usize {
        (self.k - 1) / self.s
    }

    pub fn relative_distance(&self) -> Rational {
        Rational::from(self.n - self.max_agreement())
            .checked_div(&Rational::from(self.n))
            .expect("n > 0")
    }

    /// Subspace-design function: `sR/(s-r+1)` for `1 <= r <= s`, else 1.
    pub fn tau(&self, r: usize) -> Rational {
        tau_frs(self.s, &self.rate(), r)
    }

    pub fn encode_flat(&self, msg: &[u32]) -> Result<Vector> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: msg.len(),
            });
        }
        if let Some(&x) = msg.iter().find(|&&x| x >= self.q()) {
            return Err(Error::InvalidParams(format!(
                "message entry {x} not reduced modulo {}",
                self.q()
            )));
        }
        Ok(self
            .points
            .iter()
            .map(|&x| {
                msg.iter()
                    .rev()
                    .fold(0u32, |acc, &c| self.field.mul_add(c, acc, x))
            })
            .collect())
    }

    pub fn encode(&self, msg: &[u32]) -> Result<Codeword> {
        Ok(Codeword::from_flat(self.s, &self.encode_flat(msg)?))
    }

    pub fn random_message<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        (0..self.k).map(|_| rng.gen_range(0..self.q())).collect()
    }

    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> Codeword {
        self.encode(&self.random_message(rng))
            .expect("random message is well formed")
    }
}

/// `sR/(s-r+1)` for `1 <= r <= s`, 1 otherwise, capped at 1 so that the
/// result is non-decreasing in `r`.
pub fn tau_frs(s: usize, rate: &Rational, r: usize) -> Rational {
    if r == 0 || r > s {
        return Rational::one();
    }
    let t = (Rational::from(s) * rate)
        .checked_div(&Rational::from(s - r + 1))
        .expect("s - r + 1 >= 1");
    t.min(Rational::one())
}

/// Coordinates where the two words carry the same symbol.
pub fn agreement_coordinates(a: &Codeword, b: &Codeword) -> Result<Vec<usize>> {
    if a.n() != b.n() || a.symbols.iter().zip(&b.symbols).any(|(x, y)| x.len() != y.len()) {
        return Err(Error::ShapeMismatch("codewords have different shapes".into()));
    }
    Ok(a.symbols
        .iter()
        .zip(&b.symbols)
        .enumerate()
        .filter(|(_, (x, y))| x == y)
        .map(|(i, _)| i)
        .collect())
}
