//! List-recovery inputs: per-coordinate candidate lists plus a radius.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Rational;
use crate::vspace::Shape;

pub type Symbol = Vec<u32>;

/// Lists `L_0..L_{n-1}` of symbols in F_q^s, each of size at most `ell`,
/// and a decoding radius `delta` in `[0, 1]`. Lists are kept sorted and
/// deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr", into = "InstanceRepr")]
pub struct ListRecoveryInstance {
    s: usize,
    lists: Vec<Vec<Symbol>>,
    ell: usize,
    delta: Rational,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    s: usize,
    ell: usize,
    delta: Rational,
    lists: Vec<Vec<Symbol>>,
}

impl TryFrom<InstanceRepr> for ListRecoveryInstance {
    type Error = Error;
    fn try_from(r: InstanceRepr) -> Result<Self> {
        Self::new(r.s, r.lists, r.ell, r.delta)
    }
}

impl From<ListRecoveryInstance> for InstanceRepr {
    fn from(i: ListRecoveryInstance) -> Self {
        Self {
            s: i.s,
            ell: i.ell,
            delta: i.delta,
            lists: i.lists,
        }
    }
}

impl ListRecoveryInstance {
    pub fn new(s: usize, mut lists: Vec<Vec<Symbol>>, ell: usize, delta: Rational) -> Result<Self> {
        if delta.is_negative() || delta > Rational::one() {
            return Err(Error::InvalidParams(format!("delta {delta} outside [0, 1]")));
        }
        for (i, list) in lists.iter_mut().enumerate() {
            if let Some(bad) = list.iter().find(|sym| sym.len() != s) {
                return Err(Error::LengthMismatch {
                    expected: s,
                    got: bad.len(),
                });
            }
            list.sort();
            list.dedup();
            if list.len() > ell {
                return Err(Error::InvalidParams(format!(
                    "list {i} has {} symbols, more than ell = {ell}",
                    list.len()
                )));
            }
        }
        Ok(Self {
            s,
            lists,
            ell,
            delta,
        })
    }

    /// Singleton lists holding the symbols of `word`.
    pub fn from_word(s: usize, word: &[u32], delta: Rational) -> Result<Self> {
        let lists = word.chunks(s).map(|c| vec![c.to_vec()]).collect();
        Self::new(s, lists, 1, delta)
    }

    /// Uniformly random lists of exactly `ell` distinct symbols each.
    pub fn random<R: Rng + ?Sized>(shape: Shape, ell: usize, delta: Rational, rng: &mut R) -> Self {
        let lists = (0..shape.n)
            .map(|_| {
                let mut list: Vec<Symbol> = Vec::with_capacity(ell);
                while list.len() < ell {
                    let sym = random_symbol(shape, rng);
                    if !list.contains(&sym) {
                        list.push(sym);
                    }
                }
                list
            })
            .collect();
        Self::new(shape.s, lists, ell, delta).expect("random lists respect ell")
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn with_delta(mut self, delta: Rational) -> Result<Self> {
        if delta.is_negative() || delta > Rational::one() {
            return Err(Error::InvalidParams(format!("delta {delta} outside [0, 1]")));
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn lists(&self) -> &[Vec<Symbol>] {
        &self.lists
    }

    pub fn list(&self, i: usize) -> &[Symbol] {
        &self.lists[i]
    }

    pub fn contains(&self, i: usize, symbol: &[u32]) -> bool {
        self.lists[i].binary_search_by(|x| x.as_slice().cmp(symbol)).is_ok()
    }

    pub fn check_shape(&self, shape: &Shape) -> Result<()> {
        if self.n() != shape.n || self.s != shape.s {
            return Err(Error::ShapeMismatch(format!(
                "lists are {}x{}, ambient is {}x{}",
                self.n(),
                self.s,
                shape.n,
                shape.s
            )));
        }
        let q = shape.q();
        if self.lists.iter().flatten().flatten().any(|&x| x >= q) {
            return Err(Error::ShapeMismatch(format!("list entry not reduced modulo {q}")));
        }
        Ok(())
    }

    /// Number of coordinates `i` with `word_i in L_i`.
    pub fn agreement_count(&self, word: &[u32]) -> usize {
        word.chunks(self.s)
            .enumerate()
            .filter(|(i, sym)| self.contains(*i, sym))
            .count()
    }

    /// `|{i : word_i not in L_i}| / n`.
    pub fn distance(&self, word: &[u32]) -> Rational {
        let n = self.n();
        let bad = n - self.agreement_count(word);
        Rational::from(bad)
            .checked_div(&Rational::from(n))
            .expect("n is positive")
    }

    pub fn hamming_distance(&self, word: &[u32]) -> Result<Rational> {
        if word.len() != self.n() * self.s {
            return Err(Error::LengthMismatch {
                expected: self.n() * self.s,
                got: word.len(),
            });
        }
        Ok(self.distance(word))
    }

    /// Lists with `offset_i` subtracted from every symbol of `L_i`.
    pub fn translate(&self, shape: &Shape, offset: &[u32]) -> Self {
        let lists = self
            .lists
            .iter()
            .enumerate()
            .map(|(i, list)| {
                let off = shape.symbol(offset, i);
                list.iter().map(|sym| shape.sub(sym, off)).collect()
            })
            .collect();
        Self::new(self.s, lists, self.ell, self.delta.clone()).expect("translation keeps sizes")
    }
}

pub fn random_symbol<R: Rng + ?Sized>(shape: Shape, rng: &mut R) -> Symbol {
    (0..shape.s).map(|_| rng.gen_range(0..shape.q())).collect()
}

/// `|{i : c_i not in L_i}| / n`.
pub fn hamming_distance_to_lists(word: &[u32], inst: &ListRecoveryInstance) -> Result<Rational> {
    inst.hamming_distance(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn distance_examples() {
        let word: Vec<u32> = (0..16).collect();
        let agree = ListRecoveryInstance::from_word(2, &word, Rational::zero()).unwrap();
        assert_eq!(agree.distance(&word), Rational::zero());
        let other: Vec<u32> = word.iter().map(|x| x + 1).collect();
        assert_eq!(agree.distance(&other), Rational::one());
        let mut two_off = word.clone();
        two_off[0] = 99;
        two_off[7] = 99;
        assert_eq!(agree.distance(&two_off), r(1, 4));
        assert!(agree.hamming_distance(&word[..4]).is_err());
    }

    #[test]
    fn rejects_oversized_lists_and_bad_delta() {
        let lists = vec![vec![vec![0], vec![1], vec![2]]];
        assert!(ListRecoveryInstance::new(1, lists.clone(), 2, Rational::zero()).is_err());
        assert!(ListRecoveryInstance::new(1, lists.clone(), 3, r(3, 2)).is_err());
        // duplicates collapse before the size check
        let dup = vec![vec![vec![0], vec![0], vec![1]]];
        assert_eq!(ListRecoveryInstance::new(1, dup, 2, Rational::zero()).unwrap().list(0).len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let inst = ListRecoveryInstance::new(1, vec![vec![vec![2], vec![1]], vec![]], 2, r(1, 2)).unwrap();
        let json = serde_json::to_string(&inst).unwrap();
        let back: ListRecoveryInstance = serde_json::from_str(&json).unwrap();
        assert_eq!(back, inst);
        assert!(serde_json::from_str::<ListRecoveryInstance>(
            r#"{"s":1,"ell":1,"delta":"0","lists":[[[1],[2]]]}"#
        )
        .is_err());
    }
}
