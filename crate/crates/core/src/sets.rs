//! Weight-defined subsets of `{0,1}^n`: annuli, symmetric classes and sumsets.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::{BitVector, MAX_LEN};

const MASK_WORDS: usize = MAX_LEN / 64 + 1;

/// A subset of `{0, ..., n}` stored as an `(n+1)`-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightSet {
    n: usize,
    mask: [u64; MASK_WORDS],
}

impl WeightSet {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_LEN {
            return Err(Error::InvalidLength(n));
        }
        Ok(WeightSet { n, mask: [0; MASK_WORDS] })
    }

    /// `{lo, ..., hi}`; empty when `lo > hi`.
    pub fn interval(lo: usize, hi: usize, n: usize) -> Result<Self> {
        if hi > n && lo <= hi {
            return Err(Error::RadiusOutOfRange { a: lo, b: hi, n });
        }
        let mut s = Self::empty(n)?;
        for w in lo..=hi.min(n) {
            s.insert(w);
        }
        Ok(s)
    }

    pub fn from_weights<I: IntoIterator<Item = usize>>(n: usize, weights: I) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for w in weights {
            if w > n {
                return Err(Error::RadiusOutOfRange { a: w, b: w, n });
            }
            s.insert(w);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn insert(&mut self, w: usize) {
        self.mask[w / 64] |= 1 << (w % 64);
    }

    #[inline]
    pub fn contains(&self, w: usize) -> bool {
        w <= self.n && self.mask[w / 64] >> (w % 64) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.n).filter(move |&w| self.contains(w))
    }

    pub fn len(&self) -> usize {
        self.mask.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.iter().all(|&w| w == 0)
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<usize> {
        (0..=self.n).rev().find(|&w| self.contains(w))
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for (a, b) in out.mask.iter_mut().zip(&other.mask) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for (a, b) in out.mask.iter_mut().zip(&other.mask) {
            *a &= b;
        }
        out
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// Same weights, capped to `{0..=n}` of a different ambient dimension.
    pub fn restrict_to(&self, n: usize) -> Result<Self> {
        Self::from_weights(n, self.iter().filter(|&w| w <= n))
    }

    /// True when the set is `{lo..=hi}` for some `lo <= hi`.
    pub fn is_interval(&self) -> bool {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => self.len() == hi - lo + 1,
            _ => false,
        }
    }

    /// Lookup table indexed by weight, for hot loops.
    pub fn to_table(&self) -> Vec<bool> {
        (0..=self.n).map(|w| self.contains(w)).collect()
    }

    /// Parses `a..b`, `w1,w2,...`, or a comma list mixing both. The tokens
    /// `n` and `n-k` stand for `n` and `n - k`. An empty string is the empty set.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let bad = || Error::WeightSyntax(text.to_string());
        let value = |tok: &str| -> Result<usize> {
            let tok = tok.trim();
            if tok == "n" {
                return Ok(n);
            }
            if let Some(rest) = tok.strip_prefix("n-") {
                let k: usize = rest.trim().parse().map_err(|_| bad())?;
                return n.checked_sub(k).ok_or_else(bad);
            }
            tok.parse().map_err(|_| bad())
        };
        let mut s = Self::empty(n)?;
        let text_trim = text.trim();
        if text_trim.is_empty() {
            return Ok(s);
        }
        for item in text_trim.split(',') {
            if let Some((lo, hi)) = item.split_once("..") {
                let (lo, hi) = (value(lo)?, value(hi)?);
                s = s.union(&Self::interval(lo, hi, n)?);
            } else {
                let w = value(item)?;
                s = s.union(&Self::from_weights(n, [w])?);
            }
        }
        Ok(s)
    }
}

impl fmt::Display for WeightSet {
    /// Compact form: maximal runs as `lo..hi`, joined by commas.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut w = 0;
        while w <= self.n {
            if !self.contains(w) {
                w += 1;
                continue;
            }
            let start = w;
            while w < self.n && self.contains(w + 1) {
                w += 1;
            }
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if start == w {
                write!(f, "{start}")?;
            } else {
                write!(f, "{start}..{w}")?;
            }
            w += 1;
        }
        Ok(())
    }
}

impl fmt::Debug for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightSet(n={}, {{{}}})", self.n, self)
    }
}

impl Serialize for WeightSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// `A(a, b, n)`: vectors of weight in `[a, b]`. Empty when `a > b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Annulus {
    pub n: usize,
    pub a: usize,
    pub b: usize,
}

impl Annulus {
    pub fn new(a: usize, b: usize, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_LEN || b > n {
            return Err(Error::RadiusOutOfRange { a, b, n });
        }
        Ok(Annulus { n, a, b })
    }

    pub fn is_empty(&self) -> bool {
        self.a > self.b
    }

    pub fn contains(&self, x: &BitVector) -> bool {
        let w = x.weight();
        x.len() == self.n && self.a <= w && w <= self.b
    }

    pub fn weights(&self) -> WeightSet {
        WeightSet::interval(self.a, self.b, self.n).expect("validated radii")
    }

    pub fn to_class(&self) -> SymmetricClass {
        SymmetricClass::new(self.weights())
    }
}

pub fn make_annulus(a: usize, b: usize, n: usize) -> Result<Annulus> {
    Annulus::new(a, b, n)
}

/// A permutation-invariant subset of `{0,1}^n`, described by its permitted weights.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct SymmetricClass {
    weights: WeightSet,
}

impl SymmetricClass {
    pub fn new(weights: WeightSet) -> Self {
        SymmetricClass { weights }
    }

    /// `B(0^n, s)`.
    pub fn ball_at_zero(n: usize, s: usize) -> Result<Self> {
        Ok(Self::new(WeightSet::interval(0, s.min(n), n)?))
    }

    /// `B(1^n, s)`.
    pub fn ball_at_ones(n: usize, s: usize) -> Result<Self> {
        Ok(Self::new(WeightSet::interval(n.saturating_sub(s), n, n)?))
    }

    pub fn exact_weight(n: usize, w: usize) -> Result<Self> {
        Ok(Self::new(WeightSet::from_weights(n, [w])?))
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn weights(&self) -> &WeightSet {
        &self.weights
    }

    pub fn contains(&self, x: &BitVector) -> bool {
        x.len() == self.n() && self.weights.contains(x.weight())
    }

    pub fn size(&self) -> BigUint {
        class_size(self)
    }
}

/// Two symmetric classes over the same `n` with disjoint weight sets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct ClassPair {
    first: SymmetricClass,
    second: SymmetricClass,
}

impl ClassPair {
    pub fn new(first: SymmetricClass, second: SymmetricClass) -> Result<Self> {
        if first.n() != second.n() {
            return Err(Error::LengthMismatch { expected: first.n(), found: second.n() });
        }
        if let Some(w) = first.weights.intersection(&second.weights).min() {
            return Err(Error::NotDisjoint(w));
        }
        Ok(ClassPair { first, second })
    }

    pub fn first(&self) -> &SymmetricClass {
        &self.first
    }

    pub fn second(&self) -> &SymmetricClass {
        &self.second
    }

    pub fn n(&self) -> usize {
        self.first.n()
    }
}

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::from(1u32));
        for pair in row.windows(2) {
            next.push(&pair[0] + &pair[1]);
        }
        next.push(BigUint::from(1u32));
        row = next;
    }
    row
}

/// Exact `sum_{w in S} C(n, w)`.
pub fn class_size(s: &SymmetricClass) -> BigUint {
    weight_set_size(s.weights())
}

pub fn weight_set_size(w: &WeightSet) -> BigUint {
    let row = binomial_row(w.n());
    w.iter().fold(BigUint::zero(), |acc, k| acc + &row[k])
}

/// Weights achievable by `x1 + x2` with `w(x1) in w1`, `w(x2) in w2`.
///
/// Two vectors of weights `p` and `q` sharing `i` ones sum to weight
/// `p + q - 2i`, with `max(0, p + q - n) <= i <= min(p, q)`.
pub fn sumset_weights(w1: &WeightSet, w2: &WeightSet, n: usize) -> Result<WeightSet> {
    if w1.n() != n || w2.n() != n {
        return Err(Error::LengthMismatch { expected: n, found: if w1.n() != n { w1.n() } else { w2.n() } });
    }
    let mut out = WeightSet::empty(n)?;
    for p in w1.iter() {
        for q in w2.iter() {
            let lo = (p + q).saturating_sub(n);
            for i in lo..=p.min(q) {
                out.insert(p + q - 2 * i);
            }
        }
    }
    Ok(out)
}

pub fn sumset_class(pair: &ClassPair) -> SymmetricClass {
    let n = pair.n();
    SymmetricClass::new(sumset_weights(pair.first.weights(), pair.second.weights(), n).expect("same n by construction"))
}
