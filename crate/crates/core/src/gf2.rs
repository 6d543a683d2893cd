//! Bit-packed vectors, matrices and canonical subspace bases over GF(2).
//!
//! Coordinate `i` (0-based here, 1-based in the text format) lives at bit
//! `i % 64` of word `i / 64`, so coordinate 1 is the least significant bit of
//! the first word. Comparisons between vectors follow the integer value of
//! that bit pattern.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_LEN: usize = 512;
const WORDS: usize = MAX_LEN / 64;

/// Default cap on `log2` of the number of span elements any enumeration visits.
pub const DEFAULT_ENUMERATION_CAP: usize = 28;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: u16,
    words: [u64; WORDS],
}

impl BitVector {
    pub fn zeros(len: usize) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::InvalidLength(len));
        }
        Ok(BitVector { len: len as u16, words: [0; WORDS] })
    }

    pub fn ones(len: usize) -> Result<Self> {
        let mut v = Self::zeros(len)?;
        for i in 0..len {
            v.set(i, true);
        }
        Ok(v)
    }

    /// The unit vector with a single one at coordinate `i` (0-based).
    pub fn unit(len: usize, i: usize) -> Result<Self> {
        let mut v = Self::zeros(len)?;
        if i >= len {
            return Err(Error::LengthMismatch { expected: len, found: i + 1 });
        }
        v.set(i, true);
        Ok(v)
    }

    /// Builds a vector of length `len <= 64` from the low bits of `bits`.
    pub fn from_u64(len: usize, bits: u64) -> Result<Self> {
        let mut v = Self::zeros(len)?;
        if len > 64 {
            return Err(Error::DimensionTooLarge { n: len, max: 64 });
        }
        v.words[0] = bits & low_mask(len);
        Ok(v)
    }

    /// Low 64 coordinates packed into a word; exact when `len() <= 64`.
    #[inline]
    pub fn as_u64(&self) -> u64 {
        self.words[0]
    }

    /// Parses a string of `0`/`1` characters, character `j` being coordinate `j`.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = Self::zeros(s.len())?;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::Format { line: 1, msg: format!("unexpected character {other:?}") }),
            }
        }
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len());
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len(), "coordinate {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len());
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set coordinate, if any.
    pub fn leading_index(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = *self;
        out.xor_assign(other);
        out
    }

    /// Coordinates that are set, in increasing order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.get(i))
    }

    /// Copies `self` into a vector of length `len`, placing coordinate `i` at `offset + i`.
    pub fn embed(&self, len: usize, offset: usize) -> Result<BitVector> {
        if offset + self.len() > len {
            return Err(Error::LengthMismatch { expected: len, found: offset + self.len() });
        }
        let mut out = BitVector::zeros(len)?;
        for i in self.ones_iter() {
            out.set(offset + i, true);
        }
        Ok(out)
    }
}

#[inline]
pub(crate) fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Row-major matrix over GF(2) with an explicit column count, so `0 x n` is representable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn new(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if cols == 0 || cols > MAX_LEN {
            return Err(Error::InvalidLength(cols));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch { expected: cols, found: bad.len() });
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let rows = (0..n).map(|i| BitVector::unit(n, i)).collect::<Result<Vec<_>>>()?;
        Self::new(n, rows)
    }

    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        Self::new(n, vec![BitVector::zeros(n)?; m])
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    /// Row-space basis in canonical form.
    pub fn row_space(&self) -> EchelonBasis {
        let mut basis = EchelonBasis::empty(self.cols);
        for r in &self.rows {
            let _ = basis.insert(*r);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.row_space().dim()
    }

    /// Canonical basis of `{x : Mx = 0}`.
    pub fn kernel_basis(&self) -> EchelonBasis {
        let space = self.row_space();
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &p in space.pivots() {
            is_pivot[p] = true;
        }
        let mut kernel = EchelonBasis::empty(n);
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            // zeros is infallible here: n was validated on construction
            let mut x = BitVector::zeros(n).expect("valid length");
            x.set(free, true);
            for (row, &p) in space.rows().iter().zip(space.pivots()) {
                if row.get(free) {
                    x.set(p, true);
                }
            }
            kernel.insert(x).expect("kernel generators are independent");
        }
        kernel
    }

    /// `M x` as a vector of length `row_count()`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, found: x.len() });
        }
        // a 0-row product has no representable value
        let mut y = BitVector::zeros(self.rows.len())?;
        for (i, r) in self.rows.iter().enumerate() {
            y.set(i, r.dot(x));
        }
        Ok(y)
    }

    /// Some `x` with `M x = y`, or `None` when `y` is outside the image.
    pub fn solve(&self, y: &BitVector) -> Result<Option<BitVector>> {
        if y.len() != self.rows.len() {
            return Err(Error::LengthMismatch { expected: self.rows.len(), found: y.len() });
        }
        let mut rows: Vec<(BitVector, bool)> = self.rows.iter().enumerate().map(|(i, r)| (*r, y.get(i))).collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            let Some(sel) = (next..rows.len()).find(|&i| rows[i].0.get(col)) else {
                continue;
            };
            rows.swap(next, sel);
            let (prow, prhs) = rows[next];
            for (i, (r, rhs)) in rows.iter_mut().enumerate() {
                if i != next && r.get(col) {
                    r.xor_assign(&prow);
                    *rhs ^= prhs;
                }
            }
            pivots.push(col);
            next += 1;
        }
        if rows[next..].iter().any(|&(_, rhs)| rhs) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols)?;
        for (i, &col) in pivots.iter().enumerate() {
            x.set(col, rows[i].1);
        }
        Ok(Some(x))
    }
}

/// Reduced row echelon basis of a subspace.
///
/// Each row's lowest set coordinate is its pivot, pivots strictly increase
/// down the rows, and every pivot column is set in exactly one row. Two
/// bases compare equal iff they span the same subspace.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EchelonBasis {
    n: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn empty(n: usize) -> Self {
        EchelonBasis { n, rows: Vec::new(), pivots: Vec::new() }
    }

    /// The whole space `F_2^n`.
    pub fn full(n: usize) -> Result<Self> {
        Ok(BitMatrix::identity(n)?.row_space())
    }

    /// Echelonizes the span of `vectors`, silently dropping dependent ones.
    pub fn from_vectors<I: IntoIterator<Item = BitVector>>(n: usize, vectors: I) -> Result<Self> {
        let mut basis = Self::empty(n);
        for v in vectors {
            if v.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: v.len() });
            }
            let _ = basis.insert(v);
        }
        Ok(basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = *v;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn span_contains(&self, v: &BitVector) -> bool {
        v.len() == self.n && self.reduce(v).is_zero()
    }

    fn insert(&mut self, v: BitVector) -> Result<()> {
        let r = self.reduce(&v);
        let Some(p) = r.leading_index() else {
            return Err(Error::AlreadyInSpan);
        };
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&r);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, r);
        self.pivots.insert(at, p);
        Ok(())
    }

    /// Canonical basis of `span(self ∪ {v})`; `AlreadyInSpan` if the span would not grow.
    pub fn extend(&self, v: &BitVector) -> Result<Self> {
        if v.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: v.len() });
        }
        let mut out = self.clone();
        out.insert(*v)?;
        Ok(out)
    }

    /// All `2^dim` span elements, `0^n` first, in Gray-code order.
    pub fn enumerate_span(&self, cap: usize) -> Result<SpanIter<'_>> {
        if self.dim() > cap || self.dim() >= 64 {
            return Err(Error::CapExceeded { dim: self.dim(), cap });
        }
        Ok(SpanIter { basis: self, current: BitVector::zeros(self.n)?, index: 0, total: 1u64 << self.dim() })
    }

    pub fn min_nonzero_weight(&self, cap: usize) -> Result<usize> {
        if self.dim() == 0 {
            return Err(Error::EmptySubspace);
        }
        Ok(self.enumerate_span(cap)?.skip(1).map(|v| v.weight()).min().expect("dim >= 1"))
    }

    /// Histogram of weights over the whole span (index = weight).
    pub fn weight_distribution(&self, cap: usize) -> Result<Vec<u64>> {
        let mut hist = vec![0u64; self.n + 1];
        for v in self.enumerate_span(cap)? {
            hist[v.weight()] += 1;
        }
        Ok(hist)
    }

    /// Basis of `{x : <x, v> = 0 for all v in span}`.
    pub fn orthogonal_complement(&self) -> Result<Self> {
        Ok(self.to_matrix()?.kernel_basis())
    }

    pub fn to_matrix(&self) -> Result<BitMatrix> {
        BitMatrix::new(self.n, self.rows.clone())
    }
}

/// Gray-code walk over a span: step `i` flips the basis row at `trailing_zeros(i)`.
pub struct SpanIter<'a> {
    basis: &'a EchelonBasis,
    current: BitVector,
    index: u64,
    total: u64,
}

impl Iterator for SpanIter<'_> {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.index >= self.total {
            return None;
        }
        if self.index > 0 {
            let k = self.index.trailing_zeros() as usize;
            self.current.xor_assign(&self.basis.rows[k]);
        }
        self.index += 1;
        Some(self.current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.index) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for SpanIter<'_> {}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        BitVector::parse_bits(s).unwrap()
    }

    fn mat(rows: &[&str]) -> BitMatrix {
        let rows: Vec<_> = rows.iter().map(|r| bv(r)).collect();
        BitMatrix::new(rows[0].len(), rows).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(bv("0000").weight(), 0);
        assert_eq!(bv("1011").weight(), 3);
        assert_eq!(BitVector::ones(8).unwrap().weight(), 8);
        assert_eq!(BitVector::ones(512).unwrap().weight(), 512);
    }

    #[test]
    fn coordinate_one_is_lsb() {
        let v = bv("1000");
        assert_eq!(v.as_u64(), 1);
        assert_eq!(bv("0001").as_u64(), 8);
        assert!(bv("0001") > bv("1110"));
    }

    #[test]
    fn lengths_are_validated() {
        assert_eq!(BitVector::zeros(0), Err(Error::InvalidLength(0)));
        assert_eq!(BitVector::zeros(513), Err(Error::InvalidLength(513)));
        assert!(BitVector::zeros(512).is_ok());
    }

    #[test]
    fn ranks() {
        assert_eq!(BitMatrix::identity(3).unwrap().rank(), 3);
        assert_eq!(BitMatrix::zeros(2, 5).unwrap().rank(), 0);
        assert_eq!(mat(&["110", "011", "101"]).rank(), 2);
    }

    #[test]
    fn kernels() {
        assert_eq!(BitMatrix::identity(5).unwrap().kernel_basis().dim(), 0);
        let k = mat(&["111"]).kernel_basis();
        assert_eq!(k.dim(), 2);
        assert!(k.enumerate_span(28).unwrap().all(|v| v.weight() % 2 == 0));
        let ones = BitMatrix::new(9, vec![BitVector::ones(9).unwrap()]).unwrap();
        assert_eq!(ones.kernel_basis().dim(), 8);
        let empty = BitMatrix::new(4, vec![]).unwrap();
        assert_eq!(empty.kernel_basis().dim(), 4);
    }

    #[test]
    fn extend_and_contains() {
        let b = EchelonBasis::empty(3);
        let b = b.extend(&bv("100")).unwrap();
        assert_eq!(b.rows(), &[bv("100")]);
        let b = b.extend(&bv("010")).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.extend(&bv("110")), Err(Error::AlreadyInSpan));

        let b = EchelonBasis::from_vectors(3, [bv("110"), bv("011")]).unwrap();
        assert!(b.span_contains(&bv("101")));
        assert!(b.span_contains(&bv("000")));
        let even = mat(&["111"]).kernel_basis();
        assert!(!even.span_contains(&bv("100")));
    }

    #[test]
    fn echelon_shape() {
        let b = EchelonBasis::from_vectors(4, [bv("0111"), bv("1101"), bv("0011")]).unwrap();
        assert_eq!(b.pivots(), &[0, 1, 2]);
        for (i, (row, &p)) in b.rows().iter().zip(b.pivots()).enumerate() {
            assert_eq!(row.leading_index(), Some(p));
            for (j, other) in b.rows().iter().enumerate() {
                assert_eq!(other.get(p), i == j);
            }
        }
    }

    #[test]
    fn span_enumeration() {
        let e = EchelonBasis::empty(3);
        assert_eq!(e.enumerate_span(28).unwrap().collect::<Vec<_>>(), vec![bv("000")]);

        let b = EchelonBasis::from_vectors(3, [bv("100"), bv("010")]).unwrap();
        let mut got: Vec<_> = b.enumerate_span(28).unwrap().collect();
        assert_eq!(got[0], bv("000"));
        got.sort();
        assert_eq!(got, vec![bv("000"), bv("100"), bv("010"), bv("110")]);

        let big = EchelonBasis::full(29).unwrap();
        assert!(matches!(big.enumerate_span(28), Err(Error::CapExceeded { dim: 29, cap: 28 })));
    }

    #[test]
    fn min_weight() {
        let even = BitMatrix::new(4, vec![BitVector::ones(4).unwrap()]).unwrap().kernel_basis();
        assert_eq!(even.min_nonzero_weight(28), Ok(2));
        assert_eq!(EchelonBasis::empty(4).min_nonzero_weight(28), Err(Error::EmptySubspace));
    }

    #[test]
    fn solve_and_multiply() {
        let m = mat(&["1100", "0110"]);
        let x = bv("1010");
        let y = m.mul_vec(&x).unwrap();
        let x0 = m.solve(&y).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x0).unwrap(), y);

        let dependent = mat(&["110", "110"]);
        assert_eq!(dependent.solve(&bv("10")).unwrap(), None);
        assert!(dependent.solve(&bv("11")).unwrap().is_some());
    }

    #[test]
    fn orthogonal_complement_dims() {
        let b = EchelonBasis::from_vectors(6, [bv("110000"), bv("001100")]).unwrap();
        let c = b.orthogonal_complement().unwrap();
        assert_eq!(c.dim(), 4);
        for u in c.rows() {
            assert!(b.rows().iter().all(|v| !u.dot(v)));
        }
    }

    #[test]
    fn embed_shifts_coordinates() {
        let v = bv("11");
        assert_eq!(v.embed(5, 2).unwrap(), bv("00110"));
        assert!(v.embed(2, 1).is_err());
    }
}
