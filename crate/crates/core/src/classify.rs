//! Linear classification of two symmetric classes.
//!
//! A matrix separates `S1` from `S2` exactly when its kernel avoids the
//! sumset `S1 + S2`. The classifier picks an avoiding subspace, takes a basis
//! of its orthogonal complement as the query rows, and decodes a measurement
//! `y` by enumerating the coset `x0 + ker(M)`.

use serde::Serialize;

use crate::constructions::{greedy_avoiding, zero_pad};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, EchelonBasis};
use crate::sets::{sumset_class, ClassPair, SymmetricClass, WeightSet};
use crate::solver::{max_avoiding_subspace, verify_avoiding, SearchConfig};

/// Inner-code width up to which zero padding solves the inner code exactly.
const ZERO_PAD_EXACT_LIMIT: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Exact,
    Greedy,
    ZeroPad,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Strategy::Exact),
            "greedy" => Ok(Strategy::Greedy),
            "zeropad" | "zero-pad" => Ok(Strategy::ZeroPad),
            other => Err(Error::DomainError(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Class1,
    Class2,
    /// `y` is in the image of `M`, but its coset meets neither class.
    NeitherClass,
    /// `y` is not in the image of `M`.
    Unreachable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classifier {
    pub pair: ClassPair,
    pub matrix: BitMatrix,
    pub strategy: Strategy,
    pub sumset: SymmetricClass,
    pub rank: usize,
    kernel: EchelonBasis,
}

impl Classifier {
    /// Wraps a user-supplied matrix; no separability check is made here.
    pub fn from_matrix(pair: ClassPair, matrix: BitMatrix, strategy: Strategy) -> Result<Self> {
        if matrix.col_count() != pair.n() {
            return Err(Error::LengthMismatch { expected: pair.n(), found: matrix.col_count() });
        }
        let kernel = matrix.kernel_basis();
        Ok(Classifier { pair, rank: matrix.rank(), sumset: sumset_class(&pair), strategy, matrix, kernel })
    }

    pub fn kernel(&self) -> &EchelonBasis {
        &self.kernel
    }

    pub fn n(&self) -> usize {
        self.pair.n()
    }

    /// `M x`.
    pub fn measure(&self, x: &BitVector) -> Result<BitVector> {
        self.matrix.mul_vec(x)
    }

    /// Solves `M x = y` and reports which class the coset `x0 + ker(M)` meets.
    pub fn classify_point(&self, y: &BitVector, cap: usize) -> Result<Verdict> {
        let Some(x0) = self.matrix.solve(y)? else {
            return Ok(Verdict::Unreachable);
        };
        // a separating matrix meets at most one class per coset; otherwise the
        // first class hit in enumeration order is reported
        for k in self.kernel.enumerate_span(cap)? {
            let x = x0.xor(&k);
            if self.pair.first().contains(&x) {
                return Ok(Verdict::Class1);
            }
            if self.pair.second().contains(&x) {
                return Ok(Verdict::Class2);
            }
        }
        Ok(Verdict::NeitherClass)
    }

    /// True iff `ker(M)` misses every nonzero sumset weight.
    pub fn validate(&self, cap: usize) -> Result<bool> {
        let mut forbidden = *self.sumset.weights();
        forbidden = forbidden.intersection(&WeightSet::interval(1, self.n(), self.n())?);
        verify_avoiding(&self.kernel, &forbidden, cap)
    }
}

/// Measurement matrix whose kernel is exactly `kernel`, rows in canonical echelon form.
pub fn matrix_for_kernel(kernel: &EchelonBasis) -> Result<BitMatrix> {
    let rows = kernel.orthogonal_complement()?;
    BitMatrix::new(kernel.n(), rows.rows().to_vec())
}

pub fn build_classifier(pair: &ClassPair, strategy: Strategy, cfg: &SearchConfig) -> Result<Classifier> {
    let n = pair.n();
    let sumset = sumset_class(pair);
    let forbidden = *sumset.weights();
    // disjoint classes keep 0 out of the sumset; checked again here
    if forbidden.contains(0) {
        return Err(Error::InfeasibleZeroWeight);
    }
    let kernel = match strategy {
        Strategy::Exact => max_avoiding_subspace(&forbidden, n, cfg)?.witness,
        Strategy::Greedy => greedy_avoiding(&forbidden, n)?,
        Strategy::ZeroPad => zero_pad_kernel(&forbidden, n, cfg)?,
    };
    let matrix = matrix_for_kernel(&kernel)?;
    Ok(Classifier { pair: *pair, rank: matrix.row_count(), matrix, strategy, sumset, kernel })
}

/// Pads against the hull `[a, b]` of the forbidden weights.
fn zero_pad_kernel(forbidden: &WeightSet, n: usize, cfg: &SearchConfig) -> Result<EchelonBasis> {
    let (Some(a), Some(b)) = (forbidden.min(), forbidden.max()) else {
        return EchelonBasis::full(n);
    };
    let width = n - a + 1;
    let inner_forbidden = WeightSet::interval(1, b.min(width), width)?;
    let inner = if width <= ZERO_PAD_EXACT_LIMIT {
        max_avoiding_subspace(&inner_forbidden, width, cfg)?.witness
    } else {
        greedy_avoiding(&inner_forbidden, width)?
    };
    zero_pad(a, b, n, &inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::DEFAULT_ENUMERATION_CAP as CAP;
    use crate::solver::m_star;

    fn balls(n: usize, s: usize) -> ClassPair {
        ClassPair::new(SymmetricClass::ball_at_zero(n, s).unwrap(), SymmetricClass::ball_at_ones(n, s).unwrap())
            .unwrap()
    }

    fn all_vectors(n: usize) -> impl Iterator<Item = BitVector> {
        (0u64..1 << n).map(move |x| BitVector::from_u64(n, x).unwrap())
    }

    #[test]
    fn balls_need_2s_plus_1_queries() {
        let c = build_classifier(&balls(9, 2), Strategy::Exact, &SearchConfig::default()).unwrap();
        assert_eq!(c.rank, 5);
        assert!(c.validate(CAP).unwrap());
        for x in all_vectors(9) {
            let expected = if c.pair.first().contains(&x) {
                Verdict::Class1
            } else if c.pair.second().contains(&x) {
                Verdict::Class2
            } else {
                continue;
            };
            assert_eq!(c.classify_point(&c.measure(&x).unwrap(), CAP).unwrap(), expected);
        }
    }

    #[test]
    fn exact_weights_one_and_three() {
        let pair =
            ClassPair::new(SymmetricClass::exact_weight(12, 1).unwrap(), SymmetricClass::exact_weight(12, 3).unwrap())
                .unwrap();
        let cfg = SearchConfig::default();
        let c = build_classifier(&pair, Strategy::Exact, &cfg).unwrap();
        assert_eq!(*c.sumset.weights(), WeightSet::from_weights(12, [2, 4]).unwrap());
        assert_eq!(c.rank, m_star(2, 4, 12, &cfg).unwrap().m_star);
        assert!(c.validate(CAP).unwrap());
    }

    #[test]
    fn overlapping_classes_rejected() {
        let a = SymmetricClass::new(WeightSet::interval(0, 2, 6).unwrap());
        let b = SymmetricClass::new(WeightSet::interval(2, 6, 6).unwrap());
        assert_eq!(ClassPair::new(a, b), Err(Error::NotDisjoint(2)));
    }

    #[test]
    fn dropping_a_row_breaks_separation() {
        let cfg = SearchConfig::default();
        let c = build_classifier(&balls(9, 2), Strategy::Exact, &cfg).unwrap();
        let mut rows = c.matrix.clone().into_rows();
        rows.pop();
        let weaker = Classifier::from_matrix(c.pair, BitMatrix::new(9, rows).unwrap(), Strategy::Exact).unwrap();
        assert!(!weaker.validate(CAP).unwrap());
    }

    #[test]
    fn identity_always_separates() {
        let pair = balls(7, 3);
        let c = Classifier::from_matrix(pair, BitMatrix::identity(7).unwrap(), Strategy::Exact).unwrap();
        assert!(c.validate(CAP).unwrap());
    }

    #[test]
    fn neither_and_unreachable() {
        let c = Classifier::from_matrix(balls(9, 2), BitMatrix::identity(9).unwrap(), Strategy::Exact).unwrap();
        let middle = BitVector::parse_bits("111100000").unwrap();
        assert_eq!(c.classify_point(&c.measure(&middle).unwrap(), CAP).unwrap(), Verdict::NeitherClass);

        let dependent = BitMatrix::new(4, vec![BitVector::parse_bits("1100").unwrap(); 2]).unwrap();
        let pair = balls(4, 1);
        let c = Classifier::from_matrix(pair, dependent, Strategy::Exact).unwrap();
        let y = BitVector::parse_bits("10").unwrap();
        assert_eq!(c.classify_point(&y, CAP).unwrap(), Verdict::Unreachable);
    }

    #[test]
    fn strategy_ranks_are_ordered() {
        let cfg = SearchConfig::default();
        for n in 5usize..=10 {
            for s in 1..n.div_ceil(2) {
                let pair = balls(n, s);
                let exact = build_classifier(&pair, Strategy::Exact, &cfg).unwrap();
                let pad = build_classifier(&pair, Strategy::ZeroPad, &cfg).unwrap();
                let greedy = build_classifier(&pair, Strategy::Greedy, &cfg).unwrap();
                assert!(exact.rank <= pad.rank && exact.rank <= greedy.rank);
                assert!(pad.validate(CAP).unwrap() && greedy.validate(CAP).unwrap());
            }
        }
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("zeropad".parse::<Strategy>().unwrap(), Strategy::ZeroPad);
        assert!("magic".parse::<Strategy>().is_err());
    }
}
