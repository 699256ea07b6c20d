//! Exact sparse linear algebra over the rationals.
//!
//! Objects in this crate are finite dimensional with a distinguished basis,
//! and almost every structure map sends a basis vector to a rational
//! multiple of a single basis vector, so vectors are kept as sorted sparse
//! term lists and linear maps as columns of such vectors. All comparisons
//! are exact.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rat = Ratio<i64>;

pub fn rat(n: i64) -> Rat {
    Ratio::from_integer(n)
}

/// A sparse vector: terms sorted by basis index, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVec {
    terms: Vec<(usize, Rat)>,
}

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec::default()
    }

    /// The basis vector `e_i`.
    pub fn unit(i: usize) -> Self {
        SparseVec {
            terms: vec![(i, Rat::one())],
        }
    }

    pub fn scaled_unit(i: usize, c: Rat) -> Self {
        if c.is_zero() {
            SparseVec::zero()
        } else {
            SparseVec { terms: vec![(i, c)] }
        }
    }

    /// Builds from arbitrary terms, combining duplicates and dropping zeros.
    pub fn from_terms(mut terms: Vec<(usize, Rat)>) -> Self {
        terms.sort_by_key(|&(i, _)| i);
        let mut out: Vec<(usize, Rat)> = Vec::with_capacity(terms.len());
        for (i, c) in terms {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        SparseVec { terms: out }
    }

    pub fn terms(&self) -> &[(usize, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Rat {
        match self.terms.binary_search_by_key(&i, |&(j, _)| j) {
            Ok(k) => self.terms[k].1,
            Err(_) => Rat::zero(),
        }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        SparseVec::from_terms(terms)
    }

    pub fn scale(&self, c: Rat) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero();
        }
        SparseVec {
            terms: self.terms.iter().map(|&(i, a)| (i, a * c)).collect(),
        }
    }

    /// The single `(index, coefficient)` term, if this is a monomial vector.
    pub fn as_monomial(&self) -> Option<(usize, Rat)> {
        match self.terms.as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }
}

/// A linear map given column-wise: `cols[j]` is the image of source basis
/// vector `j` in the target basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinMap {
    pub target_dim: usize,
    pub cols: Vec<SparseVec>,
}

impl LinMap {
    pub fn zero(source_dim: usize, target_dim: usize) -> Self {
        LinMap {
            target_dim,
            cols: vec![SparseVec::zero(); source_dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        LinMap {
            target_dim: dim,
            cols: (0..dim).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_cols(target_dim: usize, cols: Vec<SparseVec>) -> Self {
        LinMap { target_dim, cols }
    }

    pub fn source_dim(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for &(j, c) in v.terms() {
            for &(i, a) in self.cols[j].terms() {
                terms.push((i, a * c));
            }
        }
        SparseVec::from_terms(terms)
    }

    /// `self` then `next` as one map.
    pub fn then(&self, next: &LinMap) -> LinMap {
        LinMap {
            target_dim: next.target_dim,
            cols: self.cols.iter().map(|c| next.apply(c)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.target_dim == self.cols.len()
            && self
                .cols
                .iter()
                .enumerate()
                .all(|(j, c)| c.as_monomial() == Some((j, Rat::one())))
    }
}
