//! Exponent-vector multi-indices and multinomial coefficients.
//!
//! A multi-index α = (α₁, …, α_n) is the canonical key for one symmetric
//! entry: it counts how many of the m index slots point at each variable.
//! Storing one value per multi-index makes symmetry structural rather than
//! something to maintain.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Exponent vector of fixed degree. Ordered graded-lexicographically
/// (degree first, then lexicographic with the first variable most
/// significant), so iteration over a sorted map is reproducible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// Entrywise sum β + γ (used by moment matrices).
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// x^α = ∏ᵢ xᵢ^{αᵢ}.
    pub fn monomial(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }

    /// Weighted index sum Σᵢ i·αᵢ with 0-based variable index i.
    /// This is the Hankel level of the multi-index.
    pub fn hankel_level(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| i * e as usize)
            .sum()
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

/// m! / ∏ᵢ αᵢ!, the number of index permutations sharing the multi-index.
/// Overflow is reported rather than wrapped; desk scale keeps m small.
pub fn multinomial(alpha: &MultiIndex) -> Result<u64> {
    let m = alpha.degree();
    // incremental binomial product: m! / prod a_i! = prod over slots
    let mut result: u64 = 1;
    let mut consumed: u64 = 0;
    for &e in alpha.exponents() {
        for j in 1..=e as u64 {
            consumed += 1;
            // the division is exact (running binomials are integers), but the
            // multiplication can overflow first
            result = result
                .checked_mul(consumed)
                .ok_or(Error::MultinomialOverflow { degree: m })?
                / j;
        }
    }
    Ok(result)
}

/// All multi-indices over `n` variables of total degree `d`,
/// graded-lex sorted. Size is C(n+d-1, d).
pub fn multi_indices(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(MultiIndex::new(current.clone()));
            return;
        }
        for e in (0..=remaining).rev() {
            current[pos] = e;
            rec(current, pos + 1, remaining - e, out);
        }
        current[pos] = 0;
    }
    rec(&mut current, 0, d, &mut out);
    out
}

/// C(n+d-1, d) without enumerating.
pub fn count_multi_indices(n: usize, d: u32) -> usize {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d as u128 {
        num *= (n as u128) + i;
        den *= i + 1;
    }
    (num / den) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&mi(&[4, 0])).unwrap(), 1);
        assert_eq!(multinomial(&mi(&[2, 2])).unwrap(), 6);
        assert_eq!(multinomial(&mi(&[1, 1, 1, 1])).unwrap(), 24);
        assert_eq!(multinomial(&mi(&[3, 1])).unwrap(), 4);
        assert_eq!(multinomial(&mi(&[0, 0])).unwrap(), 1);
    }

    #[test]
    fn multinomial_overflow_detected() {
        // degree 100 over two variables overflows u64
        let alpha = mi(&[50, 50]);
        assert!(matches!(
            multinomial(&alpha),
            Err(Error::MultinomialOverflow { .. })
        ));
    }

    #[test]
    fn graded_lex_enumeration() {
        let idx = multi_indices(2, 2);
        assert_eq!(
            idx,
            vec![mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]
        );
        assert_eq!(multi_indices(4, 2).len(), 10);
        assert_eq!(count_multi_indices(4, 2), 10);
        assert_eq!(multi_indices(3, 1).len(), 3);
    }

    #[test]
    fn ordering_is_graded_lex() {
        let a = mi(&[2, 0]);
        let b = mi(&[1, 1]);
        assert!(a < b);
        let sorted = multi_indices(3, 4);
        let mut copy = sorted.clone();
        copy.sort();
        assert_eq!(sorted, copy);
    }

    #[test]
    fn hankel_level() {
        assert_eq!(mi(&[4, 0]).hankel_level(), 0);
        assert_eq!(mi(&[0, 4]).hankel_level(), 4);
        assert_eq!(mi(&[2, 1, 1]).hankel_level(), 3);
    }
}
