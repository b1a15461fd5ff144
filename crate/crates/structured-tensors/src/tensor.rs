//! Canonical storage and arithmetic for symmetric tensors.
//!
//! A tensor of order m and dimension n stores one real value per degree-m
//! multi-index; absent keys are zero. Two inner products are first class:
//! [`SymmetricTensor::inner_full`] weights each entry by its permutation
//! count (the full-index sum), while [`SymmetricTensor::inner_coeff`] pairs
//! raw entries and is used exclusively by the moment / dual-cone machinery.
//! Mixing them up silently breaks every duality test, so callers name one.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multi_index::{count_multi_indices, multinomial, MultiIndex};

/// Order-m, dim-n symmetric tensor keyed by exponent-vector multi-index.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricTensor {
    order: usize,
    dim: usize,
    entries: BTreeMap<MultiIndex, f64>,
}

/// A list of vectors uⱼ with weights αⱼ representing Σⱼ αⱼ uⱼᵐ.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionList {
    pub vectors: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl DecompositionList {
    pub fn new(vectors: Vec<Vec<f64>>, weights: Option<Vec<f64>>) -> Self {
        let weights = weights.unwrap_or_else(|| vec![1.0; vectors.len()]);
        assert_eq!(vectors.len(), weights.len());
        DecompositionList { vectors, weights }
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.len())
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// True iff every vector is entrywise nonnegative (CP candidate).
    pub fn is_nonnegative(&self) -> bool {
        self.vectors
            .iter()
            .all(|v| v.iter().all(|&x| x >= 0.0))
    }
}

impl SymmetricTensor {
    /// The zero tensor O_{m,n}.
    pub fn zero(order: usize, dim: usize) -> Self {
        assert!(order >= 2 && dim >= 2, "order and dim must be at least 2");
        SymmetricTensor {
            order,
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Distinct stored multi-indices (zeros may be stored or absent).
    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &f64)> {
        self.entries.iter()
    }

    pub fn get(&self, alpha: &MultiIndex) -> f64 {
        *self.entries.get(alpha).unwrap_or(&0.0)
    }

    pub fn set(&mut self, alpha: MultiIndex, value: f64) -> Result<()> {
        if alpha.degree() != self.order || alpha.len() != self.dim {
            return Err(Error::InvalidMultiIndex(format!(
                "degree {} / length {} does not match order {} / dim {}",
                alpha.degree(),
                alpha.len(),
                self.order,
                self.dim
            )));
        }
        if value == 0.0 {
            self.entries.remove(&alpha);
        } else {
            self.entries.insert(alpha, value);
        }
        Ok(())
    }

    pub fn add_assign(&mut self, alpha: MultiIndex, value: f64) -> Result<()> {
        let current = self.get(&alpha);
        self.set(alpha, current + value)
    }

    /// Max absolute entry; the natural scale for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.entries
            .values()
            .fold(0.0_f64, |acc, &v| acc.max(v.abs()))
    }

    /// Number of entries the dense representation would hold.
    pub fn dense_len(&self) -> usize {
        count_multi_indices(self.dim, self.order as u32)
    }

    fn check_shape(&self, other: &SymmetricTensor) -> Result<()> {
        if self.order != other.order || self.dim != other.dim {
            return Err(Error::ShapeMismatch {
                expected_order: self.order,
                expected_dim: self.dim,
                order: other.order,
                dim: other.dim,
            });
        }
        Ok(())
    }

    fn check_vector(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                dim: self.dim,
                len: x.len(),
            });
        }
        Ok(())
    }

    /// A xᵐ = Σ_α multinomial(α)·a_α·x^α.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_vector(x)?;
        let mut sum = 0.0;
        for (alpha, &a) in &self.entries {
            sum += multinomial(alpha)? as f64 * a * alpha.monomial(x);
        }
        Ok(sum)
    }

    /// The vector A x^{m−1}, i.e. (1/m)·∇(A xᵐ). Satisfies x·grad = eval.
    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_vector(x)?;
        let m = self.order as f64;
        let mut g = vec![0.0; self.dim];
        for (alpha, &a) in &self.entries {
            let mult = multinomial(alpha)? as f64;
            for (i, &e) in alpha.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                // d/dx_i of x^alpha, divided by m
                let mut term = mult * a * e as f64 / m;
                for (j, &ej) in alpha.exponents().iter().enumerate() {
                    let p = if j == i { ej - 1 } else { ej };
                    term *= x[j].powi(p as i32);
                }
                g[i] += term;
            }
        }
        Ok(g)
    }

    /// ∇²(A xᵐ), row-major n×n; equals m(m−1)·(A x^{m−2}) as a matrix.
    /// Used by the KKT Newton refinement.
    pub fn hessian(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_vector(x)?;
        let n = self.dim;
        let mut h = vec![0.0; n * n];
        for (alpha, &a) in &self.entries {
            let mult = multinomial(alpha)? as f64 * a;
            let exps = alpha.exponents();
            for i in 0..n {
                if exps[i] == 0 {
                    continue;
                }
                for j in 0..n {
                    let factor = if i == j {
                        (exps[i] * (exps[i].saturating_sub(1))) as f64
                    } else {
                        (exps[i] * exps[j]) as f64
                    };
                    if factor == 0.0 {
                        continue;
                    }
                    let mut term = mult * factor;
                    for (t, &et) in exps.iter().enumerate() {
                        let mut p = et;
                        if t == i {
                            p -= 1;
                        }
                        if t == j {
                            p -= 1;
                        }
                        term *= x[t].powi(p as i32);
                    }
                    h[i * n + j] += term;
                }
            }
        }
        Ok(h)
    }

    /// A • B with multiplicity weights (full-index convention).
    pub fn inner_full(&self, other: &SymmetricTensor) -> Result<f64> {
        self.check_shape(other)?;
        let mut sum = 0.0;
        for (alpha, &a) in &self.entries {
            let b = other.get(alpha);
            if b != 0.0 {
                sum += multinomial(alpha)? as f64 * a * b;
            }
        }
        Ok(sum)
    }

    /// Σ_α a_α·b_α with no multiplicity weights (coefficient convention,
    /// moment / dual-cone machinery only).
    pub fn inner_coeff(&self, other: &SymmetricTensor) -> Result<f64> {
        self.check_shape(other)?;
        let mut sum = 0.0;
        for (alpha, &a) in &self.entries {
            sum += a * other.get(alpha);
        }
        Ok(sum)
    }

    /// sqrt(inner_full(A, A)).
    pub fn norm_full(&self) -> f64 {
        self.inner_full(self).expect("same shape").sqrt()
    }

    /// sqrt(inner_coeff(A, A)).
    pub fn norm_coeff(&self) -> f64 {
        self.inner_coeff(self).expect("same shape").sqrt()
    }

    /// Entrywise (Hadamard/Schur) product per multi-index.
    pub fn hadamard(&self, other: &SymmetricTensor) -> Result<SymmetricTensor> {
        self.check_shape(other)?;
        let mut out = SymmetricTensor::zero(self.order, self.dim);
        for (alpha, &a) in &self.entries {
            let b = other.get(alpha);
            if b != 0.0 {
                out.entries.insert(alpha.clone(), a * b);
            }
        }
        Ok(out)
    }

    /// Entry at α multiplied by multinomial(α): the coefficient tensor of
    /// the polynomial A xᵐ in the unnormalized monomial basis. This is the
    /// embedding under which the moment machinery pairs tensors.
    pub fn coefficient_embedding(&self) -> Result<SymmetricTensor> {
        let mut out = SymmetricTensor::zero(self.order, self.dim);
        for (alpha, &a) in &self.entries {
            let m = multinomial(alpha)? as f64;
            out.entries.insert(alpha.clone(), m * a);
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> SymmetricTensor {
        let mut out = self.clone();
        if factor == 0.0 {
            out.entries.clear();
        } else {
            for v in out.entries.values_mut() {
                *v *= factor;
            }
        }
        out
    }

    pub fn add(&self, other: &SymmetricTensor) -> Result<SymmetricTensor> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (alpha, &b) in &other.entries {
            out.add_assign(alpha.clone(), b)?;
        }
        Ok(out)
    }

    /// Diagonal change of variables x ↦ d∘x: entry at α becomes
    /// a_α·∏ᵢ dᵢ^{αᵢ}, so eval(scaled, x) == eval(A, d∘x).
    pub fn scale_variables(&self, d: &[f64]) -> Result<SymmetricTensor> {
        self.check_vector(d)?;
        if let Some((i, &v)) = d.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(Error::NonPositiveScale { index: i, value: v });
        }
        let mut out = SymmetricTensor::zero(self.order, self.dim);
        for (alpha, &a) in &self.entries {
            out.entries.insert(alpha.clone(), a * alpha.monomial(d));
        }
        Ok(out)
    }
}

/// Rank-one power uᵐ: entry at α equals ∏ᵢ uᵢ^{αᵢ}.
pub fn rank_one_pow(u: &[f64], order: usize) -> SymmetricTensor {
    assert!(order >= 2 && u.len() >= 2);
    let mut out = SymmetricTensor::zero(order, u.len());
    for alpha in crate::multi_index::multi_indices(u.len(), order as u32) {
        let v = alpha.monomial(u);
        if v != 0.0 {
            out.entries.insert(alpha, v);
        }
    }
    out
}

/// Σⱼ αⱼ·uⱼᵐ. The empty list is the zero tensor, which needs an explicit
/// shape; callers without one should construct `SymmetricTensor::zero`.
pub fn from_weighted_powers(dec: &DecompositionList, order: usize, dim: usize) -> SymmetricTensor {
    let mut out = SymmetricTensor::zero(order, dim);
    for (u, &w) in dec.vectors.iter().zip(&dec.weights) {
        assert_eq!(u.len(), dim, "decomposition vector length mismatch");
        for alpha in crate::multi_index::multi_indices(dim, order as u32) {
            let v = w * alpha.monomial(u);
            if v != 0.0 {
                out.add_assign(alpha, v).expect("shape consistent");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn eval_rank_one() {
        let a = rank_one_pow(&[1.0, 1.0], 4);
        assert_relative_eq!(a.eval(&[1.0, 2.0]).unwrap(), 81.0, max_relative = 1e-14);
        let z = SymmetricTensor::zero(4, 2);
        assert_eq!(z.eval(&[3.0, -7.0]).unwrap(), 0.0);
    }

    #[test]
    fn eval_dimension_mismatch() {
        let a = rank_one_pow(&[1.0, 1.0], 4);
        assert!(a.eval(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn grad_of_pure_power() {
        // grad = (u.x)^{m-1} u
        let u = [2.0, -1.0, 0.5];
        let a = rank_one_pow(&u, 4);
        let x = [0.3, 1.1, -0.7];
        let dot: f64 = u.iter().zip(&x).map(|(a, b)| a * b).sum();
        let g = a.grad(&x).unwrap();
        for i in 0..3 {
            assert_relative_eq!(g[i], dot.powi(3) * u[i], max_relative = 1e-12);
        }
        // x = 0 gives the zero vector for m >= 2
        let g0 = a.grad(&[0.0; 3]).unwrap();
        assert!(g0.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn euler_identity() {
        let u = [1.0, 2.0];
        let v = [3.0, -1.0];
        let a = from_weighted_powers(
            &DecompositionList::new(vec![u.to_vec(), v.to_vec()], Some(vec![1.5, -0.25])),
            4,
            2,
        );
        let x = [0.7, -1.3];
        let g = a.grad(&x).unwrap();
        let dot: f64 = x.iter().zip(&g).map(|(a, b)| a * b).sum();
        assert_relative_eq!(dot, a.eval(&x).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn inner_products() {
        // identity matrix as order-2 tensor
        let mut eye = SymmetricTensor::zero(2, 2);
        eye.set(mi(&[2, 0]), 1.0).unwrap();
        eye.set(mi(&[0, 2]), 1.0).unwrap();
        assert_relative_eq!(eye.inner_full(&eye).unwrap(), 2.0);
        assert_relative_eq!(eye.inner_coeff(&eye).unwrap(), 2.0);

        let z = SymmetricTensor::zero(2, 2);
        assert_eq!(eye.inner_full(&z).unwrap(), 0.0);

        // multiplicity 2 on (1,1)
        let mut offdiag = SymmetricTensor::zero(2, 2);
        offdiag.set(mi(&[1, 1]), 1.0).unwrap();
        assert_relative_eq!(offdiag.inner_coeff(&offdiag).unwrap(), 1.0);
        assert_relative_eq!(offdiag.inner_full(&offdiag).unwrap(), 2.0);
    }

    #[test]
    fn inner_full_rank_one_pair_is_dot_power() {
        // brute-force full-index oracle at n=2, m=4
        let u = [1.25, -0.5];
        let v = [0.75, 2.0];
        let a = rank_one_pow(&u, 4);
        let b = rank_one_pow(&v, 4);
        let mut brute = 0.0;
        for i1 in 0..2 {
            for i2 in 0..2 {
                for i3 in 0..2 {
                    for i4 in 0..2 {
                        brute += u[i1] * u[i2] * u[i3] * u[i4] * v[i1] * v[i2] * v[i3] * v[i4];
                    }
                }
            }
        }
        let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        assert_relative_eq!(a.inner_full(&b).unwrap(), brute, max_relative = 1e-13);
        assert_relative_eq!(brute, dot.powi(4), max_relative = 1e-13);
    }

    #[test]
    fn inner_conventions_related_by_embedding() {
        let a = rank_one_pow(&[1.0, 2.0, -1.0], 4);
        let b = rank_one_pow(&[0.5, -1.5, 2.5], 4);
        let lhs = a.inner_full(&b).unwrap();
        let rhs = a.coefficient_embedding().unwrap().inner_coeff(&b).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
    }

    #[test]
    fn hadamard_rank_one() {
        let u = [1.0, 2.0];
        let v = [3.0, 4.0];
        let prod = rank_one_pow(&u, 2).hadamard(&rank_one_pow(&v, 2)).unwrap();
        assert_relative_eq!(prod.get(&mi(&[2, 0])), 9.0);
        assert_relative_eq!(prod.get(&mi(&[1, 1])), 24.0);
        assert_relative_eq!(prod.get(&mi(&[0, 2])), 64.0);
        let uv = [3.0, 8.0];
        assert_eq!(prod, rank_one_pow(&uv, 2));
        let z = SymmetricTensor::zero(2, 2);
        assert_eq!(rank_one_pow(&u, 2).hadamard(&z).unwrap(), z);
    }

    #[test]
    fn rank_one_entries() {
        let e1 = rank_one_pow(&[1.0, 0.0], 4);
        assert_eq!(e1.get(&mi(&[4, 0])), 1.0);
        assert_eq!(e1.get(&mi(&[3, 1])), 0.0);

        let ones = rank_one_pow(&[1.0, 1.0], 2);
        for alpha in crate::multi_index::multi_indices(2, 2) {
            assert_eq!(ones.get(&alpha), 1.0);
        }

        let big = rank_one_pow(&[1.0, 1000.0], 4);
        assert_relative_eq!(big.get(&mi(&[2, 2])), 1e6);
    }

    #[test]
    fn scale_variables_matches_substitution() {
        let a = from_weighted_powers(
            &DecompositionList::new(
                vec![vec![1.0, 2.0], vec![-1.0, 0.5]],
                Some(vec![1.0, 3.0]),
            ),
            4,
            2,
        );
        let d = [0.5, 4.0];
        let scaled = a.scale_variables(&d).unwrap();
        let x = [1.2, -0.3];
        let dx = [d[0] * x[0], d[1] * x[1]];
        assert_relative_eq!(
            scaled.eval(&x).unwrap(),
            a.eval(&dx).unwrap(),
            max_relative = 1e-14
        );
        // all-ones leaves the tensor unchanged
        assert_eq!(a.scale_variables(&[1.0, 1.0]).unwrap(), a);
        // nonpositive scale entries are rejected
        assert!(a.scale_variables(&[1.0, 0.0]).is_err());
        // rank-one scaling law
        let u = [2.0, -3.0];
        let lhs = rank_one_pow(&u, 4).scale_variables(&d).unwrap();
        let rhs = rank_one_pow(&[d[0] * u[0], d[1] * u[1]], 4);
        for alpha in crate::multi_index::multi_indices(2, 4) {
            assert_relative_eq!(lhs.get(&alpha), rhs.get(&alpha), max_relative = 1e-13);
        }
    }
}
