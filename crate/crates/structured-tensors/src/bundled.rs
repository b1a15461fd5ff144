//! The two bundled Hankel case studies, generated programmatically from
//! their Vandermonde data (never hand-typed: the larger one has entries
//! spanning ~20 orders of magnitude).
//!
//! - `sec54`: order 4, dim 2; nodes (1, 1000, 0.0001) with weights
//!   (1, 1, −0.0001). Positive definite, SOS, but not completely
//!   decomposable.
//! - `sec55`: order 4, dim 4; vectors (1, uⱼ, uⱼ², uⱼ³) for
//!   uⱼ ∈ (1, 10, 20, 50, 0.0001) with weights (1, 1, 1, 1, −0.0001).
//!   Positive definite and not completely decomposable.

use crate::hankel::VandermondeDecomposition;
use crate::tensor::{from_weighted_powers, DecompositionList, SymmetricTensor};

pub fn sec54_decomposition() -> VandermondeDecomposition {
    VandermondeDecomposition::exact(vec![1.0, 1000.0, 1e-4], vec![1.0, 1.0, -1e-4], 4, 2)
}

pub fn sec54_tensor() -> SymmetricTensor {
    crate::hankel::build_from_vandermonde(&sec54_decomposition())
}

pub fn sec55_nodes() -> Vec<f64> {
    vec![1.0, 10.0, 20.0, 50.0, 1e-4]
}

pub fn sec55_decomposition() -> DecompositionList {
    let vectors = sec55_nodes()
        .iter()
        .map(|&u| crate::hankel::vandermonde_vector(u, 4))
        .collect();
    DecompositionList::new(vectors, Some(vec![1.0, 1.0, 1.0, 1.0, -1e-4]))
}

pub fn sec55_tensor() -> SymmetricTensor {
    from_weighted_powers(&sec55_decomposition(), 4, 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::is_hankel;
    use crate::multi_index::MultiIndex;
    use approx::assert_relative_eq;

    #[test]
    fn sec54_basic_values() {
        let a = sec54_tensor();
        assert_eq!(a.order(), 4);
        assert_eq!(a.dim(), 2);
        assert_relative_eq!(a.eval(&[1.0, 0.0]).unwrap(), 1.9999, max_relative = 1e-12);
        assert!(is_hankel(&a));
    }

    #[test]
    fn sec55_basic_values() {
        let a = sec55_tensor();
        assert_eq!(a.order(), 4);
        assert_eq!(a.dim(), 4);
        assert!(is_hankel(&a));
        // top entry is dominated by the node-50 vector: 50³·⁴ = 125000⁴
        let top = a.get(&MultiIndex::new(vec![0, 0, 0, 4]));
        assert!(top > 2.4e20 && top < 2.5e20);
        // scaling tames the dynamic range
        let d = [1.0, 1.0 / 50.0, 1.0 / 2500.0, 1.0 / 125000.0];
        let scaled = a.scale_variables(&d).unwrap();
        assert!(scaled.scale() < 1e3, "scale = {}", scaled.scale());
    }
}
