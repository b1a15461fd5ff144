//! Seeded generators for property tests and the harness. Deterministic:
//! same seed, same tensor, regardless of scheduling (each sample derives
//! its stream from the seed alone).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::multi_index::{multi_indices, multinomial};
use crate::tensor::{from_weighted_powers, DecompositionList, SymmetricTensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Σ αⱼuⱼᵐ with real vectors, αⱼ > 0.
    Cd,
    /// Σ αⱼuⱼᵐ with entrywise nonnegative vectors, αⱼ > 0.
    Cp,
    /// Sum of `count` squared random degree-(m/2) forms.
    Sos,
    /// Random generating vector.
    Hankel,
    /// Independent entries.
    Dense,
}

impl Kind {
    pub fn parse(s: &str) -> Option<Kind> {
        match s {
            "cd" => Some(Kind::Cd),
            "cp" => Some(Kind::Cp),
            "sos" => Some(Kind::Sos),
            "hankel" => Some(Kind::Hankel),
            "dense" => Some(Kind::Dense),
            _ => None,
        }
    }
}

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random tensor of the requested kind; cd/cp also return the generating
/// decomposition so span/witness properties can be checked.
pub fn random_tensor(
    kind: Kind,
    m: usize,
    n: usize,
    count: usize,
    seed: u64,
) -> (SymmetricTensor, Option<DecompositionList>) {
    let mut rng = rng_for(seed, 0);
    match kind {
        Kind::Cd | Kind::Cp => {
            let mut vectors = Vec::with_capacity(count);
            let mut weights = Vec::with_capacity(count);
            for _ in 0..count {
                let v: Vec<f64> = (0..n)
                    .map(|_| {
                        let x: f64 = rng.gen_range(-1.0..1.0);
                        if kind == Kind::Cp {
                            x.abs()
                        } else {
                            x
                        }
                    })
                    .collect();
                vectors.push(v);
                weights.push(rng.gen_range(0.1..2.0));
            }
            let dec = DecompositionList::new(vectors, Some(weights));
            (from_weighted_powers(&dec, m, n), Some(dec))
        }
        Kind::Sos => {
            assert!(m % 2 == 0, "sos kind needs even order");
            let k = m / 2;
            let basis = multi_indices(n, k as u32);
            let mut a = SymmetricTensor::zero(m, n);
            for _ in 0..count.max(1) {
                let c: Vec<f64> = basis.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
                // coefficient of x^(β+γ) in p² is c_β·c_γ (both orders)
                for (i, beta) in basis.iter().enumerate() {
                    for (j, gamma) in basis.iter().enumerate() {
                        let alpha = beta.add(gamma);
                        let mult = multinomial(&alpha).expect("desk scale") as f64;
                        a.add_assign(alpha, c[i] * c[j] / mult).expect("shape");
                    }
                }
            }
            (a, None)
        }
        Kind::Hankel => {
            let len = (n - 1) * m + 1;
            let values: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let h = crate::hankel::GeneratingVector::new(values, m, n).expect("length by construction");
            (crate::hankel::hankel_from_generating(&h), None)
        }
        Kind::Dense => {
            let mut a = SymmetricTensor::zero(m, n);
            for alpha in multi_indices(n, m as u32) {
                a.set(alpha, rng.gen_range(-1.0..1.0)).expect("shape");
            }
            (a, None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::spans;

    #[test]
    fn deterministic() {
        let (a, _) = random_tensor(Kind::Dense, 4, 3, 0, 42);
        let (b, _) = random_tensor(Kind::Dense, 4, 3, 0, 42);
        assert_eq!(a, b);
        let (c, _) = random_tensor(Kind::Dense, 4, 3, 0, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn cp_vectors_nonnegative() {
        let (_, dec) = random_tensor(Kind::Cp, 4, 3, 5, 7);
        assert!(dec.unwrap().is_nonnegative());
    }

    #[test]
    fn cd_generic_spans() {
        let (_, dec) = random_tensor(Kind::Cd, 4, 3, 6, 11);
        assert!(spans(&dec.unwrap()));
    }

    #[test]
    fn sos_kind_nonnegative_everywhere() {
        let (a, _) = random_tensor(Kind::Sos, 4, 3, 3, 5);
        let mut rng = rng_for(99, 0);
        for _ in 0..50 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            assert!(a.eval(&x).unwrap() >= -1e-12);
        }
    }
}
