//! Extremal H-eigenvalues and numeric positivity probes.
//!
//! Everything here is multi-start local search: seeded projected gradient
//! with Armijo backtracking, followed by a Newton polish of the KKT system
//! for eigenpairs. Probes report a three-way status — `Positive` only above
//! a relative margin, `NegativeWitness` only when the witness re-evaluates
//! negative exactly — so a value in the zero band never overclaims.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::random::rng_for;
use crate::tensor::SymmetricTensor;

const GRAD_TOL: f64 = 1e-10;
const MAX_ITERS: usize = 5000;
const ARMIJO_SLOPE: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct HEigenPair {
    pub lambda: f64,
    pub x: Vec<f64>,
    /// ‖A x^{m−1} − λ·x^{[m−1]}‖∞, recomputed after refinement.
    pub kkt_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeStatus {
    Positive,
    ZeroBoundary,
    NegativeWitness,
}

impl ProbeStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProbeStatus::Positive => "positive",
            ProbeStatus::ZeroBoundary => "zero_boundary",
            ProbeStatus::NegativeWitness => "negative_witness",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub min_value: f64,
    pub argmin: Vec<f64>,
    pub status: ProbeStatus,
    pub restarts_used: usize,
}

/// Default restart budget: 8·n.
pub fn default_restarts(n: usize) -> usize {
    8 * n
}

fn m_norm(x: &[f64], m: usize) -> f64 {
    x.iter().map(|&v| v.powi(m as i32)).sum::<f64>()
}

/// Radial projection onto {Σ xᵢᵐ = 1} (even m). None for x ≈ 0.
fn project_m_sphere(x: &[f64], m: usize) -> Option<Vec<f64>> {
    let s = m_norm(x, m);
    if s <= 0.0 || !s.is_finite() {
        return None;
    }
    let scale = s.powf(-1.0 / m as f64);
    Some(x.iter().map(|&v| v * scale).collect())
}

/// Euclidean projection onto the standard simplex {x ≥ 0, Σx = 1}.
fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|&v| (v - theta).max(0.0)).collect()
}

/// Multi-start starting points: half uniform in the cube, half coordinate
/// vectors and random sign patterns, each restart on its own seed stream.
fn start_point(n: usize, seed: u64, idx: usize, total: usize, nonneg: bool) -> Vec<f64> {
    let mut rng = rng_for(seed, idx as u64 + 1);
    if idx < total / 2 {
        (0..n)
            .map(|_| {
                let v: f64 = rng.gen_range(-1.0..1.0);
                if nonneg {
                    v.abs()
                } else {
                    v
                }
            })
            .collect()
    } else {
        let which = idx - total / 2;
        if which < 2 * n && !nonneg {
            let mut x = vec![0.0; n];
            x[which / 2] = if which % 2 == 0 { 1.0 } else { -1.0 };
            x
        } else if which < n && nonneg {
            let mut x = vec![0.0; n];
            x[which] = 1.0;
            x
        } else {
            (0..n)
                .map(|_| {
                    let s: f64 = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    if nonneg {
                        1.0
                    } else {
                        s
                    }
                })
                .collect()
        }
    }
}

/// One projected-gradient descent on the m-sphere from x0.
fn descend_sphere(a: &SymmetricTensor, x0: &[f64]) -> Option<(f64, Vec<f64>)> {
    let m = a.order();
    let mut x = project_m_sphere(x0, m)?;
    let mut step = 1.0_f64;
    for _ in 0..MAX_ITERS {
        let g = a.grad(&x).ok()?; // ∇f/m
        // constraint normal x^{[m-1]}; remove the normal component
        let c: Vec<f64> = x.iter().map(|&v| v.powi((m - 1) as i32)).collect();
        let cc: f64 = c.iter().map(|v| v * v).sum();
        let gc: f64 = g.iter().zip(&c).map(|(a, b)| a * b).sum();
        let gt: Vec<f64> = g.iter().zip(&c).map(|(&gi, &ci)| gi - gc / cc * ci).collect();
        let gn = gt.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gn <= GRAD_TOL {
            break;
        }
        let d: Vec<f64> = gt.iter().map(|v| -v / gn).collect();
        let f0 = a.eval(&x).ok()?;
        step = (step * 2.0).min(1.0);
        let mut accepted = false;
        while step >= 1e-18 {
            let xt: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            if let Some(xp) = project_m_sphere(&xt, m) {
                if a.eval(&xp).ok()? <= f0 - ARMIJO_SLOPE * step * gn {
                    x = xp;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let f = a.eval(&x).ok()?;
    Some((f, x))
}

/// Newton polish of the KKT system A x^{m−1} = λ x^{[m−1]}, Σxᵢᵐ = 1.
fn newton_refine(a: &SymmetricTensor, x: &mut Vec<f64>, lambda: &mut f64) {
    let n = a.dim();
    let m = a.order();
    let mf = m as f64;
    for _ in 0..25 {
        let g = match a.grad(x) {
            Ok(g) => g,
            Err(_) => return,
        };
        let xm1: Vec<f64> = x.iter().map(|&v| v.powi((m - 1) as i32)).collect();
        let mut fvec = DVector::zeros(n + 1);
        for i in 0..n {
            fvec[i] = g[i] - *lambda * xm1[i];
        }
        fvec[n] = m_norm(x, m) - 1.0;
        let res = fvec.amax();
        if res <= 1e-14 {
            return;
        }
        let hess = match a.hessian(x) {
            Ok(h) => h,
            Err(_) => return,
        };
        let mut jac = DMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                // d/dx_j of (A x^{m-1})_i = ∇²f_ij / m
                jac[(i, j)] = hess[i * n + j] / mf;
            }
            jac[(i, i)] -= *lambda * (mf - 1.0) * x[i].powi((m - 2) as i32);
            jac[(i, n)] = -xm1[i];
            jac[(n, i)] = mf * xm1[i];
        }
        let delta = match jac.lu().solve(&(-fvec)) {
            Some(d) => d,
            None => return,
        };
        let mut xt = x.clone();
        for i in 0..n {
            xt[i] += delta[i];
        }
        let lt = *lambda + delta[n];
        // accept only if the step actually reduces the residual
        let gt = match a.grad(&xt) {
            Ok(g) => g,
            Err(_) => return,
        };
        let mut new_res = (m_norm(&xt, m) - 1.0).abs();
        for i in 0..n {
            new_res = new_res.max((gt[i] - lt * xt[i].powi((m - 1) as i32)).abs());
        }
        if new_res < res {
            *x = xt;
            *lambda = lt;
        } else {
            return;
        }
    }
}

fn kkt_residual(a: &SymmetricTensor, x: &[f64], lambda: f64) -> f64 {
    let m = a.order();
    let g = a.grad(x).expect("shape checked");
    let mut res = (m_norm(x, m) - 1.0).abs();
    for i in 0..x.len() {
        res = res.max((g[i] - lambda * x[i].powi((m - 1) as i32)).abs());
    }
    res
}

/// Smallest H-eigenvalue (even m): minimize A xᵐ over Σxᵢᵐ = 1.
pub fn min_h_eigenvalue(
    a: &SymmetricTensor,
    restarts: usize,
    seed: u64,
) -> Result<HEigenPair> {
    if a.order() % 2 != 0 {
        return Err(Error::OddOrder("min_h_eigenvalue"));
    }
    assert!(restarts >= 1);
    let n = a.dim();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for idx in 0..restarts {
        let x0 = start_point(n, seed, idx, restarts, false);
        if let Some((f, x)) = descend_sphere(a, &x0) {
            if best.as_ref().map_or(true, |(bf, _)| f < *bf) {
                best = Some((f, x));
            }
        }
    }
    let (mut lambda, mut x) = best.expect("coordinate starts always project");
    newton_refine(a, &mut x, &mut lambda);
    lambda = a.eval(&x)?; // λ = A xᵐ on the m-sphere
    Ok(HEigenPair {
        kkt_residual: kkt_residual(a, &x, lambda),
        lambda,
        x,
    })
}

fn classify(a: &SymmetricTensor, min_value: f64, argmin: &[f64]) -> ProbeStatus {
    let margin = 1e-8 * a.scale().max(1e-300);
    if min_value > margin {
        ProbeStatus::Positive
    } else if min_value < 0.0 && a.eval(argmin).map_or(false, |v| v < 0.0) {
        ProbeStatus::NegativeWitness
    } else {
        ProbeStatus::ZeroBoundary
    }
}

/// Numeric PD probe: minimum of A xᵐ over the m-sphere. A `Positive`
/// verdict is a probe outcome, not a certificate; only the negative
/// witness direction is exactly re-checkable.
pub fn numeric_pd_check(a: &SymmetricTensor, restarts: usize, seed: u64) -> Result<ProbeReport> {
    if a.order() % 2 != 0 {
        return Err(Error::OddOrder("numeric_pd_check"));
    }
    if a.scale() == 0.0 {
        return Ok(ProbeReport {
            min_value: 0.0,
            argmin: {
                let mut x = vec![0.0; a.dim()];
                x[0] = 1.0;
                x
            },
            status: ProbeStatus::ZeroBoundary,
            restarts_used: 0,
        });
    }
    let pair = min_h_eigenvalue(a, restarts, seed)?;
    Ok(ProbeReport {
        status: classify(a, pair.lambda, &pair.x),
        min_value: pair.lambda,
        argmin: pair.x,
        restarts_used: restarts,
    })
}

/// One projected-gradient descent on the simplex from x0.
fn descend_simplex(a: &SymmetricTensor, x0: &[f64]) -> Option<(f64, Vec<f64>)> {
    let mut x = project_simplex(x0);
    let m = a.order() as f64;
    let mut step = 1.0_f64;
    for _ in 0..MAX_ITERS {
        let g: Vec<f64> = a.grad(&x).ok()?.iter().map(|v| v * m).collect();
        let f0 = a.eval(&x).ok()?;
        step = (step * 2.0).min(1.0);
        let mut accepted = false;
        while step >= 1e-18 {
            let y: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
            let xp = project_simplex(&y);
            let moved: f64 = x
                .iter()
                .zip(&xp)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if moved <= GRAD_TOL {
                return Some((f0, x));
            }
            if a.eval(&xp).ok()? <= f0 - ARMIJO_SLOPE / step * moved * moved {
                x = xp;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let f = a.eval(&x).ok()?;
    Some((f, x))
}

/// Simplex grid points with coordinates in steps of 1/grid.
fn grid_sweep(a: &SymmetricTensor, grid: u32) -> Option<(f64, Vec<f64>)> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for alpha in crate::multi_index::multi_indices(a.dim(), grid) {
        let x: Vec<f64> = alpha
            .exponents()
            .iter()
            .map(|&e| e as f64 / grid as f64)
            .collect();
        let f = a.eval(&x).ok()?;
        if best.as_ref().map_or(true, |(bf, _)| f < *bf) {
            best = Some((f, x));
        }
    }
    best
}

/// Minimum of A xᵐ over the standard simplex: multi-start projected
/// gradient plus a step-1/8 grid sweep whose best point seeds one more
/// descent.
pub fn copositive_min(a: &SymmetricTensor, restarts: usize, seed: u64) -> Result<ProbeReport> {
    assert!(restarts >= 1);
    let n = a.dim();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let consider = |cand: Option<(f64, Vec<f64>)>, best: &mut Option<(f64, Vec<f64>)>| {
        if let Some((f, x)) = cand {
            if best.as_ref().map_or(true, |(bf, _)| f < *bf) {
                *best = Some((f, x));
            }
        }
    };
    for idx in 0..restarts {
        let x0 = start_point(n, seed, idx, restarts, true);
        consider(descend_simplex(a, &x0), &mut best);
    }
    if let Some((f, x)) = grid_sweep(a, 8) {
        consider(Some((f, x.clone())), &mut best);
        consider(descend_simplex(a, &x), &mut best);
    }
    let (min_value, argmin) = best.expect("grid sweep always yields a point");
    Ok(ProbeReport {
        status: classify(a, min_value, &argmin),
        min_value,
        argmin,
        restarts_used: restarts,
    })
}

/// Strict copositivity probe: simplex minimum above the relative margin.
/// Homogeneity turns the simplex bound into A xᵐ ≥ δ‖x‖ᵐ on the orthant.
pub fn strict_cop_check(a: &SymmetricTensor, restarts: usize, seed: u64) -> Result<bool> {
    Ok(copositive_min(a, restarts, seed)?.status == ProbeStatus::Positive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::MultiIndex;
    use crate::tensor::{from_weighted_powers, rank_one_pow, DecompositionList};
    use approx::assert_relative_eq;

    fn diagonal_tensor(m: usize, n: usize) -> SymmetricTensor {
        let mut a = SymmetricTensor::zero(m, n);
        for i in 0..n {
            let mut e = vec![0u32; n];
            e[i] = m as u32;
            a.set(MultiIndex::new(e), 1.0).unwrap();
        }
        a
    }

    #[test]
    fn diagonal_eigenvalue_is_one() {
        let a = diagonal_tensor(4, 3);
        let pair = min_h_eigenvalue(&a, 8, 1).unwrap();
        assert_relative_eq!(pair.lambda, 1.0, max_relative = 1e-8);
        assert!(pair.kkt_residual <= 1e-8);
    }

    #[test]
    fn rank_one_boundary_eigenvalue() {
        let a = rank_one_pow(&[1.0, 0.0], 4);
        let pair = min_h_eigenvalue(&a, 16, 3).unwrap();
        assert!(pair.lambda.abs() <= 1e-9, "lambda = {}", pair.lambda);
    }

    #[test]
    fn odd_order_rejected() {
        let a = SymmetricTensor::zero(3, 2);
        assert!(min_h_eigenvalue(&a, 4, 0).is_err());
        assert!(numeric_pd_check(&a, 4, 0).is_err());
    }

    #[test]
    fn negative_power_witnessed() {
        let u = [1.0, 2.0];
        let a = rank_one_pow(&u, 4).scaled(-1.0);
        let report = numeric_pd_check(&a, 16, 5).unwrap();
        assert_eq!(report.status, ProbeStatus::NegativeWitness);
        assert!(a.eval(&report.argmin).unwrap() < 0.0);
    }

    #[test]
    fn zero_tensor_probes() {
        let z = SymmetricTensor::zero(4, 2);
        assert_eq!(
            numeric_pd_check(&z, 4, 0).unwrap().status,
            ProbeStatus::ZeroBoundary
        );
        assert_eq!(
            copositive_min(&z, 4, 0).unwrap().status,
            ProbeStatus::ZeroBoundary
        );
    }

    #[test]
    fn simplex_minimum_of_ones_power() {
        // (Σ xᵢ)ᵐ = 1 on the whole simplex
        let a = rank_one_pow(&[1.0, 1.0, 1.0], 4);
        let report = copositive_min(&a, 8, 2).unwrap();
        assert_relative_eq!(report.min_value, 1.0, max_relative = 1e-9);
        assert!(strict_cop_check(&a, 8, 2).unwrap());
    }

    #[test]
    fn simplex_negative_diagonal_witnessed() {
        let mut a = diagonal_tensor(4, 3);
        a.set(MultiIndex::new(vec![4, 0, 0]), -1.0).unwrap();
        let report = copositive_min(&a, 8, 4).unwrap();
        assert_eq!(report.status, ProbeStatus::NegativeWitness);
        assert!(report.min_value <= -1.0 + 1e-9);
        assert!(!strict_cop_check(&a, 8, 4).unwrap());
    }

    #[test]
    fn rank_one_e1_not_strictly_copositive() {
        let a = rank_one_pow(&[1.0, 0.0], 4);
        assert!(!strict_cop_check(&a, 8, 6).unwrap());
        assert!(strict_cop_check(&rank_one_pow(&[1.0, 1.0], 4), 8, 6).unwrap());
    }

    #[test]
    fn cd_tensor_eigenvalue_nonnegative() {
        let dec = DecompositionList::new(
            vec![vec![1.0, 0.5, -0.25], vec![0.0, 1.0, 1.0], vec![1.0, -1.0, 0.0]],
            Some(vec![1.0, 0.5, 2.0]),
        );
        let a = from_weighted_powers(&dec, 4, 3);
        let pair = min_h_eigenvalue(&a, 24, 7).unwrap();
        assert!(pair.lambda >= -1e-8 * a.scale());
    }

    #[test]
    fn determinism() {
        let a = diagonal_tensor(4, 3);
        let p1 = numeric_pd_check(&a, 8, 9).unwrap();
        let p2 = numeric_pd_check(&a, 8, 9).unwrap();
        assert_eq!(p1.min_value, p2.min_value);
        assert_eq!(p1.argmin, p2.argmin);
    }
}
