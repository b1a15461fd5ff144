//! Hankel tensors: generating vectors, Vandermonde/Prony decomposition,
//! inheritance reshaping, Schur-product decomposition tracking, and the
//! span tests behind the SCD classification.
//!
//! A Hankel tensor's entries depend only on the weighted index sum
//! (0-based: Σᵢ i·αᵢ), so the whole tensor is the generating vector h of
//! length (n−1)m+1. Prony recovery rebalances badly scaled h before rank
//! detection and falls back to head/tail deflation for nodes near zero or
//! at infinity, where the plain annihilating-polynomial fit degenerates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::multi_index::multi_indices;
use crate::tensor::{from_weighted_powers, rank_one_pow, DecompositionList, SymmetricTensor};

/// The generating vector h of a Hankel tensor in S_{m,n}.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingVector {
    pub values: Vec<f64>,
    pub order: usize,
    pub dim: usize,
}

impl GeneratingVector {
    pub fn new(values: Vec<f64>, order: usize, dim: usize) -> Result<Self> {
        let expected = (dim - 1) * order + 1;
        if values.len() != expected {
            return Err(Error::GeneratingVectorLength {
                len: values.len(),
                order,
                dim,
                expected,
            });
        }
        Ok(GeneratingVector { values, order, dim })
    }
}

/// Node/weight representation h_i = Σⱼ αⱼ uⱼ^i, plus an optional weight on
/// the limit node e_n (a "node at infinity", which contributes only to the
/// top generating entry).
#[derive(Clone, Debug, PartialEq)]
pub struct VandermondeDecomposition {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub dim: usize,
    pub order: usize,
    pub infinity_weight: Option<f64>,
    /// Relative reconstruction residual ‖V w − h‖ / ‖h‖ (0 for exact input).
    pub residual: f64,
    /// Numerical rank detected during recovery (nodes.len() for exact input).
    pub rank: usize,
}

impl VandermondeDecomposition {
    pub fn exact(nodes: Vec<f64>, weights: Vec<f64>, order: usize, dim: usize) -> Self {
        let rank = nodes.len();
        VandermondeDecomposition {
            nodes,
            weights,
            dim,
            order,
            infinity_weight: None,
            residual: 0.0,
            rank,
        }
    }

    /// As a plain decomposition list over Vandermonde vectors (incl. e_n).
    pub fn as_decomposition(&self) -> DecompositionList {
        let mut vectors: Vec<Vec<f64>> = self
            .nodes
            .iter()
            .map(|&u| vandermonde_vector(u, self.dim))
            .collect();
        let mut weights = self.weights.clone();
        if let Some(w) = self.infinity_weight {
            let mut e_n = vec![0.0; self.dim];
            e_n[self.dim - 1] = 1.0;
            vectors.push(e_n);
            weights.push(w);
        }
        DecompositionList::new(vectors, Some(weights))
    }
}

/// (1, u, u², …, u^{n−1}).
pub fn vandermonde_vector(u: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let mut v = Vec::with_capacity(n);
    let mut p = 1.0;
    for _ in 0..n {
        v.push(p);
        p *= u;
    }
    v
}

/// Entry at α is h[Σᵢ i·αᵢ] with 0-based variable index i.
pub fn hankel_from_generating(h: &GeneratingVector) -> SymmetricTensor {
    let mut a = SymmetricTensor::zero(h.order, h.dim);
    for alpha in multi_indices(h.dim, h.order as u32) {
        let v = h.values[alpha.hankel_level()];
        if v != 0.0 {
            a.set(alpha, v).expect("shape consistent");
        }
    }
    a
}

/// Inverse of [`hankel_from_generating`]; rejects non-Hankel input when two
/// multi-indices on the same level disagree beyond 1e−12 relative.
pub fn generating_from_hankel(a: &SymmetricTensor) -> Result<GeneratingVector> {
    let len = (a.dim() - 1) * a.order() + 1;
    let mut values = vec![0.0_f64; len];
    let mut seen = vec![false; len];
    let scale = a.scale().max(1e-300);
    for alpha in multi_indices(a.dim(), a.order() as u32) {
        let level = alpha.hankel_level();
        let v = a.get(&alpha);
        if seen[level] {
            if (v - values[level]).abs() > 1e-12 * scale {
                return Err(Error::NotHankel {
                    level,
                    a: values[level],
                    b: v,
                });
            }
        } else {
            values[level] = v;
            seen[level] = true;
        }
    }
    GeneratingVector::new(values, a.order(), a.dim())
}

/// Σⱼ αⱼ·(1,uⱼ,…,uⱼ^{n−1})ᵐ plus the optional infinity term on e_n.
pub fn build_from_vandermonde(v: &VandermondeDecomposition) -> SymmetricTensor {
    let mut a = from_weighted_powers(&v.as_decomposition(), v.order, v.dim);
    if v.nodes.is_empty() && v.infinity_weight.is_none() {
        a = SymmetricTensor::zero(v.order, v.dim);
    }
    a
}

pub fn is_complete_hankel(v: &VandermondeDecomposition) -> bool {
    v.weights.iter().all(|&w| w >= 0.0) && v.infinity_weight.map_or(true, |w| w >= 0.0)
}

fn lstsq(m: &DMatrix<f64>, rhs: &DVector<f64>) -> DVector<f64> {
    m.clone()
        .svd(true, true)
        .solve(rhs, 1e-14)
        .expect("svd computed with u and vt")
}

/// Real roots of the monic polynomial z^r + c_{r−1}z^{r−1} + … + c₀ via the
/// companion matrix. None when any root has a significant imaginary part.
fn real_roots(coeffs: &[f64]) -> Option<Vec<f64>> {
    let r = coeffs.len();
    if r == 0 {
        return Some(Vec::new());
    }
    let mut comp = DMatrix::<f64>::zeros(r, r);
    for i in 1..r {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..r {
        comp[(i, r - 1)] = -coeffs[i];
    }
    let eig = comp.complex_eigenvalues();
    let max_abs = eig.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let mut roots = Vec::with_capacity(r);
    for z in eig.iter() {
        if z.im.abs() > 1e-8 * (1.0 + max_abs) {
            return None;
        }
        roots.push(z.re);
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Some(roots)
}

/// Numerical rank of the square-ish Hankel matrix of the sequence g.
fn hankel_rank(g: &[f64], rank_thresh: f64) -> usize {
    let l = g.len();
    let r1 = (l + 2) / 2;
    let r2 = l + 1 - r1;
    let h = DMatrix::from_fn(r1, r2, |i, j| g[i + j]);
    let sv = h.singular_values();
    let s0 = sv[0];
    if s0 == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_thresh * s0).count()
}

struct Fit {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    residual: f64,
}

fn vandermonde_residual(nodes: &[f64], weights: &[f64], g: &[f64]) -> f64 {
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    let mut err = 0.0;
    for (i, &gi) in g.iter().enumerate() {
        let rec: f64 = nodes
            .iter()
            .zip(weights)
            .map(|(&z, &w)| w * z.powi(i as i32))
            .sum();
        err += (rec - gi) * (rec - gi);
    }
    err.sqrt() / norm
}

/// Plain Prony fit: annihilating polynomial of rank r, root extraction,
/// Vandermonde least squares for the weights.
fn std_fit(g: &[f64], r: usize) -> Option<Fit> {
    let l = g.len();
    if r == 0 {
        return Some(Fit {
            nodes: Vec::new(),
            weights: Vec::new(),
            residual: vandermonde_residual(&[], &[], g),
        });
    }
    if l - r < r {
        return None; // underdetermined annihilator system
    }
    let m = DMatrix::from_fn(l - r, r, |i, k| g[i + k]);
    let rhs = DVector::from_fn(l - r, |i, _| -g[i + r]);
    let p = lstsq(&m, &rhs);
    let nodes = real_roots(p.as_slice())?;
    let v = DMatrix::from_fn(l, r, |i, j| nodes[j].powi(i as i32));
    let gv = DVector::from_column_slice(g);
    let weights = lstsq(&v, &gv);
    let weights: Vec<f64> = weights.iter().copied().collect();
    let residual = vandermonde_residual(&nodes, &weights, g);
    Some(Fit {
        nodes,
        weights,
        residual,
    })
}

/// Tail fit with `s` leading samples deflated into up-to-one extra small
/// node (s=1: node 0; s=2: node ρ₁/ρ₀), the stable route when one node is
/// orders of magnitude below the rest and rank detection truncates it.
fn deflated_fit(g: &[f64], s: usize, rank_thresh: f64) -> Option<Fit> {
    let l = g.len();
    if l < s + 4 {
        return None;
    }
    let tail = &g[s..];
    let rt = hankel_rank(tail, rank_thresh);
    let mut fit = std_fit(tail, rt)?;
    // refit tail-node weights on the tail samples over the full horizon
    let v_tail = DMatrix::from_fn(l - s, fit.nodes.len(), |i, j| fit.nodes[j].powi((i + s) as i32));
    let gt = DVector::from_column_slice(tail);
    let w = lstsq(&v_tail, &gt);
    fit.weights = w.iter().copied().collect();
    let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    // head residuals determine the small node
    let rho: Vec<f64> = (0..s)
        .map(|i| {
            g[i] - fit
                .nodes
                .iter()
                .zip(&fit.weights)
                .map(|(&z, &wj)| wj * z.powi(i as i32))
                .sum::<f64>()
        })
        .collect();
    let (extra_node, extra_weight) = if s == 1 {
        (0.0, rho[0])
    } else {
        if rho[0].abs() < 1e-15 * gnorm {
            return None;
        }
        (rho[1] / rho[0], rho[0])
    };
    let mut nodes = vec![extra_node];
    nodes.extend_from_slice(&fit.nodes);
    let mut weights = vec![extra_weight];
    weights.extend_from_slice(&fit.weights);
    let residual = vandermonde_residual(&nodes, &weights, g);
    Some(Fit {
        nodes,
        weights,
        residual,
    })
}

/// Head fit with the top sample deflated into the node at infinity (e_n),
/// which contributes only to the last generating entry.
fn infinity_fit(g: &[f64], rank_thresh: f64) -> Option<(Fit, f64)> {
    let l = g.len();
    if l < 5 {
        return None;
    }
    let head = &g[..l - 1];
    let rh = hankel_rank(head, rank_thresh);
    let fit = std_fit(head, rh)?;
    let rec_last: f64 = fit
        .nodes
        .iter()
        .zip(&fit.weights)
        .map(|(&z, &w)| w * z.powi((l - 1) as i32))
        .sum();
    let inf_w = g[l - 1] - rec_last;
    // residual over the full horizon with the infinity term absorbed
    let mut g_adj = g.to_vec();
    g_adj[l - 1] -= inf_w;
    let residual = vandermonde_residual(&fit.nodes, &fit.weights, &g_adj);
    Some((
        Fit {
            nodes: fit.nodes,
            weights: fit.weights,
            residual,
        },
        inf_w,
    ))
}

fn check_distinct(nodes: &[f64]) -> Result<()> {
    let max_abs = nodes.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if (nodes[i] - nodes[j]).abs() <= 1e-8 * (1.0 + max_abs) {
                return Err(Error::ConfluentNodes(format!(
                    "nodes {} and {} coincide within tolerance",
                    nodes[i], nodes[j]
                )));
            }
        }
    }
    Ok(())
}

/// Minimal-rank node/weight recovery from a generating vector.
///
/// Balances the sequence (gᵢ = hᵢ·cⁱ with c the endpoint log-midpoint),
/// detects rank by singular-value threshold, tries the plain fit and the
/// deflation fallbacks, and keeps the strategy with the smallest relative
/// residual (a fallback must beat the incumbent by 100× to be preferred).
pub fn prony_decompose(h: &GeneratingVector, tol: f64) -> Result<VandermondeDecomposition> {
    prony_decompose_with(h, tol, 1e-10)
}

pub fn prony_decompose_with(
    h: &GeneratingVector,
    tol: f64,
    rank_thresh: f64,
) -> Result<VandermondeDecomposition> {
    assert!(tol > 0.0 && rank_thresh > 0.0);
    let l = h.values.len();
    let hnorm = h.values.iter().map(|v| v * v).sum::<f64>().sqrt();
    if hnorm == 0.0 {
        return Ok(VandermondeDecomposition {
            nodes: vec![],
            weights: vec![],
            dim: h.dim,
            order: h.order,
            infinity_weight: None,
            residual: 0.0,
            rank: 0,
        });
    }
    // geometric rebalancing: node scaling preserves weights
    let mut c = 1.0_f64;
    if h.values[0] != 0.0 && h.values[l - 1] != 0.0 {
        c = (h.values[0].abs() / h.values[l - 1].abs()).powf(1.0 / (l - 1) as f64);
    }
    let g: Vec<f64> = h
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| v * c.powi(i as i32))
        .collect();

    let r = hankel_rank(&g, rank_thresh);
    let rows = (l + 2) / 2;
    let mut best: Option<Fit> = std_fit(&g, r);
    let mut best_inf: Option<f64> = None;

    let needs_fallback = best.as_ref().map_or(true, |f| f.residual > 1e-13);
    if needs_fallback {
        for s in [1usize, 2] {
            if let Some(fit) = deflated_fit(&g, s, rank_thresh) {
                let better = match &best {
                    None => true,
                    Some(b) => fit.residual < b.residual / 100.0,
                };
                if better {
                    best = Some(fit);
                    best_inf = None;
                    break;
                }
            }
        }
    }
    let still_poor = best.as_ref().map_or(true, |f| f.residual > 1e-13);
    if still_poor {
        if let Some((fit, iw)) = infinity_fit(&g, rank_thresh) {
            let better = match &best {
                None => true,
                Some(b) => fit.residual < b.residual / 100.0,
            };
            if better {
                best = Some(fit);
                best_inf = Some(iw);
            }
        }
    }

    let fit = best.ok_or(Error::RankOverflow { rank: r, rows })?;
    if fit.residual > tol {
        // every strategy failed to explain the sequence with real distinct
        // nodes at this rank; report as confluent/complex rather than hand
        // back a junk decomposition
        return Err(Error::ConfluentNodes(format!(
            "no real-node fit below tolerance (best residual {:.3e})",
            fit.residual
        )));
    }
    // undo the balancing: g-nodes z map to h-nodes z/c, weights unchanged,
    // infinity weight picks up c^{-(l-1)}
    let nodes: Vec<f64> = fit.nodes.iter().map(|&z| z / c).collect();
    check_distinct(&nodes)?;
    let infinity_weight = best_inf.map(|w| w / c.powi((l - 1) as i32));
    Ok(VandermondeDecomposition {
        rank: nodes.len() + usize::from(infinity_weight.is_some()),
        nodes,
        weights: fit.weights,
        dim: h.dim,
        order: h.order,
        infinity_weight,
        residual: fit.residual,
    })
}

/// Reuse h as the generating vector of a tensor of order q·m and dim p,
/// requiring n−1 == (p−1)·q (the inheritance reshape).
pub fn inherit_reshape(h: &GeneratingVector, q: usize, p: usize) -> Result<SymmetricTensor> {
    if q < 2 || p < 3 || h.dim - 1 != (p - 1) * q {
        return Err(Error::InheritanceShape {
            dim: h.dim,
            q,
            p,
        });
    }
    let b = GeneratingVector::new(h.values.clone(), q * h.order, p)?;
    Ok(hankel_from_generating(&b))
}

/// The p·q Hadamard products uᵢ∘vⱼ with weights αᵢβⱼ: a decomposition of
/// the Schur product of the two decomposed tensors.
pub fn schur_decomposed(
    dec_a: &DecompositionList,
    dec_b: &DecompositionList,
) -> Result<DecompositionList> {
    let n = dec_a.dim();
    if n != dec_b.dim() {
        return Err(Error::DimensionMismatch {
            dim: n,
            len: dec_b.dim(),
        });
    }
    let mut vectors = Vec::with_capacity(dec_a.len() * dec_b.len());
    let mut weights = Vec::with_capacity(dec_a.len() * dec_b.len());
    for (u, &a) in dec_a.vectors.iter().zip(&dec_a.weights) {
        for (v, &b) in dec_b.vectors.iter().zip(&dec_b.weights) {
            vectors.push(u.iter().zip(v).map(|(x, y)| x * y).collect());
            weights.push(a * b);
        }
    }
    Ok(DecompositionList::new(vectors, Some(weights)))
}

fn vector_matrix(dec: &DecompositionList) -> DMatrix<f64> {
    DMatrix::from_fn(dec.len(), dec.dim(), |i, j| dec.vectors[i][j])
}

/// True iff the decomposition's vectors span ℝⁿ (σ_min > 1e−10·σ_max).
pub fn spans(dec: &DecompositionList) -> bool {
    assert!(!dec.is_empty());
    let n = dec.dim();
    if dec.len() < n {
        return false;
    }
    let sv = vector_matrix(dec).singular_values();
    let smax = sv[0];
    smax > 0.0 && sv[sv.len() - 1] > 1e-10 * smax && sv.len() >= n
}

/// Unit vector orthogonal to every decomposition vector, when one exists.
pub fn null_direction(dec: &DecompositionList) -> Option<Vec<f64>> {
    assert!(!dec.is_empty());
    if spans(dec) {
        return None;
    }
    let m = vector_matrix(dec);
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let last = vt.nrows() - 1;
    let n = dec.dim();
    let x: Vec<f64> = if vt.nrows() < n {
        // fewer rows than n: complete the row space and take any orthogonal
        // complement direction via full SVD of the stacked matrix
        let mut full = DMatrix::zeros(n, n);
        full.view_mut((0, 0), (vt.nrows(), n)).copy_from(&vt);
        let q = full.svd(false, true).v_t.expect("requested");
        (0..n).map(|j| q[(n - 1, j)]).collect()
    } else {
        (0..n).map(|j| vt[(last, j)]).collect()
    };
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    Some(x.iter().map(|v| v / norm).collect())
}

/// True Hankel test on a tensor (level sets constant).
pub fn is_hankel(a: &SymmetricTensor) -> bool {
    generating_from_hankel(a).is_ok()
}

/// e_n as a rank-one power, order m: the infinity-node tensor.
pub fn infinity_tensor(order: usize, dim: usize) -> SymmetricTensor {
    let mut e_n = vec![0.0; dim];
    e_n[dim - 1] = 1.0;
    rank_one_pow(&e_n, order)
}
