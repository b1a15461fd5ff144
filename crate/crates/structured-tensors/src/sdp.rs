//! Dense symmetric linear algebra and a small semidefinite feasibility
//! engine.
//!
//! The engine never declares infeasibility: a feasible answer always
//! carries a primal matrix that re-validates with one eigendecomposition,
//! and anything else is `Inconclusive` — non-membership is the caller's
//! job, witnessed by an explicit dual object (see the cones module).
//! Eigendecomposition is cyclic Jacobi: simple and robust at N ≤ 35.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense symmetric matrix, upper-triangle storage. Symmetry is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>, // row-major upper triangle
}

/// Upper-triangle cells (i ≤ j) in row-major order; the shared coordinate
/// system for matrices and affine systems.
pub fn cells(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push((i, j));
        }
    }
    out
}

pub fn cell_count(n: usize) -> usize {
    n * (n + 1) / 2
}

fn cell_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // cells in rows above row i: i·n − i(i−1)/2 = i(2n−i+1)/2
    i * (2 * n - i + 1) / 2 + (j - i)
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; cell_count(n)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[cell_index(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[cell_index(self.n, i, j)] = v;
    }

    pub fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        assert_eq!(n, m.ncols());
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                out.set(i, j, 0.5 * (m[(i, j)] + m[(j, i)]));
            }
        }
        out
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for (idx, &(i, j)) in cells(self.n).iter().enumerate() {
            let w = if i == j { 1.0 } else { 2.0 };
            s += w * self.data[idx] * self.data[idx];
        }
        s.sqrt()
    }

    pub fn scaled(&self, f: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * f).collect(),
        }
    }

    pub fn add_scaled_identity(&self, t: f64) -> SymMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out.set(i, i, out.get(i, i) + t);
        }
        out
    }
}

/// Cyclic Jacobi eigendecomposition. Returns eigenvalues ascending and the
/// matching orthonormal eigenvectors as columns.
pub fn eig_sym(m: &SymMatrix) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.size();
    let mut a = m.to_dmatrix();
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = a.norm().max(1e-300);
    let tol = 1e-14 * norm;
    let max_sweeps = 30;
    let mut converged = n <= 1;
    let mut last_off = 0.0;
    for _sweep in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        last_off = (2.0 * off).sqrt();
        if last_off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::EigNonConvergence {
            sweeps: max_sweeps,
            off: last_off,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        vectors.set_column(col, &v.column(src));
    }
    Ok((eigenvalues, vectors))
}

pub fn min_eigenvalue(m: &SymMatrix) -> Result<f64> {
    Ok(*eig_sym(m)?.0.first().expect("n >= 1"))
}

/// Frobenius-nearest PSD matrix: clip negative eigenvalues.
pub fn project_psd(m: &SymMatrix) -> Result<SymMatrix> {
    let (vals, vecs) = eig_sym(m)?;
    if vals.first().map_or(true, |&l| l >= 0.0) {
        return Ok(m.clone());
    }
    let n = m.size();
    let mut out = DMatrix::<f64>::zeros(n, n);
    for (k, &l) in vals.iter().enumerate() {
        if l > 0.0 {
            let col = vecs.column(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += l * col[i] * col[j];
                }
            }
        }
    }
    Ok(SymMatrix::from_dmatrix(&out))
}

/// Linear map L from SymMatrix(N) to ℝ^K plus target c; each row sums
/// designated cells (off-diagonal cells carry their ordered-pair weight).
/// The least-squares projector onto {L(G)=c} is assembled once.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    n: usize,
    /// K×D row coefficients in cell coordinates.
    a: DMatrix<f64>,
    pub target: DVector<f64>,
    /// A in the √weight-scaled coordinates where Frobenius = ℓ².
    a_s: DMatrix<f64>,
    /// Pseudo-inverse of A_s·A_sᵀ.
    gram_pinv: DMatrix<f64>,
}

impl AffineSystem {
    /// Rows as sparse (cell index, coefficient) lists over `cells(n)`.
    pub fn new(n: usize, rows: &[Vec<(usize, f64)>], target: Vec<f64>) -> Self {
        let d = cell_count(n);
        let k = rows.len();
        assert_eq!(k, target.len());
        let mut a = DMatrix::<f64>::zeros(k, d);
        for (r, row) in rows.iter().enumerate() {
            for &(cell, coeff) in row {
                a[(r, cell)] += coeff;
            }
        }
        let weights: Vec<f64> = cells(n)
            .iter()
            .map(|&(i, j)| if i == j { 1.0_f64 } else { 2.0 })
            .collect();
        let mut a_s = a.clone();
        for c in 0..d {
            let w = weights[c].sqrt();
            for r in 0..k {
                a_s[(r, c)] /= w;
            }
        }
        let gram = &a_s * a_s.transpose();
        let gram_pinv = gram
            .clone()
            .svd(true, true)
            .pseudo_inverse(1e-12 * gram.norm().max(1.0))
            .expect("svd with u and vt");
        AffineSystem {
            n,
            a,
            target: DVector::from_vec(target),
            a_s,
            gram_pinv,
        }
    }

    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    /// Same map, new target (projector reused).
    pub fn with_target(&self, target: Vec<f64>) -> AffineSystem {
        let mut out = self.clone();
        assert_eq!(target.len(), out.a.nrows());
        out.target = DVector::from_vec(target);
        out
    }

    /// L(G): apply each row to the matrix cells.
    pub fn apply(&self, g: &SymMatrix) -> Vec<f64> {
        assert_eq!(g.size(), self.n);
        let cl = cells(self.n);
        (0..self.a.nrows())
            .map(|r| {
                (0..cl.len())
                    .map(|c| {
                        let (i, j) = cl[c];
                        self.a[(r, c)] * g.get(i, j)
                    })
                    .sum()
            })
            .collect()
    }

    /// ‖L(G) − c‖ / max(‖c‖, 1).
    pub fn relative_residual(&self, g: &SymMatrix) -> f64 {
        let lg = self.apply(g);
        let mut err = 0.0;
        for (v, t) in lg.iter().zip(self.target.iter()) {
            err += (v - t) * (v - t);
        }
        err.sqrt() / self.target.norm().max(1.0)
    }

    fn to_s(&self, g: &SymMatrix) -> DVector<f64> {
        let cl = cells(self.n);
        DVector::from_fn(cl.len(), |c, _| {
            let (i, j) = cl[c];
            let w = if i == j { 1.0_f64 } else { 2.0 };
            g.get(i, j) * w.sqrt()
        })
    }

    fn from_s(&self, s: &DVector<f64>) -> SymMatrix {
        let cl = cells(self.n);
        let mut g = SymMatrix::zeros(self.n);
        for (c, &(i, j)) in cl.iter().enumerate() {
            let w = if i == j { 1.0_f64 } else { 2.0 };
            g.set(i, j, s[c] / w.sqrt());
        }
        g
    }

    /// Frobenius-orthogonal projection onto {L(G) = c}.
    pub fn project_affine(&self, g: &SymMatrix) -> SymMatrix {
        let s = self.to_s(g);
        let r = &self.a_s * &s - &self.target;
        let corr = self.a_s.transpose() * (&self.gram_pinv * r);
        self.from_s(&(s - corr))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    Feasible,
    Infeasible,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SdpResiduals {
    pub affine: f64,
    pub cone: f64,
    pub gap: f64,
}

#[derive(Clone, Debug)]
pub struct SdpOutcome {
    pub status: SdpStatus,
    pub primal: Option<SymMatrix>,
    pub dual: Option<Vec<f64>>,
    /// Objective value, for the optimization entry points.
    pub value: Option<f64>,
    pub residuals: SdpResiduals,
}

pub const DEFAULT_SDP_TOL: f64 = 1e-8;
pub const DEFAULT_SDP_MAX_ITER: usize = 50_000;

/// Dykstra alternating projections between {L(G)=c} and the PSD cone.
/// Returns `Feasible` with an affine-exact, eigenvalue-checked G, or
/// `Inconclusive`; never fabricates infeasibility.
pub fn solve_feasibility(sys: &AffineSystem, tol: f64, max_iter: usize) -> Result<SdpOutcome> {
    // pre-scale to unit max coefficient; un-scale the certificate after
    let cmax = sys.target.amax();
    let scale = if cmax > 0.0 { cmax } else { 1.0 };
    let scaled = sys.with_target(sys.target.iter().map(|v| v / scale).collect());

    let mut x = scaled.project_affine(&SymMatrix::zeros(sys.matrix_size()));
    let mut p = SymMatrix::zeros(sys.matrix_size());
    let mut best: Option<(f64, SymMatrix)> = None;

    let check = |g: &SymMatrix| -> Result<(f64, f64)> {
        let lam = min_eigenvalue(g)?;
        let cone = (-lam).max(0.0);
        Ok((cone, scaled.relative_residual(g)))
    };

    let mut iter = 0usize;
    while iter < max_iter {
        // PSD projection with Dykstra correction, then exact affine step
        let mut y = x.clone();
        for (a, b) in y.data.iter_mut().zip(&p.data) {
            *a += b;
        }
        let z = project_psd(&y)?;
        for ((pi, yi), zi) in p.data.iter_mut().zip(&y.data).zip(&z.data) {
            *pi = yi - zi;
        }
        x = scaled.project_affine(&z);
        iter += 1;
        if iter % 25 == 0 || iter == max_iter {
            let (cone, affine) = check(&x)?;
            let ref_scale = x.frobenius().max(1.0);
            if best.as_ref().map_or(true, |(bc, _)| cone < *bc) {
                best = Some((cone, x.clone()));
            }
            if cone <= tol * ref_scale && affine <= tol {
                let g = x.scaled(scale);
                return Ok(SdpOutcome {
                    status: SdpStatus::Feasible,
                    residuals: SdpResiduals {
                        affine: sys.relative_residual(&g),
                        cone: cone * scale,
                        gap: 0.0,
                    },
                    primal: Some(g),
                    dual: None,
                    value: None,
                });
            }
        }
    }
    let (cone, g) = best.map_or((f64::INFINITY, x), |(c, g)| (c, g));
    let g = g.scaled(scale);
    Ok(SdpOutcome {
        status: SdpStatus::Inconclusive,
        residuals: SdpResiduals {
            affine: sys.relative_residual(&g),
            cone: cone * scale,
            gap: 0.0,
        },
        primal: Some(g),
        dual: None,
        value: None,
    })
}

/// Largest t with {L(G)=c, G−tI ⪰ 0} certified feasible, by bisection on
/// the substitution H = G − tI. Inconclusive probes count as infeasible,
/// so the returned (t, G) is always on the certified side.
pub fn max_min_eig(sys: &AffineSystem, tol: f64) -> Result<(f64, SymMatrix)> {
    let probe_iter = 6_000;
    let l_identity = sys.apply(&SymMatrix::identity(sys.matrix_size()));
    let feasible_at = |t: f64| -> Result<Option<SymMatrix>> {
        let target: Vec<f64> = sys
            .target
            .iter()
            .zip(&l_identity)
            .map(|(c, li)| c - t * li)
            .collect();
        let shifted = sys.with_target(target);
        let out = solve_feasibility(&shifted, tol, probe_iter)?;
        Ok(match out.status {
            SdpStatus::Feasible => Some(out.primal.expect("feasible").add_scaled_identity(t)),
            _ => None,
        })
    };

    let base = feasible_at(0.0)?.ok_or_else(|| {
        Error::InfeasibleBase("no PSD Gram matrix found for the base system".into())
    })?;
    let mut t_lo = 0.0;
    let mut g_lo = base;
    // bracket: grow until infeasible, seeded by the base solution's λ_min
    let mut t_hi = (min_eigenvalue(&g_lo)?).max(1e-6) * 2.0;
    let mut expansions = 0;
    loop {
        match feasible_at(t_hi)? {
            Some(g) => {
                t_lo = t_hi;
                g_lo = g;
                t_hi *= 4.0;
                expansions += 1;
                if expansions > 20 {
                    break;
                }
            }
            None => break,
        }
    }
    for _ in 0..30 {
        if t_hi - t_lo <= 1e-3 * t_hi.max(tol) {
            break;
        }
        let mid = 0.5 * (t_lo + t_hi);
        match feasible_at(mid)? {
            Some(g) => {
                t_lo = mid;
                g_lo = g;
            }
            None => t_hi = mid,
        }
    }
    Ok((t_lo, g_lo))
}

/// Moment-structured spectrahedron search: minimize ⟨objective, b⟩ over
/// {b : M(b) ⪰ 0, ‖b‖ = 1}, where row k of `cone_map` ties coefficient
/// b_k to its level set of matrix cells. Alternates a gradient step with
/// PSD projection and level averaging; returns the best certified b (in
/// `dual`) with its objective value, falling back to the best normalized
/// feasible point when every descent value stays nonnegative.
pub fn minimize_linear_over_spectrahedron(
    objective: &[f64],
    cone_map: &AffineSystem,
    seeds: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> Result<SdpOutcome> {
    assert_eq!(objective.len(), cone_map.rows());
    let k = cone_map.rows();
    let n = cone_map.matrix_size();
    let cl = cells(n);
    // level sets: cells touched by each row, and their ordered-pair counts
    let mut level_cells: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut level_count = vec![0.0_f64; k];
    for r in 0..k {
        for (c, &(i, j)) in cl.iter().enumerate() {
            let coeff = cone_map.coeff(r, c);
            if coeff != 0.0 {
                level_cells[r].push(c);
                level_count[r] += if i == j { 1.0 } else { 2.0 };
            }
        }
    }
    let build = |b: &[f64]| -> SymMatrix {
        let mut m = SymMatrix::zeros(n);
        for r in 0..k {
            for &c in &level_cells[r] {
                let (i, j) = cl[c];
                m.set(i, j, b[r]);
            }
        }
        m
    };
    let collapse = |m: &SymMatrix| -> Vec<f64> {
        (0..k)
            .map(|r| {
                let mut s = 0.0;
                for &c in &level_cells[r] {
                    let (i, j) = cl[c];
                    s += m.get(i, j) * if i == j { 1.0 } else { 2.0 };
                }
                s / level_count[r].max(1.0)
            })
            .collect()
    };
    let normalize = |b: &mut Vec<f64>| -> bool {
        let norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-300 {
            return false;
        }
        for v in b.iter_mut() {
            *v /= norm;
        }
        true
    };
    let obj = |b: &[f64]| -> f64 { b.iter().zip(objective).map(|(x, y)| x * y).sum() };

    let mut best: Option<(f64, Vec<f64>, f64)> = None; // (value, b, cone residual)
    let certify = |b: &[f64], best: &mut Option<(f64, Vec<f64>, f64)>| -> Result<()> {
        let m = build(b);
        let scale = m.frobenius().max(1e-300);
        let lam = min_eigenvalue(&m)?;
        if lam >= -tol * scale {
            let v = obj(b);
            if best.as_ref().map_or(true, |(bv, _, _)| v < *bv) {
                *best = Some((v, b.to_vec(), (-lam).max(0.0)));
            }
        }
        Ok(())
    };

    let mut starts: Vec<Vec<f64>> = seeds.to_vec();
    if starts.is_empty() {
        starts.push(objective.iter().map(|v| -v).collect());
    }
    for start in &starts {
        let mut b = start.clone();
        if !normalize(&mut b) {
            continue;
        }
        // settle onto the spectrahedron before descending
        for _ in 0..50 {
            b = collapse(&project_psd(&build(&b))?);
            if !normalize(&mut b) {
                break;
            }
        }
        certify(&b, &mut best)?;
        let onorm = objective.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
        let budget = max_iter / starts.len().max(1);
        for it in 0..budget {
            let eta = 0.5 / (1.0 + it as f64 / 50.0);
            for (bi, oi) in b.iter_mut().zip(objective) {
                *bi -= eta * oi / onorm;
            }
            for _ in 0..3 {
                b = collapse(&project_psd(&build(&b))?);
            }
            if !normalize(&mut b) {
                break;
            }
            if it % 10 == 0 || it + 1 == budget {
                certify(&b, &mut best)?;
            }
        }
    }

    Ok(match best {
        Some((value, b, cone)) => SdpOutcome {
            status: SdpStatus::Feasible,
            primal: Some(build(&b)),
            dual: Some(b),
            value: Some(value),
            residuals: SdpResiduals {
                affine: 0.0,
                cone,
                gap: 0.0,
            },
        },
        None => SdpOutcome {
            status: SdpStatus::Inconclusive,
            primal: None,
            dual: None,
            value: None,
            residuals: SdpResiduals::default(),
        },
    })
}

impl AffineSystem {
    pub fn coeff(&self, row: usize, cell: usize) -> f64 {
        self.a[(row, cell)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn eig_diagonal() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 0, 3.0);
        m.set(1, 1, -1.0);
        m.set(2, 2, 2.0);
        let (vals, _) = eig_sym(&m).unwrap();
        assert_eq!(vals, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_rank_one() {
        let v = [1.0, 2.0, -2.0];
        let mut m = SymMatrix::zeros(3);
        for i in 0..3 {
            for j in i..3 {
                m.set(i, j, v[i] * v[j]);
            }
        }
        let (vals, _) = eig_sym(&m).unwrap();
        assert!(vals[0].abs() < 1e-12 && vals[1].abs() < 1e-12);
        assert_relative_eq!(vals[2], 9.0, max_relative = 1e-12);
    }

    #[test]
    fn eig_reconstructs_random() {
        let mut rng = crate::random::rng_for(31, 0);
        let mut m = SymMatrix::zeros(5);
        for i in 0..5 {
            for j in i..5 {
                m.set(i, j, rng.gen_range(-1.0..1.0));
            }
        }
        let (vals, vecs) = eig_sym(&m).unwrap();
        let lam = DMatrix::from_diagonal(&DVector::from_vec(vals.clone()));
        let rec = &vecs * lam * vecs.transpose();
        assert!((rec - m.to_dmatrix()).norm() <= 1e-10 * m.to_dmatrix().norm());
        // orthonormality
        let eye = vecs.transpose() * &vecs;
        assert!((eye - DMatrix::<f64>::identity(5, 5)).norm() < 1e-10);
    }

    #[test]
    fn psd_projection() {
        let mut neg = SymMatrix::zeros(2);
        neg.set(0, 0, -1.0);
        neg.set(1, 1, -1.0);
        let z = project_psd(&neg).unwrap();
        assert!(z.frobenius() < 1e-14);

        let mut d = SymMatrix::zeros(2);
        d.set(0, 0, 1.0);
        d.set(1, 1, -2.0);
        let p = project_psd(&d).unwrap();
        assert_relative_eq!(p.get(0, 0), 1.0, epsilon = 1e-12);
        assert!(p.get(1, 1).abs() < 1e-12);

        // idempotence on PSD input
        let again = project_psd(&p).unwrap();
        assert!((again.to_dmatrix() - p.to_dmatrix()).norm() < 1e-10);
    }

    fn two_cell_system() -> AffineSystem {
        // G is 2×2; constraints: G00 = 1, G11 = 1, 2*G01 = c
        let n = 2;
        let id = |i, j| cell_index(n, i, j);
        AffineSystem::new(
            n,
            &[
                vec![(id(0, 0), 1.0)],
                vec![(id(1, 1), 1.0)],
                vec![(id(0, 1), 2.0)],
            ],
            vec![1.0, 1.0, 1.0],
        )
    }

    #[test]
    fn feasibility_simple() {
        let sys = two_cell_system();
        let out = solve_feasibility(&sys, 1e-9, 20_000).unwrap();
        assert_eq!(out.status, SdpStatus::Feasible);
        let g = out.primal.unwrap();
        assert!(min_eigenvalue(&g).unwrap() >= -1e-8);
        assert!(sys.relative_residual(&g) <= 1e-8);
    }

    #[test]
    fn feasibility_zero_target() {
        let sys = two_cell_system().with_target(vec![0.0, 0.0, 0.0]);
        let out = solve_feasibility(&sys, 1e-9, 1000).unwrap();
        assert_eq!(out.status, SdpStatus::Feasible);
        assert!(out.primal.unwrap().frobenius() < 1e-8);
    }

    #[test]
    fn feasibility_random_psd_targets() {
        let mut rng = crate::random::rng_for(77, 0);
        for trial in 0..5 {
            let n = 4;
            let mut g0 = DMatrix::<f64>::zeros(n, n);
            for _ in 0..n {
                let v = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0_f64));
                g0 += &v * v.transpose();
            }
            let g0 = SymMatrix::from_dmatrix(&g0);
            // constraints: partial sums of cells (disjoint rows)
            let cl = cells(n);
            let rows: Vec<Vec<(usize, f64)>> = (0..cl.len())
                .map(|c| {
                    let (i, j) = cl[c];
                    vec![(c, if i == j { 1.0 } else { 2.0 })]
                })
                .collect();
            // target from a feasible matrix: K = D here, fully determined
            let probe = AffineSystem::new(n, &rows, vec![0.0; cl.len()]);
            let target = probe.apply(&g0);
            let sys = probe.with_target(target);
            let out = solve_feasibility(&sys, 1e-8, 30_000).unwrap();
            assert_eq!(out.status, SdpStatus::Feasible, "trial {trial}");
        }
    }

    #[test]
    fn max_min_eig_simple() {
        // only diagonal constrained: G00 = 2, G11 = 3; free off-diagonal.
        let n = 2;
        let id = |i, j| cell_index(n, i, j);
        let sys = AffineSystem::new(
            n,
            &[vec![(id(0, 0), 1.0)], vec![(id(1, 1), 1.0)]],
            vec![2.0, 3.0],
        );
        let (t, g) = max_min_eig(&sys, 1e-8).unwrap();
        // optimum is diag(2,3): t* = 2
        assert!((t - 2.0).abs() < 0.05, "t = {t}");
        assert!(min_eigenvalue(&g).unwrap() >= t - 1e-6);

        let zero = sys.with_target(vec![0.0, 0.0]);
        let (t0, _) = max_min_eig(&zero, 1e-8).unwrap();
        assert!(t0.abs() <= 1e-6);
    }

    #[test]
    fn spectrahedron_zero_objective() {
        let sys = two_cell_system();
        let out =
            minimize_linear_over_spectrahedron(&[0.0, 0.0, 0.0], &sys, &[vec![1.0, 1.0, 0.5]], 1e-8, 200)
                .unwrap();
        assert_eq!(out.status, SdpStatus::Feasible);
        assert!(out.value.unwrap().abs() < 1e-12);
    }
}
