//! Cone membership checks with certificates.
//!
//! Trust model: every `In` carries a PSD Gram/moment matrix and every `Out`
//! carries a dual object (separator tensor, squared-polynomial witness,
//! decomposition with a negative weight, or an evaluation point), each
//! re-checkable with one eigendecomposition plus one inner product. Solver
//! stagnation is reported as `Inconclusive`, never converted to a verdict.
//!
//! Conventions: moment / SOS* pairings use raw coefficients (`inner_coeff`
//! on the coefficient embedding); CP/COP and PSD/CD pairings use the
//! multiplicity-weighted `inner_full`. Each report names its convention.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hankel::GeneratingVector;
use crate::multi_index::{multi_indices, multinomial, MultiIndex};
use crate::random::{random_tensor, rng_for, Kind};
use crate::sdp::{
    cells, eig_sym, max_min_eig, min_eigenvalue, minimize_linear_over_spectrahedron,
    solve_feasibility, AffineSystem, SdpStatus, SymMatrix, DEFAULT_SDP_MAX_ITER, DEFAULT_SDP_TOL,
};
use crate::spectral::ProbeStatus;
use crate::tensor::{DecompositionList, SymmetricTensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    In,
    Out,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::In => "In",
            Status::Out => "Out",
            Status::Inconclusive => "Inconclusive",
        }
    }
}

/// Entries of a tensor in serializable form.
#[derive(Clone, Debug, Serialize)]
pub struct TensorData {
    pub order: usize,
    pub dim: usize,
    pub entries: Vec<(Vec<u32>, f64)>,
}

impl TensorData {
    pub fn from_tensor(a: &SymmetricTensor) -> Self {
        TensorData {
            order: a.order(),
            dim: a.dim(),
            entries: a
                .entries()
                .map(|(alpha, &v)| (alpha.exponents().to_vec(), v))
                .collect(),
        }
    }

    pub fn to_tensor(&self) -> Result<SymmetricTensor> {
        let mut a = SymmetricTensor::zero(self.order, self.dim);
        for (alpha, v) in &self.entries {
            a.set(MultiIndex::new(alpha.clone()), *v)?;
        }
        Ok(a)
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum Certificate {
    /// PSD Gram matrix for the (preconditioned) tensor.
    Gram {
        matrix: Vec<Vec<f64>>,
        min_eig: f64,
        affine_residual: f64,
        /// Diagonal variable scaling applied before solving.
        scaling: Vec<f64>,
        /// Interior margin from the SSOS check, when computed.
        t_star: Option<f64>,
    },
    /// PSD moment matrix for a dual-cone member.
    Moment { matrix: Vec<Vec<f64>>, min_eig: f64 },
    /// Dual separator B: M(B) ⪰ 0 and ⟨coeff(A), B⟩ < 0.
    Separator {
        tensor: TensorData,
        pairing: f64,
        moment_min_eig: f64,
        scaling: Vec<f64>,
    },
    /// Squared-polynomial witness against dual membership: cᵀM(B)c < 0.
    SquareWitness { coefficients: Vec<f64>, value: f64 },
    /// Vandermonde decomposition (nodes/weights).
    Decomposition {
        nodes: Vec<f64>,
        weights: Vec<f64>,
        infinity_weight: Option<f64>,
        residual: f64,
    },
    /// Evaluation point witness.
    Witness { vector: Vec<f64>, value: f64 },
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub cone: String,
    pub status: Status,
    pub certificate: Certificate,
    pub residuals: Vec<(String, f64)>,
    pub notes: Vec<String>,
    pub convention: String,
}

impl MembershipReport {
    fn new(cone: &str, convention: &str) -> Self {
        MembershipReport {
            cone: cone.into(),
            status: Status::Inconclusive,
            certificate: Certificate::None,
            residuals: Vec::new(),
            notes: Vec::new(),
            convention: convention.into(),
        }
    }
}

/// All degree-k multi-indices over n variables, graded-lex sorted.
pub fn monomial_basis(n: usize, k: usize) -> Vec<MultiIndex> {
    assert!(n >= 2 && k >= 1);
    multi_indices(n, k as u32)
}

fn sym_to_rows(m: &SymMatrix) -> Vec<Vec<f64>> {
    let n = m.size();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect()
}

/// Gram affine system for an even-order tensor: one row per degree-m
/// multi-index α, Σ_{β+γ=α} G_{βγ} = multinomial(α)·a_α (the polynomial
/// coefficient of x^α in A xᵐ).
pub fn gram_system(a: &SymmetricTensor) -> Result<AffineSystem> {
    if a.order() % 2 != 0 {
        return Err(Error::OddOrder("gram_system"));
    }
    let k = a.order() / 2;
    let basis = monomial_basis(a.dim(), k);
    let n = basis.len();
    let alphas = multi_indices(a.dim(), a.order() as u32);
    let mut row_of = std::collections::BTreeMap::new();
    for (r, alpha) in alphas.iter().enumerate() {
        row_of.insert(alpha.clone(), r);
    }
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); alphas.len()];
    for (cell, &(i, j)) in cells(n).iter().enumerate() {
        let alpha = basis[i].add(&basis[j]);
        let r = row_of[&alpha];
        rows[r].push((cell, if i == j { 1.0 } else { 2.0 }));
    }
    let mut target = Vec::with_capacity(alphas.len());
    for alpha in &alphas {
        target.push(multinomial(alpha)? as f64 * a.get(alpha));
    }
    Ok(AffineSystem::new(n, &rows, target))
}

/// Tensor whose polynomial equals xᵏᵀ G xᵏ (inverse of the Gram map).
pub fn gram_to_tensor(g: &SymMatrix, order: usize, dim: usize) -> Result<SymmetricTensor> {
    let basis = monomial_basis(dim, order / 2);
    assert_eq!(basis.len(), g.size());
    let mut a = SymmetricTensor::zero(order, dim);
    for &(i, j) in &cells(g.size()) {
        let alpha = basis[i].add(&basis[j]);
        let w = if i == j { 1.0 } else { 2.0 };
        let mult = multinomial(&alpha)? as f64;
        a.add_assign(alpha, w * g.get(i, j) / mult)?;
    }
    Ok(a)
}

/// Diagonal preconditioner dᵢ = a_{m·eᵢ}^{−1/m} when positive, else 1.
pub fn precondition_scaling(a: &SymmetricTensor) -> Vec<f64> {
    let m = a.order();
    let n = a.dim();
    (0..n)
        .map(|i| {
            let mut e = vec![0u32; n];
            e[i] = m as u32;
            let d = a.get(&MultiIndex::new(e));
            if d > 0.0 {
                d.powf(-1.0 / m as f64)
            } else {
                1.0
            }
        })
        .collect()
}

/// SOS membership with certificates, after diagonal preconditioning. The
/// Gram certificate is stated for the preconditioned tensor together with
/// the scaling vector (SOS status is invariant under positive diagonal
/// variable scaling).
pub fn check_sos(a: &SymmetricTensor) -> Result<MembershipReport> {
    check_sos_with(a, DEFAULT_SDP_TOL, DEFAULT_SDP_MAX_ITER, 0)
}

pub fn check_sos_with(
    a: &SymmetricTensor,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<MembershipReport> {
    if a.order() % 2 != 0 {
        return Err(Error::OddOrder("check_sos"));
    }
    let mut report = MembershipReport::new("SOS", "coefficient (separator pairing on the coefficient embedding)");
    let d = precondition_scaling(a);
    let scaled = a.scale_variables(&d)?;
    let weighted = scaled.coefficient_embedding()?;
    let a_norm = weighted.norm_coeff().max(1e-300);

    // cheap negative-witness path: a point with A xᵐ < 0 yields the
    // point-mass separator b(x)_α = x^α directly (M(b) = vvᵀ ⪰ 0 exactly)
    let probe = crate::spectral::numeric_pd_check(&scaled, crate::spectral::default_restarts(a.dim()), seed)?;
    if probe.status == ProbeStatus::NegativeWitness {
        if let Some(rep) = separator_from_point(&scaled, &weighted, &probe.argmin, &d, a_norm, tol)? {
            return Ok(rep);
        }
    }

    let sys = gram_system(&scaled)?;
    let out = solve_feasibility(&sys, tol, max_iter)?;
    report
        .residuals
        .push(("affine".into(), out.residuals.affine));
    report.residuals.push(("cone".into(), out.residuals.cone));
    if out.status == SdpStatus::Feasible {
        let g = out.primal.expect("feasible outcome");
        let min_eig = min_eigenvalue(&g)?;
        report.status = Status::In;
        report.certificate = Certificate::Gram {
            matrix: sym_to_rows(&g),
            min_eig,
            affine_residual: out.residuals.affine,
            scaling: d,
            t_star: None,
        };
        return Ok(report);
    }

    // dual separation: minimize ⟨coeff(A), b⟩ over {M(b) ⪰ 0, ‖b‖ = 1}
    let alphas = multi_indices(a.dim(), a.order() as u32);
    let objective: Vec<f64> = alphas.iter().map(|al| weighted.get(al)).collect();
    let mut seeds: Vec<Vec<f64>> = Vec::new();
    seeds.push(point_mass(&alphas, &probe.argmin));
    let mut rng = rng_for(seed, 1001);
    for _ in 0..4 {
        use rand::Rng;
        let x: Vec<f64> = (0..a.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        seeds.push(point_mass(&alphas, &x));
    }
    let search = minimize_linear_over_spectrahedron(&objective, &sys, &seeds, tol, 1500)?;
    if let (Some(b), Some(value)) = (&search.dual, search.value) {
        let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
        if value <= -1e-6 * a_norm * b_norm {
            let mut b_tensor = SymmetricTensor::zero(a.order(), a.dim());
            for (al, &bv) in alphas.iter().zip(b.iter()) {
                b_tensor.set(al.clone(), bv)?;
            }
            let mm = moment_matrix(&b_tensor)?;
            let lam = min_eigenvalue(&mm.matrix)?;
            if lam >= -tol * mm.matrix.frobenius().max(1e-300) {
                report.status = Status::Out;
                report.residuals.push(("pairing".into(), value));
                report.certificate = Certificate::Separator {
                    tensor: TensorData::from_tensor(&b_tensor),
                    pairing: value,
                    moment_min_eig: lam,
                    scaling: d,
                };
                report
                    .notes
                    .push("separator stated for the preconditioned tensor".into());
                return Ok(report);
            }
        }
    }

    report.status = Status::Inconclusive;
    report
        .notes
        .push("projection solver stalled and no separator was certified".into());
    Ok(report)
}

fn point_mass(alphas: &[MultiIndex], x: &[f64]) -> Vec<f64> {
    alphas.iter().map(|al| al.monomial(x)).collect()
}

fn separator_from_point(
    scaled: &SymmetricTensor,
    weighted: &SymmetricTensor,
    x: &[f64],
    d: &[f64],
    a_norm: f64,
    tol: f64,
) -> Result<Option<MembershipReport>> {
    let alphas = multi_indices(scaled.dim(), scaled.order() as u32);
    let b = point_mass(&alphas, x);
    let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if b_norm <= 0.0 {
        return Ok(None);
    }
    let mut b_tensor = SymmetricTensor::zero(scaled.order(), scaled.dim());
    for (al, &bv) in alphas.iter().zip(&b) {
        b_tensor.set(al.clone(), bv / b_norm)?;
    }
    let pairing = weighted.inner_coeff(&b_tensor)?;
    if pairing > -1e-6 * a_norm {
        return Ok(None);
    }
    let mm = moment_matrix(&b_tensor)?;
    let lam = min_eigenvalue(&mm.matrix)?;
    if lam < -tol * mm.matrix.frobenius().max(1e-300) {
        return Ok(None);
    }
    let mut report = MembershipReport::new("SOS", "coefficient (separator pairing on the coefficient embedding)");
    report.status = Status::Out;
    report.residuals.push(("pairing".into(), pairing));
    report.certificate = Certificate::Separator {
        tensor: TensorData::from_tensor(&b_tensor),
        pairing,
        moment_min_eig: lam,
        scaling: d.to_vec(),
    };
    report
        .notes
        .push("point-mass separator from a negative evaluation witness".into());
    Ok(Some(report))
}

/// SSOS (interior of SOS): In iff the max-min-eigenvalue Gram program has
/// t* above tolerance; additionally probes 5 seeded unit perturbation
/// directions at ε = t*/4 and requires check_sos to stay In.
pub fn check_ssos(a: &SymmetricTensor) -> Result<MembershipReport> {
    check_ssos_with(a, DEFAULT_SDP_TOL, 0)
}

pub fn check_ssos_with(a: &SymmetricTensor, tol: f64, seed: u64) -> Result<MembershipReport> {
    if a.order() % 2 != 0 {
        return Err(Error::OddOrder("check_ssos"));
    }
    let mut report = MembershipReport::new("SSOS", "coefficient");
    let d = precondition_scaling(a);
    let scaled = a.scale_variables(&d)?;
    if scaled.scale() == 0.0 {
        report.status = Status::Out;
        report.notes.push("zero tensor lies on the SOS boundary".into());
        return Ok(report);
    }
    let sys = gram_system(&scaled)?;
    let (t_star, g) = match max_min_eig(&sys, tol) {
        Ok(r) => r,
        Err(Error::InfeasibleBase(msg)) => {
            report.status = Status::Inconclusive;
            report.notes.push(format!(
                "base Gram system not certified feasible ({msg}); run check_sos for a separator"
            ));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.residuals.push(("t_star".into(), t_star));
    if t_star <= tol {
        report.status = Status::Out;
        report
            .notes
            .push("SOS representation exists only with a singular Gram matrix (boundary)".into());
        report.certificate = Certificate::Gram {
            matrix: sym_to_rows(&g),
            min_eig: min_eigenvalue(&g)?,
            affine_residual: sys.relative_residual(&g),
            scaling: d,
            t_star: Some(t_star),
        };
        return Ok(report);
    }
    // perturbation stability probe at ε = t*/4 (in Gram-spectral units the
    // coefficient perturbation keeps the shifted Gram matrix PSD)
    let eps = t_star / 4.0;
    let mut stable = true;
    for probe in 0..5u64 {
        use rand::Rng;
        let mut rng = rng_for(seed, 500 + probe);
        let mut e = SymmetricTensor::zero(a.order(), a.dim());
        for alpha in multi_indices(a.dim(), a.order() as u32) {
            e.set(alpha, rng.gen_range(-1.0..1.0))?;
        }
        let e = e.scaled(1.0 / e.norm_coeff().max(1e-300));
        for sign in [1.0, -1.0] {
            let perturbed = scaled.add(&e.scaled(sign * eps))?;
            let rep = check_sos_with(&perturbed, tol, DEFAULT_SDP_MAX_ITER, seed)?;
            if rep.status != Status::In {
                stable = false;
                report.notes.push(format!(
                    "perturbation probe {probe} (sign {sign}) returned {}",
                    rep.status.as_str()
                ));
            }
        }
    }
    report.status = if stable { Status::In } else { Status::Inconclusive };
    report.certificate = Certificate::Gram {
        matrix: sym_to_rows(&g),
        min_eig: min_eigenvalue(&g)?,
        affine_residual: sys.relative_residual(&g),
        scaling: d,
        t_star: Some(t_star),
    };
    Ok(report)
}

/// Moment matrix M(B)_{βγ} = b_{β+γ} over the degree-k basis (raw entries,
/// coefficient convention).
pub struct MomentMatrix {
    pub matrix: SymMatrix,
    pub basis: Vec<MultiIndex>,
}

pub fn moment_matrix(b: &SymmetricTensor) -> Result<MomentMatrix> {
    if b.order() % 2 != 0 {
        return Err(Error::OddOrder("moment_matrix"));
    }
    let basis = monomial_basis(b.dim(), b.order() / 2);
    let n = basis.len();
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, b.get(&basis[i].add(&basis[j])));
        }
    }
    Ok(MomentMatrix { matrix: m, basis })
}

/// Dual-cone membership: In iff λ_min(M(B)) ≥ −tol·‖M‖. Out certificates
/// carry the violating eigenvector c, whose squared polynomial pairs
/// negatively with B.
pub fn check_sos_star(b: &SymmetricTensor) -> Result<MembershipReport> {
    check_sos_star_with(b, DEFAULT_SDP_TOL)
}

pub fn check_sos_star_with(b: &SymmetricTensor, tol: f64) -> Result<MembershipReport> {
    let mut report = MembershipReport::new("SOS*", "coefficient");
    let mm = moment_matrix(b)?;
    let (vals, vecs) = eig_sym(&mm.matrix)?;
    let lam = vals[0];
    let scale = mm.matrix.frobenius().max(1e-300);
    report.residuals.push(("moment_min_eig".into(), lam));
    if lam >= -tol * scale {
        report.status = Status::In;
        report.certificate = Certificate::Moment {
            matrix: sym_to_rows(&mm.matrix),
            min_eig: lam,
        };
    } else {
        let c: Vec<f64> = (0..mm.basis.len()).map(|i| vecs[(i, 0)]).collect();
        report.status = Status::Out;
        report.certificate = Certificate::SquareWitness {
            coefficients: c,
            value: lam,
        };
    }
    Ok(report)
}

/// The coefficient tensor of p² for p = Σ c_β x^β over the degree-k basis;
/// `inner_coeff(square, B)` equals cᵀM(B)c.
pub fn square_poly_tensor(c: &[f64], order: usize, dim: usize) -> SymmetricTensor {
    let basis = monomial_basis(dim, order / 2);
    assert_eq!(basis.len(), c.len());
    let mut t = SymmetricTensor::zero(order, dim);
    for (i, beta) in basis.iter().enumerate() {
        for (j, gamma) in basis.iter().enumerate() {
            t.add_assign(beta.add(gamma), c[i] * c[j]).expect("shape");
        }
    }
    t
}

/// CD membership for Hankel tensors, via Prony. Odd order is trivially In
/// (every odd-order symmetric tensor is a sum of odd powers). Even-order
/// Out verdicts rest on the assertion that a Hankel CD tensor is a
/// complete Hankel tensor, and are labeled as such.
pub fn check_cd_hankel(h: &GeneratingVector) -> Result<MembershipReport> {
    check_cd_hankel_with(h, DEFAULT_SDP_TOL)
}

pub fn check_cd_hankel_with(h: &GeneratingVector, tol: f64) -> Result<MembershipReport> {
    let mut report = MembershipReport::new("CD (Hankel)", "full-index");
    if h.order % 2 != 0 {
        report.status = Status::In;
        report
            .notes
            .push("odd order: every symmetric tensor is completely decomposable".into());
        return Ok(report);
    }
    let dec = match crate::hankel::prony_decompose(h, 1e-6) {
        Ok(d) => d,
        Err(Error::ConfluentNodes(msg)) => {
            report.status = Status::Inconclusive;
            report.notes.push(format!("node recovery failed: {msg}"));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.residuals.push(("prony_residual".into(), dec.residual));
    let wmin = dec
        .weights
        .iter()
        .copied()
        .chain(dec.infinity_weight)
        .fold(f64::INFINITY, f64::min);
    let scale = dec
        .weights
        .iter()
        .copied()
        .chain(dec.infinity_weight)
        .fold(0.0_f64, |a, b| a.max(b.abs()))
        .max(1.0);
    report.certificate = Certificate::Decomposition {
        nodes: dec.nodes.clone(),
        weights: dec.weights.clone(),
        infinity_weight: dec.infinity_weight,
        residual: dec.residual,
    };
    if wmin >= -tol * scale {
        report.status = Status::In;
    } else {
        report.status = Status::Out;
        report.notes.push(
            "under the assertion that a CD Hankel tensor is a complete Hankel tensor".into(),
        );
    }
    Ok(report)
}

/// CP membership by witness: the decomposition must be entrywise ≥ 0 with
/// nonnegative weights; interior additionally needs spanning vectors and a
/// strictly positive minimum coordinate (reported as ε).
pub fn check_cp_witness(dec: &DecompositionList) -> Result<MembershipReport> {
    let mut report = MembershipReport::new("CP (witnessed)", "full-index");
    let nonneg = dec.is_nonnegative() && dec.weights.iter().all(|&w| w >= 0.0);
    if !nonneg {
        report.status = Status::Out;
        report
            .notes
            .push("witness has a negative coordinate or weight; not a CP witness".into());
        return Ok(report);
    }
    report.status = Status::In;
    let eps = dec
        .vectors
        .iter()
        .flat_map(|v| v.iter().copied())
        .fold(f64::INFINITY, f64::min);
    let interior = !dec.is_empty() && crate::hankel::spans(dec) && eps > 0.0;
    report.residuals.push(("epsilon".into(), eps));
    report
        .notes
        .push(if interior { "interior".into() } else { "boundary (not interior)".into() });
    Ok(report)
}

/// Seeded sampling harness over the cone chain CP ⊂ CD ⊂ SOS ⊂ PSD ⊂ COP
/// and the duality pairings. Returns the violations (empty = pass).
#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub samples: usize,
    pub violations: Vec<String>,
}

pub fn cone_chain_harness(m: usize, n: usize, samples: usize, seed: u64) -> Result<HarnessReport> {
    assert!(m % 2 == 0 && m <= 4 && n <= 4);
    let tol = 1e-8;
    let mut violations = Vec::new();
    let restarts = crate::spectral::default_restarts(n);
    for s in 0..samples {
        let sample_seed = seed.wrapping_add(s as u64 * 7919);
        let (cp, _cp_dec) = random_tensor(Kind::Cp, m, n, n + 1, sample_seed);
        let (cd, _cd_dec) = random_tensor(Kind::Cd, m, n, n + 1, sample_seed.wrapping_add(1));
        let (sos, _) = random_tensor(Kind::Sos, m, n, n, sample_seed.wrapping_add(2));

        // chain: CP and CD tensors must be SOS; CP must be copositive
        for (name, t) in [("cp", &cp), ("cd", &cd)] {
            let rep = check_sos_with(t, tol, DEFAULT_SDP_MAX_ITER, sample_seed)?;
            if rep.status != Status::In {
                violations.push(format!(
                    "sample {s} (seed {sample_seed}): {name} tensor not certified SOS ({})",
                    rep.status.as_str()
                ));
            }
        }
        let cop = crate::spectral::copositive_min(&cp, restarts, sample_seed)?;
        if cop.status == ProbeStatus::NegativeWitness {
            violations.push(format!(
                "sample {s} (seed {sample_seed}): cp tensor produced a negative simplex witness"
            ));
        }

        // duality sampling
        // CP vs COP-positive sample (full-index pairing)
        let (cop_sample, _) = random_tensor(Kind::Cp, m, n, n + 1, sample_seed.wrapping_add(3));
        if crate::spectral::copositive_min(&cop_sample, restarts, sample_seed)?.status
            != ProbeStatus::NegativeWitness
        {
            let pairing = cp.inner_full(&cop_sample)?;
            if pairing < -tol {
                violations.push(format!(
                    "sample {s} (seed {sample_seed}): CP–COP pairing negative ({pairing:.3e})"
                ));
            }
        }
        // CD vs PD-probe-positive sample (full-index pairing)
        let pd = crate::spectral::numeric_pd_check(&sos, restarts, sample_seed)?;
        if pd.status == ProbeStatus::Positive {
            let pairing = cd.inner_full(&sos)?;
            if pairing < -tol {
                violations.push(format!(
                    "sample {s} (seed {sample_seed}): CD–PSD pairing negative ({pairing:.3e})"
                ));
            }
        }
        // SOS vs SOS*-certified sample (coefficient pairing)
        let b = cd.coefficient_embedding()?;
        let star = check_sos_star_with(&b, tol)?;
        if star.status == Status::In {
            let pairing = sos.coefficient_embedding()?.inner_coeff(&b)?;
            if pairing < -tol * sos.norm_coeff().max(1.0) * b.norm_coeff().max(1.0) {
                violations.push(format!(
                    "sample {s} (seed {sample_seed}): SOS–SOS* pairing negative ({pairing:.3e})"
                ));
            }
        }
    }
    Ok(HarnessReport {
        samples,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::{build_from_vandermonde, generating_from_hankel, VandermondeDecomposition};
    use crate::tensor::{from_weighted_powers, rank_one_pow};
    use approx::assert_relative_eq;

    #[test]
    fn basis_counts() {
        assert_eq!(
            monomial_basis(2, 2),
            vec![
                MultiIndex::new(vec![2, 0]),
                MultiIndex::new(vec![1, 1]),
                MultiIndex::new(vec![0, 2])
            ]
        );
        assert_eq!(monomial_basis(3, 1).len(), 3);
        assert_eq!(monomial_basis(4, 2).len(), 10);
    }

    #[test]
    fn gram_system_shape_and_roundtrip() {
        let a = rank_one_pow(&[1.0, 0.0], 4);
        let sys = gram_system(&a).unwrap();
        assert_eq!(sys.rows(), 5);
        assert_eq!(sys.matrix_size(), 3);
        // G = vvᵀ with v the degree-2 monomials of u reproduces the tensor
        let mut g = SymMatrix::zeros(3);
        g.set(0, 0, 1.0); // x² cell for u = e₁
        let rec = gram_to_tensor(&g, 4, 2).unwrap();
        assert_eq!(rec, a);
        assert!(sys.relative_residual(&g) < 1e-14);
    }

    #[test]
    fn sos_rank_one_feasible() {
        let a = rank_one_pow(&[1.0, 2.0], 4);
        let rep = check_sos(&a).unwrap();
        assert_eq!(rep.status, Status::In);
        if let Certificate::Gram { min_eig, affine_residual, .. } = rep.certificate {
            assert!(min_eig >= -1e-7);
            assert!(affine_residual <= 1e-7);
        } else {
            panic!("expected Gram certificate");
        }
    }

    #[test]
    fn sos_random_constructed() {
        let (a, _) = random_tensor(Kind::Sos, 4, 3, 3, 17);
        let rep = check_sos(&a).unwrap();
        assert_eq!(rep.status, Status::In);
    }

    #[test]
    fn sos_negative_tensor_separated() {
        // −(x·u)⁴ is certainly not SOS; the eigen witness route fires
        let a = rank_one_pow(&[1.0, -0.5], 4).scaled(-1.0);
        let rep = check_sos(&a).unwrap();
        assert_eq!(rep.status, Status::Out);
        if let Certificate::Separator { tensor, pairing, moment_min_eig, .. } = &rep.certificate {
            assert!(*pairing < 0.0);
            assert!(*moment_min_eig >= -1e-8);
            // independent re-check of the certificate
            let b = tensor.to_tensor().unwrap();
            let mm = moment_matrix(&b).unwrap();
            assert!(min_eigenvalue(&mm.matrix).unwrap() >= -1e-7);
        } else {
            panic!("expected separator");
        }
    }

    #[test]
    fn ssos_diagonal_in_rank_one_out() {
        let mut diag = SymmetricTensor::zero(4, 2);
        diag.set(MultiIndex::new(vec![4, 0]), 1.0).unwrap();
        diag.set(MultiIndex::new(vec![0, 4]), 1.0).unwrap();
        let rep = check_ssos(&diag).unwrap();
        assert_eq!(rep.status, Status::In);

        let boundary = check_ssos(&rank_one_pow(&[1.0, 0.0], 4)).unwrap();
        assert_eq!(boundary.status, Status::Out);

        let zero = check_ssos(&SymmetricTensor::zero(4, 2)).unwrap();
        assert_eq!(zero.status, Status::Out);
    }

    #[test]
    fn moment_matrix_structure() {
        let mut b = SymmetricTensor::zero(4, 2);
        b.set(MultiIndex::new(vec![4, 0]), 1.0).unwrap();
        let mm = moment_matrix(&b).unwrap();
        assert_eq!(mm.matrix.get(0, 0), 1.0);
        let mut total = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                total += mm.matrix.get(i, j).abs();
            }
        }
        assert_eq!(total, 1.0);
        assert!(min_eigenvalue(&mm.matrix).unwrap() >= 0.0);

        let z = moment_matrix(&SymmetricTensor::zero(4, 2)).unwrap();
        assert_eq!(z.matrix.frobenius(), 0.0);
    }

    #[test]
    fn sos_star_checks() {
        // CD tensor's coefficient embedding is in SOS*
        let dec = DecompositionList::new(
            vec![vec![1.0, 0.5], vec![-0.5, 1.0]],
            Some(vec![1.0, 2.0]),
        );
        let b = from_weighted_powers(&dec, 4, 2).coefficient_embedding().unwrap();
        assert_eq!(check_sos_star(&b).unwrap().status, Status::In);

        // negative (2,2) entry gives a negative diagonal moment cell
        let mut bad = SymmetricTensor::zero(4, 2);
        bad.set(MultiIndex::new(vec![2, 2]), -1.0).unwrap();
        let rep = check_sos_star(&bad).unwrap();
        assert_eq!(rep.status, Status::Out);
        if let Certificate::SquareWitness { coefficients, .. } = &rep.certificate {
            // the witness square must pair negatively with B
            let sq = square_poly_tensor(coefficients, 4, 2);
            assert!(sq.inner_coeff(&bad).unwrap() < 0.0);
        } else {
            panic!("expected square witness");
        }

        // zero tensor sits on the boundary, still In
        assert_eq!(
            check_sos_star(&SymmetricTensor::zero(4, 2)).unwrap().status,
            Status::In
        );
    }

    #[test]
    fn cd_hankel_complete_in() {
        let vd = VandermondeDecomposition::exact(vec![1.0, 3.0], vec![2.0, 5.0], 2, 5);
        let h = generating_from_hankel(&build_from_vandermonde(&vd)).unwrap();
        let rep = check_cd_hankel(&h).unwrap();
        assert_eq!(rep.status, Status::In);
    }

    #[test]
    fn cd_hankel_odd_order_trivially_in() {
        let h = GeneratingVector::new(vec![1.0, -5.0, 2.0, 0.5], 3, 2).unwrap();
        assert_eq!(check_cd_hankel(&h).unwrap().status, Status::In);
    }

    #[test]
    fn cp_witness_reports() {
        let good = DecompositionList::new(
            vec![vec![1.0, 0.3], vec![0.3, 1.0]],
            Some(vec![1.0, 1.0]),
        );
        let rep = check_cp_witness(&good).unwrap();
        assert_eq!(rep.status, Status::In);
        assert!(rep.notes.iter().any(|n| n == "interior"));
        assert_relative_eq!(rep.residuals[0].1, 0.3);

        let bad = DecompositionList::new(vec![vec![1.0, -0.1]], None);
        assert_eq!(check_cp_witness(&bad).unwrap().status, Status::Out);

        let thin = DecompositionList::new(vec![vec![1.0, 0.0]], None);
        let rep = check_cp_witness(&thin).unwrap();
        assert_eq!(rep.status, Status::In);
        assert!(rep.notes.iter().any(|n| n.starts_with("boundary")));
    }

    #[test]
    fn harness_small_run_clean() {
        let rep = cone_chain_harness(4, 3, 3, 2024).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    }

    #[test]
    fn trace_identity_for_certified_gram() {
        // inner_coeff(coeff(A), B) == trace(G·M(B)) for Gram-certified A
        let (a, _) = random_tensor(Kind::Sos, 4, 2, 2, 23);
        let rep = check_sos(&a).unwrap();
        let g = match &rep.certificate {
            Certificate::Gram { matrix, scaling, .. } => {
                assert!(scaling.iter().all(|&s| s > 0.0));
                matrix.clone()
            }
            _ => panic!("expected Gram"),
        };
        let (b, _) = random_tensor(Kind::Dense, 4, 2, 0, 29);
        let mm = moment_matrix(&b).unwrap();
        let nb = mm.matrix.size();
        let mut trace = 0.0;
        for i in 0..nb {
            for j in 0..nb {
                trace += g[i][j] * mm.matrix.get(i, j);
            }
        }
        // the certificate is for the preconditioned tensor; rebuild it
        let d = precondition_scaling(&a);
        let scaled = a.scale_variables(&d).unwrap();
        let lhs = scaled.coefficient_embedding().unwrap().inner_coeff(&b).unwrap();
        assert_relative_eq!(lhs, trace, max_relative = 1e-6, epsilon = 1e-7);
    }
}
