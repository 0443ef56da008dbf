//! The example state families as truncated density matrices, plus exact
//! first/second moment extraction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{
    self, annihilator, creator, identity, tensor, trace_against_product, BipartiteOperator,
    CMat, CVec, FockOperator, ONE,
};

/// Two-mode density matrix together with the trace mass lost to truncation.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    carrier: BipartiteOperator,
    trace_deficit: f64,
}

impl DensityOperator {
    /// Wraps a user-supplied carrier. Hermiticity is required up front;
    /// positivity is a numerical property checked by `min_eigenvalue`.
    pub fn from_carrier(carrier: BipartiteOperator) -> Result<Self> {
        if !carrier.is_hermitian(1e-10) {
            return Err(Error::InvalidParameter {
                name: "carrier",
                reason: "density matrix must be Hermitian".into(),
            });
        }
        let deficit = 1.0 - carrier.trace().re;
        Ok(Self { carrier, trace_deficit: deficit })
    }

    /// Internal constructor for states built by quadrature: symmetrizes the
    /// tiny accumulation asymmetry so the Hermiticity invariant is exact.
    pub(crate) fn new_hermitized(carrier: BipartiteOperator) -> Self {
        let sym = (carrier.matrix() + carrier.matrix().adjoint()).map(|z| z * 0.5);
        let carrier = BipartiteOperator::from_matrix(carrier.dim(), sym)
            .expect("symmetrized carrier keeps its shape");
        let deficit = 1.0 - carrier.trace().re;
        Self { carrier, trace_deficit: deficit }
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn carrier(&self) -> &BipartiteOperator {
        &self.carrier
    }

    pub fn trace(&self) -> f64 {
        self.carrier.trace().re
    }

    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    pub fn purity(&self) -> f64 {
        let m = self.carrier.matrix();
        (m * m).trace().re
    }

    /// Smallest eigenvalue of the (Hermitian) carrier.
    pub fn min_eigenvalue(&self) -> f64 {
        let eig = self.carrier.matrix().clone().symmetric_eigenvalues();
        eig.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// First and centered second moments of the two modes.
/// Conjugacy invariants: cov_ab_dag = conj(cov_adag_b), cov_adag_bdag = conj(cov_ab).
#[derive(Clone, Copy, Debug)]
pub struct GaussianMoments {
    pub mean_a: Complex64,
    pub mean_b: Complex64,
    pub cov_ab: Complex64,        // ⟨Δab⟩
    pub cov_adag_b: Complex64,    // ⟨Δa†b⟩
    pub cov_ab_dag: Complex64,    // ⟨Δab†⟩
    pub cov_adag_bdag: Complex64, // ⟨Δa†b†⟩
    pub cov_na: Complex64,        // ⟨Δa†a⟩
    pub cov_nb: Complex64,        // ⟨Δb†b⟩
    pub cov_aa: Complex64,        // ⟨Δa²⟩
    pub cov_bb: Complex64,        // ⟨Δb²⟩
}

impl GaussianMoments {
    /// Largest violation of the conjugacy/reality invariants.
    pub fn conjugacy_residual(&self) -> f64 {
        let r1 = (self.cov_ab_dag - self.cov_adag_b.conj()).norm();
        let r2 = (self.cov_adag_bdag - self.cov_ab.conj()).norm();
        let r3 = self.cov_na.im.abs();
        let r4 = self.cov_nb.im.abs();
        r1.max(r2).max(r3).max(r4)
    }
}

fn check_unit_interval(name: &'static str, x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must lie in [0, 1), got {x}"),
        });
    }
    Ok(())
}

/// Twin-beam (two-mode squeezed vacuum):
/// R = (1−λ²) Σ λ^{n+m} |nn⟩⟨mm|, truncated at d.
pub fn twin_beam(lambda: f64, d: usize) -> Result<DensityOperator> {
    check_unit_interval("lambda", lambda)?;
    let norm = 1.0 - lambda * lambda;
    let mut m = CMat::zeros(d * d, d * d);
    // rank-one in the |nn⟩ sector
    for n in 0..d {
        for k in 0..d {
            m[(n * d + n, k * d + k)] =
                Complex64::new(norm * lambda.powi((n + k) as i32), 0.0);
        }
    }
    let carrier = BipartiteOperator::from_matrix(d, m)?;
    Ok(DensityOperator {
        carrier,
        trace_deficit: lambda.powi(2 * d as i32),
    })
}

/// Coherent-state Fock coefficients γⁿ/√n! without the e^{−|γ|²/2} factor.
fn bare_coherent_vector(gamma: Complex64, d: usize) -> CVec {
    let mut v = CVec::zeros(d);
    let mut c = ONE;
    for n in 0..d {
        v[n] = c;
        c *= gamma / ((n + 1) as f64).sqrt();
    }
    v
}

/// Normalized coherent-state vector on the truncated space (deficit not
/// renormalized away).
pub fn coherent_vector(gamma: Complex64, d: usize) -> CVec {
    let g = (-0.5 * gamma.norm_sqr()).exp();
    bare_coherent_vector(gamma, d).map(|z| z * g)
}

/// Gauss–Laguerre nodes and weights (weight e^{−t} on [0, ∞)) by Newton
/// iteration on the L_n recurrence. Golub–Welsch via a dense symmetric
/// eigensolver is not an option here: the tail weights are ~e^{−t_max} and a
/// QR-based solver only gets eigenvector components to absolute precision,
/// which turns the high radial moments into noise.
pub(crate) fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let mut x = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    let mut z = 0.0f64;
    for i in 0..n {
        // standard starting guesses, then Newton on L_n(z) = 0
        if i == 0 {
            z = 3.0 / (1.0 + 2.4 * nf);
        } else if i == 1 {
            z += 15.0 / (1.0 + 2.5 * nf);
        } else {
            let ai = (i - 1) as f64;
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - x[i - 2]);
        }
        let mut pp = 0.0;
        let mut p2 = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0f64;
            p2 = 0.0;
            for k in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * k as f64 + 1.0 - z) * p2 - k as f64 * p3) / (k as f64 + 1.0);
            }
            pp = nf * (p1 - p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-14 * z.abs() {
                break;
            }
        }
        x[i] = z;
        w[i] = -1.0 / (pp * nf * p2);
    }
    (x, w)
}

/// Thermal light split on a balanced beam splitter:
/// R = ∫ d²γ/(πσ²) e^{−|γ|²/σ²} |γ⟩⟨γ| ⊗ |γ⟩⟨γ|.
///
/// Realized by Gauss–Laguerre quadrature in the radial variable (with the
/// full e^{−(1+2σ²)|γ|²/σ²} weight — mixture plus one e^{−|γ|²} per mode —
/// absorbed into the rule, which makes the
/// radial part exact for d ≤ quad_points) and uniform-angle trapezoid, which
/// is exact once quad_points ≥ 2d−1.
pub fn split_thermal(sigma2: f64, d: usize, quad_points: usize) -> Result<DensityOperator> {
    if sigma2 < 0.0 || !sigma2.is_finite() {
        return Err(Error::InvalidParameter {
            name: "sigma2",
            reason: format!("variance must be ≥ 0, got {sigma2}"),
        });
    }
    if sigma2 == 0.0 {
        let vac = fock::fock_projector(0, d)?;
        return product_state(&vac, &vac);
    }
    let needed = (2 * d).saturating_sub(1).max(8);
    if quad_points < needed {
        return Err(Error::Quadrature(format!(
            "quad_points = {quad_points} below the {needed} required for dim {d}"
        )));
    }
    let (nodes, weights) = gauss_laguerre(quad_points);
    let n_theta = quad_points;
    let d2 = d * d;
    let mut acc = CMat::zeros(d2, d2);
    let scale = 1.0 / ((1.0 + 2.0 * sigma2) * n_theta as f64);
    for (u, w) in nodes.iter().zip(weights.iter()) {
        let r = (sigma2 * u / (1.0 + 2.0 * sigma2)).sqrt();
        for j in 0..n_theta {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
            let gamma = Complex64::from_polar(r, theta);
            let c = bare_coherent_vector(gamma, d);
            let v: CVec = c.kronecker(&c);
            let wt = Complex64::new(w * scale, 0.0);
            // acc += wt · v v†
            acc.gerc(wt, &v, &v, ONE);
        }
    }
    let carrier = BipartiteOperator::from_matrix(d, acc)?;
    Ok(DensityOperator::new_hermitized(carrier))
}

/// Tensor product of two single-mode density matrices.
pub fn product_state(rho: &FockOperator, sigma: &FockOperator) -> Result<DensityOperator> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "product state factors: {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let carrier = tensor(rho, sigma)?;
    DensityOperator::from_carrier(carrier)
}

/// Perfectly photon-number-correlated mixture:
/// R = (1−λ) Σ λⁿ |nn⟩⟨nn|.
pub fn correlated_fock(lambda: f64, d: usize) -> Result<DensityOperator> {
    check_unit_interval("lambda", lambda)?;
    let mut m = CMat::zeros(d * d, d * d);
    for n in 0..d {
        m[(n * d + n, n * d + n)] =
            Complex64::new((1.0 - lambda) * lambda.powi(n as i32), 0.0);
    }
    let carrier = BipartiteOperator::from_matrix(d, m)?;
    Ok(DensityOperator {
        carrier,
        trace_deficit: lambda.powi(d as i32),
    })
}

/// Single-mode vacuum projector.
pub fn vacuum_single(d: usize) -> Result<FockOperator> {
    fock::fock_projector(0, d)
}

/// Single-mode thermal state with mean photon number nbar.
pub fn thermal_single(nbar: f64, d: usize) -> Result<FockOperator> {
    if nbar < 0.0 || !nbar.is_finite() {
        return Err(Error::InvalidParameter {
            name: "nbar",
            reason: format!("mean photon number must be ≥ 0, got {nbar}"),
        });
    }
    let p = nbar / (nbar + 1.0);
    let mut m = CMat::zeros(d, d);
    for n in 0..d {
        m[(n, n)] = Complex64::new(p.powi(n as i32) / (nbar + 1.0), 0.0);
    }
    FockOperator::from_matrix(m)
}

/// Single-mode coherent state |γ⟩⟨γ| on the truncated space.
pub fn coherent_single(gamma: Complex64, d: usize) -> Result<FockOperator> {
    let v = coherent_vector(gamma, d);
    let m = &v * v.adjoint();
    FockOperator::from_matrix(m)
}

/// Raw and centered moments by tracing against the mode operators.
pub fn moments_of(state: &DensityOperator) -> Result<GaussianMoments> {
    let d = state.dim();
    let a = annihilator(d)?;
    let ad = creator(d)?;
    let id = identity(d)?;
    let r = state.carrier();

    let t = |x: &FockOperator, y: &FockOperator| trace_against_product(r, x, y);

    let mean_a = t(&a, &id)?;
    let mean_b = t(&id, &a)?;
    let ab = t(&a, &a)?;
    let adag_b = t(&ad, &a)?;
    let ab_dag = t(&a, &ad)?;
    let adag_bdag = t(&ad, &ad)?;
    let na = t(&ad.mul(&a)?, &id)?;
    let nb = t(&id, &ad.mul(&a)?)?;
    let aa = t(&a.mul(&a)?, &id)?;
    let bb = t(&id, &a.mul(&a)?)?;

    Ok(GaussianMoments {
        mean_a,
        mean_b,
        cov_ab: ab - mean_a * mean_b,
        cov_adag_b: adag_b - mean_a.conj() * mean_b,
        cov_ab_dag: ab_dag - mean_a * mean_b.conj(),
        cov_adag_bdag: adag_bdag - mean_a.conj() * mean_b.conj(),
        cov_na: na - Complex64::new(mean_a.norm_sqr(), 0.0),
        cov_nb: nb - Complex64::new(mean_b.norm_sqr(), 0.0),
        cov_aa: aa - mean_a * mean_a,
        cov_bb: bb - mean_b * mean_b,
    })
}

/// Mean total photon number Tr[R (a†a + b†b)].
pub fn mean_total_photons(state: &DensityOperator) -> Result<f64> {
    let d = state.dim();
    let num = fock::number_operator(d)?;
    let id = identity(d)?;
    let na = trace_against_product(state.carrier(), &num, &id)?;
    let nb = trace_against_product(state.carrier(), &id, &num)?;
    Ok((na + nb).re)
}
