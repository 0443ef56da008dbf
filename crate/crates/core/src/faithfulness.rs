//! The check operator Ř, its singular-spectrum classification, and the
//! Gaussian correlation shortcut.

use nalgebra::{Dyn, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    dket_outer, double_ket, partial_transpose, swap_operator, BipartiteOperator, CMat,
    FockOperator, Mode,
};
use crate::phase_space::characteristic_point;
use crate::states::{DensityOperator, GaussianMoments};

/// Default relative rank tolerance: below every genuine spectrum in the
/// example families at d ≤ 20, above float noise.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Ř together with its cached singular-value decomposition.
pub struct CheckOperator {
    carrier: BipartiteOperator,
    svd: SVD<Complex64, Dyn, Dyn>,
    singular_values: Vec<f64>,
}

impl CheckOperator {
    fn from_carrier(carrier: BipartiteOperator) -> Self {
        let svd = SVD::new(carrier.matrix().clone(), true, true);
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Self { carrier, svd, singular_values: sv }
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn carrier(&self) -> &BipartiteOperator {
        &self.carrier
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }
}

/// Outcome of the SVD classification of Ř on the truncated space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaithfulnessReport {
    pub dim: usize,
    pub rank: usize,
    pub full_rank: bool,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub cond: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    pub method: String,
    pub tol: f64,
}

/// Cross-term coefficients of αβ (A) and αβ* (B) in the exponent of the
/// characteristic function. Convention fixed by the twin-beam and
/// split-thermal families: A = ⟨Δa†b†⟩, B = −⟨Δa†b⟩.
#[derive(Clone, Copy, Debug)]
pub struct GaussianCoefficients {
    pub a: Complex64,
    pub b: Complex64,
}

impl GaussianCoefficients {
    pub fn discriminant(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }
}

/// Ř = (E R)^{τ₂} E, cross-checked against the equivalent (R^{τ₂} E)^{τ₁}.
pub fn check_operator(r: &BipartiteOperator) -> Result<CheckOperator> {
    let d = r.dim();
    let e = swap_operator(d)?;
    let route1 = partial_transpose(&e.mul(r)?, Mode::Second).mul(&e)?;
    let route2 = partial_transpose(&partial_transpose(r, Mode::Second).mul(&e)?, Mode::First);
    let residual = (route1.matrix() - route2.matrix())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if residual > 1e-12 {
        return Err(Error::Inconsistent(format!(
            "the two check-operator routes differ by {residual:.3e}"
        )));
    }
    Ok(CheckOperator::from_carrier(route1))
}

pub fn check_operator_of(state: &DensityOperator) -> Result<CheckOperator> {
    check_operator(state.carrier())
}

/// Ř for a state given as Σ_k A_k ⊗ B_k: returns Σ_k |B_k⟩⟩⟨⟨A_k*|.
pub fn check_from_decomposition(terms: &[(FockOperator, FockOperator)]) -> Result<CheckOperator> {
    let Some(first) = terms.first() else {
        return Err(Error::InvalidParameter {
            name: "terms",
            reason: "decomposition must have at least one term".into(),
        });
    };
    let d = first.0.dim();
    let mut acc = BipartiteOperator::zeros(d)?;
    for (a, b) in terms {
        if a.dim() != d || b.dim() != d {
            return Err(Error::DimensionMismatch("decomposition terms".into()));
        }
        let outer = dket_outer(&double_ket(b), &double_ket(&a.conj()))?;
        acc = acc.add(&outer)?;
    }
    Ok(CheckOperator::from_carrier(acc))
}

/// Numerical-rank classification of Ř: rank counts σᵢ > tol·σ_max.
pub fn classify(checkop: &CheckOperator, tol: f64) -> Result<FaithfulnessReport> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("relative rank tolerance must lie in (0, 1), got {tol}"),
        });
    }
    let sv = checkop.singular_values();
    let d2 = checkop.dim() * checkop.dim();
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let sigma_min = sv.last().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|s| **s > tol * sigma_max).count();
    Ok(FaithfulnessReport {
        dim: checkop.dim(),
        rank,
        full_rank: rank == d2,
        sigma_min,
        sigma_max,
        cond: if sigma_min > 0.0 { sigma_max / sigma_min } else { f64::INFINITY },
        chi: None,
        method: "svd".into(),
        tol,
    })
}

/// SVD pseudo-inverse of Ř; refuses rank-deficient input.
pub fn invert_check(checkop: &CheckOperator, tol: f64) -> Result<BipartiteOperator> {
    let report = classify(checkop, tol)?;
    let d2 = checkop.dim() * checkop.dim();
    if !report.full_rank {
        return Err(Error::NotInvertible { rank: report.rank, full: d2, tol });
    }
    let u = checkop.svd.u.as_ref().expect("svd computed with u");
    let v_t = checkop.svd.v_t.as_ref().expect("svd computed with v_t");
    let mut sinv = CMat::zeros(d2, d2);
    for (i, s) in checkop.svd.singular_values.iter().enumerate() {
        sinv[(i, i)] = Complex64::new(1.0 / s, 0.0);
    }
    let inv = v_t.adjoint() * sinv * u.adjoint();
    BipartiteOperator::from_matrix(checkop.dim(), inv)
}

/// Quadrature covariances entering the correlation functional, in the
/// X = (c + c†)/√2, Y = (c − c†)/(√2 i) normalization (the one that makes
/// the quadrature form of χ numerically identical to the complex form).
fn quadrature_covariances(m: &GaussianMoments) -> [f64; 4] {
    let ab = m.cov_ab;
    let abd = m.cov_ab_dag;
    let adb = m.cov_adag_b;
    let adbd = m.cov_adag_bdag;
    let xx = 0.5 * (ab + abd + adb + adbd).re;
    let yy = -0.5 * (ab - abd - adb + adbd).re;
    let xy = 0.5 * (ab - abd + adb - adbd).im;
    let yx = 0.5 * (ab + abd - adb - adbd).im;
    [xx, yy, xy, yx]
}

/// Correlation functional χ(R) = ⟨Δa†b†⟩⟨Δab⟩ + ⟨Δa†b⟩⟨Δab†⟩, cross-checked
/// against its quadrature form.
pub fn chi(m: &GaussianMoments) -> Result<f64> {
    let residual = m.conjugacy_residual();
    if residual > 1e-8 {
        return Err(Error::ConjugacyViolation(residual));
    }
    let complex_form = m.cov_adag_bdag * m.cov_ab + m.cov_adag_b * m.cov_ab_dag;
    let [xx, yy, xy, yx] = quadrature_covariances(m);
    let quad_form = 0.5 * (xx * xx + yy * yy + xy * xy + yx * yx);
    if (complex_form.re - quad_form).abs() > 1e-10 || complex_form.im.abs() > 1e-10 {
        return Err(Error::Inconsistent(format!(
            "chi quadrature form {quad_form:.12e} vs complex form {complex_form:.12e}"
        )));
    }
    Ok(complex_form.re)
}

/// A/B coefficients by central finite differences of the characteristic
/// function at the origin, with one Richardson refinement, cross-checked
/// against the moment route.
pub fn ab_coefficients(state: &DensityOperator, h: f64) -> Result<GaussianCoefficients> {
    if !(1e-5..=1e-1).contains(&h) {
        return Err(Error::InvalidParameter {
            name: "h",
            reason: format!("finite-difference step must lie in [1e-5, 1e-1], got {h}"),
        });
    }
    let coarse = ab_finite_difference(state, h)?;
    let fine = ab_finite_difference(state, h / 2.0)?;
    let a = (fine.a * 4.0 - coarse.a) / 3.0;
    let b = (fine.b * 4.0 - coarse.b) / 3.0;

    let m = crate::states::moments_of(state)?;
    let a_m = m.cov_adag_bdag;
    let b_m = -m.cov_adag_b;
    let scale = 1.0f64.max(a_m.norm()).max(b_m.norm());
    if (a - a_m).norm() > 1e-6 * scale || (b - b_m).norm() > 1e-6 * scale {
        return Err(Error::Inconsistent(format!(
            "finite-difference A/B ({a}, {b}) disagree with moment route ({a_m}, {b_m})"
        )));
    }
    Ok(GaussianCoefficients { a, b })
}

fn ab_finite_difference(state: &DensityOperator, h: f64) -> Result<GaussianCoefficients> {
    let zero = Complex64::new(0.0, 0.0);
    let re = Complex64::new(h, 0.0);
    let im = Complex64::new(0.0, h);
    let g = |a: Complex64, b: Complex64| characteristic_point(state, a, b);

    // first Wirtinger derivatives at the origin
    let dx_a = (g(re, zero)? - g(-re, zero)?) / (2.0 * h);
    let dy_a = (g(im, zero)? - g(-im, zero)?) / (2.0 * h);
    let dx_b = (g(zero, re)? - g(zero, -re)?) / (2.0 * h);
    let dy_b = (g(zero, im)? - g(zero, -im)?) / (2.0 * h);
    let i = Complex64::i();
    let d_alpha = (dx_a - i * dy_a) * 0.5;
    let d_beta = (dx_b - i * dy_b) * 0.5;
    let d_beta_star = (dx_b + i * dy_b) * 0.5;

    // mixed second derivatives: central 4-point stencils along axis pairs
    let mixed = |ea: Complex64, eb: Complex64| -> Result<Complex64> {
        Ok((g(ea, eb)? - g(ea, -eb)? - g(-ea, eb)? + g(-ea, -eb)?) / (4.0 * h * h))
    };
    let dxx = mixed(re, re)?;
    let dxy = mixed(re, im)?;
    let dyx = mixed(im, re)?;
    let dyy = mixed(im, im)?;
    let d2_ab = (dxx - i * dxy - i * dyx - dyy) * 0.25;
    let d2_ab_star = (dxx + i * dxy - i * dyx + dyy) * 0.25;

    Ok(GaussianCoefficients {
        a: d2_ab - d_alpha * d_beta,
        b: d2_ab_star - d_alpha * d_beta_star,
    })
}

/// Gaussian faithfulness criterion: |A|² − |B|² ≠ 0 beyond the tolerance.
pub fn gaussian_faithful(coeffs: &GaussianCoefficients, tol: f64) -> bool {
    coeffs.discriminant().abs() > tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilator, diagonal_power, identity, tensor, ONE, ZERO};
    use crate::states::{
        correlated_fock, moments_of, product_state, split_thermal, thermal_single, twin_beam,
        vacuum_single,
    };
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn random_bipartite(d: usize, seed: u64) -> BipartiteOperator {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = CMat::from_fn(d * d, d * d, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        BipartiteOperator::from_matrix(d, m).unwrap()
    }

    #[test]
    fn twin_beam_check_operator_closed_form() {
        let lambda = 0.5;
        let d = 8;
        let r = twin_beam(lambda, d).unwrap();
        let check = check_operator_of(&r).unwrap();
        let la = diagonal_power(Complex64::new(lambda, 0.0), d).unwrap();
        let expect = tensor(&la, &la).unwrap().scale(Complex64::new(1.0 - lambda * lambda, 0.0));
        let residual = (check.carrier().matrix() - expect.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(residual < 1e-12, "residual {residual}");
    }

    #[test]
    fn product_state_check_is_rank_one_outer_product() {
        let d = 6;
        let rho = thermal_single(0.8, d).unwrap();
        let sig = vacuum_single(d).unwrap();
        let r = product_state(&rho, &sig).unwrap();
        let check = check_operator_of(&r).unwrap();
        let expect = dket_outer(&double_ket(&sig), &double_ket(&rho.conj())).unwrap();
        let residual = (check.carrier().matrix() - expect.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(residual < 1e-12);
        let report = classify(&check, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(report.rank, 1);
        assert!(!report.full_rank);
    }

    #[test]
    fn correlated_fock_is_fixed_point() {
        let r = correlated_fock(0.4, 10).unwrap();
        let check = check_operator_of(&r).unwrap();
        let residual = (check.carrier().matrix() - r.carrier().matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(residual < 1e-14);
    }

    #[test]
    fn correlated_fock_rank_is_d() {
        let d = 6;
        let r = correlated_fock(0.4, d).unwrap();
        let check = check_operator_of(&r).unwrap();
        let report = classify(&check, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(report.rank, d);
        assert!(!report.full_rank);
    }

    #[test]
    fn check_operator_linearity() {
        let d = 4;
        let r1 = random_bipartite(d, 1);
        let r2 = random_bipartite(d, 2);
        let x = Complex64::new(0.7, -0.2);
        let y = Complex64::new(-1.3, 0.4);
        let combo = r1.scale(x).add(&r2.scale(y)).unwrap();
        let lhs = check_operator(&combo).unwrap();
        let rhs = check_operator(&r1)
            .unwrap()
            .carrier()
            .scale(x)
            .add(&check_operator(&r2).unwrap().carrier().scale(y))
            .unwrap();
        let residual = (lhs.carrier().matrix() - rhs.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(residual < 1e-12);
    }

    #[test]
    fn decomposition_matches_direct_route() {
        let d = 4;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut rand_op = || {
            let m = CMat::from_fn(d, d, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            FockOperator::from_matrix(m).unwrap()
        };
        let terms: Vec<(FockOperator, FockOperator)> =
            (0..3).map(|_| (rand_op(), rand_op())).collect();
        let mut sum = BipartiteOperator::zeros(d).unwrap();
        for (a, b) in &terms {
            sum = sum.add(&tensor(a, b).unwrap()).unwrap();
        }
        let via_terms = check_from_decomposition(&terms).unwrap();
        let via_direct = check_operator(&sum).unwrap();
        let residual = (via_terms.carrier().matrix() - via_direct.carrier().matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(residual < 1e-12);
    }

    #[test]
    fn decomposition_single_identity_term() {
        let d = 3;
        let id = identity(d).unwrap();
        let check = check_from_decomposition(&[(id.clone(), id.clone())]).unwrap();
        let expect = dket_outer(&double_ket(&id), &double_ket(&id)).unwrap();
        assert_eq!(check.carrier().matrix(), expect.matrix());
        assert!(check_from_decomposition(&[]).is_err());
    }

    #[test]
    fn twin_beam_decomposition_in_number_basis() {
        let lambda = 0.5f64;
        let d = 5;
        let norm = 1.0 - lambda * lambda;
        // R = (1−λ²) Σ λ^{n+m} |n⟩⟨m| ⊗ |n⟩⟨m|
        let mut terms = Vec::new();
        for n in 0..d {
            for m in 0..d {
                let mut ea = CMat::zeros(d, d);
                ea[(n, m)] = Complex64::new(norm * lambda.powi((n + m) as i32), 0.0);
                let mut eb = CMat::zeros(d, d);
                eb[(n, m)] = ONE;
                terms.push((
                    FockOperator::from_matrix(ea).unwrap(),
                    FockOperator::from_matrix(eb).unwrap(),
                ));
            }
        }
        let via_terms = check_from_decomposition(&terms).unwrap();
        let via_direct = check_operator_of(&twin_beam(lambda, d).unwrap()).unwrap();
        let residual = (via_terms.carrier().matrix() - via_direct.carrier().matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(residual < 1e-12);
    }

    #[test]
    fn classify_twin_beam_spectrum() {
        let r = twin_beam(0.5, 4).unwrap();
        let check = check_operator_of(&r).unwrap();
        let report = classify(&check, DEFAULT_RANK_TOL).unwrap();
        assert!(report.full_rank);
        assert_eq!(report.rank, 16);
        assert_abs_diff_eq!(report.sigma_min, 0.75 * 0.5f64.powi(6), epsilon = 1e-12);
        // spectrum identity: singular values are exactly {(1−λ²)λ^{n+m}}
        let mut expect: Vec<f64> = (0..4)
            .flat_map(|n| (0..4).map(move |m| 0.75 * 0.5f64.powi((n + m) as i32)))
            .collect();
        expect.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (got, want) in check.singular_values().iter().zip(expect.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-10);
        }
        assert!(classify(&check, 0.0).is_err());
        assert!(classify(&check, 1.5).is_err());
    }

    #[test]
    fn invert_twin_beam_reproduces_closed_form() {
        let lambda = 0.5;
        let d = 5;
        let check = check_operator_of(&twin_beam(lambda, d).unwrap()).unwrap();
        let inv = invert_check(&check, DEFAULT_RANK_TOL).unwrap();
        for n in 0..d {
            for m in 0..d {
                let idx = n * d + m;
                let expect = (1.0 / 0.75) * 2.0f64.powi((n + m) as i32);
                assert_abs_diff_eq!(inv.matrix()[(idx, idx)].re, expect, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn invert_maximally_entangled_like_state() {
        let d = 4;
        let id = identity(d).unwrap();
        let carrier = dket_outer(&double_ket(&id), &double_ket(&id))
            .unwrap()
            .scale(Complex64::new(1.0 / d as f64, 0.0));
        let check = check_operator(&carrier).unwrap();
        let inv = invert_check(&check, DEFAULT_RANK_TOL).unwrap();
        let prod = check.carrier().mul(&inv).unwrap();
        let residual = (prod.matrix() - CMat::identity(d * d, d * d))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(residual < 1e-10);
    }

    #[test]
    fn invert_rejects_rank_deficient() {
        let d = 4;
        let r = product_state(&vacuum_single(d).unwrap(), &vacuum_single(d).unwrap()).unwrap();
        let check = check_operator_of(&r).unwrap();
        match invert_check(&check, DEFAULT_RANK_TOL) {
            Err(Error::NotInvertible { rank, full, .. }) => {
                assert_eq!(rank, 1);
                assert_eq!(full, 16);
            }
            other => panic!("expected NotInvertible, got {other:?}"),
        }
    }

    #[test]
    fn chi_oracle_values() {
        let tb = moments_of(&twin_beam(0.5, 25).unwrap()).unwrap();
        assert_abs_diff_eq!(chi(&tb).unwrap(), 4.0 / 9.0, epsilon = 1e-8);

        let st = moments_of(&split_thermal(0.5, 25, 64).unwrap()).unwrap();
        assert_abs_diff_eq!(chi(&st).unwrap(), 0.25, epsilon = 1e-8);

        let pr = moments_of(
            &product_state(&thermal_single(1.0, 15).unwrap(), &vacuum_single(15).unwrap())
                .unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(chi(&pr).unwrap(), 0.0, epsilon = 1e-10);

        let cf = moments_of(&correlated_fock(0.4, 30).unwrap()).unwrap();
        assert_abs_diff_eq!(chi(&cf).unwrap(), 0.0, epsilon = 1e-10);
        // all four quadrature covariances vanish individually
        for c in quadrature_covariances(&cf) {
            assert_abs_diff_eq!(c, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn chi_rejects_conjugacy_violation() {
        let mut m = moments_of(&twin_beam(0.5, 10).unwrap()).unwrap();
        m.cov_ab_dag += Complex64::new(1e-3, 0.0);
        assert!(matches!(chi(&m), Err(Error::ConjugacyViolation(_))));
    }

    #[test]
    fn chi_quadrature_identity_random_moments() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let u = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let v = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let m = GaussianMoments {
                mean_a: ZERO,
                mean_b: ZERO,
                cov_ab: u,
                cov_adag_b: v,
                cov_ab_dag: v.conj(),
                cov_adag_bdag: u.conj(),
                cov_na: Complex64::new(rng.random_range(0.0..2.0), 0.0),
                cov_nb: Complex64::new(rng.random_range(0.0..2.0), 0.0),
                cov_aa: ZERO,
                cov_bb: ZERO,
            };
            let got = chi(&m).unwrap();
            assert_abs_diff_eq!(got, u.norm_sqr() + v.norm_sqr(), epsilon = 1e-10);
        }
    }

    #[test]
    fn ab_coefficients_vacuum() {
        let r = product_state(&vacuum_single(8).unwrap(), &vacuum_single(8).unwrap()).unwrap();
        let c = ab_coefficients(&r, 1e-3).unwrap();
        assert!(c.a.norm() < 1e-8);
        assert!(c.b.norm() < 1e-8);
        assert!(!gaussian_faithful(&c, 1e-6));
    }

    #[test]
    fn ab_coefficients_twin_beam_and_split_thermal() {
        let tb = twin_beam(0.5, 25).unwrap();
        let c = ab_coefficients(&tb, 1e-3).unwrap();
        // only the αβ-type cross term is present
        assert!(c.b.norm() < 1e-6, "|B| = {}", c.b.norm());
        assert_abs_diff_eq!(c.a.norm(), 2.0 / 3.0, epsilon = 1e-6);
        assert!(gaussian_faithful(&c, 1e-6));

        let st = split_thermal(0.5, 25, 64).unwrap();
        let c = ab_coefficients(&st, 1e-3).unwrap();
        assert!(c.a.norm() < 1e-6, "|A| = {}", c.a.norm());
        assert_abs_diff_eq!(c.b.norm(), 0.5, epsilon = 1e-6);
        assert!(gaussian_faithful(&c, 1e-6));
    }

    #[test]
    fn ab_coefficients_step_validation() {
        let r = product_state(&vacuum_single(6).unwrap(), &vacuum_single(6).unwrap()).unwrap();
        assert!(ab_coefficients(&r, 1e-6).is_err());
        assert!(ab_coefficients(&r, 0.5).is_err());
    }

    #[test]
    fn gaussian_faithful_boundary_cases() {
        let yes = GaussianCoefficients { a: Complex64::new(0.5, 0.0), b: ZERO };
        assert!(gaussian_faithful(&yes, 1e-9));
        let tie = GaussianCoefficients {
            a: Complex64::new(0.3, 0.0),
            b: Complex64::new(0.0, 0.3),
        };
        assert!(!gaussian_faithful(&tie, 1e-9));
        let none = GaussianCoefficients { a: ZERO, b: ZERO };
        assert!(!gaussian_faithful(&none, 1e-9));
    }

    #[test]
    fn both_check_routes_agree_on_random_inputs() {
        for seed in 0..20 {
            let d = 2 + (seed as usize % 5);
            let r = random_bipartite(d, 100 + seed);
            // check_operator validates the two routes internally
            assert!(check_operator(&r).is_ok());
        }
    }

    #[test]
    fn annihilator_tensor_check_sanity() {
        // Ř of a ⊗ a† is |a†⟩⟩⟨⟨a*| = |a†⟩⟩⟨⟨a| for the real matrix a
        let d = 4;
        let a = annihilator(d).unwrap();
        let ad = a.adjoint();
        let x = tensor(&a, &ad).unwrap();
        let check = check_operator(&x).unwrap();
        let expect = dket_outer(&double_ket(&ad), &double_ket(&a)).unwrap();
        let residual = (check.carrier().matrix() - expect.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(residual < 1e-13);
    }
}
