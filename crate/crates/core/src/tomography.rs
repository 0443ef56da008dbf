//! Channel application and Choi-matrix reconstruction: the operational side
//! of faithfulness. A channel applied to the first mode of a faithful state
//! can be recovered from the joint output by inverting a linear map whose
//! conditioning is set by the singular spectrum of Ř.

use nalgebra::{Dyn, SVD};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fock::{
    dket_outer, double_ket, identity, BipartiteOperator, CMat, CVec, FockOperator, ONE, ZERO,
};
use crate::states::DensityOperator;

/// Largest per-mode dimension for which the d⁴×d⁴ forward map is materialized.
pub const FORWARD_MAP_DIM_LIMIT: usize = 6;

/// Trace-preserving quantum operation in Kraus form.
#[derive(Clone, Debug)]
pub struct Channel {
    kraus: Vec<FockOperator>,
    dim: usize,
}

impl Channel {
    /// Validates the completeness relation Σ K†K = I on the interior index
    /// window (truncation makes the top of the ladder unreliable).
    pub fn new(kraus: Vec<FockOperator>) -> Result<Self> {
        let Some(first) = kraus.first() else {
            return Err(Error::InvalidParameter {
                name: "kraus",
                reason: "channel needs at least one Kraus operator".into(),
            });
        };
        let d = first.dim();
        let mut sum = CMat::zeros(d, d);
        for k in &kraus {
            if k.dim() != d {
                return Err(Error::DimensionMismatch("Kraus operators".into()));
            }
            sum += k.matrix().adjoint() * k.matrix();
        }
        let window = (d / 2).max(1);
        for i in 0..window {
            for j in 0..window {
                let expect = if i == j { ONE } else { ZERO };
                if (sum[(i, j)] - expect).norm() > 1e-8 {
                    return Err(Error::InvalidParameter {
                        name: "kraus",
                        reason: format!(
                            "completeness violated at ({i},{j}): residual {:.3e}",
                            (sum[(i, j)] - expect).norm()
                        ),
                    });
                }
            }
        }
        Ok(Self { kraus, dim: d })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[FockOperator] {
        &self.kraus
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new(vec![identity(d)?])
    }

    /// Unitary phase rotation e^{iθ a†a}.
    pub fn phase_rotation(theta: f64, d: usize) -> Result<Self> {
        let mut m = CMat::zeros(d, d);
        for n in 0..d {
            m[(n, n)] = Complex64::from_polar(1.0, theta * n as f64);
        }
        Self::new(vec![FockOperator::from_matrix(m)?])
    }

    /// Full dephasing in the Fock basis: K_n = |n⟩⟨n|.
    pub fn dephasing(d: usize) -> Result<Self> {
        let kraus = (0..d)
            .map(|n| crate::fock::fock_projector(n, d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(kraus)
    }

    /// Truncated attenuation (beam-splitter loss) with transmissivity eta:
    /// ⟨n−k|K_k|n⟩ = √(C(n,k) η^{n−k} (1−η)^k).
    pub fn attenuation(eta: f64, d: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: format!("transmissivity must lie in [0, 1], got {eta}"),
            });
        }
        let mut kraus = Vec::with_capacity(d);
        for k in 0..d {
            let mut m = CMat::zeros(d, d);
            for n in k..d {
                let mut binom = 1.0f64;
                for j in 0..k {
                    binom *= (n - j) as f64 / (j + 1) as f64;
                }
                let amp = (binom * eta.powi((n - k) as i32) * (1.0 - eta).powi(k as i32)).sqrt();
                m[(n - k, n)] = Complex64::new(amp, 0.0);
            }
            kraus.push(FockOperator::from_matrix(m)?);
        }
        Self::new(kraus)
    }
}

/// Choi matrix Σ |K_n⟩⟩⟨⟨K_n|.
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    carrier: BipartiteOperator,
}

impl ChoiMatrix {
    pub fn carrier(&self) -> &BipartiteOperator {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    /// Partial trace over the first factor; equals I for trace-preserving
    /// channels (up to truncation at the top of the ladder).
    pub fn partial_trace_first(&self) -> CMat {
        let d = self.carrier.dim();
        let mut out = CMat::zeros(d, d);
        for m in 0..d {
            for mp in 0..d {
                for n in 0..d {
                    out[(m, mp)] += self.carrier.matrix()[(n * d + m, n * d + mp)];
                }
            }
        }
        out
    }

    /// Max deviation of the partial trace from I on the interior window.
    pub fn trace_preservation_residual(&self) -> f64 {
        let d = self.carrier.dim();
        let pt = self.partial_trace_first();
        let window = (d / 2).max(1);
        let mut worst = 0.0f64;
        for i in 0..window {
            for j in 0..window {
                let expect = if i == j { ONE } else { ZERO };
                worst = worst.max((pt[(i, j)] - expect).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.carrier
            .matrix()
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn choi_of(channel: &Channel) -> Result<ChoiMatrix> {
    let d = channel.dim();
    let mut acc = BipartiteOperator::zeros(d)?;
    for k in channel.kraus() {
        let dk = double_ket(k);
        acc = acc.add(&dket_outer(&dk, &dk)?)?;
    }
    Ok(ChoiMatrix { carrier: acc })
}

/// (E ⊗ I) R = Σ (K ⊗ I) R (K† ⊗ I).
pub fn apply_channel_first(state: &DensityOperator, channel: &Channel) -> Result<DensityOperator> {
    let d = state.dim();
    if channel.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "channel dim {} vs state dim {d}",
            channel.dim()
        )));
    }
    let id = identity(d)?;
    let mut acc = CMat::zeros(d * d, d * d);
    for k in channel.kraus() {
        let kk = crate::fock::tensor(k, &id)?;
        acc += kk.matrix() * state.carrier().matrix() * kk.matrix().adjoint();
    }
    let carrier = BipartiteOperator::from_matrix(d, acc)?;
    Ok(DensityOperator::new_hermitized(carrier))
}

/// Row-major vectorization of a bipartite operator.
pub fn vec_bipartite(x: &BipartiteOperator) -> CVec {
    let d2 = x.dim() * x.dim();
    let mut v = CVec::zeros(d2 * d2);
    for r in 0..d2 {
        for c in 0..d2 {
            v[r * d2 + c] = x.matrix()[(r, c)];
        }
    }
    v
}

pub fn unvec_bipartite(dim: usize, v: &CVec) -> Result<BipartiteOperator> {
    let d2 = dim * dim;
    if v.len() != d2 * d2 {
        return Err(Error::DimensionMismatch("vectorized bipartite operator".into()));
    }
    let m = CMat::from_fn(d2, d2, |r, c| v[r * d2 + c]);
    BipartiteOperator::from_matrix(dim, m)
}

/// The d⁴×d⁴ matrix M with vec(R_E) = M · vec(C), built column by column
/// from basis Kraus elements |i⟩⟨j|.
pub struct ForwardMap {
    dim: usize,
    matrix: CMat,
    svd: SVD<Complex64, Dyn, Dyn>,
    singular_values: Vec<f64>,
}

impl ForwardMap {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn sigma_min(&self) -> f64 {
        *self.singular_values.last().unwrap()
    }

    pub fn numerical_rank(&self, rel_tol: f64) -> usize {
        let top = self.singular_values[0];
        self.singular_values.iter().filter(|s| **s > rel_tol * top).count()
    }

    pub fn apply(&self, c: &CVec) -> CVec {
        &self.matrix * c
    }

    /// Minimum-norm least-squares solve with relative singular-value cutoff.
    pub fn solve(&self, y: &CVec, rel_cutoff: f64) -> CVec {
        let u = self.svd.u.as_ref().expect("svd with u");
        let v_t = self.svd.v_t.as_ref().expect("svd with v_t");
        let top = self.singular_values[0];
        let uty = u.adjoint() * y;
        let mut scaled = uty;
        for (i, s) in self.svd.singular_values.iter().enumerate() {
            scaled[i] = if *s > rel_cutoff * top { scaled[i] / *s } else { ZERO };
        }
        v_t.adjoint() * scaled
    }
}

pub fn forward_map(state: &DensityOperator) -> Result<ForwardMap> {
    let d = state.dim();
    if d > FORWARD_MAP_DIM_LIMIT {
        return Err(Error::MemoryGuard { dim: d, limit: FORWARD_MAP_DIM_LIMIT });
    }
    let d2 = d * d;
    let rm = state.carrier().matrix();
    let mut m = CMat::zeros(d2 * d2, d2 * d2);
    // column for Choi entry ((i,j),(k,l)):
    //   out_{(n m),(n' m')} = δ_{n i} δ_{n' k} R_{(j m),(l m')}
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let col = (i * d + j) * d2 + (k * d + l);
                    for mm in 0..d {
                        for mp in 0..d {
                            let row = (i * d + mm) * d2 + (k * d + mp);
                            m[(row, col)] = rm[(j * d + mm, l * d + mp)];
                        }
                    }
                }
            }
        }
    }
    let svd = SVD::new(m.clone(), true, true);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(ForwardMap { dim: d, matrix: m, svd, singular_values: sv })
}

#[derive(Clone, Debug)]
pub struct ReconstructionResult {
    pub choi_estimate: ChoiMatrix,
    pub residual_norm: f64,
    pub recovered: bool,
    pub rank_deficient: bool,
}

/// Least-squares Choi reconstruction from an input/output state pair.
/// `recovered` requires a full-rank forward map, a small residual, and an
/// estimate that passes the Choi invariants at relaxed tolerance.
pub fn reconstruct(
    state: &DensityOperator,
    output: &DensityOperator,
    tol: f64,
) -> Result<ReconstructionResult> {
    let d = state.dim();
    if output.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "output dim {} vs input dim {d}",
            output.dim()
        )));
    }
    let map = forward_map(state)?;
    let y = vec_bipartite(output.carrier());
    let c = map.solve(&y, tol);
    let residual = (map.apply(&c) - &y).norm();
    let rank_deficient = map.numerical_rank(tol) < d * d * d * d;
    let estimate = ChoiMatrix { carrier: unvec_bipartite(d, &c)? };
    let invariants_ok = estimate.carrier.is_hermitian(1e-6)
        && estimate.min_eigenvalue() > -1e-6
        && estimate.trace_preservation_residual() < 1e-5;
    Ok(ReconstructionResult {
        recovered: !rank_deficient && residual <= tol.max(1e-10) && invariants_ok,
        residual_norm: residual,
        rank_deficient,
        choi_estimate: estimate,
    })
}

#[derive(Clone, Debug)]
pub struct NoiseRow {
    pub epsilon: f64,
    pub trial: usize,
    pub choi_error: f64,
}

#[derive(Clone, Debug)]
pub struct NoiseStudy {
    pub rows: Vec<NoiseRow>,
    pub sigma_min: f64,
    /// (epsilon, mean Choi error) per noise magnitude.
    pub mean_errors: Vec<(f64, f64)>,
}

/// Perturbs vec(R_E) with an isotropic Gaussian direction scaled to norm ε,
/// reconstructs, and records the Frobenius Choi error per trial.
pub fn noise_amplification_study(
    state: &DensityOperator,
    channel: &Channel,
    epsilons: &[f64],
    trials: usize,
    seed: u64,
) -> Result<NoiseStudy> {
    let map = forward_map(state)?;
    let c_true = vec_bipartite(choi_of(channel)?.carrier());
    let y = vec_bipartite(apply_channel_first(state, channel)?.carrier());
    let consistency = (map.apply(&c_true) - &y).norm();
    if consistency > 1e-10 {
        return Err(Error::Inconsistent(format!(
            "forward map disagrees with direct channel application by {consistency:.3e}"
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let n = y.len();
    let mut rows = Vec::with_capacity(epsilons.len() * trials);
    let mut mean_errors = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        if eps < 0.0 {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("noise magnitude must be ≥ 0, got {eps}"),
            });
        }
        let mut total = 0.0;
        for trial in 0..trials {
            let mut delta = CVec::zeros(n);
            if eps > 0.0 {
                for i in 0..n {
                    delta[i] = Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng));
                }
                let norm = delta.norm();
                if norm > 0.0 {
                    delta *= Complex64::new(eps / norm, 0.0);
                }
            }
            let c_est = map.solve(&(&y + delta), 1e-10);
            let err = (c_est - &c_true).norm();
            total += err;
            rows.push(NoiseRow { epsilon: eps, trial, choi_error: err });
        }
        mean_errors.push((eps, total / trials as f64));
    }
    Ok(NoiseStudy { rows, sigma_min: map.sigma_min(), mean_errors })
}
