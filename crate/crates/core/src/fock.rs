//! Truncated Fock-space operator algebra for one and two modes.
//!
//! Everything here works on a d-dimensional truncation of the harmonic
//! oscillator Hilbert space, with Fock basis |0⟩ .. |d−1⟩. Two-mode
//! operators use the composite index n·d + m, mode `a` major.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter {
            name: "dim",
            reason: format!("truncation dimension must be ≥ 2, got {d}"),
        });
    }
    Ok(())
}

fn all_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Dense operator on a single truncated mode.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    pub(crate) dim: usize,
    pub(crate) entries: CMat,
}

impl FockOperator {
    pub fn from_matrix(entries: CMat) -> Result<Self> {
        let d = entries.nrows();
        check_dim(d)?;
        if entries.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "expected square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if !all_finite(&entries) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim: d, entries })
    }

    pub fn zeros(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(Self { dim: d, entries: CMat::zeros(d, d) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.entries
    }

    pub fn into_matrix(self) -> CMat {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.transpose() }
    }

    pub fn conj(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.map(|z| z.conj()) }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(format!(
                "operator product: {} vs {}",
                self.dim, rhs.dim
            )));
        }
        Ok(Self { dim: self.dim, entries: &self.entries * &rhs.entries })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { dim: self.dim, entries: self.entries.map(|z| z * c) }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch("operator sum".into()));
        }
        Ok(Self { dim: self.dim, entries: &self.entries + &rhs.entries })
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }
}

/// Dense operator on the two-mode space, d² × d², composite index n·d + m.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteOperator {
    pub(crate) dim: usize,
    pub(crate) entries: CMat,
}

impl BipartiteOperator {
    pub fn from_matrix(dim: usize, entries: CMat) -> Result<Self> {
        check_dim(dim)?;
        let d2 = dim * dim;
        if entries.nrows() != d2 || entries.ncols() != d2 {
            return Err(Error::DimensionMismatch(format!(
                "expected {d2}x{d2} matrix for per-mode dim {dim}, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if !all_finite(&entries) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, entries: CMat::zeros(dim * dim, dim * dim) })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, entries: CMat::identity(dim * dim, dim * dim) })
    }

    /// Per-mode truncation dimension d (the matrix itself is d²×d²).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.entries
    }

    pub fn into_matrix(self) -> CMat {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.adjoint() }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch("bipartite product".into()));
        }
        Ok(Self { dim: self.dim, entries: &self.entries * &rhs.entries })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch("bipartite sum".into()));
        }
        Ok(Self { dim: self.dim, entries: &self.entries + &rhs.entries })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { dim: self.dim, entries: self.entries.map(|z| z * c) }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let diff = &self.entries - self.entries.adjoint();
        diff.iter().all(|z| z.norm() <= tol)
    }
}

/// Vectorization |A⟩⟩ of a single-mode operator: component ⟨n|A|m⟩ at n·d + m.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleKet {
    pub(crate) dim: usize,
    pub(crate) entries: CVec,
}

impl DoubleKet {
    pub fn from_vector(dim: usize, entries: CVec) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "double ket needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self) -> &CVec {
        &self.entries
    }
}

/// Which tensor factor a partial operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    First,
    Second,
}

impl Mode {
    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Mode::First),
            2 => Ok(Mode::Second),
            _ => Err(Error::InvalidParameter {
                name: "mode",
                reason: format!("mode selector must be 1 or 2, got {i}"),
            }),
        }
    }
}

pub fn identity(d: usize) -> Result<FockOperator> {
    check_dim(d)?;
    Ok(FockOperator { dim: d, entries: CMat::identity(d, d) })
}

/// Annihilation operator: ⟨n−1|a|n⟩ = √n.
pub fn annihilator(d: usize) -> Result<FockOperator> {
    check_dim(d)?;
    let mut m = CMat::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    Ok(FockOperator { dim: d, entries: m })
}

pub fn creator(d: usize) -> Result<FockOperator> {
    Ok(annihilator(d)?.adjoint())
}

pub fn number_operator(d: usize) -> Result<FockOperator> {
    check_dim(d)?;
    let mut m = CMat::zeros(d, d);
    for n in 0..d {
        m[(n, n)] = Complex64::new(n as f64, 0.0);
    }
    Ok(FockOperator { dim: d, entries: m })
}

/// Photon-number parity (−1)^{a†a}.
pub fn parity(d: usize) -> Result<FockOperator> {
    check_dim(d)?;
    let mut m = CMat::zeros(d, d);
    for n in 0..d {
        m[(n, n)] = Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    Ok(FockOperator { dim: d, entries: m })
}

/// Diagonal operator λ^{a†a} for real or complex λ.
pub fn diagonal_power(lambda: Complex64, d: usize) -> Result<FockOperator> {
    check_dim(d)?;
    let mut m = CMat::zeros(d, d);
    let mut p = ONE;
    for n in 0..d {
        m[(n, n)] = p;
        p *= lambda;
    }
    Ok(FockOperator { dim: d, entries: m })
}

pub fn fock_projector(n: usize, d: usize) -> Result<FockOperator> {
    check_dim(d)?;
    if n >= d {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("Fock index {n} out of range for dim {d}"),
        });
    }
    let mut m = CMat::zeros(d, d);
    m[(n, n)] = ONE;
    Ok(FockOperator { dim: d, entries: m })
}

/// Associated Laguerre polynomials L_n^{(k)}(x) for n = 0..=n_max, by upward
/// recurrence in n. Adequate for the truncations used here (d ≲ 200).
pub(crate) fn assoc_laguerre_column(n_max: usize, k: usize, x: f64) -> Vec<f64> {
    let kf = k as f64;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(1.0 + kf - x);
    for n in 1..n_max {
        let nf = n as f64;
        let next =
            ((2.0 * nf + 1.0 + kf - x) * out[n] - (nf + kf) * out[n - 1]) / (nf + 1.0);
        out.push(next);
    }
    out
}

/// Displacement operator D(α) = exp(α a† − α* a) from the closed-form
/// Laguerre matrix elements:
///   ⟨n+k|D(α)|n⟩ = e^{−|α|²/2} L_n^{(k)}(|α|²) ∏_{j=n+1}^{n+k} (α/√j)
///   ⟨n|D(α)|n+k⟩ = e^{−|α|²/2} L_n^{(k)}(|α|²) ∏_{j=n+1}^{n+k} (−α*/√j)
pub fn displacement(alpha: Complex64, d: usize) -> Result<FockOperator> {
    check_dim(d)?;
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "displacement amplitude must be finite".into(),
        });
    }
    let x = alpha.norm_sqr();
    let gauss = (-0.5 * x).exp();
    let mut m = CMat::zeros(d, d);
    for k in 0..d {
        let lag = assoc_laguerre_column(d - 1 - k, k, x);
        for (n, lg) in lag.iter().enumerate() {
            if k == 0 {
                m[(n, n)] = Complex64::new(gauss * lg, 0.0);
            } else {
                // ∏ (±α/√j) built incrementally to avoid factorial overflow
                let mut pl = ONE;
                let mut pu = ONE;
                for j in (n + 1)..=(n + k) {
                    let s = (j as f64).sqrt();
                    pl *= alpha / s;
                    pu *= -alpha.conj() / s;
                }
                m[(n + k, n)] = pl * gauss * lg;
                m[(n, n + k)] = pu * gauss * lg;
            }
        }
    }
    Ok(FockOperator { dim: d, entries: m })
}

/// |A⟩⟩: component ⟨n|A|m⟩ at composite index n·d + m.
pub fn double_ket(a: &FockOperator) -> DoubleKet {
    let d = a.dim;
    let mut v = CVec::zeros(d * d);
    for n in 0..d {
        for m in 0..d {
            v[n * d + m] = a.entries[(n, m)];
        }
    }
    DoubleKet { dim: d, entries: v }
}

pub fn undouble_ket(k: &DoubleKet) -> FockOperator {
    let d = k.dim;
    let mut m = CMat::zeros(d, d);
    for n in 0..d {
        for mm in 0..d {
            m[(n, mm)] = k.entries[n * d + mm];
        }
    }
    FockOperator { dim: d, entries: m }
}

/// (A ⊗ B)|C⟩⟩ computed as |A C Bᵀ⟩⟩.
pub fn abc_identity_apply(
    a: &FockOperator,
    b: &FockOperator,
    c: &FockOperator,
) -> Result<DoubleKet> {
    if a.dim != b.dim || a.dim != c.dim {
        return Err(Error::DimensionMismatch(format!(
            "abc identity needs equal dims, got {}, {}, {}",
            a.dim, b.dim, c.dim
        )));
    }
    let acbt = &a.entries * &c.entries * b.entries.transpose();
    Ok(double_ket(&FockOperator { dim: a.dim, entries: acbt }))
}

/// Swap operator E = Σ |ij⟩⟨ji|.
pub fn swap_operator(d: usize) -> Result<BipartiteOperator> {
    check_dim(d)?;
    let d2 = d * d;
    let mut m = CMat::zeros(d2, d2);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + j, j * d + i)] = ONE;
        }
    }
    Ok(BipartiteOperator { dim: d, entries: m })
}

/// Partial transposition on the selected tensor factor.
pub fn partial_transpose(x: &BipartiteOperator, which: Mode) -> BipartiteOperator {
    let d = x.dim;
    let mut out = CMat::zeros(d * d, d * d);
    for n in 0..d {
        for m in 0..d {
            for np in 0..d {
                for mp in 0..d {
                    let (r, c) = match which {
                        Mode::First => (np * d + m, n * d + mp),
                        Mode::Second => (n * d + mp, np * d + m),
                    };
                    out[(n * d + m, np * d + mp)] = x.entries[(r, c)];
                }
            }
        }
    }
    BipartiteOperator { dim: d, entries: out }
}

/// Kronecker product, mode a major.
pub fn tensor(a: &FockOperator, b: &FockOperator) -> Result<BipartiteOperator> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(format!(
            "tensor product needs equal dims, got {} and {}",
            a.dim, b.dim
        )));
    }
    Ok(BipartiteOperator { dim: a.dim, entries: a.entries.kronecker(&b.entries) })
}

/// Outer product |k⟩⟩⟨⟨b| of two double-kets.
pub fn dket_outer(ket: &DoubleKet, bra: &DoubleKet) -> Result<BipartiteOperator> {
    if ket.dim != bra.dim {
        return Err(Error::DimensionMismatch("double-ket outer product".into()));
    }
    let m = &ket.entries * bra.entries.adjoint();
    Ok(BipartiteOperator { dim: ket.dim, entries: m })
}

/// Tr[X (A ⊗ B)] without forming the Kronecker product.
pub fn trace_against_product(
    x: &BipartiteOperator,
    a: &FockOperator,
    b: &FockOperator,
) -> Result<Complex64> {
    if x.dim != a.dim || x.dim != b.dim {
        return Err(Error::DimensionMismatch("trace against product".into()));
    }
    let d = x.dim;
    let mut acc = ZERO;
    for n in 0..d {
        for np in 0..d {
            let anp = a.entries[(np, n)];
            if anp == ZERO {
                continue;
            }
            for m in 0..d {
                for mp in 0..d {
                    acc += x.entries[(n * d + m, np * d + mp)] * anp * b.entries[(mp, m)];
                }
            }
        }
    }
    Ok(acc)
}
