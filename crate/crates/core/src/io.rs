//! Serialization: the JSON matrix container shared by every module, the
//! CLI-facing state specification format, and CSV export for grids and
//! noise-study tables. All writes go through a temp file + rename so a
//! crashed run never leaves a truncated artifact behind.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{BipartiteOperator, CMat, CVec, DoubleKet, FockOperator};
use crate::phase_space::{GridKind, PhaseSpaceGrid};
use crate::states::{
    coherent_single, correlated_fock, product_state, split_thermal, thermal_single, twin_beam,
    vacuum_single, DensityOperator,
};
use crate::tomography::NoiseRow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContainerKind {
    Single,
    Bipartite,
    Doubleket,
}

/// On-disk matrix format: header plus (re, im) pairs in row-major order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixContainer {
    pub dim: usize,
    pub kind: ContainerKind,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixContainer {
    fn expected_len(&self) -> usize {
        let d = self.dim;
        match self.kind {
            ContainerKind::Single => d * d,
            ContainerKind::Bipartite => d * d * d * d,
            ContainerKind::Doubleket => d * d,
        }
    }

    fn check_len(&self) -> Result<()> {
        if self.entries.len() != self.expected_len() {
            return Err(Error::DimensionMismatch(format!(
                "container of kind {:?} with dim {} needs {} entries, got {}",
                self.kind,
                self.dim,
                self.expected_len(),
                self.entries.len()
            )));
        }
        Ok(())
    }

    fn from_matrix(dim: usize, kind: ContainerKind, m: &CMat) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                entries.push([z.re, z.im]);
            }
        }
        Self { dim, kind, entries }
    }

    fn to_matrix(&self, rows: usize, cols: usize) -> CMat {
        CMat::from_fn(rows, cols, |r, c| {
            let [re, im] = self.entries[r * cols + c];
            Complex64::new(re, im)
        })
    }

    pub fn of_single(op: &FockOperator) -> Self {
        Self::from_matrix(op.dim(), ContainerKind::Single, op.matrix())
    }

    pub fn of_bipartite(op: &BipartiteOperator) -> Self {
        Self::from_matrix(op.dim(), ContainerKind::Bipartite, op.matrix())
    }

    pub fn of_double_ket(k: &DoubleKet) -> Self {
        let entries = k.vector().iter().map(|z| [z.re, z.im]).collect();
        Self { dim: k.dim(), kind: ContainerKind::Doubleket, entries }
    }

    pub fn into_single(&self) -> Result<FockOperator> {
        self.check_len()?;
        if self.kind != ContainerKind::Single {
            return Err(Error::Inconsistent(format!(
                "expected a single-mode container, found {:?}",
                self.kind
            )));
        }
        FockOperator::from_matrix(self.to_matrix(self.dim, self.dim))
    }

    pub fn into_bipartite(&self) -> Result<BipartiteOperator> {
        self.check_len()?;
        if self.kind != ContainerKind::Bipartite {
            return Err(Error::Inconsistent(format!(
                "expected a bipartite container, found {:?}",
                self.kind
            )));
        }
        let d2 = self.dim * self.dim;
        BipartiteOperator::from_matrix(self.dim, self.to_matrix(d2, d2))
    }

    pub fn into_double_ket(&self) -> Result<DoubleKet> {
        self.check_len()?;
        if self.kind != ContainerKind::Doubleket {
            return Err(Error::Inconsistent(format!(
                "expected a double-ket container, found {:?}",
                self.kind
            )));
        }
        let v = CVec::from_iterator(
            self.entries.len(),
            self.entries.iter().map(|[re, im]| Complex64::new(*re, *im)),
        );
        DoubleKet::from_vector(self.dim, v)
    }
}

/// Writes bytes through a sibling temp file and renames into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        )),
        None => Path::new(&format!(
            ".{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        ))
        .to_path_buf(),
    };
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn save_container(path: &Path, container: &MatrixContainer) -> Result<()> {
    let json = serde_json::to_vec_pretty(container)?;
    write_atomic(path, &json)
}

pub fn load_container(path: &Path) -> Result<MatrixContainer> {
    let bytes = fs::read(path)?;
    let container: MatrixContainer = serde_json::from_slice(&bytes)?;
    container.check_len()?;
    Ok(container)
}

pub fn save_state(path: &Path, state: &DensityOperator) -> Result<()> {
    save_container(path, &MatrixContainer::of_bipartite(state.carrier()))
}

/// Loads a bipartite container and revalidates the density-operator
/// invariants (Hermiticity, positivity, trace).
pub fn load_state(path: &Path) -> Result<DensityOperator> {
    let carrier = load_container(path)?.into_bipartite()?;
    DensityOperator::from_carrier(carrier)
}

/// Single-mode factor of a product state.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SingleModeSpec {
    Vacuum,
    Thermal { nbar: f64 },
    Coherent { re: f64, im: f64 },
    Fock { n: usize },
}

impl SingleModeSpec {
    pub fn build(&self, d: usize) -> Result<FockOperator> {
        match self {
            SingleModeSpec::Vacuum => vacuum_single(d),
            SingleModeSpec::Thermal { nbar } => thermal_single(*nbar, d),
            SingleModeSpec::Coherent { re, im } => coherent_single(Complex64::new(*re, *im), d),
            SingleModeSpec::Fock { n } => {
                let p = crate::fock::fock_projector(*n, d)?;
                Ok(p)
            }
        }
    }
}

/// CLI-facing state description. `family: file` points at a matrix
/// container on disk.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum StateSpec {
    Twinbeam {
        lambda: f64,
        dim: usize,
    },
    Splitthermal {
        sigma2: f64,
        dim: usize,
        #[serde(default)]
        quad_points: Option<usize>,
    },
    Product {
        a: SingleModeSpec,
        b: SingleModeSpec,
        dim: usize,
    },
    Correlatedfock {
        lambda: f64,
        dim: usize,
    },
    File {
        path: String,
    },
}

impl StateSpec {
    pub fn build(&self) -> Result<DensityOperator> {
        match self {
            StateSpec::Twinbeam { lambda, dim } => twin_beam(*lambda, *dim),
            StateSpec::Splitthermal { sigma2, dim, quad_points } => {
                let q = quad_points.unwrap_or_else(|| 64.max(2 * dim - 1));
                split_thermal(*sigma2, *dim, q)
            }
            StateSpec::Product { a, b, dim } => {
                product_state(&a.build(*dim)?, &b.build(*dim)?)
            }
            StateSpec::Correlatedfock { lambda, dim } => correlated_fock(*lambda, *dim),
            StateSpec::File { path } => load_state(Path::new(path)),
        }
    }
}

pub fn parse_state_spec(json: &str) -> Result<StateSpec> {
    Ok(serde_json::from_str(json)?)
}

/// Grid CSV: one row per (alpha, beta) pair; `analytic` appends a reference
/// column computed by the caller (same α-major ordering as the grid values).
pub fn write_grid_csv(
    path: &Path,
    grid: &PhaseSpaceGrid,
    analytic: Option<&[f64]>,
) -> Result<()> {
    let na = grid.alphas.len();
    let nb = grid.betas.len();
    if let Some(a) = analytic {
        if a.len() != na * nb {
            return Err(Error::DimensionMismatch(format!(
                "analytic column has {} values for a {na}×{nb} grid",
                a.len()
            )));
        }
    }
    let mut out = String::new();
    out.push_str("alpha_re,alpha_im,beta_re,beta_im,value_re,value_im");
    if analytic.is_some() {
        out.push_str(",analytic");
    }
    out.push('\n');
    for (i, alpha) in grid.alphas.iter().enumerate() {
        for (j, beta) in grid.betas.iter().enumerate() {
            let v = grid.values[(i, j)];
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                alpha.re, alpha.im, beta.re, beta.im, v.re, v.im
            ));
            if let Some(a) = analytic {
                out.push_str(&format!(",{:.17e}", a[i * nb + j]));
            }
            out.push('\n');
        }
    }
    write_atomic(path, out.as_bytes())
}

pub fn grid_kind_name(kind: GridKind) -> &'static str {
    match kind {
        GridKind::Wigner => "wigner",
        GridKind::Characteristic => "characteristic",
    }
}

/// Noise-study table with the state parameters alongside every trial row.
pub fn write_study_csv(
    path: &Path,
    parameter: f64,
    dim: usize,
    rows: &[NoiseRow],
    sigma_min: f64,
    chi: Option<f64>,
) -> Result<()> {
    let mut out = String::from("lambda_or_sigma2,d,epsilon,trial,choi_error,sigma_min,chi\n");
    for r in rows {
        let chi_field = chi.map_or(String::new(), |c| format!("{c:.17e}"));
        out.push_str(&format!(
            "{parameter},{dim},{:.17e},{},{:.17e},{sigma_min:.17e},{chi_field}\n",
            r.epsilon, r.trial, r.choi_error
        ));
    }
    write_atomic(path, out.as_bytes())
}
