//! Faithfulness analysis for two-mode states in a truncated Fock space.
//!
//! A bipartite state R is tomographically faithful when the channel acting
//! on one mode can be recovered from the joint output state. That holds
//! exactly when the check operator Ř = (E R)^{τ₂} E is invertible, where E
//! is the swap and τ₂ the partial transpose on the second mode. This crate
//! builds the operator algebra, the example state families, their Wigner
//! and characteristic functions, the Ř spectrum analysis with its Gaussian
//! shortcut χ(R), and an end-to-end channel-reconstruction study.

pub mod error;
pub mod faithfulness;
pub mod fock;
pub mod io;
pub mod phase_space;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
pub use faithfulness::{
    ab_coefficients, check_operator, check_operator_of, chi, classify, gaussian_faithful,
    invert_check, CheckOperator, FaithfulnessReport, GaussianCoefficients, DEFAULT_RANK_TOL,
};
pub use fock::{
    annihilator, creator, displacement, double_ket, identity, number_operator, parity,
    swap_operator, tensor, undouble_ket, BipartiteOperator, DoubleKet, FockOperator, Mode,
};
pub use io::{
    load_container, load_state, parse_state_spec, save_container, save_state, write_grid_csv,
    write_study_csv, MatrixContainer, SingleModeSpec, StateSpec,
};
pub use phase_space::{
    analytic_wigner_correlated_fock, analytic_wigner_split_thermal, analytic_wigner_twin_beam,
    characteristic_grid, characteristic_grid_spec, characteristic_point,
    gaussian_integral_identity_check, state_from_wigner, wigner_grid, wigner_grid_spec,
    wigner_point, GridKind, GridSpec, PhaseSpaceGrid,
};
pub use states::{
    correlated_fock, moments_of, product_state, split_thermal, twin_beam, DensityOperator,
    GaussianMoments,
};
pub use tomography::{
    apply_channel_first, choi_of, forward_map, noise_amplification_study, reconstruct, Channel,
    ChoiMatrix, ForwardMap, NoiseStudy, ReconstructionResult,
};
