//! Partial-wave scattering for Schrödinger operators with finitely many
//! concentric δ-shell interactions.
//!
//! Each channel ℓ reduces to an N×N boundary matrix `K_ℓ = I + m_ℓ Θ`; the
//! S-matrix coefficient, phase shift, bound states and (for two shells) the
//! threshold behaviour all follow from it. The [`oracle`] module provides
//! independent radial-matching checks of the same quantities.

pub mod boundary;
pub mod cli;
pub mod cmatrix;
pub mod doubleshell;
pub mod error;
pub mod model;
pub mod oracle;
pub mod smatrix;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{DoubleShellConfig, ShellConfig};
