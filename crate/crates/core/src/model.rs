//! Shell configurations: radii `R_j`, strengths `α_j`, and `θ_j = α_j R_j²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Concentric δ-shells with `0 < R_1 < … < R_N`.
///
/// `N = 0` is the free Hamiltonian. Shells with `α_j = 0` are allowed and
/// simply inert.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct ShellConfig {
    radii: Vec<f64>,
    alphas: Vec<f64>,
    thetas: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawConfig {
    radii: Vec<f64>,
    alphas: Vec<f64>,
}

impl TryFrom<RawConfig> for ShellConfig {
    type Error = Error;
    fn try_from(raw: RawConfig) -> Result<Self> {
        ShellConfig::new(raw.radii, raw.alphas)
    }
}

impl From<ShellConfig> for RawConfig {
    fn from(cfg: ShellConfig) -> Self {
        RawConfig {
            radii: cfg.radii,
            alphas: cfg.alphas,
        }
    }
}

impl ShellConfig {
    /// Validates the radii ordering and computes the `θ_j`.
    pub fn new(radii: Vec<f64>, alphas: Vec<f64>) -> Result<Self> {
        if radii.len() != alphas.len() {
            return Err(Error::LengthMismatch {
                radii: radii.len(),
                alphas: alphas.len(),
            });
        }
        if radii.iter().any(|r| !r.is_finite()) {
            return Err(Error::NonfiniteParameter("radius"));
        }
        if alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonfiniteParameter("strength"));
        }
        if let Some((index, &value)) = radii.iter().enumerate().find(|(_, &r)| r <= 0.0) {
            return Err(Error::NonpositiveRadius { index, value });
        }
        for index in 1..radii.len() {
            if radii[index] <= radii[index - 1] {
                return Err(Error::NonincreasingRadii {
                    index,
                    prev: radii[index - 1],
                    next: radii[index],
                });
            }
        }
        let thetas = radii.iter().zip(&alphas).map(|(r, a)| a * r * r).collect();
        Ok(Self {
            radii,
            alphas,
            thetas,
        })
    }

    pub fn free() -> Self {
        Self {
            radii: Vec::new(),
            alphas: Vec::new(),
            thetas: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite floats always serialize")
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// Outermost radius, or 0 for the free configuration.
    pub fn outer_radius(&self) -> f64 {
        self.radii.last().copied().unwrap_or(0.0)
    }

    /// True when every shell is inert.
    pub fn is_free(&self) -> bool {
        self.alphas.iter().all(|&a| a == 0.0)
    }
}

/// A configuration with exactly two shells.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleShellConfig(ShellConfig);

impl DoubleShellConfig {
    pub fn new(r1: f64, r2: f64, alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::try_from(ShellConfig::new(vec![r1, r2], vec![alpha1, alpha2])?)
    }

    /// Builds the configuration from `θ_j` rather than `α_j`.
    pub fn from_thetas(r1: f64, r2: f64, theta1: f64, theta2: f64) -> Result<Self> {
        Self::new(r1, r2, theta1 / (r1 * r1), theta2 / (r2 * r2))
    }

    pub fn r1(&self) -> f64 {
        self.0.radii[0]
    }

    pub fn r2(&self) -> f64 {
        self.0.radii[1]
    }

    pub fn theta1(&self) -> f64 {
        self.0.thetas[0]
    }

    pub fn theta2(&self) -> f64 {
        self.0.thetas[1]
    }

    pub fn config(&self) -> &ShellConfig {
        &self.0
    }
}

impl TryFrom<ShellConfig> for DoubleShellConfig {
    type Error = Error;
    fn try_from(cfg: ShellConfig) -> Result<Self> {
        if cfg.len() != 2 {
            return Err(Error::NotDoubleShell(cfg.len()));
        }
        Ok(Self(cfg))
    }
}

impl AsRef<ShellConfig> for DoubleShellConfig {
    fn as_ref(&self) -> &ShellConfig {
        &self.0
    }
}
