//! Numerical realizations over the complex projective plane.
//!
//! A [`RealizedArrangement`] holds coefficients for the conic and every line.
//! [`realize`] searches for coefficients reproducing a combinatorial class,
//! [`extract_combinatorics`] reads the class back off the coefficients, and
//! [`projective_equivalent`] looks for a projective transformation carrying
//! one realization onto another.
//!
//! Nothing here is a decision procedure: a failed search reports `Unknown`,
//! and a failed projective match reports `NotFound`.

mod extract;
pub mod linalg;
mod projective;
mod solver;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ModelError;
use linalg::{normalize, normalize_matrix, M3, V3};

pub use extract::{extract_combinatorics, extract_detailed, Extraction};
pub use projective::{projective_equivalent, projective_transfer, ProjectiveVerdict};
pub use solver::{realize, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizationError {
    #[error("tolerance {name} must be positive and finite, got {value}")]
    InvalidTolerance { name: &'static str, value: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("points at distance {distance:e} fall between the cluster tolerance and ten times it")]
    ClusterAmbiguity { distance: f64 },
    #[error("line {line} has tangency discriminant {value:e} between the tangency tolerance and ten times it")]
    TangencyAmbiguity { line: u32, value: f64 },
    #[error("extracted incidences are inconsistent: {0}")]
    Inconsistent(#[from] ModelError),
    #[error("matrix is singular or badly conditioned")]
    SingularMatrix,
    #[error("fewer than four corresponding points in general position")]
    TooFewDistinguishedPoints,
}

/// Numerical tolerances. Each acceptance threshold has an empty gray zone
/// up to ten times its value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Maximal sum of squared incidence residuals.
    pub res: f64,
    /// Distance below which two points are the same point.
    pub cluster: f64,
    /// Discriminant modulus below which a line is tangent.
    pub tan: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { res: 1e-9, cluster: 1e-6, tan: 1e-8 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), RealizationError> {
        for (name, value) in [("tol_res", self.res), ("tol_cluster", self.cluster), ("tol_tan", self.tan)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(RealizationError::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }

    /// Minimal separation of distinct points in an accepted realization.
    pub fn separation(&self) -> f64 {
        10.0 * self.cluster
    }
}

/// Conic and line coefficients. Complex numbers serialize as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizedArrangement {
    pub conic: [[Complex64; 3]; 3],
    pub lines: Vec<[Complex64; 3]>,
    pub residual: f64,
    pub separation: f64,
}

impl RealizedArrangement {
    /// Builds a geometry with normalized coefficients. Residual and
    /// separation start at zero.
    pub fn new(conic: &M3, lines: &[V3]) -> Self {
        let conic = normalize_matrix(conic);
        RealizedArrangement {
            conic: std::array::from_fn(|i| std::array::from_fn(|j| conic[(i, j)])),
            lines: lines.iter().map(|l| {
                let l = normalize(l);
                [l[0], l[1], l[2]]
            }).collect(),
            residual: 0.0,
            separation: 0.0,
        }
    }

    pub fn conic_matrix(&self) -> M3 {
        M3::from_fn(|i, j| self.conic[i][j])
    }

    pub fn line_vectors(&self) -> Vec<V3> {
        self.lines.iter().map(|l| V3::new(l[0], l[1], l[2])).collect()
    }

    pub fn n(&self) -> usize {
        self.lines.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealizationStatus {
    Realized,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationResult {
    pub status: RealizationStatus,
    pub geometry: Option<RealizedArrangement>,
    pub attempts: usize,
}
