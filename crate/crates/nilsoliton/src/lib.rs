//! Curvature and moment-map invariants of left-invariant almost Kähler
//! structures on low-dimensional nilpotent (and solvable) Lie algebras.
//!
//! The crate decides existence of minimal compatible metrics through the
//! nice-basis Gram criterion, solves for the minimal metric itself, and
//! certifies soliton almost Kähler structures for the symplectic curvature
//! flow. A built-in catalog reproduces the full six-dimensional two- and
//! three-step classification tables.
//!
//! The pipeline, end to end:
//!
//! ```
//! use nilsoliton::bracket::LieBracket;
//! use nilsoliton::minimal::{minimal_metric_solve, SolveOptions};
//!
//! // the free 2-step nilpotent Lie algebra of rank 3, omega_1(s) at s = 2
//! let mu = LieBracket::from_entries(6, &[(0, 1, 3, 1.0), (0, 2, 4, 2.0), (1, 2, 5, 1.0)]).unwrap();
//! let result = minimal_metric_solve(&mu, &SolveOptions::default()).unwrap();
//! let metric = result.metric.expect("this pair admits a minimal metric");
//! assert!(metric.residual < 1e-9);
//! assert!((metric.critical_bracket.norm() - 1.0).abs() < 1e-8);
//! ```

pub mod bracket;
pub mod catalog;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod io;
pub mod linalg;
pub mod minimal;
pub mod output;
pub mod soliton;
pub mod symplectic;

pub use error::Error;

/// Numerical thresholds used across the crate.
///
/// `logical` gates yes/no predicates (niceness, unimodularity, soliton
/// residuals are two orders looser, see the field docs), `exact` gates
/// defects of data that is exact in the inputs (Jacobi, closedness), and
/// `rank_rel` is the relative singular-value cutoff for rank decisions.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Default tolerance for logical predicates.
    pub logical: f64,
    /// Defect tolerance for exact-input identities (Jacobi, closedness).
    pub exact: f64,
    /// Relative singular value threshold: sigma <= rank_rel * sigma_max is zero.
    pub rank_rel: f64,
    /// Residual accepted by scalar-plus-derivation decompositions.
    pub decomp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            logical: 1e-9,
            exact: 1e-12,
            rank_rel: 1e-10,
            decomp: 1e-8,
        }
    }
}

impl Tolerances {
    /// Uniform tolerance override, keeping the rank cutoff.
    pub fn with_logical(tol: f64) -> Self {
        Tolerances {
            logical: tol,
            ..Default::default()
        }
    }
}
