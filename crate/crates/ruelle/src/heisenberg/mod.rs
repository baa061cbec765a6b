//! Representation-line model of a partially hyperbolic Heisenberg
//! automorphism.
//!
//! In each irreducible representation the Hilbert space is square-integrable
//! functions of one real variable, the unstable field acts as d/dx, and the
//! automorphism pulls back as `f(x) ↦ u λ^{1/2} f(λx)` for a unit complex
//! phase u. This module realizes that model exactly on a family of analytic
//! preset functions (bump, bump derivatives, Gaussian × polynomial) with
//! symbolic differentiation and argument scaling:
//!
//! - the invariant functional `D^(0)(f) = ∫ f` and its iterates `D^(k)`
//!   defined through the projector recursion against a χ-family,
//! - the Green operator of the cohomological equation `X u = f`,
//! - the coefficients `c_{k,j}(λ)` relating the pulled-back iterated
//!   functionals, computed as cumulative iterated integrals,
//! - correlation series `C(n) = ⟨pullback(f, n), g⟩` with closed-form and
//!   moment-expansion oracles, and coboundary/duality decay checks.

mod chi;
mod ops;
mod presets;
mod quadrature;

pub use chi::{build_chi_family, ChiFamily};
pub use ops::{
    coboundary_decay_check, coefficient, coefficient_table, correlation_series, dk, duality_check,
    green_apply, iterated_integral, moment_oracle, projector, pullback, verify_eigenrelation,
    CoefficientTable, DecayCheckReport, DecayRow, DualityReport, EigenRelationReport, GreenOp,
    MomentExpansion,
};
pub use presets::{FunctionSum, Preset, PresetKind, RealTestFunction};
pub use quadrature::{
    cumulative_simpson, integrate, inner_product, iterated_total, l2_norm, moment, IteratedResult,
    QuadError, QuadResult, QuadratureSpec,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HeisError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("function has nonzero mean {0}; both one-sided Green formulas disagree")]
    NonzeroMean(f64),
    #[error("invalid input: {0}")]
    BadInput(String),
}

/// Representation labels carried alongside the line model: central character
/// z, component index i within the isotypical component, and the phase u of
/// the automorphism on that component. The line model itself is identical
/// for every (z, i) up to u and λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepParams {
    pub z: i64,
    pub component: usize,
    pub phase: num_complex::Complex64,
}

impl RepParams {
    pub fn new(z: i64, component: usize, phase: num_complex::Complex64) -> Self {
        RepParams { z, component, phase }
    }
}
