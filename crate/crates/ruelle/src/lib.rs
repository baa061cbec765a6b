//! Resonance spectrum enumerators for hyperbolic and partially hyperbolic
//! dynamical systems, together with two exactly tractable correlation models
//! used to verify the predicted decay rates numerically.
//!
//! The crate is organized around three kinds of machinery:
//!
//! - **Spectrum enumeration.** [`spectral`] extracts the eigenvalue data of an
//!   integer symplectic matrix (the induced map on first cohomology of a
//!   surface diffeomorphism) in extended decimal precision, and [`resonance`]
//!   turns that data — or a Laplace spectrum, or a list of Kontsevich–Zorich
//!   exponents — into the full predicted resonance/Lyapunov sets with
//!   multiplicities, Jordan data and provenance labels.
//! - **Exactly tractable models.** [`heisenberg`] realizes the representation
//!   line model of a partially hyperbolic Heisenberg automorphism: invariant
//!   distributions, Green operator, projector recursion, iterated functionals
//!   `D^(k)`, the coefficients `c_{k,j}(λ)`, and correlation series with
//!   closed-form oracles. [`toral`] computes correlations of hyperbolic toral
//!   automorphisms on trigonometric polynomials as exact finite lattice sums.
//! - **Rate extraction.** [`fit`] peels exponential(-polynomial) terms from a
//!   correlation series and matches them against a predicted resonance set.
//!
//! The [`verify`] module bundles the per-model check suites behind the
//! `ruelle verify {heisenberg|toral}` CLI subcommands; [`report`] handles
//! deterministic JSON/CSV emission with a checksum manifest.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod config;
pub mod fit;
pub mod heisenberg;
pub mod precision;
pub mod report;
pub mod resonance;
pub mod spectral;
pub mod toral;
pub mod verify;

mod cli;

pub use cli::cli_main;
pub use precision::{PrecComplex, PrecFloat};
pub use spectral::{IntMatrix, SpectralError, SpectrumData};
