//! A numerical laboratory for the interference hierarchy of probabilistic
//! theories.
//!
//! Three fully worked theories — classical measure spaces, Hilbert-space
//! quantum mechanics, and the exceptional Jordan algebra H₃(O) — plus one
//! deliberately unphysical construction are placed behind a single
//! conditional-probability contract, [`theory::TheoryOracle`]. On top of
//! that contract the [`interference`] module measures the Sorkin
//! interference terms I₂ and I₃ and classifies each theory:
//!
//! * classical probability: I₂ = I₃ = 0;
//! * quantum and Jordan-algebraic probability: I₂ ≠ 0 but I₃ = 0;
//! * the synthetic oracle: I₃ ≠ 0, certifying it lies beyond both.
//!
//! The [`slits`] module grounds the same residual in a concrete three-slit
//! wave simulation, and [`suites`] packages every guarantee as a
//! fixed-seed verification run.
//!
//! All numerical code is generic over the [`scalar::Real`] scalar
//! (`f32` or `f64`); the `*64` aliases below fix the common choice.

pub mod albert;
pub mod classical;
pub mod error;
pub mod interference;
pub mod quantum;
pub mod scalar;
pub mod slits;
pub mod suites;
pub mod synthetic;
pub mod theory;

pub use error::{Error, Result};
pub use theory::TheoryOracle;

/// Octonions with `f64` coefficients.
pub type Octonion64 = albert::Octonion<f64>;
/// Elements of the Albert algebra H₃(O) over `f64`.
pub type AlbertElement64 = albert::AlbertElement<f64>;
/// Classical probability measures over `f64`.
pub type Measure64 = classical::Measure<f64>;
/// Hermitian density matrices over `f64`.
pub type Density64 = quantum::Density<f64>;
/// Orthogonal projections over `f64`.
pub type Projection64 = quantum::Projection<f64>;
/// Three-slit experiment geometry over `f64`.
pub type SlitGeometry64 = slits::SlitGeometry<f64>;
