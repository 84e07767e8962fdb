//! Mixed-Fourier-norm spaces on the three model geometries: fiber norms,
//! weights, half-Fourier and Mellin transforms, and numerical checks of the
//! isometry, factorization, Plancherel and Paley-Wiener statements.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32`, `f64`); the
//! aliases below fix it to `f64`. The [`verify`] suites are `f64` only.

pub mod error;
pub mod extended;
pub mod geometry;
pub mod quadrature;
pub mod scalar;
pub mod spaces;
pub mod special;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};

pub type Complex64 = scalar::Complex<f64>;
pub type Extended64 = extended::Extended<f64>;
pub type Geometry = geometry::ModelGeometry<f64>;
pub type Frequency = geometry::DualFrequency<f64>;
pub type QuadConfig = quadrature::QuadConfig<f64>;
pub type QuadResult = quadrature::QuadResult<f64>;
pub type FiberProfile = transforms::FiberProfile<f64>;
pub type ModelFunction = transforms::ModelFunction<f64>;
pub type SpectralData = transforms::SpectralData<f64>;
pub type LineWindow = transforms::LineWindow<f64>;
pub type XSpaceSpec = spaces::XSpaceSpec<f64>;
pub type SpaceConfig = spaces::SpaceConfig<f64>;
pub type XiWindow = spaces::XiWindow<f64>;
pub type Weight = spaces::Weight<f64>;
pub type NormReport = spaces::NormReport<f64>;
