//! Numerics for p-tempered alpha-stable distributions parameterized by their
//! Rosinski measure: validity and properness checks, Levy-measure tail
//! functionals, cumulants and moment criteria, parameter-change transforms,
//! regular-variation diagnostics, and Monte Carlo simulation.
//!
//! The core is generic over the scalar type through [`scalar::Real`]
//! (`f32`/`f64`); concrete `f64` aliases live at the crate root.

pub mod charfn;
pub mod error;
pub mod levy;
pub mod measure;
pub mod moments;
pub mod quad;
pub mod rv;
pub mod scalar;
pub mod sim;
pub mod special;
pub mod transforms;

pub use error::{Result, TsError, Violation};
pub use measure::{
    from_spectral, is_proper, to_spectral, tempering_function, validate, RadialProfile, Ray,
    RosinskiMeasure, SpectralForm, SpectralRay, TsParams, Validation,
};
pub use quad::QuadTol;
pub use scalar::Real;
pub use special::{KernelParams, StableDensityOrder, StableMethod};

pub use num_complex::Complex;

/// `f64` aliases for the main parameter types.
pub type RadialProfile64 = RadialProfile<f64>;
pub type RosinskiMeasure64 = RosinskiMeasure<f64>;
pub type TsParams64 = TsParams<f64>;
pub type SpectralForm64 = SpectralForm<f64>;
pub type KernelParams64 = KernelParams<f64>;
pub type QuadTol64 = QuadTol<f64>;

/// `f32` aliases (reduced-precision instantiation; the default tolerances
/// target `f64`).
pub type RadialProfile32 = RadialProfile<f32>;
pub type RosinskiMeasure32 = RosinskiMeasure<f32>;
pub type TsParams32 = TsParams<f32>;
pub type KernelParams32 = KernelParams<f32>;
