//! Generalized analytic and harmonic Koebe functions.
//!
//! The crate builds the generalized Koebe functions `k_a`, lens maps `l_R`
//! and the harmonic maps obtained from them by the shear construction, and
//! checks the coefficient identities, univalence behaviour and sharp
//! growth/distortion bounds those maps satisfy. All numerics are generic
//! over the floating-point type; `f64` aliases are exported at the root.

// `!(x < y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod families;
pub mod maps;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod series;
pub mod shear;

pub use num_complex::Complex;

pub use error::{Error, Result};
pub use maps::{
    hille_univalent, lens_identity_residual, make_generalized_koebe, make_lens, MapKind,
};
pub use scalar::{Real, Tolerance};
pub use shear::{GhkParams, Provenance};

pub type Complex64 = Complex<f64>;
pub type Series<T = f64> = series::Series<T>;
pub type AnalyticMap<T = f64> = maps::AnalyticMap<T>;
pub type HarmonicMap<T = f64> = shear::HarmonicMap<T>;

pub type Series64 = series::Series<f64>;
pub type Series32 = series::Series<f32>;
pub type AnalyticMap64 = maps::AnalyticMap<f64>;
pub type HarmonicMap64 = shear::HarmonicMap<f64>;
pub type GhkParams64 = shear::GhkParams<f64>;
pub type MartyState64 = families::MartyState<f64>;
pub type BoundReport64 = analysis::BoundReport<f64>;
pub type CollisionWitness64 = analysis::CollisionWitness<f64>;
