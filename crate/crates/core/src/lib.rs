//! Laguerre-wavelet transforms, true polyanalytic Bergman spaces on the
//! upper half-plane, multiplexing by true-space projection, and sampling
//! analysis on hyperbolic lattices.
//!
//! Everything numeric is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix the scalar for callers that don't care.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod error;
pub mod frames;
pub mod halfplane;
pub mod laguerre;
pub mod linalg;
pub mod multiplex;
pub mod polyspace;
mod reduce;
pub mod scalar;
pub mod transforms;
pub mod verification;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type HalfPlanePointF64 = halfplane::HalfPlanePoint<f64>;
pub type HalfPlanePointF32 = halfplane::HalfPlanePoint<f32>;
pub type HalfPlaneGridF64 = halfplane::HalfPlaneGrid<f64>;
pub type HalfPlaneGridF32 = halfplane::HalfPlaneGrid<f32>;
pub type GridSpecF64 = halfplane::GridSpec<f64>;
pub type LatticeF64 = halfplane::Lattice<f64>;
pub type RPlusCoeffsF64 = transforms::RPlusCoeffs<f64>;
pub type RPlusCoeffsF32 = transforms::RPlusCoeffs<f32>;
pub type ChannelSetF64 = transforms::ChannelSet<f64>;
pub type AnalyzerProfileF64 = transforms::AnalyzerProfile<f64>;
pub type PolyFieldF64 = polyspace::PolyField<f64>;
pub type MuxFieldF64 = multiplex::MuxField<f64>;
pub type FrameReportF64 = frames::FrameReport<f64>;
pub type Complex64 = Cx<f64>;
pub type Complex32 = Cx<f32>;
