//! Two-photon quantum interference in passive PT-symmetric lossy directional
//! couplers.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: complex 2×2 algebra with an exponential that stays exact at
//!   the exceptional point, plus an n×n matrix permanent.
//! * [`coupler`]: Hamiltonians and propagators of the bare lossy coupler and of
//!   the coupler sandwiched between two 50/50 splitters.
//! * [`fock`]: post-selected photon-number statistics, HOM curves and
//!   visibilities.
//! * [`experiments`]: parameter sweeps that produce plot-ready tables, and the
//!   CSV/JSON writers for them.
//!
//! Propagation follows `i dψ/dz = Hψ`, so `U(z) = exp(-iHz)` and every
//! propagator of a passive device is subunitary. Mode 1 is the lossless
//! waveguide, mode 2 the lossy one.

pub mod coupler;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod linalg;

pub use coupler::{CouplerParams, SystemKind};
pub use error::{Error, Result};
pub use fock::{HomCurve, SourceModel, TwoPhotonProbs};
pub use linalg::{Complex, Mat2, Spectrum2, SquareMatrix};

/// Crate version recorded in every emitted table.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
