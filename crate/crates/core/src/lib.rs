//! Uncertainty measures for pairs of quantum observables.
//!
//! The crate evaluates variance, smallest-squared-distance and Monge-type
//! uncertainty measures on pure states, checks the standard family of
//! uncertainty inequalities, solves the self-consistent eigenvalue problem
//! whose solutions are the stationary uncertainty states, and traces the
//! lower convex hull of the accessible uncertainty region.

pub mod eigen;
pub mod error;
pub mod inequalities;
pub mod measures;
pub mod models;
pub mod observable;
pub mod state;
pub mod stationary;

pub use error::{Error, Result};
pub use measures::{CostTable, UncertaintyMeasure};
pub use observable::{
    distribution, expectation, spectral_decompose, HermitianObservable, Observable, ProbabilityDistribution,
    ProperValues, UnitaryObservable,
};
pub use state::{haar_sample, PureState};
pub use stationary::{
    BorderCurve, BorderPoint, InitStrategy, MeasurePair, StationaryResult, StationarySet, StationarySolver,
};

pub use nalgebra;
pub use num_complex::Complex64;
