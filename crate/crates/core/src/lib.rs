//! Measurement-space states: the nonnegative amplitude vectors √p(m) obtained
//! from a state and a measurement, their entanglement, and numerical checks of
//! the results built on them.

// negated comparisons are used to reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entanglement;
pub mod error;
pub mod measurement;
pub mod modes;
pub mod numerics;
pub mod theorems;

pub use error::{Error, Result};
pub use measurement::{
    map_local, map_to_measurement_space, LocalMeasurementSet, MeasurementSet, MeasurementSpaceState,
};
pub use numerics::{ComplexMatrix, DensityMatrix, PureState};
