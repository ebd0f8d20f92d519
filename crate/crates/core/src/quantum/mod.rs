//! Quantum expectation values, seesaw optimization and correlation tensors
//! for two- and three-qubit pure states.

pub mod bell;
pub mod correlation;
pub mod observable;
pub mod seesaw;
pub mod state;

pub use bell::{bell_expectation, bell_operator};
pub use correlation::{
    correlation_tensor, zb_condition, zb_condition_max, zb_scan, CorrelationTensor, Triad, ZbConfig,
    ZbMaximum, ZbScan,
};
pub use observable::{Mat2, Observable, Observables, IDENTITY, PAULI};
pub use seesaw::{seesaw_maximize, seesaw_run, Direction, SeesawConfig, SeesawRun, ViolationResult};
pub use state::{canonicalize, fidelity, Canonicalized, PureState, ThreeQubitState};
