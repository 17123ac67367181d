//! The coupled system: coefficients, state variables, sources and time
//! stepping.

pub mod coefficients;
pub mod initial;
pub mod integrator;
pub mod nonlinear;
pub mod snapshot;
pub mod state;

pub use coefficients::{CouplingCoefficients, Sign};
pub use initial::{make_initial_data, DataComponent, InitialData, InitialDataSpec};
pub use integrator::Solver;
pub use nonlinear::Nonlinearity;
pub use state::{from_normalized, to_normalized, PhysicalState, ProfileState};
