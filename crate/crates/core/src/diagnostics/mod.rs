//! Norms and functionals tracked along a run.

pub mod energy;
pub mod fit;
pub mod hardy;
pub mod series;
pub mod sobolev;
pub mod supnorm;
pub mod znorm;

pub use energy::{energy_kg, energy_wave, KgEnergy};
pub use fit::{decay_fit, DecayFit};
pub use hardy::{hardy_equivalent, hardy_quantities};
pub use series::DiagnosticsSeries;
pub use sobolev::{sobolev_weighted_norm, Flavor};
pub use supnorm::{sup_norm_record, SupEntry};
pub use znorm::{z_norm_kg, z_norm_wave};
