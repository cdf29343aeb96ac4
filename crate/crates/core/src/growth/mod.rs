//! Single-plant source/sink growth simulation.
//!
//! One growth cycle appends newly initiated organs, computes the plant's
//! total demand, shares the previous cycle's production among expanding
//! organs in proportion to their demand, and finally produces new biomass
//! from the photosynthetically active blades.

mod constants;
mod kernel;
mod model;
mod organs;
mod surface;
mod traits;

pub use constants::{calibrate_potential, GrowthConstants, REFERENCE_COB_WEIGHT};
pub use kernel::sink_kernel;
pub use model::{production, simulate, CycleRecord, GrowthSeries, PlantState};
pub use organs::{demand, organogenesis_schedule, OrganCohort, OrganType, SinkTable};
pub use surface::{surface_scan, CobSurface};
pub use traits::{round_half_away, GeneticTraits, Param};
