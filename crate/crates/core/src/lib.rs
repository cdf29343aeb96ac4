//! Source-sink growth simulation of a maize plant whose parameters are set by
//! a virtual diploid genome.
//!
//! The crate is organised as four layers that feed into each other:
//!
//! * [`growth`] runs the deterministic per-cycle organogenesis / production /
//!   allocation recurrence and reports cob weight.
//! * [`genetics`] turns allele values into growth parameters, simulates
//!   meiosis with Poisson crossovers and breeds recombinant inbred lines.
//! * [`qtl`] computes single-marker LOD profiles and picks QTL peaks.
//! * [`ga`] searches the allelic grid for the cob-weight ideotype.

pub mod error;
pub mod ga;
pub mod genetics;
pub mod growth;
pub mod qtl;

pub use error::{Error, Result};
pub use ga::{evolve, report, BoundaryFlag, GaConfig, GaIndividual, GaOutcome, IdeotypeReport};
pub use genetics::{
    apply_noise, make_ril, DiploidGenome, EffectPreset, ExpressionRules, GeneEffectMap, GeneticMap,
    GenotypeModel, MappingPopulation, MarkerCode,
};
pub use growth::{
    simulate, surface_scan, GeneticTraits, GrowthConstants, GrowthSeries, OrganType, Param,
    REFERENCE_COB_WEIGHT,
};
pub use qtl::{assign_loci, detect, scan, scan_values, LodProfile, PeakRule, QtlHit, TraitSelector};
