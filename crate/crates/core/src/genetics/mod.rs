//! Virtual diploid genome on one linkage group.
//!
//! Alleles combine per locus into an expressed vector, a weight matrix maps
//! that vector onto growth parameters, and meiosis with Poisson crossovers
//! breeds recombinant inbred lines whose founder origins are tracked at
//! every marker.

mod effects;
mod genome;
mod meiosis;
mod population;

pub use effects::{EffectPreset, GeneEffectMap, LOCUS_COUNT, UNUSED_LOCUS_SPREAD};
pub use genome::{AlleleVector, Chromosome, DiploidGenome, ExpressionRules, LocusMode, Origin};
pub use meiosis::{breed_ril_lines, cross, draw_crossovers, gamete, gamete_from_cuts, GeneticMap};
pub use population::{
    apply_noise, make_ril, marker_codes, GenotypeModel, Individual, MappingPopulation, MarkerCode,
    GENOTYPE_FILE, MAP_FILE, PHENOTYPE_FILE,
};
