//! Genetic-algorithm search for the allele combination maximising cob
//! weight.

pub mod engine;
mod ideotype;

pub use engine::{
    crossover_at, evolve_with, mutate, one_point_crossover, roulette_pair, roulette_select, EngineOutcome,
    EngineSettings, GenerationStats,
};
pub use ideotype::{
    decode, encode, evolve, fitness, report, BoundaryFlag, GaConfig, GaIndividual, GaOutcome, IdeotypeReport,
    IdeotypeRow,
};
