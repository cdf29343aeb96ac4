use std::collections::BTreeSet;

use super::{assign_loci, detect, scan, LocusCalls, PeakRule, QtlHit, TraitSelector};
use crate::error::Result;
use crate::genetics::MappingPopulation;

#[derive(Debug, Clone, PartialEq)]
pub struct TraitDetection {
    pub selector: TraitSelector,
    pub hits: Vec<QtlHit>,
    pub calls: LocusCalls,
}

/// Detection on component traits against detection on an integrated trait.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    pub components: Vec<TraitDetection>,
    pub integrated: TraitDetection,
    /// Genes found by at least one component scan.
    pub component_union: BTreeSet<usize>,
    /// Component genes the integrated scan misses.
    pub missed: BTreeSet<usize>,
    /// Genes found only by the integrated scan.
    pub extra: BTreeSet<usize>,
}

fn detection(population: &MappingPopulation, selector: TraitSelector, rule: &PeakRule) -> Result<TraitDetection> {
    let hits = detect(&scan(population, selector)?, rule);
    let calls = assign_loci(&hits, &population.map);
    Ok(TraitDetection { selector, hits, calls })
}

pub fn compare_detection(
    population: &MappingPopulation,
    components: &[TraitSelector],
    integrated: TraitSelector,
    rule: &PeakRule,
) -> Result<DetectionReport> {
    let components = components
        .iter()
        .map(|&s| detection(population, s, rule))
        .collect::<Result<Vec<_>>>()?;
    let integrated = detection(population, integrated, rule)?;
    let component_union: BTreeSet<usize> = components.iter().flat_map(|d| d.calls.loci.iter().copied()).collect();
    let missed = component_union.difference(&integrated.calls.loci).copied().collect();
    let extra = integrated.calls.loci.difference(&component_union).copied().collect();
    Ok(DetectionReport { components, integrated, component_union, missed, extra })
}
