use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use super::single_marker_lod;
use crate::error::{Error, Result};
use crate::genetics::{GeneticMap, MappingPopulation};
use crate::growth::Param;

/// Trait a scan runs on: one growth parameter or the final cob weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraitSelector {
    Param(Param),
    CobWeight,
}

impl TraitSelector {
    pub fn name(self) -> &'static str {
        match self {
            TraitSelector::Param(p) => p.name(),
            TraitSelector::CobWeight => "cob_weight",
        }
    }

    pub fn values(self, population: &MappingPopulation) -> Vec<f64> {
        population
            .individuals
            .iter()
            .map(|i| match self {
                TraitSelector::Param(p) => i.traits.get(p),
                TraitSelector::CobWeight => i.cob_weight,
            })
            .collect()
    }
}

impl fmt::Display for TraitSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TraitSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "cob_weight" {
            Ok(TraitSelector::CobWeight)
        } else {
            s.parse().map(TraitSelector::Param)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LodRecord {
    pub marker: usize,
    pub position: f64,
    /// `None` when the marker could not be tested.
    pub lod: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LodProfile {
    pub trait_name: String,
    pub records: Vec<LodRecord>,
}

impl LodProfile {
    /// LOD per marker with untested markers at zero.
    pub fn scores(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.lod.unwrap_or(0.0)).collect()
    }

    pub fn lod_at(&self, marker: usize) -> f64 {
        self.records[marker].lod.unwrap_or(0.0)
    }

    /// Columns `marker,position_cM,lod`; untested markers show `NA`.
    pub fn write_csv<W: Write>(&self, map: &GeneticMap, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["marker", "position_cM", "lod"])?;
        for r in &self.records {
            let lod = r.lod.map_or_else(|| "NA".to_string(), |v| v.to_string());
            w.write_record([map.marker_name(r.marker), r.position.to_string(), lod])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// LOD profile of arbitrary per-individual values over the population's
/// markers.
pub fn scan_values(trait_name: &str, values: &[f64], population: &MappingPopulation) -> Result<LodProfile> {
    if values.len() != population.len() {
        return Err(Error::Dimension(format!(
            "{} trait values for {} individuals",
            values.len(),
            population.len()
        )));
    }
    let records = population
        .map
        .positions()
        .iter()
        .enumerate()
        .map(|(m, &position)| LodRecord {
            marker: m,
            position,
            lod: single_marker_lod(values, &population.marker_column(m)),
        })
        .collect();
    Ok(LodProfile { trait_name: trait_name.to_string(), records })
}

pub fn scan(population: &MappingPopulation, selector: TraitSelector) -> Result<LodProfile> {
    scan_values(selector.name(), &selector.values(population), population)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QtlHit {
    pub marker: usize,
    pub position: f64,
    pub lod: f64,
}

/// Peak picking rule.
///
/// A marker is a hit when its LOD reaches `threshold` and, walking away from
/// it in either direction, the profile falls by at least `min_drop` before
/// meeting a marker that dominates it. Marker `i` dominates `m` when its LOD
/// is higher, or equal with a lower index, so a plateau yields one hit at
/// its lowest marker. A direction without a dominating marker always
/// qualifies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakRule {
    pub threshold: f64,
    pub min_drop: f64,
}

impl Default for PeakRule {
    fn default() -> Self {
        PeakRule { threshold: 3.0, min_drop: 2.0 }
    }
}

impl PeakRule {
    fn separated(&self, scores: &[f64], m: usize, step: isize) -> bool {
        let dominates = |i: usize| scores[i] > scores[m] || (scores[i] == scores[m] && i < m);
        let mut low = scores[m];
        let mut i = m as isize + step;
        while i >= 0 && (i as usize) < scores.len() {
            let j = i as usize;
            if dominates(j) {
                let drop = scores[m] - low;
                return drop > 0.0 && drop >= self.min_drop;
            }
            low = low.min(scores[j]);
            i += step;
        }
        true
    }
}

pub fn detect(profile: &LodProfile, rule: &PeakRule) -> Vec<QtlHit> {
    let scores = profile.scores();
    (0..scores.len())
        .filter(|&m| scores[m] >= rule.threshold)
        .filter(|&m| rule.separated(&scores, m, -1) && rule.separated(&scores, m, 1))
        .map(|m| QtlHit { marker: m, position: profile.records[m].position, lod: scores[m] })
        .collect()
}

/// Columns `marker,position_cM,lod`.
pub fn write_hits_csv<W: Write>(hits: &[QtlHit], map: &GeneticMap, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["marker", "position_cM", "lod"])?;
    for h in hits {
        w.write_record([map.marker_name(h.marker), h.position.to_string(), h.lod.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Largest distance, in cM, between a hit and the gene it is credited to.
pub const LOCUS_TOLERANCE_CM: f64 = 10.0;

/// Hits credited to genes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LocusCalls {
    /// Detected genes, 0-based.
    pub loci: BTreeSet<usize>,
    /// Hits farther than the tolerance from every gene.
    pub unassigned: Vec<QtlHit>,
}

/// Credit each hit to the nearest gene within [`LOCUS_TOLERANCE_CM`].
pub fn assign_loci(hits: &[QtlHit], map: &GeneticMap) -> LocusCalls {
    let mut out = LocusCalls::default();
    for h in hits {
        let nearest = map
            .locus_markers()
            .iter()
            .enumerate()
            .map(|(g, &m)| (g, (map.positions()[m] - h.position).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match nearest {
            Some((g, d)) if d <= LOCUS_TOLERANCE_CM => {
                out.loci.insert(g);
            }
            _ => out.unassigned.push(*h),
        }
    }
    out
}
