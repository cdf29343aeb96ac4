use serde::{Deserialize, Serialize};
use std::fmt;

use super::{sink_kernel, GeneticTraits, GrowthConstants};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrganType {
    Blade,
    Sheath,
    Internode,
    Cob,
    Tassel,
}

impl OrganType {
    pub const ALL: [OrganType; 5] = [
        OrganType::Blade,
        OrganType::Sheath,
        OrganType::Internode,
        OrganType::Cob,
        OrganType::Tassel,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            OrganType::Blade => "blade",
            OrganType::Sheath => "sheath",
            OrganType::Internode => "internode",
            OrganType::Cob => "cob",
            OrganType::Tassel => "tassel",
        }
    }
}

impl fmt::Display for OrganType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Organs of one type initiated in the same cycle. They share age and
/// demand, so they are tracked together.
#[derive(Debug, Clone, PartialEq)]
pub struct OrganCohort {
    pub organ_type: OrganType,
    pub appearance_cycle: u32,
    pub count: u32,
    pub sink_multiplier: f64,
    /// Total biomass of the cohort (all `count` organs), g.
    pub accumulated_biomass: f64,
}

impl OrganCohort {
    pub fn new(organ_type: OrganType, appearance_cycle: u32, sink_multiplier: f64) -> Self {
        OrganCohort {
            organ_type,
            appearance_cycle,
            count: 1,
            sink_multiplier,
            accumulated_biomass: 0.0,
        }
    }

    /// Age at cycle `n` (1 in the appearance cycle), `None` before it.
    pub fn age(&self, n: u32) -> Option<u32> {
        (n >= self.appearance_cycle).then(|| n - self.appearance_cycle + 1)
    }
}

/// Every organ the plant will initiate, sorted by appearance cycle.
///
/// Phytomer `i` (1-based) appears in cycle `i` and contributes one blade,
/// one sheath and one internode; the first `short_internode_count`
/// internodes carry the reduced sink multiplier.
pub fn organogenesis_schedule(
    constants: &GrowthConstants,
    traits: &GeneticTraits,
) -> Vec<OrganCohort> {
    let mut out = Vec::with_capacity(3 * constants.phytomer_count as usize + 2);
    for rank in 1..=constants.phytomer_count {
        out.push(OrganCohort::new(OrganType::Blade, rank, 1.0));
        out.push(OrganCohort::new(OrganType::Sheath, rank, 1.0));
        let m = if rank <= traits.short_internode_count {
            constants.short_internode_sink_factor
        } else {
            1.0
        };
        out.push(OrganCohort::new(OrganType::Internode, rank, m));
    }
    out.push(OrganCohort::new(OrganType::Cob, traits.ear_cycle, 1.0));
    out.push(OrganCohort::new(OrganType::Tassel, constants.tassel_cycle, 1.0));
    // Stable sort keeps blade/sheath/internode order within a cycle.
    out.sort_by_key(|c| c.appearance_cycle);
    out
}

/// Sink strength and sink-variation kernel of every organ type.
#[derive(Debug, Clone, PartialEq)]
pub struct SinkTable {
    strengths: [f64; 5],
    kernels: [Vec<f64>; 5],
}

impl SinkTable {
    pub fn new(traits: &GeneticTraits, constants: &GrowthConstants) -> Result<Self> {
        Ok(SinkTable {
            strengths: [
                traits.blade_sink,
                traits.sheath_sink,
                traits.internode_sink,
                traits.cob_sink,
                constants.tassel_sink,
            ],
            kernels: [
                sink_kernel(traits.blade_sink_var, constants.blade_expansion)?,
                sink_kernel(traits.sheath_sink_var, constants.sheath_expansion)?,
                sink_kernel(traits.internode_sink_var, constants.internode_expansion)?,
                sink_kernel(traits.cob_sink_var, constants.cob_expansion(traits.ear_cycle))?,
                sink_kernel(constants.tassel_sink_var, constants.tassel_expansion)?,
            ],
        })
    }

    pub fn strength(&self, organ: OrganType) -> f64 {
        self.strengths[organ.index()]
    }

    pub fn kernel(&self, organ: OrganType) -> &[f64] {
        &self.kernels[organ.index()]
    }

    /// Demand of one cohort at cycle `n`; zero outside its expansion period.
    pub fn cohort_demand(&self, cohort: &OrganCohort, n: u32) -> f64 {
        let kernel = self.kernel(cohort.organ_type);
        match cohort.age(n) {
            Some(age) if age as usize <= kernel.len() => {
                cohort.count as f64
                    * cohort.sink_multiplier
                    * self.strength(cohort.organ_type)
                    * kernel[age as usize - 1]
            }
            _ => 0.0,
        }
    }
}

/// Total plant demand at cycle `n`.
pub fn demand(cohorts: &[OrganCohort], n: u32, sinks: &SinkTable) -> f64 {
    cohorts.iter().map(|c| sinks.cohort_demand(c, n)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_constants() -> GrowthConstants {
        GrowthConstants {
            cycle_count: 5,
            phytomer_count: 3,
            tassel_cycle: 3,
            ..GrowthConstants::default()
        }
    }

    #[test]
    fn schedule_counts_cohorts() {
        let c = small_constants();
        let mut t = GeneticTraits::reference();
        t.ear_cycle = 2;
        t.short_internode_count = 2;
        let s = organogenesis_schedule(&c, &t);
        let count = |o| s.iter().filter(|c| c.organ_type == o).count();
        assert_eq!(count(OrganType::Blade), 3);
        assert_eq!(count(OrganType::Sheath), 3);
        assert_eq!(count(OrganType::Internode), 3);
        assert_eq!(count(OrganType::Cob), 1);
        assert_eq!(count(OrganType::Tassel), 1);
        let internodes: Vec<f64> = s
            .iter()
            .filter(|c| c.organ_type == OrganType::Internode)
            .map(|c| c.sink_multiplier)
            .collect();
        assert_eq!(internodes, vec![0.1, 0.1, 1.0]);
        assert!(s.windows(2).all(|w| w[0].appearance_cycle <= w[1].appearance_cycle));
    }

    #[test]
    fn reference_schedule_places_cob() {
        let c = GrowthConstants::default();
        let s = organogenesis_schedule(&c, &GeneticTraits::reference());
        assert_eq!(s.iter().filter(|c| c.organ_type == OrganType::Blade).count(), 23);
        let cob = s.iter().find(|c| c.organ_type == OrganType::Cob).unwrap();
        assert_eq!(cob.appearance_cycle, 15);
    }

    #[test]
    fn demand_of_single_unit_blade() {
        let c = GrowthConstants { blade_expansion: 1, ..small_constants() };
        let sinks = SinkTable::new(&GeneticTraits::reference(), &c).unwrap();
        let blade = OrganCohort::new(OrganType::Blade, 4, 1.0);
        assert_eq!(demand(std::slice::from_ref(&blade), 4, &sinks), 1.0);
        assert_eq!(demand(std::slice::from_ref(&blade), 5, &sinks), 0.0);
        assert_eq!(demand(std::slice::from_ref(&blade), 3, &sinks), 0.0);
        assert_eq!(demand(&[], 1, &sinks), 0.0);
    }

    #[test]
    fn demand_sums_blade_and_cob() {
        let c = GrowthConstants { blade_expansion: 3, ..small_constants() };
        let mut t = GeneticTraits::reference();
        t.blade_sink_var = 0.5;
        t.ear_cycle = 3;
        let sinks = SinkTable::new(&t, &c).unwrap();
        let cohorts = [
            OrganCohort::new(OrganType::Blade, 2, 1.0),
            OrganCohort::new(OrganType::Cob, 3, 1.0),
        ];
        // Oracle: blade at age 2 of a 3-cycle symmetric kernel, cob at age 1
        // of a 3-cycle kernel (cycles 3..=5).
        let fb = sink_kernel(0.5, 3).unwrap();
        let fc = sink_kernel(t.cob_sink_var, 3).unwrap();
        let expected = 1.0 * fb[1] + t.cob_sink * fc[0];
        assert_relative_eq!(demand(&cohorts, 3, &sinks), expected, max_relative = 1e-15);
    }
}
