use std::io::Write;

use super::{demand, organogenesis_schedule, GeneticTraits, GrowthConstants, OrganCohort, OrganType, SinkTable};
use crate::error::{domain, Error, Result};

/// Biomass produced in one cycle from `active_blade_biomass` grams of
/// photosynthetic blades (Beer-Lambert interception).
pub fn production(active_blade_biomass: f64, traits: &GeneticTraits, constants: &GrowthConstants) -> Result<f64> {
    if traits.blade_thickness == 0.0
        || traits.blade_resistance == 0.0
        || constants.light_extinction == 0.0
        || constants.ground_area == 0.0
    {
        return Err(domain("production needs nonzero e, r, k and Sp"));
    }
    if !(active_blade_biomass >= 0.0) {
        return Err(domain(format!(
            "active blade biomass must be non-negative, got {active_blade_biomass}"
        )));
    }
    Ok(production_unchecked(active_blade_biomass, traits, constants))
}

fn production_unchecked(b: f64, traits: &GeneticTraits, constants: &GrowthConstants) -> f64 {
    let k = constants.light_extinction;
    let sp = constants.ground_area;
    constants.production_ceiling(traits.blade_resistance)
        * -(-k * b / (traits.blade_thickness * sp)).exp_m1()
}

/// Values recorded at the end of cycle `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleRecord {
    pub cycle: u32,
    /// Production `Q(n)` of this cycle, g.
    pub production: f64,
    /// Total demand `D(n)`.
    pub demand: f64,
    /// `Q(n-1) / D(n)`, zero when nothing expands.
    pub supply_demand_ratio: f64,
    /// Biomass of blades aged at most the blade lifespan, g.
    pub active_blade_biomass: f64,
    /// Active blade area, cm².
    pub blade_area: f64,
    /// Total biomass allocated during this cycle, g.
    pub allocated: f64,
    /// Compartment biomass per organ type, indexed by [`OrganType::index`].
    pub compartments: [f64; 5],
}

impl CycleRecord {
    pub fn compartment(&self, organ: OrganType) -> f64 {
        self.compartments[organ.index()]
    }
}

/// Plant at the end of a cycle. `cycle == 0` is the seed.
#[derive(Debug, Clone)]
pub struct PlantState {
    traits: GeneticTraits,
    constants: GrowthConstants,
    sinks: SinkTable,
    pending: Vec<OrganCohort>,
    pub cycle: u32,
    /// Production of the last completed cycle, `Q(cycle)`.
    pub supply: f64,
    /// Initiated organs in appearance order.
    pub cohorts: Vec<OrganCohort>,
}

impl PlantState {
    pub fn new(traits: &GeneticTraits, constants: &GrowthConstants) -> Result<Self> {
        constants.validate()?;
        traits.validate(constants)?;
        let mut pending = organogenesis_schedule(constants, traits);
        pending.reverse();
        Ok(PlantState {
            traits: traits.clone(),
            constants: constants.clone(),
            sinks: SinkTable::new(traits, constants)?,
            pending,
            cycle: 0,
            supply: traits.seed_biomass,
            cohorts: Vec::new(),
        })
    }

    pub fn sinks(&self) -> &SinkTable {
        &self.sinks
    }

    /// Blades still photosynthetic at the current cycle.
    pub fn active_blade_biomass(&self) -> f64 {
        let n = self.cycle;
        let tb = self.constants.blade_lifespan;
        self.cohorts
            .iter()
            .filter(|c| c.organ_type == OrganType::Blade)
            .filter(|c| matches!(c.age(n), Some(a) if a <= tb))
            .map(|c| c.accumulated_biomass)
            .sum()
    }

    pub fn compartments(&self) -> [f64; 5] {
        let mut out = [0.0; 5];
        for c in &self.cohorts {
            out[c.organ_type.index()] += c.accumulated_biomass;
        }
        out
    }

    /// Advance one cycle: initiate organs, allocate `Q(n-1)` by demand, then
    /// produce `Q(n)`.
    pub fn step(&mut self) -> CycleRecord {
        let n = self.cycle + 1;
        while self.pending.last().is_some_and(|c| c.appearance_cycle <= n) {
            let c = self.pending.pop().expect("checked non-empty");
            self.cohorts.push(c);
        }
        let total = demand(&self.cohorts, n, &self.sinks);
        let supply = self.supply;
        let mut allocated = 0.0;
        if total > 0.0 {
            for c in &mut self.cohorts {
                let d = self.sinks.cohort_demand(c, n);
                if d > 0.0 {
                    let gain = d * supply / total;
                    c.accumulated_biomass += gain;
                    allocated += gain;
                }
            }
        }
        self.cycle = n;
        let active = self.active_blade_biomass();
        self.supply = production_unchecked(active, &self.traits, &self.constants);
        CycleRecord {
            cycle: n,
            production: self.supply,
            demand: total,
            supply_demand_ratio: if total > 0.0 { supply / total } else { 0.0 },
            active_blade_biomass: active,
            blade_area: active / self.traits.blade_thickness,
            allocated,
            compartments: self.compartments(),
        }
    }
}

/// Per-cycle history of one plant, cycles `1..=cycle_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSeries {
    pub seed_biomass: f64,
    pub records: Vec<CycleRecord>,
}

impl GrowthSeries {
    pub fn cycle_count(&self) -> u32 {
        self.records.len() as u32
    }

    /// Cob weight at the end of cycle `n`.
    pub fn cob_weight(&self, n: u32) -> Result<f64> {
        let max = self.records.len();
        if n < 1 || n as usize > max {
            return Err(Error::Index { index: n as usize, max });
        }
        Ok(self.records[n as usize - 1].compartment(OrganType::Cob))
    }

    pub fn final_cob_weight(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.compartment(OrganType::Cob))
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "cycle", "Q", "D", "Q_over_D", "blade_area", "blade", "sheath", "internode", "cob", "tassel",
    ];

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(Self::CSV_HEADER)?;
        for r in &self.records {
            let mut row = vec![
                r.cycle.to_string(),
                r.production.to_string(),
                r.demand.to_string(),
                r.supply_demand_ratio.to_string(),
                r.blade_area.to_string(),
            ];
            row.extend(r.compartments.iter().map(f64::to_string));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Run a plant from seed through `cycle_count` cycles.
pub fn simulate(traits: &GeneticTraits, constants: &GrowthConstants) -> Result<GrowthSeries> {
    let mut state = PlantState::new(traits, constants)?;
    let records = (0..constants.cycle_count).map(|_| state.step()).collect();
    Ok(GrowthSeries {
        seed_biomass: traits.seed_biomass,
        records,
    })
}
