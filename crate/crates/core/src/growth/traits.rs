use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::GrowthConstants;
use crate::error::{domain, Error, Result};

/// The twelve genetically determined growth parameters, in genome-vector
/// order. Blade sink is the normalisation anchor and is not listed.
///
/// The two topological parameters come last so that the integer-valued
/// components of the parameter vector are the final two entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    BladeThickness,
    BladeResistance,
    SheathSink,
    InternodeSink,
    CobSink,
    BladeSinkVar,
    SheathSinkVar,
    InternodeSinkVar,
    CobSinkVar,
    SeedBiomass,
    #[serde(rename = "short_internode_count")]
    ShortInternodes,
    EarCycle,
}

impl Param {
    pub const COUNT: usize = 12;

    pub const ALL: [Param; Param::COUNT] = [
        Param::BladeThickness,
        Param::BladeResistance,
        Param::SheathSink,
        Param::InternodeSink,
        Param::CobSink,
        Param::BladeSinkVar,
        Param::SheathSinkVar,
        Param::InternodeSinkVar,
        Param::CobSinkVar,
        Param::SeedBiomass,
        Param::ShortInternodes,
        Param::EarCycle,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::BladeThickness => "blade_thickness",
            Param::BladeResistance => "blade_resistance",
            Param::SheathSink => "sheath_sink",
            Param::InternodeSink => "internode_sink",
            Param::CobSink => "cob_sink",
            Param::BladeSinkVar => "blade_sink_var",
            Param::SheathSinkVar => "sheath_sink_var",
            Param::InternodeSinkVar => "internode_sink_var",
            Param::CobSinkVar => "cob_sink_var",
            Param::SeedBiomass => "seed_biomass",
            Param::ShortInternodes => "short_internode_count",
            Param::EarCycle => "ear_cycle",
        }
    }

    pub fn is_integer(self) -> bool {
        matches!(self, Param::ShortInternodes | Param::EarCycle)
    }

    /// Reference value of the parameter for the calibrated maize plant.
    pub fn reference(self) -> f64 {
        match self {
            Param::BladeThickness => 0.028,
            Param::BladeResistance => 354.0,
            Param::SheathSink => 0.7,
            Param::InternodeSink => 2.17,
            Param::CobSink => 202.0,
            Param::BladeSinkVar => 0.4,
            Param::SheathSinkVar => 0.53,
            Param::InternodeSinkVar => 0.79,
            Param::CobSinkVar => 0.62,
            Param::SeedBiomass => 0.3,
            Param::ShortInternodes => 6.0,
            Param::EarCycle => 15.0,
        }
    }

    /// Relative half-width of the admissible variation range around
    /// [`Param::reference`].
    pub fn half_range(self) -> f64 {
        match self {
            Param::BladeThickness | Param::BladeResistance => 0.05,
            Param::SheathSink | Param::InternodeSink | Param::SeedBiomass => 0.10,
            Param::BladeSinkVar
            | Param::SheathSinkVar
            | Param::InternodeSinkVar
            | Param::ShortInternodes
            | Param::EarCycle => 0.20,
            Param::CobSink | Param::CobSinkVar => 0.30,
        }
    }

    pub fn bounds(self) -> (f64, f64) {
        let r = self.reference();
        let h = self.half_range();
        (r * (1.0 - h), r * (1.0 + h))
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownTrait(s.to_string()))
    }
}

/// Round half away from zero, as used for the topological parameters.
pub fn round_half_away(x: f64) -> f64 {
    // f64::round already rounds half-way cases away from zero.
    x.round()
}

/// Growth parameters of one plant that are under genetic control, plus the
/// fixed blade sink.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneticTraits {
    /// Leaf specific weight `e`, g/cm².
    pub blade_thickness: f64,
    /// Transpiration resistance `r`.
    pub blade_resistance: f64,
    pub blade_sink: f64,
    pub sheath_sink: f64,
    pub internode_sink: f64,
    pub cob_sink: f64,
    pub blade_sink_var: f64,
    pub sheath_sink_var: f64,
    pub internode_sink_var: f64,
    pub cob_sink_var: f64,
    pub short_internode_count: u32,
    pub ear_cycle: u32,
    /// Initial supply Q(0), g.
    pub seed_biomass: f64,
}

impl Default for GeneticTraits {
    fn default() -> Self {
        Self::reference()
    }
}

impl GeneticTraits {
    pub fn reference() -> Self {
        let mut t = GeneticTraits {
            blade_thickness: 0.0,
            blade_resistance: 0.0,
            blade_sink: 1.0,
            sheath_sink: 0.0,
            internode_sink: 0.0,
            cob_sink: 0.0,
            blade_sink_var: 0.0,
            sheath_sink_var: 0.0,
            internode_sink_var: 0.0,
            cob_sink_var: 0.0,
            short_internode_count: 0,
            ear_cycle: 0,
            seed_biomass: 0.0,
        };
        for p in Param::ALL {
            t.set(p, p.reference());
        }
        t
    }

    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::BladeThickness => self.blade_thickness,
            Param::BladeResistance => self.blade_resistance,
            Param::SheathSink => self.sheath_sink,
            Param::InternodeSink => self.internode_sink,
            Param::CobSink => self.cob_sink,
            Param::BladeSinkVar => self.blade_sink_var,
            Param::SheathSinkVar => self.sheath_sink_var,
            Param::InternodeSinkVar => self.internode_sink_var,
            Param::CobSinkVar => self.cob_sink_var,
            Param::SeedBiomass => self.seed_biomass,
            Param::ShortInternodes => self.short_internode_count as f64,
            Param::EarCycle => self.ear_cycle as f64,
        }
    }

    /// Set a parameter from a real value. Integer parameters are rounded
    /// half away from zero and clamped at zero.
    pub fn set(&mut self, p: Param, value: f64) {
        match p {
            Param::BladeThickness => self.blade_thickness = value,
            Param::BladeResistance => self.blade_resistance = value,
            Param::SheathSink => self.sheath_sink = value,
            Param::InternodeSink => self.internode_sink = value,
            Param::CobSink => self.cob_sink = value,
            Param::BladeSinkVar => self.blade_sink_var = value,
            Param::SheathSinkVar => self.sheath_sink_var = value,
            Param::InternodeSinkVar => self.internode_sink_var = value,
            Param::CobSinkVar => self.cob_sink_var = value,
            Param::SeedBiomass => self.seed_biomass = value,
            Param::ShortInternodes => self.short_internode_count = round_half_away(value).max(0.0) as u32,
            Param::EarCycle => self.ear_cycle = round_half_away(value).max(0.0) as u32,
        }
    }

    pub fn with(mut self, p: Param, value: f64) -> Self {
        self.set(p, value);
        self
    }

    /// Parameter vector in [`Param::ALL`] order.
    pub fn to_vector(&self) -> Vec<f64> {
        Param::ALL.iter().map(|&p| self.get(p)).collect()
    }

    pub fn from_vector(values: &[f64]) -> Result<Self> {
        if values.len() != Param::COUNT {
            return Err(Error::Dimension(format!(
                "parameter vector has {} entries, expected {}",
                values.len(),
                Param::COUNT
            )));
        }
        let mut t = GeneticTraits::reference();
        for (p, &v) in Param::ALL.iter().zip(values) {
            t.set(*p, v);
        }
        Ok(t)
    }

    /// Check the trait invariants against the growth constants they will run
    /// with. `seed_biomass == 0` is accepted and yields an empty plant.
    pub fn validate(&self, constants: &GrowthConstants) -> Result<()> {
        let positive = [
            ("blade_thickness", self.blade_thickness),
            ("blade_resistance", self.blade_resistance),
            ("blade_sink", self.blade_sink),
            ("sheath_sink", self.sheath_sink),
            ("internode_sink", self.internode_sink),
            ("cob_sink", self.cob_sink),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(domain(format!("{name} must be positive, got {v}")));
            }
        }
        let shapes = [
            ("blade_sink_var", self.blade_sink_var),
            ("sheath_sink_var", self.sheath_sink_var),
            ("internode_sink_var", self.internode_sink_var),
            ("cob_sink_var", self.cob_sink_var),
        ];
        for (name, v) in shapes {
            if !(v > 0.0 && v < 1.0) {
                return Err(domain(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if self.short_internode_count < 1 || self.short_internode_count >= constants.phytomer_count {
            return Err(domain(format!(
                "short_internode_count must lie in [1, {}), got {}",
                constants.phytomer_count, self.short_internode_count
            )));
        }
        if self.ear_cycle < 1 || self.ear_cycle > constants.cycle_count {
            return Err(domain(format!(
                "ear_cycle must lie in [1, {}], got {}",
                constants.cycle_count, self.ear_cycle
            )));
        }
        if !(self.seed_biomass >= 0.0) || !self.seed_biomass.is_finite() {
            return Err(domain(format!(
                "seed_biomass must be non-negative, got {}",
                self.seed_biomass
            )));
        }
        Ok(())
    }
}
