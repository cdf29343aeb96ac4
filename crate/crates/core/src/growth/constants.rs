use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use super::{simulate, GeneticTraits};
use crate::error::{domain, Result};

/// Final cob weight of the reference plant, g.
pub const REFERENCE_COB_WEIGHT: f64 = 773.0;

/// Environment and architecture constants shared by every plant of an
/// experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowthConstants {
    /// Potential production factor `E`, constant over cycles.
    pub potential_production: f64,
    /// Ground projection area `Sp`, cm².
    pub ground_area: f64,
    /// Light-interception factor `k`.
    pub light_extinction: f64,
    /// Number of cycles a blade stays photosynthetic.
    pub blade_lifespan: u32,
    pub cycle_count: u32,
    pub phytomer_count: u32,
    pub tassel_cycle: u32,
    pub tassel_sink: f64,
    pub tassel_sink_var: f64,
    pub blade_expansion: u32,
    pub sheath_expansion: u32,
    pub internode_expansion: u32,
    pub tassel_expansion: u32,
    /// Demand multiplier applied to the basal short internodes, in (0, 1].
    pub short_internode_sink_factor: f64,
}

impl Default for GrowthConstants {
    fn default() -> Self {
        GrowthConstants {
            potential_production: 3.5,
            ground_area: 2400.0,
            light_extinction: 0.7,
            blade_lifespan: 10,
            cycle_count: 30,
            phytomer_count: 23,
            tassel_cycle: 23,
            tassel_sink: 1.0,
            tassel_sink_var: 0.5,
            blade_expansion: 8,
            sheath_expansion: 8,
            internode_expansion: 8,
            tassel_expansion: 8,
            short_internode_sink_factor: 0.1,
        }
    }
}

impl GrowthConstants {
    /// Default constants with `potential_production` calibrated so that the
    /// reference traits reach [`REFERENCE_COB_WEIGHT`]. Computed once.
    pub fn reference() -> Self {
        static CALIBRATED: OnceLock<GrowthConstants> = OnceLock::new();
        CALIBRATED
            .get_or_init(|| {
                let mut c = GrowthConstants::default();
                c.potential_production =
                    calibrate_potential(&GeneticTraits::reference(), &c, REFERENCE_COB_WEIGHT)
                        .expect("reference traits are valid under the default constants");
                c
            })
            .clone()
    }

    /// Expansion duration of the cob: it grows until the last cycle.
    pub fn cob_expansion(&self, ear_cycle: u32) -> u32 {
        self.cycle_count.saturating_sub(ear_cycle) + 1
    }

    /// Asymptotic production `E·Sp/(r·k)` for a given blade resistance.
    pub fn production_ceiling(&self, blade_resistance: f64) -> f64 {
        self.potential_production * self.ground_area / (blade_resistance * self.light_extinction)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("potential_production", self.potential_production),
            ("ground_area", self.ground_area),
            ("light_extinction", self.light_extinction),
            ("tassel_sink", self.tassel_sink),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.tassel_sink_var > 0.0 && self.tassel_sink_var < 1.0) {
            return Err(domain(format!(
                "tassel_sink_var must lie in (0, 1), got {}",
                self.tassel_sink_var
            )));
        }
        if !(self.short_internode_sink_factor > 0.0 && self.short_internode_sink_factor <= 1.0) {
            return Err(domain(format!(
                "short_internode_sink_factor must lie in (0, 1], got {}",
                self.short_internode_sink_factor
            )));
        }
        for (name, v) in [
            ("blade_lifespan", self.blade_lifespan),
            ("cycle_count", self.cycle_count),
            ("tassel_cycle", self.tassel_cycle),
            ("blade_expansion", self.blade_expansion),
            ("sheath_expansion", self.sheath_expansion),
            ("internode_expansion", self.internode_expansion),
            ("tassel_expansion", self.tassel_expansion),
        ] {
            if v < 1 {
                return Err(domain(format!("{name} must be at least 1")));
            }
        }
        if self.phytomer_count < 2 {
            return Err(domain("phytomer_count must be at least 2"));
        }
        if self.tassel_cycle > self.cycle_count {
            return Err(domain(format!(
                "tassel_cycle {} exceeds cycle_count {}",
                self.tassel_cycle, self.cycle_count
            )));
        }
        Ok(())
    }
}

/// Find the potential production factor for which `traits` reach `target`
/// final cob weight. Cob weight is strictly increasing in the factor, so a
/// bracketing geometric bisection converges to machine precision.
pub fn calibrate_potential(
    traits: &GeneticTraits,
    constants: &GrowthConstants,
    target: f64,
) -> Result<f64> {
    if !(target > 0.0) || !target.is_finite() {
        return Err(domain(format!("calibration target must be positive, got {target}")));
    }
    let mut c = constants.clone();
    let mut cob_at = |e: f64| -> Result<f64> {
        c.potential_production = e;
        Ok(simulate(traits, &c)?.final_cob_weight())
    };
    let (mut lo, mut hi) = (1e-3, 1.0);
    while cob_at(hi)? < target {
        lo = hi;
        hi *= 4.0;
        if hi > 1e9 {
            return Err(domain("calibration target unreachable: cob never reaches it"));
        }
    }
    while cob_at(lo)? > target {
        hi = lo;
        lo /= 4.0;
        if lo < 1e-12 {
            return Err(domain("calibration target unreachable: cob always exceeds it"));
        }
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if cob_at(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn defaults_validate() {
        GrowthConstants::default().validate().unwrap();
        let d = GrowthConstants::default();
        let c = GrowthConstants { tassel_cycle: d.cycle_count + 1, ..d };
        assert!(c.validate().is_err());
        let c = GrowthConstants { blade_expansion: 0, ..GrowthConstants::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn calibration_hits_reference_weight() {
        let c = GrowthConstants::reference();
        let w = simulate(&GeneticTraits::reference(), &c).unwrap().final_cob_weight();
        assert_relative_eq!(w, REFERENCE_COB_WEIGHT, max_relative = 1e-9);
    }

    #[test]
    fn calibration_rejects_bad_target() {
        let t = GeneticTraits::reference();
        assert!(calibrate_potential(&t, &GrowthConstants::default(), 0.0).is_err());
    }
}
