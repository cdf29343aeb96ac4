use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;

use super::engine::{evolve_with, EngineSettings, GenerationStats};
use crate::error::{domain, Error, Result};
use crate::growth::{simulate, GeneticTraits, GrowthConstants, Param};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    /// Grid levels per continuous parameter.
    pub levels: usize,
    pub elitism: usize,
    pub seed: u64,
    /// Parameters under search, each over its variation range around the
    /// reference; the others stay at reference.
    pub params: Vec<Param>,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            generations: 300,
            crossover_prob: 0.8,
            mutation_prob: 0.05,
            levels: 16,
            elitism: 5,
            seed: 1,
            params: Param::ALL.to_vec(),
        }
    }
}

impl GaConfig {
    pub fn settings(&self) -> EngineSettings {
        EngineSettings {
            population_size: self.population_size,
            generations: self.generations,
            crossover_prob: self.crossover_prob,
            mutation_prob: self.mutation_prob,
            elitism: self.elitism,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.settings().validate()?;
        if self.levels < 2 {
            return Err(domain(format!("levels must be at least 2, got {}", self.levels)));
        }
        if self.params.is_empty() {
            return Err(domain("no parameters to optimise"));
        }
        for (i, p) in self.params.iter().enumerate() {
            if self.params[..i].contains(p) {
                return Err(domain(format!("parameter `{p}` listed twice")));
            }
        }
        Ok(())
    }

    /// Grid values of parameter `p`: `levels` evenly spaced points over its
    /// range, or every integer inside the range for integer parameters.
    pub fn grid(&self, p: Param) -> Vec<f64> {
        let (lo, hi) = p.bounds();
        if p.is_integer() {
            let (a, b) = (lo.ceil() as i64, hi.floor() as i64);
            (a..=b).map(|v| v as f64).collect()
        } else {
            let l = self.levels;
            (0..l)
                .map(|i| if i == l - 1 { hi } else { lo + i as f64 * (hi - lo) / (l - 1) as f64 })
                .collect()
        }
    }

    pub fn level_counts(&self) -> Vec<usize> {
        self.params.iter().map(|&p| self.grid(p).len()).collect()
    }
}

/// One candidate allele combination: a grid level per optimised parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct GaIndividual {
    pub genes: Vec<usize>,
    /// Final cob weight, g.
    pub fitness: f64,
}

pub fn decode(genes: &[usize], config: &GaConfig) -> Result<GeneticTraits> {
    if genes.len() != config.params.len() {
        return Err(Error::Dimension(format!(
            "{} genes for {} parameters",
            genes.len(),
            config.params.len()
        )));
    }
    let mut t = GeneticTraits::reference();
    for (&g, &p) in genes.iter().zip(&config.params) {
        let grid = config.grid(p);
        let v = *grid.get(g).ok_or(Error::Index { index: g, max: grid.len() - 1 })?;
        t.set(p, v);
    }
    Ok(t)
}

/// Grid levels of `traits`, if every optimised parameter sits on its grid.
pub fn encode(traits: &GeneticTraits, config: &GaConfig) -> Option<Vec<usize>> {
    config
        .params
        .iter()
        .map(|&p| {
            let v = traits.get(p);
            let grid = config.grid(p);
            let tol = 1e-9 * v.abs().max(1.0);
            grid.iter().position(|&x| (x - v).abs() <= tol)
        })
        .collect()
}

pub fn fitness(genes: &[usize], config: &GaConfig, constants: &GrowthConstants) -> Result<f64> {
    Ok(simulate(&decode(genes, config)?, constants)?.final_cob_weight())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaOutcome {
    pub best: GaIndividual,
    pub traits: GeneticTraits,
    pub history: Vec<GenerationStats>,
    pub evaluations: usize,
}

impl GaOutcome {
    /// Columns `generation,best_fitness,mean_fitness`.
    pub fn write_history_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["generation", "best_fitness", "mean_fitness"])?;
        for h in &self.history {
            w.write_record([h.generation.to_string(), h.best_fitness.to_string(), h.mean_fitness.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Search the allele grid for the combination with the heaviest cob.
pub fn evolve(config: &GaConfig, constants: &GrowthConstants) -> Result<GaOutcome> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let out = evolve_with(
        &config.level_counts(),
        &config.settings(),
        |g| fitness(g, config, constants),
        &mut rng,
    )?;
    Ok(GaOutcome {
        traits: decode(&out.best_genes, config)?,
        best: GaIndividual { genes: out.best_genes, fitness: out.best_fitness },
        history: out.history,
        evaluations: out.evaluations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryFlag {
    Min,
    Max,
    Interior,
}

impl fmt::Display for BoundaryFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryFlag::Min => "min",
            BoundaryFlag::Max => "max",
            BoundaryFlag::Interior => "interior",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdeotypeRow {
    pub param: Param,
    pub reference: f64,
    pub half_range: f64,
    pub optimal: f64,
    pub flag: BoundaryFlag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdeotypeReport {
    pub rows: Vec<IdeotypeRow>,
    pub reference_cob_weight: f64,
    pub optimized_cob_weight: f64,
}

impl IdeotypeReport {
    pub fn row(&self, p: Param) -> Option<&IdeotypeRow> {
        self.rows.iter().find(|r| r.param == p)
    }

    pub fn gain(&self) -> f64 {
        self.optimized_cob_weight / self.reference_cob_weight
    }

    /// Columns `parameter,reference,range,optimal,boundary_flag`, one row per
    /// optimised parameter then a `cob_weight` row; `range` is the relative
    /// half-width of the search interval.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["parameter", "reference", "range", "optimal", "boundary_flag"])?;
        for r in &self.rows {
            w.write_record([
                r.param.name().to_string(),
                r.reference.to_string(),
                r.half_range.to_string(),
                r.optimal.to_string(),
                r.flag.to_string(),
            ])?;
        }
        w.write_record([
            "cob_weight".to_string(),
            self.reference_cob_weight.to_string(),
            String::new(),
            self.optimized_cob_weight.to_string(),
            String::new(),
        ])?;
        w.flush()?;
        Ok(())
    }
}

/// Ideotype table for `best`: optimal value and grid-boundary status per
/// parameter, with reference and optimised cob weights.
pub fn report(best: &GaIndividual, config: &GaConfig, constants: &GrowthConstants) -> Result<IdeotypeReport> {
    let traits = decode(&best.genes, config)?;
    let counts = config.level_counts();
    let rows = config
        .params
        .iter()
        .zip(&best.genes)
        .zip(&counts)
        .map(|((&p, &g), &l)| IdeotypeRow {
            param: p,
            reference: p.reference(),
            half_range: p.half_range(),
            optimal: traits.get(p),
            flag: if g == 0 {
                BoundaryFlag::Min
            } else if g + 1 == l {
                BoundaryFlag::Max
            } else {
                BoundaryFlag::Interior
            },
        })
        .collect();
    Ok(IdeotypeReport {
        rows,
        reference_cob_weight: simulate(&GeneticTraits::reference(), constants)?.final_cob_weight(),
        optimized_cob_weight: best.fitness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn odd_config() -> GaConfig {
        GaConfig { levels: 15, ..GaConfig::default() }
    }

    #[test]
    fn midpoints_decode_to_reference() {
        let c = odd_config();
        let mid: Vec<usize> = c.level_counts().iter().map(|l| (l - 1) / 2).collect();
        let t = decode(&mid, &c).unwrap();
        for p in Param::ALL {
            assert!((t.get(p) - p.reference()).abs() <= 1e-12 * p.reference(), "{p}");
        }
    }

    #[test]
    fn endpoints_decode_to_bounds() {
        let c = GaConfig::default();
        let lo = decode(&[0; 12], &c).unwrap();
        let top: Vec<usize> = c.level_counts().iter().map(|l| l - 1).collect();
        let hi = decode(&top, &c).unwrap();
        for p in Param::ALL.iter().filter(|p| !p.is_integer()) {
            assert_eq!(lo.get(*p), p.bounds().0);
            assert_eq!(hi.get(*p), p.bounds().1);
        }
        assert_eq!(c.grid(Param::EarCycle), vec![12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0]);
        assert_eq!(c.grid(Param::ShortInternodes), vec![5.0, 6.0, 7.0]);
        assert_eq!((lo.ear_cycle, hi.ear_cycle), (12, 18));
        assert!(matches!(decode(&[16; 12], &c), Err(Error::Index { .. })));
    }

    #[test]
    fn fitness_is_deterministic_and_tracks_seed_biomass() {
        let k = GrowthConstants::reference();
        let c = odd_config();
        let mid: Vec<usize> = c.level_counts().iter().map(|l| (l - 1) / 2).collect();
        let f = fitness(&mid, &c, &k).unwrap();
        assert!((f / crate::growth::REFERENCE_COB_WEIGHT - 1.0).abs() < 0.1);
        assert_eq!(f, fitness(&mid, &c, &k).unwrap());
        let seed = c.params.iter().position(|&p| p == Param::SeedBiomass).unwrap();
        let mut lo = mid.clone();
        lo[seed] = 0;
        let mut hi = mid;
        hi[seed] = c.levels - 1;
        assert!(fitness(&lo, &c, &k).unwrap() < fitness(&hi, &c, &k).unwrap());
    }

    #[test]
    fn report_flags_boundaries() {
        let c = GaConfig::default();
        let mut genes: Vec<usize> = c.level_counts().iter().map(|l| l / 2).collect();
        genes[0] = 0;
        genes[11] = c.level_counts()[11] - 1;
        let k = GrowthConstants::reference();
        let best = GaIndividual { fitness: fitness(&genes, &c, &k).unwrap(), genes };
        let r = report(&best, &c, &k).unwrap();
        assert_eq!(r.rows[0].flag, BoundaryFlag::Min);
        assert_eq!(r.rows[11].flag, BoundaryFlag::Max);
        assert_eq!(r.rows[3].flag, BoundaryFlag::Interior);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("parameter,reference,range,optimal,boundary_flag\nblade_thickness,0.028,0.05,"));
        assert_eq!(text.lines().count(), 14);
    }

    #[test]
    fn zero_generations_return_best_initial() {
        let c = GaConfig { population_size: 12, generations: 0, ..GaConfig::default() };
        let out = evolve(&c, &GrowthConstants::reference()).unwrap();
        assert_eq!(out.history.len(), 1);
        assert_eq!(out.history[0].best_fitness, out.best.fitness);
    }

    #[test]
    fn config_rejects_duplicates_and_tiny_grids() {
        assert!(GaConfig { levels: 1, ..GaConfig::default() }.validate().is_err());
        let dup = GaConfig { params: vec![Param::CobSink, Param::CobSink], ..GaConfig::default() };
        assert!(dup.validate().is_err());
    }

    proptest! {
        #[test]
        fn decode_encode_round_trip(genes in prop::collection::vec(0usize..64, 12), levels in 2usize..20) {
            let c = GaConfig { levels, ..GaConfig::default() };
            let genes: Vec<usize> = genes.iter().zip(c.level_counts()).map(|(g, l)| g % l).collect();
            let t = decode(&genes, &c).unwrap();
            prop_assert_eq!(encode(&t, &c), Some(genes));
        }
    }
}
