//! Experiment configuration file (TOML).

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

use greenqtl::genetics::{ExpressionRules, LocusMode, LOCUS_COUNT};
use greenqtl::growth::calibrate_potential;
use greenqtl::qtl::TraitSelector;
use greenqtl::{
    EffectPreset, GaConfig, GeneEffectMap, GeneticMap, GeneticTraits, GenotypeModel, GrowthConstants, Param,
    PeakRule, REFERENCE_COB_WEIGHT,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{file}: cannot read")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: {message}")]
    Parse { file: String, message: String },
    /// A value that parsed but breaks an invariant. `line` is 1-based.
    #[error("{file}:{line}: `{key}`: {message}", line = line.map_or_else(|| "?".to_string(), |l| l.to_string()))]
    Invalid { file: String, line: Option<usize>, key: String, message: String },
}

/// Key path and message of a failed check.
#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    pub key: String,
    pub message: String,
}

impl Issue {
    fn new(key: &str, message: impl ToString) -> Self {
        Issue { key: key.to_string(), message: message.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationBlock {
    /// Calibrate the potential production factor so the reference plant
    /// reaches `target_cob_weight`.
    pub enabled: bool,
    pub target_cob_weight: f64,
}

impl Default for CalibrationBlock {
    fn default() -> Self {
        CalibrationBlock { enabled: true, target_cob_weight: REFERENCE_COB_WEIGHT }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MapBlock {
    pub marker_spacing_cm: f64,
    /// Markers intercalated between consecutive genes.
    pub markers_between_loci: usize,
}

impl Default for MapBlock {
    fn default() -> Self {
        MapBlock { marker_spacing_cm: 10.0, markers_between_loci: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EffectsBlock {
    /// `pleiotropic` (alias `fig4`) or `diagonal`. Ignored when `rows` is set.
    pub preset: String,
    /// Explicit weight matrix, one row of 15 weights per parameter.
    pub rows: Option<Vec<Vec<f64>>>,
    /// 1-based loci where the allele on the first chromosome dominates.
    pub dominant_loci: Vec<usize>,
}

impl Default for EffectsBlock {
    fn default() -> Self {
        EffectsBlock { preset: "pleiotropic".to_string(), rows: None, dominant_loci: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PopulationBlock {
    pub size: usize,
    /// F1 plus selfings: 6 gives an F6.
    pub generations: u32,
}

impl Default for PopulationBlock {
    fn default() -> Self {
        PopulationBlock { size: 250, generations: 6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseBlock {
    /// Coefficient of variation of the multiplicative measurement error.
    pub cv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QtlBlock {
    /// Parameter name or `cob_weight`.
    pub trait_name: String,
    pub threshold: f64,
    pub min_drop: f64,
}

impl Default for QtlBlock {
    fn default() -> Self {
        let r = PeakRule::default();
        QtlBlock { trait_name: Param::BladeThickness.name().to_string(), threshold: r.threshold, min_drop: r.min_drop }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaBlock {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub levels: usize,
    pub elitism: usize,
    pub params: Vec<Param>,
}

impl Default for GaBlock {
    fn default() -> Self {
        let g = GaConfig::default();
        GaBlock {
            population_size: g.population_size,
            generations: g.generations,
            crossover_prob: g.crossover_prob,
            mutation_prob: g.mutation_prob,
            levels: g.levels,
            elitism: g.elitism,
            params: g.params,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SurfaceBlock {
    pub x: Param,
    pub y: Param,
    pub grid: usize,
    /// Defaults to the parameter's variation range.
    pub x_range: Option<[f64; 2]>,
    pub y_range: Option<[f64; 2]>,
}

impl Default for SurfaceBlock {
    fn default() -> Self {
        SurfaceBlock { x: Param::CobSink, y: Param::CobSinkVar, grid: 20, x_range: None, y_range: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Master seed; every random stream derives from it.
    pub seed: u64,
    pub output_dir: PathBuf,
    pub growth: GrowthConstants,
    pub calibration: CalibrationBlock,
    /// Plant simulated by `simulate`; unset fields keep reference values.
    pub traits: GeneticTraits,
    pub map: MapBlock,
    pub effects: EffectsBlock,
    pub population: PopulationBlock,
    pub noise: NoiseBlock,
    pub qtl: QtlBlock,
    pub ga: GaBlock,
    pub surface: SurfaceBlock,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 1,
            output_dir: PathBuf::from("out"),
            growth: GrowthConstants::default(),
            calibration: CalibrationBlock::default(),
            traits: GeneticTraits::reference(),
            map: MapBlock::default(),
            effects: EffectsBlock::default(),
            population: PopulationBlock::default(),
            noise: NoiseBlock::default(),
            qtl: QtlBlock::default(),
            ga: GaBlock::default(),
            surface: SurfaceBlock::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Read, parse and validate `path`. Messages carry the file line.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let file = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { file: file.clone(), source })?;
        let cfg = Self::from_toml(&text).map_err(|e| ConfigError::Parse { file: file.clone(), message: e.to_string() })?;
        cfg.validate().map_err(|issue| ConfigError::Invalid {
            line: locate_key(&text, &issue.key),
            file,
            key: issue.key,
            message: issue.message,
        })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Issue> {
        self.growth.validate().map_err(|e| Issue::new("growth", e))?;
        if self.calibration.enabled && !(self.calibration.target_cob_weight > 0.0) {
            return Err(Issue::new("calibration.target_cob_weight", "must be positive"));
        }
        self.traits.validate(&self.growth).map_err(|e| Issue::new("traits", e))?;
        self.genetic_map().map_err(|e| Issue::new("map.marker_spacing_cm", e))?;
        self.effect_map()?;
        self.expression_rules()?;
        if self.population.generations < 2 {
            return Err(Issue::new("population.generations", "must be at least 2 (F1 plus one selfing)"));
        }
        if !(self.noise.cv >= 0.0) || !self.noise.cv.is_finite() {
            return Err(Issue::new("noise.cv", "must be a non-negative number"));
        }
        self.qtl.trait_name.parse::<TraitSelector>().map_err(|e| Issue::new("qtl.trait_name", e))?;
        if !(self.qtl.threshold > 0.0) {
            return Err(Issue::new("qtl.threshold", "must be positive"));
        }
        if !(self.qtl.min_drop >= 0.0) {
            return Err(Issue::new("qtl.min_drop", "must be non-negative"));
        }
        self.ga_config().validate().map_err(|e| {
            let key = match e.to_string() {
                m if m.contains("levels") => "ga.levels",
                m if m.contains("elitism") => "ga.elitism",
                m if m.contains("crossover") => "ga.crossover_prob",
                m if m.contains("mutation") => "ga.mutation_prob",
                m if m.contains("population") => "ga.population_size",
                _ => "ga.params",
            };
            Issue::new(key, e)
        })?;
        if self.surface.x.is_integer() {
            return Err(Issue::new("surface.x", "surface axes must be continuous parameters"));
        }
        if self.surface.y.is_integer() {
            return Err(Issue::new("surface.y", "surface axes must be continuous parameters"));
        }
        if self.surface.x == self.surface.y {
            return Err(Issue::new("surface.y", "surface axes must differ"));
        }
        if self.surface.grid < 2 {
            return Err(Issue::new("surface.grid", "must be at least 2"));
        }
        Ok(())
    }

    /// Growth constants with the calibration applied.
    pub fn constants(&self) -> greenqtl::Result<GrowthConstants> {
        let mut c = self.growth.clone();
        if self.calibration.enabled {
            if c == GrowthConstants::default() && self.calibration.target_cob_weight == REFERENCE_COB_WEIGHT {
                return Ok(GrowthConstants::reference());
            }
            c.potential_production =
                calibrate_potential(&GeneticTraits::reference(), &c, self.calibration.target_cob_weight)?;
        }
        Ok(c)
    }

    pub fn genetic_map(&self) -> greenqtl::Result<GeneticMap> {
        GeneticMap::regular(LOCUS_COUNT, self.map.marker_spacing_cm, self.map.markers_between_loci)
    }

    pub fn effect_map(&self) -> Result<GeneEffectMap, Issue> {
        match &self.effects.rows {
            Some(rows) => GeneEffectMap::for_growth(rows.clone()).and_then(|m| {
                if m.locus_count() == LOCUS_COUNT {
                    Ok(m)
                } else {
                    Err(greenqtl::Error::Dimension(format!("rows need {LOCUS_COUNT} weights")))
                }
            })
            .map_err(|e| Issue::new("effects.rows", e)),
            None => self
                .effects
                .preset
                .parse::<EffectPreset>()
                .map(GeneEffectMap::preset)
                .map_err(|e| Issue::new("effects.preset", e)),
        }
    }

    pub fn expression_rules(&self) -> Result<ExpressionRules, Issue> {
        let mut rules = ExpressionRules::additive(LOCUS_COUNT);
        for &l in &self.effects.dominant_loci {
            if !(1..=LOCUS_COUNT).contains(&l) {
                return Err(Issue::new("effects.dominant_loci", format!("locus {l} outside 1..={LOCUS_COUNT}")));
            }
            rules.modes[l - 1] = LocusMode::Dominant { order: Vec::new() };
        }
        Ok(rules)
    }

    pub fn genotype_model(&self) -> anyhow::Result<GenotypeModel> {
        let effects = self.effect_map().map_err(|i| anyhow::anyhow!("{}: {}", i.key, i.message))?;
        let rules = self.expression_rules().map_err(|i| anyhow::anyhow!("{}: {}", i.key, i.message))?;
        Ok(GenotypeModel { map: self.genetic_map()?, effects, rules, constants: self.constants()? })
    }

    pub fn ga_config(&self) -> GaConfig {
        let g = &self.ga;
        GaConfig {
            population_size: g.population_size,
            generations: g.generations,
            crossover_prob: g.crossover_prob,
            mutation_prob: g.mutation_prob,
            levels: g.levels,
            elitism: g.elitism,
            seed: self.seed,
            params: g.params.clone(),
        }
    }

    pub fn peak_rule(&self) -> PeakRule {
        PeakRule { threshold: self.qtl.threshold, min_drop: self.qtl.min_drop }
    }
}

/// 1-based line holding `key` (a dotted path such as `ga.levels`), or the
/// header of its section when the key itself is absent.
pub fn locate_key(text: &str, key: &str) -> Option<usize> {
    let (section, leaf) = match key.rsplit_once('.') {
        Some((s, l)) => (s, l),
        None => ("", key),
    };
    let mut current = String::new();
    let mut header_line = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
            if current == section || (section.is_empty() && current == leaf) {
                header_line = Some(i + 1);
            }
            continue;
        }
        if current == section {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim() == leaf {
                    return Some(i + 1);
                }
            }
        }
    }
    header_line
}
