//! One function per subcommand. Each writes its CSVs under `out` and returns
//! what the binary prints.

use anyhow::{bail, Context, Result};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use greenqtl::growth::CobSurface;
use greenqtl::qtl::{write_hits_csv, LocusCalls};
use greenqtl::{
    apply_noise, assign_loci, detect, evolve, make_ril, report, scan_values, simulate, surface_scan, GeneticTraits,
    IdeotypeReport, LodProfile, MappingPopulation, Param, QtlHit, TraitSelector,
};

use crate::config::ExperimentConfig;

pub const SERIES_FILE: &str = "series.csv";
pub const IDEOTYPE_FILE: &str = "ideotype.csv";
pub const HISTORY_FILE: &str = "history.csv";
pub const SURFACE_FILE: &str = "surface.csv";

pub fn lod_file(selector: TraitSelector) -> String {
    format!("lod_{}.csv", selector.name())
}

pub fn hits_file(selector: TraitSelector) -> String {
    format!("hits_{}.csv", selector.name())
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    let f = File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// Master random stream of a run.
pub fn master_rng(config: &ExperimentConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateOutcome {
    pub traits: GeneticTraits,
    pub cob_weight: f64,
    pub series: PathBuf,
}

/// Simulate `config.traits` with `overrides` applied on top.
pub fn cmd_simulate(config: &ExperimentConfig, overrides: &[(Param, f64)], out: &Path) -> Result<SimulateOutcome> {
    let constants = config.constants()?;
    let mut traits = config.traits.clone();
    for &(p, v) in overrides {
        traits.set(p, v);
    }
    traits.validate(&constants).context("invalid trait override")?;
    let series = simulate(&traits, &constants)?;
    let mut w = create(out, SERIES_FILE)?;
    series.write_csv(&mut w)?;
    w.flush()?;
    Ok(SimulateOutcome { cob_weight: series.final_cob_weight(), traits, series: out.join(SERIES_FILE) })
}

/// RIL population drawn from the start of the master stream.
pub fn build_population(config: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<MappingPopulation> {
    let model = config.genotype_model()?;
    let mut pop = make_ril(&model, config.population.generations, config.population.size, rng)?;
    pop.seed = Some(config.seed);
    Ok(pop)
}

pub fn cmd_population(config: &ExperimentConfig, out: &Path) -> Result<MappingPopulation> {
    let pop = build_population(config, &mut master_rng(config))?;
    pop.export_dir(out).with_context(|| format!("cannot write population files to {}", out.display()))?;
    Ok(pop)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QtlOutcome {
    pub profile: LodProfile,
    pub hits: Vec<QtlHit>,
    pub calls: LocusCalls,
}

/// Scan `selector` on a freshly bred population, or on the files in `input`.
/// With `cv > 0` the trait values are perturbed first, drawing from the
/// master stream after breeding.
pub fn cmd_qtl(
    config: &ExperimentConfig,
    selector: TraitSelector,
    cv: f64,
    input: Option<&Path>,
    out: &Path,
) -> Result<QtlOutcome> {
    let mut rng = master_rng(config);
    let pop = match input {
        Some(dir) => {
            let markers = config.genetic_map()?.locus_markers().to_vec();
            MappingPopulation::import_dir(dir, markers)
                .with_context(|| format!("cannot read population from {}", dir.display()))?
        }
        None => build_population(config, &mut rng)?,
    };
    if !(cv >= 0.0) || !cv.is_finite() {
        bail!("noise cv must be a non-negative number, got {cv}");
    }
    let values = apply_noise(&selector.values(&pop), cv, &mut rng)?;
    let profile = scan_values(selector.name(), &values, &pop)?;
    let hits = detect(&profile, &config.peak_rule());
    let calls = assign_loci(&hits, &pop.map);

    let mut w = create(out, &lod_file(selector))?;
    profile.write_csv(&pop.map, &mut w)?;
    w.flush()?;
    let mut w = create(out, &hits_file(selector))?;
    write_hits_csv(&hits, &pop.map, &mut w)?;
    w.flush()?;
    Ok(QtlOutcome { profile, hits, calls })
}

pub fn cmd_optimize(config: &ExperimentConfig, out: &Path) -> Result<IdeotypeReport> {
    let constants = config.constants()?;
    let ga = config.ga_config();
    let outcome = evolve(&ga, &constants)?;
    let table = report(&outcome.best, &ga, &constants)?;
    let mut w = create(out, IDEOTYPE_FILE)?;
    table.write_csv(&mut w)?;
    w.flush()?;
    let mut w = create(out, HISTORY_FILE)?;
    outcome.write_history_csv(&mut w)?;
    w.flush()?;
    Ok(table)
}

/// Long format `x,y,cob_weight`, x varying slowest.
pub fn write_surface_csv<W: Write>(surface: &CobSurface, mut w: W) -> Result<()> {
    writeln!(w, "{},{},cob_weight", surface.x_param.name(), surface.y_param.name())?;
    for (i, x) in surface.x_values.iter().enumerate() {
        for (j, y) in surface.y_values.iter().enumerate() {
            writeln!(w, "{x},{y},{}", surface.weights[i][j])?;
        }
    }
    Ok(())
}

/// Cob weight over `config.surface`, with the other traits taken from
/// `config.traits`.
pub fn cmd_surface(config: &ExperimentConfig, out: &Path) -> Result<CobSurface> {
    let s = &config.surface;
    let range = |p: Param, r: Option<[f64; 2]>| r.map_or_else(|| p.bounds(), |[a, b]| (a, b));
    let surface = surface_scan(
        &config.traits,
        &config.constants()?,
        s.x,
        s.y,
        range(s.x, s.x_range),
        range(s.y, s.y_range),
        s.grid,
    )?;
    let mut w = create(out, SURFACE_FILE)?;
    write_surface_csv(&surface, &mut w)?;
    w.flush()?;
    Ok(surface)
}
