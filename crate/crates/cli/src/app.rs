//! Command-line front end.

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;

use greenqtl::{Param, TraitSelector};

use crate::commands::{cmd_optimize, cmd_population, cmd_qtl, cmd_simulate, cmd_surface};
use crate::config::ExperimentConfig;

#[derive(Debug, Parser)]
#[command(name = "greenqtl", version, about = "Plant growth, virtual QTL mapping and ideotype search")]
pub struct Cli {
    /// Experiment file (TOML). Built-in defaults apply without one.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master seed; overrides `seed` in the config.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one plant and write its per-cycle series.
    Simulate {
        /// Trait override `name=value`; repeatable.
        #[arg(long = "set", value_name = "NAME=VALUE", value_parser = parse_override)]
        set: Vec<(Param, f64)>,
    },
    /// Breed a RIL population and write its map, genotypes and phenotypes.
    Population {
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        generations: Option<u32>,
    },
    /// LOD scan and peak detection for one trait.
    Qtl {
        /// Parameter name or `cob_weight`.
        #[arg(long = "trait", value_name = "NAME")]
        trait_name: Option<String>,
        /// Measurement noise coefficient of variation.
        #[arg(long)]
        cv: Option<f64>,
        /// Read the population from a directory written by `population`.
        #[arg(long, value_name = "DIR")]
        input: Option<PathBuf>,
        /// Effect matrix preset: `pleiotropic` (alias `fig4`) or `diagonal`.
        #[arg(long)]
        preset: Option<String>,
    },
    /// Genetic-algorithm ideotype search.
    Optimize {
        #[arg(long)]
        generations: Option<usize>,
        #[arg(long)]
        population_size: Option<usize>,
    },
    /// Cob weight over a grid of two continuous parameters.
    Surface {
        #[arg(long)]
        x: Option<Param>,
        #[arg(long)]
        y: Option<Param>,
        #[arg(long)]
        grid: Option<usize>,
    },
}

fn parse_override(s: &str) -> Result<(Param, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let p: Param = k.trim().parse().map_err(|e| format!("{e}"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{}` is not a number", v.trim()))?;
    Ok((p, v))
}

impl Cli {
    /// Config with file, global flags and subcommand flags applied, in that
    /// order, then validated.
    pub fn resolve_config(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(o) = &self.out {
            c.output_dir = o.clone();
        }
        match &self.command {
            Command::Simulate { .. } => {}
            Command::Population { size, generations } => {
                c.population.size = size.unwrap_or(c.population.size);
                c.population.generations = generations.unwrap_or(c.population.generations);
            }
            Command::Qtl { trait_name, cv, preset, .. } => {
                if let Some(t) = trait_name {
                    c.qtl.trait_name = t.clone();
                }
                c.noise.cv = cv.unwrap_or(c.noise.cv);
                if let Some(p) = preset {
                    c.effects.preset = p.clone();
                    c.effects.rows = None;
                }
            }
            Command::Optimize { generations, population_size } => {
                c.ga.generations = generations.unwrap_or(c.ga.generations);
                c.ga.population_size = population_size.unwrap_or(c.ga.population_size);
            }
            Command::Surface { x, y, grid } => {
                c.surface.x = x.unwrap_or(c.surface.x);
                c.surface.y = y.unwrap_or(c.surface.y);
                c.surface.grid = grid.unwrap_or(c.surface.grid);
            }
        }
        c.validate().map_err(|i| anyhow!("command-line override `{}`: {}", i.key, i.message))?;
        Ok(c)
    }

    /// Run the subcommand; returns the summary printed on success.
    pub fn run(&self) -> Result<String> {
        let c = self.resolve_config()?;
        let out = c.output_dir.as_path();
        Ok(match &self.command {
            Command::Simulate { set } => {
                let r = cmd_simulate(&c, set, out)?;
                format!("final cob weight: {:.3} g\nwrote {}", r.cob_weight, r.series.display())
            }
            Command::Population { .. } => {
                let pop = cmd_population(&c, out)?;
                format!(
                    "{} individuals, F{}, heterozygosity {:.4}\nwrote {}",
                    pop.len(),
                    c.population.generations,
                    pop.heterozygosity(),
                    out.display()
                )
            }
            Command::Qtl { input, .. } => {
                let selector: TraitSelector = c.qtl.trait_name.parse()?;
                let r = cmd_qtl(&c, selector, c.noise.cv, input.as_deref(), out)?;
                let loci: Vec<String> = r.calls.loci.iter().map(|g| (g + 1).to_string()).collect();
                format!(
                    "{}: {} hit(s), loci [{}]\nwrote {}",
                    selector,
                    r.hits.len(),
                    loci.join(", "),
                    out.display()
                )
            }
            Command::Optimize { .. } => {
                let r = cmd_optimize(&c, out)?;
                format!(
                    "cob weight {:.3} g -> {:.3} g (x{:.3})\nwrote {}",
                    r.reference_cob_weight,
                    r.optimized_cob_weight,
                    r.gain(),
                    out.display()
                )
            }
            Command::Surface { .. } => {
                let s = cmd_surface(&c, out)?;
                let (i, j) = s.argmax();
                format!(
                    "max cob weight {:.3} g at {}={}, {}={}\nwrote {}",
                    s.weights[i][j],
                    s.x_param,
                    s.x_values[i],
                    s.y_param,
                    s.y_values[j],
                    out.display()
                )
            }
        })
    }
}
