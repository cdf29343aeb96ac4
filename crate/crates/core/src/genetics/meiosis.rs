use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::{Chromosome, DiploidGenome, LOCUS_COUNT};
use crate::error::{domain, Error, Result};

/// Marker positions on a single linkage group and the markers carrying the
/// genes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneticMap {
    positions: Vec<f64>,
    locus_markers: Vec<usize>,
}

impl Default for GeneticMap {
    /// 15 genes 40 cM apart with markers every 10 cM: 57 markers on
    /// 0..=560 cM, gene `g` (0-based) on marker `4g`.
    fn default() -> Self {
        GeneticMap::regular(LOCUS_COUNT, 10.0, 3).expect("default geometry is valid")
    }
}

impl GeneticMap {
    pub fn new(positions: Vec<f64>, locus_markers: Vec<usize>) -> Result<Self> {
        if positions.is_empty() {
            return Err(domain("a map needs at least one marker"));
        }
        if positions.iter().any(|p| !p.is_finite()) || positions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("marker positions must be finite and strictly increasing"));
        }
        for &m in &locus_markers {
            if m >= positions.len() {
                return Err(Error::Index { index: m, max: positions.len() - 1 });
            }
        }
        let mut seen = locus_markers.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(domain("two loci share a marker"));
        }
        Ok(GeneticMap { positions, locus_markers })
    }

    /// `loci` genes with `between` markers intercalated between consecutive
    /// genes, all markers `spacing` cM apart.
    pub fn regular(loci: usize, spacing: f64, between: usize) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(domain(format!("marker spacing must be positive, got {spacing}")));
        }
        if loci == 0 {
            return Err(domain("a map needs at least one locus"));
        }
        let step = between + 1;
        let markers = (loci - 1) * step + 1;
        let positions = (0..markers).map(|i| i as f64 * spacing).collect();
        Self::new(positions, (0..loci).map(|g| g * step).collect())
    }

    pub fn marker_count(&self) -> usize {
        self.positions.len()
    }

    pub fn locus_count(&self) -> usize {
        self.locus_markers.len()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn locus_markers(&self) -> &[usize] {
        &self.locus_markers
    }

    pub fn marker_name(&self, m: usize) -> String {
        format!("M{}", m + 1)
    }

    pub fn length(&self) -> f64 {
        self.positions[self.positions.len() - 1] - self.positions[0]
    }

    /// Expected crossovers per meiosis (one per Morgan).
    pub fn crossover_rate(&self) -> f64 {
        self.length() / 100.0
    }

    /// Locus hosted by marker `m`, if any (0-based).
    pub fn locus_at(&self, m: usize) -> Option<usize> {
        self.locus_markers.iter().position(|&x| x == m)
    }
}

/// Sorted crossover positions for one meiosis.
pub fn draw_crossovers<R: Rng + ?Sized>(map: &GeneticMap, rng: &mut R) -> Vec<f64> {
    let rate = map.crossover_rate();
    let count = if rate > 0.0 {
        Poisson::new(rate).expect("positive rate").sample(rng) as usize
    } else {
        0
    };
    let start = map.positions()[0];
    let len = map.length();
    let mut cuts: Vec<f64> = (0..count).map(|_| start + rng.random::<f64>() * len).collect();
    cuts.sort_by(f64::total_cmp);
    cuts
}

/// Recombinant chromosome reading from `c1` when `start_with_c1` until the
/// first cut, then switching source at every cut.
pub fn gamete_from_cuts(genome: &DiploidGenome, map: &GeneticMap, cuts: &[f64], start_with_c1: bool) -> Result<Chromosome> {
    if genome.locus_count() != map.locus_count() {
        return Err(Error::Dimension(format!(
            "genome has {} loci, map has {}",
            genome.locus_count(),
            map.locus_count()
        )));
    }
    let from_c1 = |pos: f64| {
        let crossed = cuts.iter().take_while(|&&c| c < pos).count();
        (crossed % 2 == 0) == start_with_c1
    };
    let pick = |pos: f64| if from_c1(pos) { &genome.c1 } else { &genome.c2 };
    let alleles = map
        .locus_markers()
        .iter()
        .enumerate()
        .map(|(g, &m)| pick(map.positions()[m]).alleles.0[g])
        .collect::<Vec<_>>();
    let origins = match (&genome.c1.origins, &genome.c2.origins) {
        (Some(a), Some(b)) if a.len() == map.marker_count() && b.len() == map.marker_count() => Some(
            map.positions()
                .iter()
                .enumerate()
                .map(|(m, &pos)| if from_c1(pos) { a[m] } else { b[m] })
                .collect(),
        ),
        _ => None,
    };
    Ok(Chromosome { alleles: alleles.into(), origins })
}

pub fn gamete<R: Rng + ?Sized>(genome: &DiploidGenome, map: &GeneticMap, rng: &mut R) -> Result<Chromosome> {
    let cuts = draw_crossovers(map, rng);
    let start_with_c1 = rng.random::<bool>();
    gamete_from_cuts(genome, map, &cuts, start_with_c1)
}

/// Child receiving one gamete from each parent.
pub fn cross<R: Rng + ?Sized>(
    parent_a: &DiploidGenome,
    parent_b: &DiploidGenome,
    map: &GeneticMap,
    rng: &mut R,
) -> Result<DiploidGenome> {
    let a = gamete(parent_a, map, rng)?;
    let b = gamete(parent_b, map, rng)?;
    DiploidGenome::new(a, b)
}

/// Genomes of `size` recombinant inbred lines: each lineage is the F1 of
/// the two homozygous parents selfed `generations - 1` times. Lineage `i`
/// runs on its own generator seeded from the `i`-th draw of `rng`.
pub fn breed_ril_lines<R: Rng + ?Sized>(
    parent1: &DiploidGenome,
    parent2: &DiploidGenome,
    generations: u32,
    size: usize,
    map: &GeneticMap,
    rng: &mut R,
) -> Result<Vec<DiploidGenome>> {
    if generations < 2 {
        return Err(domain(format!("a line needs at least 2 generations, got {generations}")));
    }
    for p in [parent1, parent2] {
        if let Some(locus) = p.first_heterozygous_locus() {
            return Err(Error::NotHomozygous { locus: locus + 1 });
        }
        if p.c1.origins != p.c2.origins {
            return Err(Error::NotHomozygous { locus: 0 });
        }
    }
    let seeds: Vec<u64> = (0..size).map(|_| rng.random()).collect();
    seeds
        .into_iter()
        .map(|seed| {
            let mut line_rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = cross(parent1, parent2, map, &mut line_rng)?;
            for _ in 1..generations {
                g = cross(&g, &g, map, &mut line_rng)?;
            }
            Ok(g)
        })
        .collect()
}
