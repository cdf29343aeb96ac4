use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use super::{breed_ril_lines, DiploidGenome, ExpressionRules, GeneEffectMap, GeneticMap, Origin};
use crate::error::{domain, Error, Result};
use crate::growth::{simulate, GeneticTraits, GrowthConstants, Param};

/// Marker genotype: homozygous for either founder, or heterozygous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MarkerCode {
    Parent1,
    Parent2,
    Het,
}

impl MarkerCode {
    /// Additive dose of the second founder's allele.
    pub fn dose(self) -> f64 {
        match self {
            MarkerCode::Parent1 => 0.0,
            MarkerCode::Het => 0.5,
            MarkerCode::Parent2 => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            MarkerCode::Parent1 => "1",
            MarkerCode::Parent2 => "2",
            MarkerCode::Het => "H",
        }
    }
}

impl fmt::Display for MarkerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for MarkerCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(MarkerCode::Parent1),
            "2" => Ok(MarkerCode::Parent2),
            "H" | "h" => Ok(MarkerCode::Het),
            other => Err(Error::Format(format!("unknown marker code `{other}`"))),
        }
    }
}

/// Genotype code at every marker from the tracked founder origins.
pub fn marker_codes(genome: &DiploidGenome, map: &GeneticMap) -> Result<Vec<MarkerCode>> {
    let (a, b) = match (&genome.c1.origins, &genome.c2.origins) {
        (Some(a), Some(b)) if a.len() == map.marker_count() && b.len() == map.marker_count() => (a, b),
        _ => return Err(Error::UntrackedOrigin { marker: 1 }),
    };
    Ok(a.iter()
        .zip(b)
        .map(|pair| match pair {
            (Origin::Parent1, Origin::Parent1) => MarkerCode::Parent1,
            (Origin::Parent2, Origin::Parent2) => MarkerCode::Parent2,
            _ => MarkerCode::Het,
        })
        .collect())
}

/// Multiplicative Gaussian measurement error: `v · (1 + ε)`, `ε ~ N(0, cv)`.
pub fn apply_noise<R: Rng + ?Sized>(values: &[f64], cv: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(cv >= 0.0) || !cv.is_finite() {
        return Err(domain(format!("coefficient of variation must be non-negative, got {cv}")));
    }
    if cv == 0.0 {
        return Ok(values.to_vec());
    }
    let eps = Normal::new(0.0, cv).expect("finite positive sd");
    Ok(values.iter().map(|&v| v * (1.0 + eps.sample(rng))).collect())
}

/// Everything needed to go from a genome to a phenotype.
#[derive(Debug, Clone, PartialEq)]
pub struct GenotypeModel {
    pub map: GeneticMap,
    pub effects: GeneEffectMap,
    pub rules: ExpressionRules,
    pub constants: GrowthConstants,
}

impl GenotypeModel {
    /// Additive expression on the default map.
    pub fn new(effects: GeneEffectMap, constants: GrowthConstants) -> Result<Self> {
        let map = GeneticMap::default();
        if map.locus_count() != effects.locus_count() {
            return Err(Error::Dimension(format!(
                "map has {} loci, effect map {}",
                map.locus_count(),
                effects.locus_count()
            )));
        }
        let rules = ExpressionRules::additive(effects.locus_count());
        Ok(GenotypeModel { map, effects, rules, constants })
    }

    pub fn traits(&self, genome: &DiploidGenome) -> Result<GeneticTraits> {
        self.effects.to_traits(&self.rules.express(genome)?)
    }

    pub fn founder(&self, origin: Origin) -> DiploidGenome {
        DiploidGenome::founder(self.effects.founder_alleles(origin), origin, self.map.marker_count())
    }

    pub fn individual(&self, id: usize, genome: DiploidGenome) -> Result<Individual> {
        let traits = self.traits(&genome)?;
        let cob_weight = simulate(&traits, &self.constants)?.final_cob_weight();
        Ok(Individual {
            id,
            codes: marker_codes(&genome, &self.map)?,
            genome: Some(genome),
            traits,
            cob_weight,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub id: usize,
    /// Absent for populations read back from files.
    pub genome: Option<DiploidGenome>,
    pub codes: Vec<MarkerCode>,
    pub traits: GeneticTraits,
    pub cob_weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MappingPopulation {
    pub map: GeneticMap,
    pub individuals: Vec<Individual>,
    pub generation: Option<u32>,
    pub seed: Option<u64>,
}

/// Build an F`generations` RIL population from the two founders of `model`.
pub fn make_ril<R: Rng + ?Sized>(
    model: &GenotypeModel,
    generations: u32,
    size: usize,
    rng: &mut R,
) -> Result<MappingPopulation> {
    let p1 = model.founder(Origin::Parent1);
    let p2 = model.founder(Origin::Parent2);
    let lines = breed_ril_lines(&p1, &p2, generations, size, &model.map, rng)?;
    let individuals = lines
        .into_iter()
        .enumerate()
        .map(|(i, g)| model.individual(i + 1, g))
        .collect::<Result<_>>()?;
    Ok(MappingPopulation { map: model.map.clone(), individuals, generation: Some(generations), seed: None })
}

pub const MAP_FILE: &str = "map.csv";
pub const GENOTYPE_FILE: &str = "genotypes.csv";
pub const PHENOTYPE_FILE: &str = "phenotypes.csv";

impl MappingPopulation {
    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    /// Fraction of heterozygous marker codes over all individuals and markers.
    pub fn heterozygosity(&self) -> f64 {
        let total: usize = self.individuals.iter().map(|i| i.codes.len()).sum();
        if total == 0 {
            return 0.0;
        }
        let het = self
            .individuals
            .iter()
            .flat_map(|i| &i.codes)
            .filter(|&&c| c == MarkerCode::Het)
            .count();
        het as f64 / total as f64
    }

    /// Codes of marker `m` across individuals.
    pub fn marker_column(&self, m: usize) -> Vec<MarkerCode> {
        self.individuals.iter().map(|i| i.codes[m]).collect()
    }

    /// Columns `marker,position_cM`.
    pub fn write_map<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["marker", "position_cM"])?;
        for (m, p) in self.map.positions().iter().enumerate() {
            w.write_record([self.map.marker_name(m), p.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Columns `individual` then one per marker in map order, codes 1/2/H.
    pub fn write_genotypes<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["individual".to_string()];
        header.extend((0..self.map.marker_count()).map(|m| self.map.marker_name(m)));
        w.write_record(&header)?;
        for ind in &self.individuals {
            let mut row = vec![ind.id.to_string()];
            row.extend(ind.codes.iter().map(|c| c.symbol().to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Columns `individual`, the twelve parameters in genome order, then
    /// `cob_weight`.
    pub fn write_phenotypes<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["individual"];
        header.extend(Param::ALL.iter().map(|p| p.name()));
        header.push("cob_weight");
        w.write_record(&header)?;
        for ind in &self.individuals {
            let mut row = vec![ind.id.to_string()];
            row.extend(ind.traits.to_vector().iter().map(f64::to_string));
            row.push(ind.cob_weight.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn export_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        self.write_map(File::create(dir.join(MAP_FILE))?)?;
        self.write_genotypes(File::create(dir.join(GENOTYPE_FILE))?)?;
        self.write_phenotypes(File::create(dir.join(PHENOTYPE_FILE))?)?;
        Ok(())
    }

    /// Rebuild a population from the three files. Genomes are not stored, so
    /// loci are placed at the markers listed in `locus_markers`.
    pub fn read<M: Read, G: Read, P: Read>(map: M, genotypes: G, phenotypes: P, locus_markers: Vec<usize>) -> Result<Self> {
        let mut positions = Vec::new();
        let mut names = Vec::new();
        let mut r = csv::Reader::from_reader(map);
        expect_header(r.headers()?, &["marker", "position_cM"], MAP_FILE)?;
        for rec in r.records() {
            let rec = rec?;
            names.push(rec[0].to_string());
            positions.push(parse_f64(&rec[1], MAP_FILE)?);
        }
        let map = GeneticMap::new(positions, locus_markers)?;

        let mut r = csv::Reader::from_reader(genotypes);
        let header = r.headers()?.clone();
        if header.len() != names.len() + 1 || &header[0] != "individual" || header.iter().skip(1).ne(names.iter().map(String::as_str)) {
            return Err(Error::Format(format!("{GENOTYPE_FILE} columns do not match the map markers")));
        }
        let mut rows: Vec<(usize, Vec<MarkerCode>)> = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let id = parse_id(&rec[0], GENOTYPE_FILE)?;
            let codes = rec.iter().skip(1).map(MarkerCode::from_str).collect::<Result<_>>()?;
            rows.push((id, codes));
        }

        let mut r = csv::Reader::from_reader(phenotypes);
        let mut expected = vec!["individual"];
        expected.extend(Param::ALL.iter().map(|p| p.name()));
        expected.push("cob_weight");
        expect_header(r.headers()?, &expected, PHENOTYPE_FILE)?;
        let mut individuals = Vec::with_capacity(rows.len());
        let mut records = r.records();
        for (id, codes) in rows {
            let rec = records
                .next()
                .ok_or_else(|| Error::Format(format!("{PHENOTYPE_FILE} has fewer rows than {GENOTYPE_FILE}")))??;
            if parse_id(&rec[0], PHENOTYPE_FILE)? != id {
                return Err(Error::Format(format!("individual {id} out of order in {PHENOTYPE_FILE}")));
            }
            let values = rec.iter().skip(1).map(|v| parse_f64(v, PHENOTYPE_FILE)).collect::<Result<Vec<_>>>()?;
            let traits = GeneticTraits::from_vector(&values[..Param::COUNT])?;
            individuals.push(Individual { id, genome: None, codes, traits, cob_weight: values[Param::COUNT] });
        }
        if records.next().is_some() {
            return Err(Error::Format(format!("{PHENOTYPE_FILE} has more rows than {GENOTYPE_FILE}")));
        }
        Ok(MappingPopulation { map, individuals, generation: None, seed: None })
    }

    pub fn import_dir(dir: &Path, locus_markers: Vec<usize>) -> Result<Self> {
        Self::read(
            File::open(dir.join(MAP_FILE))?,
            File::open(dir.join(GENOTYPE_FILE))?,
            File::open(dir.join(PHENOTYPE_FILE))?,
            locus_markers,
        )
    }
}

fn expect_header(found: &csv::StringRecord, expected: &[&str], file: &str) -> Result<()> {
    if found.iter().ne(expected.iter().copied()) {
        return Err(Error::Format(format!("{file} header must be `{}`", expected.join(","))));
    }
    Ok(())
}

fn parse_f64(s: &str, file: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Format(format!("{file}: `{s}` is not a number")))
}

fn parse_id(s: &str, file: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Format(format!("{file}: `{s}` is not an individual id")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genetics::EffectPreset;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model() -> GenotypeModel {
        GenotypeModel::new(GeneEffectMap::preset(EffectPreset::Pleiotropic), GrowthConstants::reference()).unwrap()
    }

    #[test]
    fn founder_and_f1_codes() {
        let m = model();
        let p1 = m.founder(Origin::Parent1);
        assert!(marker_codes(&p1, &m.map).unwrap().iter().all(|&c| c == MarkerCode::Parent1));
        let p2 = m.founder(Origin::Parent2);
        let f1 = DiploidGenome::new(p1.c1.clone(), p2.c1.clone()).unwrap();
        assert!(marker_codes(&f1, &m.map).unwrap().iter().all(|&c| c == MarkerCode::Het));
        let untracked = DiploidGenome::from_alleles(p1.c1.alleles.clone(), p2.c1.alleles.clone()).unwrap();
        assert!(matches!(marker_codes(&untracked, &m.map), Err(Error::UntrackedOrigin { .. })));
    }

    #[test]
    fn noise_identity_and_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let v = vec![1.0, -2.0, 3.5];
        assert_eq!(apply_noise(&v, 0.0, &mut rng).unwrap(), v);
        assert!(apply_noise(&v, -0.1, &mut rng).is_err());
        let n = 100_000;
        let ones = vec![1.0; n];
        let out = apply_noise(&ones, 0.15, &mut rng).unwrap();
        let mean = out.iter().sum::<f64>() / n as f64;
        let sd = (out.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!((sd - 0.15).abs() < 0.005, "sd {sd}");
        // Multiplicative: a negative value scales by the same factor.
        let mut a = ChaCha8Rng::seed_from_u64(4);
        let mut b = ChaCha8Rng::seed_from_u64(4);
        let pos = apply_noise(&[2.0], 0.2, &mut a).unwrap()[0];
        let neg = apply_noise(&[-2.0], 0.2, &mut b).unwrap()[0];
        assert_eq!(pos, -neg);
    }

    #[test]
    fn stored_traits_are_rederivable() {
        let m = model();
        let pop = make_ril(&m, 6, 20, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        for ind in &pop.individuals {
            let g = ind.genome.as_ref().unwrap();
            assert_eq!(ind.traits, m.traits(g).unwrap());
            assert_eq!(ind.codes, marker_codes(g, &m.map).unwrap());
            assert_eq!(ind.cob_weight, simulate(&ind.traits, &m.constants).unwrap().final_cob_weight());
            // A homozygous locus marker carries the founder allele of its code.
            for (locus, &mk) in m.map.locus_markers().iter().enumerate() {
                let v = g.c1.alleles.0[locus];
                match ind.codes[mk] {
                    MarkerCode::Parent1 => assert_eq!(v, m.effects.founder_allele(locus, Origin::Parent1)),
                    MarkerCode::Parent2 => assert_eq!(v, m.effects.founder_allele(locus, Origin::Parent2)),
                    MarkerCode::Het => assert_ne!(g.c1.alleles.0[locus], g.c2.alleles.0[locus]),
                }
            }
        }
    }

    #[test]
    fn lineage_heterozygosity_halves_per_selfing() {
        let m = model();
        let f2 = make_ril(&m, 2, 2000, &mut ChaCha8Rng::seed_from_u64(21)).unwrap();
        assert!((f2.heterozygosity() - 0.5).abs() < 0.02, "{}", f2.heterozygosity());
        let f6 = make_ril(&m, 6, 2000, &mut ChaCha8Rng::seed_from_u64(22)).unwrap();
        assert!((f6.heterozygosity() - 0.03125).abs() < 0.01, "{}", f6.heterozygosity());
    }

    #[test]
    fn three_file_round_trip() {
        let m = model();
        let pop = make_ril(&m, 6, 7, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        pop.export_dir(dir.path()).unwrap();
        let back = MappingPopulation::import_dir(dir.path(), m.map.locus_markers().to_vec()).unwrap();
        assert_eq!(back.map, pop.map);
        assert_eq!(back.len(), 7);
        for (a, b) in back.individuals.iter().zip(&pop.individuals) {
            assert_eq!(a.codes, b.codes);
            assert_eq!(a.traits, b.traits);
            assert_eq!(a.cob_weight, b.cob_weight);
        }
        let geno = std::fs::read_to_string(dir.path().join(GENOTYPE_FILE)).unwrap();
        assert_eq!(geno.lines().next().unwrap().split(',').count(), 58);
    }

    #[test]
    fn empty_population_writes_headers_only() {
        let m = model();
        let pop = make_ril(&m, 6, 0, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let mut buf = Vec::new();
        pop.write_phenotypes(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
        let mut buf = Vec::new();
        pop.write_genotypes(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }

    #[test]
    fn malformed_files_are_rejected() {
        let map = "marker,position_cM\nM1,0\nM2,10\n";
        let geno = "individual,M1,M2\n1,1,X\n";
        let mut ph = String::from("individual");
        for p in Param::ALL {
            ph.push(',');
            ph.push_str(p.name());
        }
        ph.push_str(",cob_weight\n");
        let r = MappingPopulation::read(map.as_bytes(), geno.as_bytes(), ph.as_bytes(), vec![0]);
        assert!(matches!(r, Err(Error::Format(_))));
    }
}
