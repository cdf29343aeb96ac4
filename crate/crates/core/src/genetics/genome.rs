use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Founder a chromosome segment descends from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Origin {
    Parent1,
    Parent2,
}

/// Allele effect values, one per locus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlleleVector(pub Vec<f64>);

impl AlleleVector {
    pub fn ones(len: usize) -> Self {
        AlleleVector(vec![1.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for AlleleVector {
    fn from(v: Vec<f64>) -> Self {
        AlleleVector(v)
    }
}

/// One haploid chromosome: allele values at the loci and, when known, the
/// founder origin at every marker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chromosome {
    pub alleles: AlleleVector,
    pub origins: Option<Vec<Origin>>,
}

impl Chromosome {
    pub fn untracked(alleles: impl Into<AlleleVector>) -> Self {
        Chromosome { alleles: alleles.into(), origins: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiploidGenome {
    pub c1: Chromosome,
    pub c2: Chromosome,
}

impl DiploidGenome {
    pub fn new(c1: Chromosome, c2: Chromosome) -> Result<Self> {
        if c1.alleles.len() != c2.alleles.len() {
            return Err(Error::Dimension(format!(
                "chromosomes carry {} and {} loci",
                c1.alleles.len(),
                c2.alleles.len()
            )));
        }
        if let (Some(a), Some(b)) = (&c1.origins, &c2.origins) {
            if a.len() != b.len() {
                return Err(Error::Dimension(format!(
                    "chromosomes carry {} and {} marker origins",
                    a.len(),
                    b.len()
                )));
            }
        }
        Ok(DiploidGenome { c1, c2 })
    }

    /// Genome without origin information.
    pub fn from_alleles(c1: impl Into<AlleleVector>, c2: impl Into<AlleleVector>) -> Result<Self> {
        Self::new(Chromosome::untracked(c1), Chromosome::untracked(c2))
    }

    /// Fully homozygous founder genome.
    pub fn founder(alleles: AlleleVector, origin: Origin, marker_count: usize) -> Self {
        let c = Chromosome { alleles, origins: Some(vec![origin; marker_count]) };
        DiploidGenome { c1: c.clone(), c2: c }
    }

    pub fn locus_count(&self) -> usize {
        self.c1.alleles.len()
    }

    /// Index of the first locus where the two alleles differ, if any.
    pub fn first_heterozygous_locus(&self) -> Option<usize> {
        self.c1
            .alleles
            .values()
            .iter()
            .zip(self.c2.alleles.values())
            .position(|(a, b)| a != b)
    }

    pub fn is_homozygous(&self) -> bool {
        self.first_heterozygous_locus().is_none() && self.c1.origins == self.c2.origins
    }
}

/// How the two alleles at a locus combine into the expressed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusMode {
    /// Mean of the two alleles.
    Additive,
    /// The allele listed earliest in `order` is expressed. Alleles absent
    /// from `order` rank below listed ones; with neither allele listed the
    /// allele on the first chromosome is expressed.
    Dominant { order: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpressionRules {
    pub modes: Vec<LocusMode>,
}

impl ExpressionRules {
    pub fn additive(locus_count: usize) -> Self {
        ExpressionRules { modes: vec![LocusMode::Additive; locus_count] }
    }

    /// Expressed allele vector of `genome`.
    pub fn express(&self, genome: &DiploidGenome) -> Result<AlleleVector> {
        let n = genome.locus_count();
        if self.modes.len() != n || genome.c2.alleles.len() != n {
            return Err(Error::Dimension(format!(
                "{} expression modes for a genome with {} loci",
                self.modes.len(),
                n
            )));
        }
        let a = genome.c1.alleles.values();
        let b = genome.c2.alleles.values();
        let out = self
            .modes
            .iter()
            .zip(a.iter().zip(b))
            .map(|(mode, (&x, &y))| match mode {
                LocusMode::Additive => 0.5 * (x + y),
                LocusMode::Dominant { order } => {
                    let rank = |v: f64| order.iter().position(|&o| o == v).unwrap_or(usize::MAX);
                    if rank(y) < rank(x) {
                        y
                    } else {
                        x
                    }
                }
            })
            .collect();
        Ok(AlleleVector(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn homozygote_expresses_its_alleles() {
        let v = vec![0.9, 1.1, 1.05];
        let g = DiploidGenome::from_alleles(v.clone(), v.clone()).unwrap();
        let rules = ExpressionRules {
            modes: vec![
                LocusMode::Additive,
                LocusMode::Dominant { order: vec![] },
                LocusMode::Dominant { order: vec![0.95, 1.05] },
            ],
        };
        assert_eq!(rules.express(&g).unwrap().0, v);
    }

    #[test]
    fn additive_takes_mean() {
        let g = DiploidGenome::from_alleles(vec![0.9], vec![1.1]).unwrap();
        let c3 = ExpressionRules::additive(1).express(&g).unwrap();
        assert!((c3.0[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dominant_expresses_first_listed() {
        let g = DiploidGenome::from_alleles(vec![1.1], vec![0.9]).unwrap();
        let first_column = ExpressionRules { modes: vec![LocusMode::Dominant { order: vec![] }] };
        assert_eq!(first_column.express(&g).unwrap().0, vec![1.1]);
        let ranked = ExpressionRules { modes: vec![LocusMode::Dominant { order: vec![0.9, 1.1] }] };
        assert_eq!(ranked.express(&g).unwrap().0, vec![0.9]);
        let flipped = DiploidGenome::from_alleles(vec![0.9], vec![1.1]).unwrap();
        assert_eq!(ranked.express(&flipped).unwrap().0, vec![0.9]);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(DiploidGenome::from_alleles(vec![1.0], vec![1.0, 1.0]).is_err());
        let g = DiploidGenome::from_alleles(vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert!(ExpressionRules::additive(3).express(&g).is_err());
    }

    proptest! {
        #[test]
        fn additive_expression_is_linear(
            a1 in prop::collection::vec(0.5f64..1.5, 6),
            a2 in prop::collection::vec(0.5f64..1.5, 6),
            b1 in prop::collection::vec(0.5f64..1.5, 6),
            b2 in prop::collection::vec(0.5f64..1.5, 6),
        ) {
            let rules = ExpressionRules::additive(6);
            let ga = DiploidGenome::from_alleles(a1.clone(), a2.clone()).unwrap();
            let gb = DiploidGenome::from_alleles(b1.clone(), b2.clone()).unwrap();
            let avg = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| 0.5 * (p + q)).collect::<Vec<_>>();
            let gm = DiploidGenome::from_alleles(avg(&a1, &b1), avg(&a2, &b2)).unwrap();
            let ea = rules.express(&ga).unwrap();
            let eb = rules.express(&gb).unwrap();
            let em = rules.express(&gm).unwrap();
            for k in 0..6 {
                prop_assert!((em.0[k] - 0.5 * (ea.0[k] + eb.0[k])).abs() < 1e-12);
            }
        }
    }
}
