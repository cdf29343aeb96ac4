use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::{AlleleVector, Origin};
use crate::error::{domain, Error, Result};
use crate::growth::{round_half_away, GeneticTraits, Param};

/// Number of virtual genes.
pub const LOCUS_COUNT: usize = 15;

/// Spread of the founder alleles at loci that affect no parameter.
pub const UNUSED_LOCUS_SPREAD: f64 = 0.1;

/// Built-in gene-to-parameter weight matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectPreset {
    /// Pleiotropic genes: several parameters share loci, with unequal weights
    /// on blade resistance. Also accepted as `fig4`.
    #[serde(alias = "fig4")]
    Pleiotropic,
    /// One gene per parameter: locus `j` drives parameter `j`.
    Diagonal,
}

impl EffectPreset {
    pub fn name(self) -> &'static str {
        match self {
            EffectPreset::Pleiotropic => "pleiotropic",
            EffectPreset::Diagonal => "diagonal",
        }
    }
}

impl fmt::Display for EffectPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EffectPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pleiotropic" | "fig4" => Ok(EffectPreset::Pleiotropic),
            "diagonal" => Ok(EffectPreset::Diagonal),
            _ => Err(domain(format!("unknown effect preset `{s}`"))),
        }
    }
}

/// Linear map from expressed allele values to growth parameters.
///
/// Parameter `j` equals `scale_j · Σ_k weights[j][k] · c3[k]` with
/// `scale_j = reference[j] / Σ_k weights[j][k]`, so an all-ones allele
/// vector reproduces the reference parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneEffectMap {
    weights: Vec<Vec<f64>>,
    reference: Vec<f64>,
    spreads: Vec<f64>,
    integer: Vec<bool>,
}

impl GeneEffectMap {
    /// General constructor. Every row needs a positive sum and `spreads`
    /// holds one value in `[0, 1)` per locus.
    pub fn new(weights: Vec<Vec<f64>>, reference: Vec<f64>, spreads: Vec<f64>, integer: Vec<bool>) -> Result<Self> {
        let loci = spreads.len();
        if reference.len() != weights.len() || integer.len() != weights.len() {
            return Err(Error::Dimension(format!(
                "{} weight rows, {} reference values, {} integer flags",
                weights.len(),
                reference.len(),
                integer.len()
            )));
        }
        for (j, row) in weights.iter().enumerate() {
            if row.len() != loci {
                return Err(Error::Dimension(format!(
                    "weight row {} has {} entries for {} loci",
                    j + 1,
                    row.len(),
                    loci
                )));
            }
            if row.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
                return Err(domain(format!("weight row {} has a negative or non-finite entry", j + 1)));
            }
            if !(row.iter().sum::<f64>() > 0.0) {
                return Err(domain(format!("weight row {} sums to zero", j + 1)));
            }
        }
        if spreads.iter().any(|&d| !(0.0..1.0).contains(&d)) {
            return Err(domain("allele spreads must lie in [0, 1)"));
        }
        Ok(GeneEffectMap { weights, reference, spreads, integer })
    }

    /// Map over the twelve growth parameters with the reference plant as the
    /// anchor. Each locus spreads its founder alleles by the variation range
    /// of the parameter it weighs most on (ties to the earlier parameter).
    pub fn for_growth(weights: Vec<Vec<f64>>) -> Result<Self> {
        if weights.len() != Param::COUNT {
            return Err(Error::Dimension(format!(
                "{} weight rows, expected {}",
                weights.len(),
                Param::COUNT
            )));
        }
        let loci = weights.first().map_or(0, Vec::len);
        let spreads = (0..loci)
            .map(|k| {
                let mut best: Option<(usize, f64)> = None;
                for (j, row) in weights.iter().enumerate() {
                    let w = row.get(k).copied().unwrap_or(0.0);
                    if w > 0.0 && best.is_none_or(|(_, bw)| w > bw) {
                        best = Some((j, w));
                    }
                }
                best.map_or(UNUSED_LOCUS_SPREAD, |(j, _)| Param::ALL[j].half_range())
            })
            .collect();
        Self::new(
            weights,
            Param::ALL.iter().map(|p| p.reference()).collect(),
            spreads,
            Param::ALL.iter().map(|p| p.is_integer()).collect(),
        )
    }

    /// Weight matrix from sparse rows of `(locus, weight)` pairs, loci
    /// 1-based.
    pub fn from_sparse(rows: &[&[(usize, f64)]]) -> Result<Self> {
        let mut weights = vec![vec![0.0; LOCUS_COUNT]; rows.len()];
        for (j, row) in rows.iter().enumerate() {
            for &(locus, w) in row.iter() {
                if !(1..=LOCUS_COUNT).contains(&locus) {
                    return Err(Error::Index { index: locus, max: LOCUS_COUNT });
                }
                weights[j][locus - 1] = w;
            }
        }
        Self::for_growth(weights)
    }

    pub fn preset(preset: EffectPreset) -> Self {
        match preset {
            EffectPreset::Pleiotropic => Self::from_sparse(&[
                &[(3, 1.0), (8, 1.0)],
                &[(3, 3.0), (8, 2.0), (14, 1.0)],
                &[(1, 1.0), (5, 1.0), (10, 1.0)],
                &[(6, 1.0), (11, 1.0), (15, 1.0)],
                &[(12, 1.0)],
                &[(2, 1.0), (7, 1.0), (13, 1.0)],
                &[(4, 1.0), (9, 1.0)],
                &[(3, 1.0), (8, 1.0), (14, 1.0)],
                &[(12, 1.0)],
                &[(10, 1.0)],
                &[(9, 1.0)],
                &[(4, 1.0)],
            ]),
            EffectPreset::Diagonal => {
                let rows: Vec<Vec<(usize, f64)>> = (1..=Param::COUNT).map(|j| vec![(j, 1.0)]).collect();
                let refs: Vec<&[(usize, f64)]> = rows.iter().map(Vec::as_slice).collect();
                Self::from_sparse(&refs)
            }
        }
        .expect("built-in presets are well formed")
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.len()
    }

    pub fn locus_count(&self) -> usize {
        self.spreads.len()
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    pub fn spreads(&self) -> &[f64] {
        &self.spreads
    }

    /// Diagonal scaling `reference[j] / Σ_k weights[j][k]`.
    pub fn scaling(&self) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.reference)
            .map(|(row, r)| r / row.iter().sum::<f64>())
            .collect()
    }

    /// Loci with nonzero weight on parameter row `j` (0-based), 0-based.
    pub fn loci_of(&self, j: usize) -> Vec<usize> {
        self.weights[j].iter().enumerate().filter(|(_, &w)| w > 0.0).map(|(k, _)| k).collect()
    }

    /// Founder allele value at `locus`: `1 - δ` for the first parent and
    /// `1 + δ` for the second.
    pub fn founder_allele(&self, locus: usize, origin: Origin) -> f64 {
        match origin {
            Origin::Parent1 => 1.0 - self.spreads[locus],
            Origin::Parent2 => 1.0 + self.spreads[locus],
        }
    }

    pub fn founder_alleles(&self, origin: Origin) -> AlleleVector {
        AlleleVector((0..self.locus_count()).map(|k| self.founder_allele(k, origin)).collect())
    }

    /// Parameter vector for expressed alleles `c3`; integer-flagged entries
    /// are rounded half away from zero.
    pub fn parameters(&self, c3: &AlleleVector) -> Result<Vec<f64>> {
        if c3.len() != self.locus_count() {
            return Err(Error::Dimension(format!(
                "{} expressed alleles for {} loci",
                c3.len(),
                self.locus_count()
            )));
        }
        Ok(self
            .weights
            .iter()
            .zip(self.scaling())
            .zip(&self.integer)
            .map(|((row, d), &int)| {
                let y = d * row.iter().zip(c3.values()).map(|(w, c)| w * c).sum::<f64>();
                if int {
                    round_half_away(y)
                } else {
                    y
                }
            })
            .collect())
    }

    pub fn to_traits(&self, c3: &AlleleVector) -> Result<GeneticTraits> {
        GeneticTraits::from_vector(&self.parameters(c3)?)
    }
}
