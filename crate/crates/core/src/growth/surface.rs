use super::{simulate, GeneticTraits, GrowthConstants, Param};
use crate::error::{domain, Result};

/// Final cob weight over a rectangular grid of two continuous parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CobSurface {
    pub x_param: Param,
    pub y_param: Param,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// `weights[i][j]` is the cob weight at `(x_values[i], y_values[j])`.
    pub weights: Vec<Vec<f64>>,
}

impl CobSurface {
    /// Grid indices `(i, j)` of the largest weight; first occurrence wins.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        for (i, row) in self.weights.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                if w > self.weights[best.0][best.1] {
                    best = (i, j);
                }
            }
        }
        best
    }
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Evaluate final cob weight on a `grid × grid` lattice spanning `x_range`
/// and `y_range`, endpoints included, all other traits held fixed.
pub fn surface_scan(
    traits: &GeneticTraits,
    constants: &GrowthConstants,
    x: Param,
    y: Param,
    x_range: (f64, f64),
    y_range: (f64, f64),
    grid: usize,
) -> Result<CobSurface> {
    for p in [x, y] {
        if p.is_integer() {
            return Err(domain(format!("surface axis `{p}` is not continuous")));
        }
    }
    if x == y {
        return Err(domain("surface axes must be distinct parameters"));
    }
    if grid < 2 {
        return Err(domain(format!("surface grid must be at least 2x2, got {grid}")));
    }
    let x_values = linspace(x_range, grid);
    let y_values = linspace(y_range, grid);
    let mut weights = Vec::with_capacity(grid);
    for &xv in &x_values {
        let mut row = Vec::with_capacity(grid);
        for &yv in &y_values {
            let t = traits.clone().with(x, xv).with(y, yv);
            row.push(simulate(&t, constants)?.final_cob_weight());
        }
        weights.push(row);
    }
    Ok(CobSurface { x_param: x, y_param: y, x_values, y_values, weights })
}
