use crate::genetics::MarkerCode;

/// Largest reported LOD; a zero-residual fit would otherwise be infinite.
pub const LOD_CAP: f64 = 50.0;

/// Single-marker LOD of `values` against marker `codes`.
///
/// Codes become additive doses (1 → 0, H → 0.5, 2 → 1) and the trait is
/// regressed on dose. With `r²` the fraction of variance explained,
/// `LOD = -(n/2) log10(1 - r²)`, which equals `(n/2) log10(RSS0/RSS1)`.
///
/// Returns `None` when no test is possible: fewer than three individuals or
/// a single genotype class.
pub fn single_marker_lod(values: &[f64], codes: &[MarkerCode]) -> Option<f64> {
    let n = values.len();
    if n < 3 || codes.len() != n || codes.iter().all(|&c| c == codes[0]) {
        return None;
    }
    let nf = n as f64;
    let mx = codes.iter().map(|c| c.dose()).sum::<f64>() / nf;
    let my = values.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (c, &y) in codes.iter().zip(values) {
        let dx = c.dose() - mx;
        let dy = y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if syy == 0.0 {
        return Some(0.0);
    }
    let r2 = (sxy * sxy / (sxx * syy)).min(1.0);
    let unexplained = 1.0 - r2;
    if unexplained <= 0.0 {
        return Some(LOD_CAP);
    }
    Some((-0.5 * nf * unexplained.log10()).clamp(0.0, LOD_CAP))
}
