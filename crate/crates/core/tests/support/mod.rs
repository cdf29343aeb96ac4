//! Reference implementations shared by the integration tests. Each one is
//! written from the model equations without calling the code under test.

#![allow(dead_code)]

use greenqtl::{GeneticTraits, GrowthConstants, Param};
use rand::Rng;

/// Values of one cycle computed by [`toy_series`].
#[derive(Debug, Clone)]
pub struct ToyCycle {
    pub production: f64,
    pub demand: f64,
    /// `((type, appearance cycle), biomass)` of every organ.
    pub organs: Vec<((usize, u32), f64)>,
    /// Totals per organ type: blade, sheath, internode, cob, tassel.
    pub compartments: [f64; 5],
}

struct ToyOrgan {
    kind: usize,
    start: u32,
    duration: u32,
    weight: f64,
    shape: f64,
}

fn beta_weight(shape: f64, duration: u32, age: u32) -> f64 {
    let raw = |j: u32| {
        let x = (j as f64 - 0.5) / duration as f64;
        x.powf(4.0 * shape) * (1.0 - x).powf(4.0 * (1.0 - shape))
    };
    raw(age) / (1..=duration).map(raw).sum::<f64>()
}

/// Brute-force source/sink recurrence. Each cycle first pays out the
/// previous production in proportion to organ demand, then recomputes
/// production from blades younger than the blade lifespan.
pub fn toy_series(t: &GeneticTraits, c: &GrowthConstants) -> Vec<ToyCycle> {
    let mut organs = Vec::new();
    for rank in 1..=c.phytomer_count {
        organs.push(ToyOrgan { kind: 0, start: rank, duration: c.blade_expansion, weight: t.blade_sink, shape: t.blade_sink_var });
        organs.push(ToyOrgan { kind: 1, start: rank, duration: c.sheath_expansion, weight: t.sheath_sink, shape: t.sheath_sink_var });
        let short = if rank <= t.short_internode_count { c.short_internode_sink_factor } else { 1.0 };
        organs.push(ToyOrgan {
            kind: 2,
            start: rank,
            duration: c.internode_expansion,
            weight: short * t.internode_sink,
            shape: t.internode_sink_var,
        });
    }
    organs.push(ToyOrgan {
        kind: 3,
        start: t.ear_cycle,
        duration: c.cycle_count - t.ear_cycle + 1,
        weight: t.cob_sink,
        shape: t.cob_sink_var,
    });
    organs.push(ToyOrgan { kind: 4, start: c.tassel_cycle, duration: c.tassel_expansion, weight: c.tassel_sink, shape: c.tassel_sink_var });

    let mut mass = vec![0.0; organs.len()];
    let mut previous = t.seed_biomass;
    let mut out = Vec::new();
    for n in 1..=c.cycle_count {
        let wants: Vec<f64> = organs
            .iter()
            .map(|o| {
                if n >= o.start && n - o.start < o.duration {
                    o.weight * beta_weight(o.shape, o.duration, n - o.start + 1)
                } else {
                    0.0
                }
            })
            .collect();
        let total: f64 = wants.iter().sum();
        if total > 0.0 {
            for (m, w) in mass.iter_mut().zip(&wants) {
                *m += previous * w / total;
            }
        }
        let green: f64 = organs
            .iter()
            .zip(&mass)
            .filter(|(o, _)| o.kind == 0 && n >= o.start && n - o.start < c.blade_lifespan)
            .map(|(_, m)| m)
            .sum();
        let sp = c.ground_area;
        let k = c.light_extinction;
        let q = c.potential_production * sp / (t.blade_resistance * k)
            * (1.0 - (-k * green / (t.blade_thickness * sp)).exp());
        let mut compartments = [0.0; 5];
        for (o, m) in organs.iter().zip(&mass) {
            compartments[o.kind] += m;
        }
        out.push(ToyCycle { production: q, demand: total, organs: organs.iter().map(|o| (o.kind, o.start)).zip(mass.iter().copied()).collect(), compartments });
        previous = q;
    }
    out
}

/// Three phytomers over five cycles, with every organ type active.
pub fn toy_plant() -> (GeneticTraits, GrowthConstants) {
    let c = GrowthConstants {
        potential_production: 2.0,
        ground_area: 50.0,
        light_extinction: 0.6,
        blade_lifespan: 3,
        cycle_count: 5,
        phytomer_count: 3,
        tassel_cycle: 3,
        tassel_sink: 0.8,
        tassel_sink_var: 0.4,
        blade_expansion: 3,
        sheath_expansion: 2,
        internode_expansion: 4,
        tassel_expansion: 2,
        short_internode_sink_factor: 0.25,
    };
    let mut t = GeneticTraits::reference();
    t.short_internode_count = 1;
    t.ear_cycle = 2;
    t.seed_biomass = 0.5;
    (t, c)
}

/// Uniform draw of every parameter over its variation range.
pub fn random_traits<R: Rng>(rng: &mut R) -> GeneticTraits {
    let mut t = GeneticTraits::reference();
    for p in Param::ALL {
        let (lo, hi) = p.bounds();
        t.set(p, rng.random_range(lo..=hi));
    }
    t
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// LOD from the two maximised Gaussian log-likelihoods, the alternative fit
/// by solving the 2x2 normal equations of `y = b0 + b1 x`.
pub fn likelihood_lod(y: &[f64], x: &[f64]) -> f64 {
    let n = y.len() as f64;
    let loglik = |rss: f64| -0.5 * n * ((2.0 * std::f64::consts::PI * rss / n).ln() + 1.0);
    let mean = y.iter().sum::<f64>() / n;
    let rss0: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let sx: f64 = x.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sy: f64 = y.iter().sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * sxx - sx * sx;
    let b0 = (sxx * sy - sx * sxy) / det;
    let b1 = (n * sxy - sx * sy) / det;
    let rss1: f64 = x.iter().zip(y).map(|(a, b)| (b - b0 - b1 * a).powi(2)).sum();
    (loglik(rss1) - loglik(rss0)) / std::f64::consts::LN_10
}
