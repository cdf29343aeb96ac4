//! Problem-independent genetic algorithm over integer-coded chromosomes.

use rand::Rng;
use std::collections::HashMap;

use crate::error::{domain, Result};

/// Fitness-proportional draw of one index. Falls back to a uniform draw when
/// the total fitness is not positive.
pub fn roulette_select<R: Rng + ?Sized>(fitness: &[f64], rng: &mut R) -> usize {
    assert!(!fitness.is_empty(), "selection from an empty population");
    let total: f64 = fitness.iter().map(|f| f.max(0.0)).sum();
    if !(total > 0.0) || !total.is_finite() {
        return rng.random_range(0..fitness.len());
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, f) in fitness.iter().enumerate() {
        acc += f.max(0.0);
        if target < acc {
            return i;
        }
    }
    // Rounding can leave `target` a hair above the final partial sum.
    fitness.iter().rposition(|&f| f > 0.0).expect("positive total")
}

/// Two independent roulette draws.
pub fn roulette_pair<R: Rng + ?Sized>(fitness: &[f64], rng: &mut R) -> (usize, usize) {
    (roulette_select(fitness, rng), roulette_select(fitness, rng))
}

/// Swap the tails of `a` and `b` from position `cut` on.
pub fn crossover_at(a: &[usize], b: &[usize], cut: usize) -> (Vec<usize>, Vec<usize>) {
    let mut x = a[..cut].to_vec();
    x.extend_from_slice(&b[cut..]);
    let mut y = b[..cut].to_vec();
    y.extend_from_slice(&a[cut..]);
    (x, y)
}

/// With probability `p_c`, cross at a uniform cut in `1..len`; otherwise copy
/// the parents.
pub fn one_point_crossover<R: Rng + ?Sized>(a: &[usize], b: &[usize], p_c: f64, rng: &mut R) -> (Vec<usize>, Vec<usize>) {
    assert_eq!(a.len(), b.len(), "parents of different lengths");
    if a.len() >= 2 && rng.random::<f64>() < p_c {
        let cut = rng.random_range(1..a.len());
        crossover_at(a, b, cut)
    } else {
        (a.to_vec(), b.to_vec())
    }
}

/// Each position, with probability `p_m`, moves to one of the other levels
/// of that position uniformly.
pub fn mutate<R: Rng + ?Sized>(genes: &mut [usize], levels: &[usize], p_m: f64, rng: &mut R) {
    for (g, &l) in genes.iter_mut().zip(levels) {
        if l >= 2 && rng.random::<f64>() < p_m {
            let r = rng.random_range(0..l - 1);
            *g = if r >= *g { r + 1 } else { r };
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineSettings {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub elitism: usize,
}

impl EngineSettings {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 1 {
            return Err(domain("population size must be at least 1"));
        }
        if self.elitism > self.population_size {
            return Err(domain(format!(
                "elitism {} exceeds population size {}",
                self.elitism, self.population_size
            )));
        }
        for (name, p) in [("crossover_prob", self.crossover_prob), ("mutation_prob", self.mutation_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(domain(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineOutcome {
    pub best_genes: Vec<usize>,
    pub best_fitness: f64,
    pub history: Vec<GenerationStats>,
    /// Distinct chromosomes evaluated.
    pub evaluations: usize,
}

/// Generational loop: roulette selection, one-point crossover, mutation,
/// with the `elitism` best carried over unchanged. Fitness values are cached
/// per chromosome. Generation 0 is the random initial population.
pub fn evolve_with<R, F>(
    levels: &[usize],
    settings: &EngineSettings,
    mut objective: F,
    rng: &mut R,
) -> Result<EngineOutcome>
where
    R: Rng + ?Sized,
    F: FnMut(&[usize]) -> Result<f64>,
{
    settings.validate()?;
    if levels.is_empty() || levels.iter().any(|&l| l < 1) {
        return Err(domain("every gene needs at least one level"));
    }
    let mut cache: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut fitness_of = |genes: &Vec<usize>| -> Result<f64> {
        if let Some(&f) = cache.get(genes) {
            return Ok(f);
        }
        let f = objective(genes)?;
        cache.insert(genes.clone(), f);
        Ok(f)
    };

    let mut pop: Vec<Vec<usize>> = (0..settings.population_size)
        .map(|_| levels.iter().map(|&l| rng.random_range(0..l)).collect())
        .collect();
    let mut fit = pop.iter().map(&mut fitness_of).collect::<Result<Vec<_>>>()?;
    let mut best = (pop[0].clone(), fit[0]);
    let mut history = Vec::with_capacity(settings.generations + 1);

    let mut record = |generation: usize, pop: &[Vec<usize>], fit: &[f64], best: &mut (Vec<usize>, f64)| {
        let (i, &top) = fit
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("non-empty population");
        if top > best.1 {
            *best = (pop[i].clone(), top);
        }
        history.push(GenerationStats {
            generation,
            best_fitness: top,
            mean_fitness: fit.iter().sum::<f64>() / fit.len() as f64,
        });
    };
    record(0, &pop, &fit, &mut best);

    for generation in 1..=settings.generations {
        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.sort_by(|&a, &b| fit[b].total_cmp(&fit[a]).then(a.cmp(&b)));
        let mut next: Vec<Vec<usize>> = order[..settings.elitism].iter().map(|&i| pop[i].clone()).collect();
        while next.len() < settings.population_size {
            let (i, j) = roulette_pair(&fit, rng);
            let (mut a, mut b) = one_point_crossover(&pop[i], &pop[j], settings.crossover_prob, rng);
            mutate(&mut a, levels, settings.mutation_prob, rng);
            mutate(&mut b, levels, settings.mutation_prob, rng);
            next.push(a);
            if next.len() < settings.population_size {
                next.push(b);
            }
        }
        pop = next;
        fit = pop.iter().map(&mut fitness_of).collect::<Result<Vec<_>>>()?;
        record(generation, &pop, &fit, &mut best);
    }
    Ok(EngineOutcome { best_genes: best.0, best_fitness: best.1, history, evaluations: cache.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sole_positive_individual_always_selected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert_eq!(roulette_select(&[0.0, 0.0, 2.5, 0.0], &mut rng), 2);
        }
    }

    #[test]
    fn selection_frequencies_follow_fitness() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let hits = (0..n).filter(|_| roulette_select(&[1.0, 3.0], &mut rng) == 1).count();
        let f = hits as f64 / n as f64;
        assert!((f - 0.75).abs() < 0.01, "{f}");
    }

    #[test]
    fn equal_fitness_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mut counts = [0usize; 5];
        for _ in 0..n {
            counts[roulette_select(&[2.0; 5], &mut rng)] += 1;
        }
        let e = n as f64 / 5.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        // 99.9% quantile of chi-square with 4 degrees of freedom.
        assert!(chi2 < 18.47, "{chi2}");
        let mut zero = [0usize; 3];
        for _ in 0..30_000 {
            zero[roulette_select(&[0.0; 3], &mut rng)] += 1;
        }
        assert!(zero.iter().all(|&c| (c as f64 - 10_000.0).abs() < 500.0), "{zero:?}");
    }

    #[test]
    fn crossover_rules() {
        let a = [0, 0, 0, 0];
        let b = [3, 3, 3, 3];
        assert_eq!(crossover_at(&a, &b, 2), (vec![0, 0, 3, 3], vec![3, 3, 0, 0]));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            assert_eq!(one_point_crossover(&a, &b, 0.0, &mut rng), (a.to_vec(), b.to_vec()));
            assert_eq!(one_point_crossover(&a, &a, 1.0, &mut rng), (a.to_vec(), a.to_vec()));
            let (x, y) = one_point_crossover(&a, &b, 1.0, &mut rng);
            assert!(x != a.to_vec() && y != b.to_vec());
        }
    }

    #[test]
    fn mutation_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut g = vec![1, 0, 3];
        mutate(&mut g, &[4, 4, 4], 0.0, &mut rng);
        assert_eq!(g, vec![1, 0, 3]);
        let mut g = vec![0, 1, 0, 1];
        mutate(&mut g, &[2; 4], 1.0, &mut rng);
        assert_eq!(g, vec![1, 0, 1, 0]);
        let n = 100_000;
        let mut g = vec![5usize; n];
        mutate(&mut g, &vec![16; n], 0.1, &mut rng);
        let rate = g.iter().filter(|&&v| v != 5).count() as f64 / n as f64;
        assert!((rate - 0.1).abs() < 0.005, "{rate}");
        assert!(g.iter().all(|&v| v < 16));
    }

    #[test]
    fn frozen_population_keeps_constant_history() {
        let settings = EngineSettings {
            population_size: 10,
            generations: 20,
            crossover_prob: 0.0,
            mutation_prob: 0.0,
            elitism: 1,
        };
        // A single level per gene makes the initial population uniform.
        let out = evolve_with(&[1, 1, 1], &settings, |_| Ok(4.0), &mut ChaCha8Rng::seed_from_u64(6)).unwrap();
        assert_eq!(out.history.len(), 21);
        assert!(out.history.iter().all(|h| h.best_fitness == 4.0 && h.mean_fitness == 4.0));
        assert_eq!(out.evaluations, 1);
    }

    #[test]
    fn finds_exhaustive_maximum_of_small_grid() {
        let f = |g: &[usize]| -> Result<f64> {
            let (x, y) = (g[0] as f64, g[1] as f64);
            Ok(10.0 - (x - 2.0).powi(2) - 0.5 * (y - 1.0).powi(2) + 0.3 * x * y)
        };
        let mut exhaustive = f64::MIN;
        for x in 0..4 {
            for y in 0..4 {
                exhaustive = exhaustive.max(f(&[x, y]).unwrap());
            }
        }
        let settings = EngineSettings {
            population_size: 10,
            generations: 50,
            crossover_prob: 0.8,
            mutation_prob: 0.1,
            elitism: 1,
        };
        for seed in 0..10 {
            let out = evolve_with(&[4, 4], &settings, f, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(out.best_fitness, exhaustive, "seed {seed}");
            assert!(out.history.windows(2).all(|w| w[1].best_fitness >= w[0].best_fitness));
        }
    }

    #[test]
    fn rejects_bad_settings() {
        let s = EngineSettings { population_size: 2, generations: 1, crossover_prob: 1.5, mutation_prob: 0.0, elitism: 0 };
        assert!(evolve_with(&[2], &s, |_| Ok(1.0), &mut ChaCha8Rng::seed_from_u64(0)).is_err());
        let s = EngineSettings { crossover_prob: 0.5, elitism: 3, ..s };
        assert!(s.validate().is_err());
    }
}
