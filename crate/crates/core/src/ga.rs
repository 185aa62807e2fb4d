//! Binary-mask genetic algorithm for wrapper feature selection.
//!
//! Chromosomes are bit masks over the feature-matrix columns. Each
//! generation the masks are scored through a wrapped model (cross-validated
//! SVM accuracy or k-means silhouette), the best `p_m` survive unchanged as
//! parents, midpoint-splice crossover produces `p_m` offspring and each
//! offspring has `n_m` genes flipped. Stopping combines a generation cap, a
//! wall-clock budget, a stagnation window and a fitness checkpoint that can
//! extend the generation cap by 50% while the best fitness keeps improving.

use crate::learners::{kmeans, svm_cv_accuracy, LabeledData, LearnError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("generation {generation}: {source}")]
    Learn {
        generation: usize,
        #[source]
        source: LearnError,
    },
    #[error("empty fitness trace")]
    EmptyTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaMode {
    Supervised,
    Unsupervised,
}

/// The three fitness families: performance only, the λ-weighted
/// performance/size trade-off, and the product form that zeroes out full
/// masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitnessFamily {
    Poff,
    Vmff,
    Nff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxGenerations,
    TimeBudget,
    Stagnation,
    Saturation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaConfig {
    /// Population size n_p; equals parents + offspring.
    pub population_size: usize,
    /// Mating pool size p_m (even); the parents surviving each generation.
    pub mating_pool: usize,
    /// Genes flipped per offspring (n_m).
    pub mutations: usize,
    /// Weight of the performance term in the VMFF family.
    pub lambda: f64,
    pub max_generations: usize,
    /// Wall-clock budget in minutes, checked between generations.
    pub max_minutes: Option<f64>,
    pub seed: u64,
    pub mode: GaMode,
    pub fitness_family: FitnessFamily,
    /// Cluster count for the unsupervised model.
    pub k: Option<usize>,
    /// Cross-validation folds for the supervised model.
    pub folds: usize,
    /// Per-gene uniform crossover instead of the midpoint splice.
    pub uniform_crossover: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 8,
            mating_pool: 4,
            mutations: 3,
            lambda: 0.88,
            max_generations: 200,
            max_minutes: None,
            seed: 0,
            mode: GaMode::Supervised,
            fitness_family: FitnessFamily::Nff,
            k: None,
            folds: 10,
            uniform_crossover: false,
        }
    }
}

impl GaConfig {
    pub fn validate(&self, n_if: usize) -> Result<(), GaError> {
        if n_if == 0 {
            return Err(GaError::Config("no features to select from".into()));
        }
        if self.mating_pool == 0 || !self.mating_pool.is_multiple_of(2) {
            return Err(GaError::Config(format!(
                "mating pool must be even and positive, got {}",
                self.mating_pool
            )));
        }
        if self.population_size != 2 * self.mating_pool {
            return Err(GaError::Config(format!(
                "population size {} must equal parents + offspring = 2 × {}",
                self.population_size, self.mating_pool
            )));
        }
        if self.mutations == 0 || self.mutations > n_if {
            return Err(GaError::Config(format!(
                "mutation count {} must lie in 1..={n_if}",
                self.mutations
            )));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(GaError::Config(format!(
                "lambda must lie in [0, 1], got {}",
                self.lambda
            )));
        }
        if self.max_generations == 0 {
            return Err(GaError::Config("max_generations must be positive".into()));
        }
        if self.mode == GaMode::Unsupervised && self.k.is_none_or(|k| k < 2) {
            return Err(GaError::Config(
                "unsupervised mode needs a cluster count k >= 2".into(),
            ));
        }
        if self.mode == GaMode::Supervised && self.folds < 2 {
            return Err(GaError::Config(format!(
                "supervised mode needs folds >= 2, got {}",
                self.folds
            )));
        }
        Ok(())
    }
}

/// Binary feature mask under evolution.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chromosome {
    pub genes: Vec<bool>,
}

impl Chromosome {
    pub fn popcount(&self) -> usize {
        self.genes.iter().filter(|&&g| g).count()
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }
}

pub type Population = Vec<Chromosome>;

/// State visible to a wrapped model during one fitness evaluation. The
/// scripted stubs used in stopping-machine tests key off `checkpoints`.
#[derive(Debug, Clone, Copy)]
pub struct EvalContext {
    pub generation: usize,
    pub chromosome: usize,
    pub max_generations: usize,
    /// Number of fitness checkpoints recorded so far.
    pub checkpoints: usize,
}

/// The performance measure wrapped by the fitness families: CV accuracy for
/// supervised runs, average silhouette for unsupervised ones.
pub trait WrappedModel: Sync {
    fn performance(
        &self,
        data: &LabeledData,
        mask: &[bool],
        seed: u64,
        ctx: &EvalContext,
    ) -> Result<f64, LearnError>;
}

/// Linear SVM with stratified k-fold cross-validation.
pub struct SvmModel {
    pub folds: usize,
}

impl WrappedModel for SvmModel {
    fn performance(
        &self,
        data: &LabeledData,
        mask: &[bool],
        seed: u64,
        _ctx: &EvalContext,
    ) -> Result<f64, LearnError> {
        let masked = data.masked(mask)?;
        Ok(svm_cv_accuracy(&masked, self.folds, seed)?.value)
    }
}

/// K-means with city-block distance, scored by average silhouette.
pub struct KmeansModel {
    pub k: usize,
}

impl WrappedModel for KmeansModel {
    fn performance(
        &self,
        data: &LabeledData,
        mask: &[bool],
        seed: u64,
        _ctx: &EvalContext,
    ) -> Result<f64, LearnError> {
        let masked = data.masked(mask)?;
        Ok(kmeans(masked.matrix(), self.k, seed)?.avg_silhouette)
    }
}

/// Fitness family arithmetic on top of the wrapped performance.
pub fn family_fitness(
    family: FitnessFamily,
    lambda: f64,
    perf: f64,
    n_sf: usize,
    n_if: usize,
) -> f64 {
    let ratio = n_sf as f64 / n_if as f64;
    match family {
        FitnessFamily::Poff => perf,
        FitnessFamily::Vmff => lambda * (1.0 - perf) + (1.0 - lambda) * (1.0 - ratio),
        FitnessFamily::Nff => perf * (1.0 - ratio),
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Model seed for one evaluation, independent of evaluation order.
fn derive_seed(seed: u64, generation: usize, chromosome: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ generation as u64) ^ chromosome as u64)
}

fn draw_chromosome(n_if: usize, rng: &mut ChaCha8Rng) -> Chromosome {
    loop {
        let genes: Vec<bool> = (0..n_if).map(|_| rng.gen_bool(0.5)).collect();
        if genes.iter().any(|&g| g) {
            return Chromosome { genes };
        }
    }
}

/// Random initial population; all-zero chromosomes are redrawn.
pub fn init_population(cfg: &GaConfig, n_if: usize) -> Result<Population, GaError> {
    cfg.validate(n_if)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok((0..cfg.population_size)
        .map(|_| draw_chromosome(n_if, &mut rng))
        .collect())
}

/// Fitness of a single chromosome under the configured model and family,
/// using the run seed directly.
pub fn fitness(c: &Chromosome, data: &LabeledData, cfg: &GaConfig) -> Result<f64, GaError> {
    if c.popcount() == 0 {
        return Err(GaError::Config(
            "cannot evaluate an all-zero chromosome".into(),
        ));
    }
    let ctx = EvalContext {
        generation: 0,
        chromosome: 0,
        max_generations: cfg.max_generations,
        checkpoints: 0,
    };
    let perf = match cfg.mode {
        GaMode::Supervised => SvmModel { folds: cfg.folds }.performance(
            data,
            &c.genes,
            cfg.seed,
            &ctx,
        ),
        GaMode::Unsupervised => KmeansModel {
            k: cfg.k.unwrap_or(2),
        }
        .performance(data, &c.genes, cfg.seed, &ctx),
    }
    .map_err(|source| GaError::Learn {
        generation: 0,
        source,
    })?;
    Ok(family_fitness(
        cfg.fitness_family,
        cfg.lambda,
        perf,
        c.popcount(),
        c.len(),
    ))
}

/// Indices of the `p_m` fittest chromosomes in rank order. Ties go to the
/// lower index, then the lower popcount.
pub fn select_parents(fitnesses: &[f64], pop: &Population, p_m: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitnesses.len()).collect();
    order.sort_by(|&a, &b| {
        fitnesses[b]
            .partial_cmp(&fitnesses[a])
            .unwrap()
            .then(a.cmp(&b))
            .then(pop[a].popcount().cmp(&pop[b].popcount()))
    });
    order.truncate(p_m);
    order
}

/// Midpoint splice of a ranked parent pair: child A takes the first
/// ⌈N/2⌉ genes of X and the rest of Y, child B the mirror. The uniform
/// variant draws per-gene donors instead.
pub fn crossover_pair(
    x: &Chromosome,
    y: &Chromosome,
    uniform: bool,
    rng: &mut ChaCha8Rng,
) -> (Chromosome, Chromosome) {
    let n = x.len();
    if uniform {
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for i in 0..n {
            if rng.gen_bool(0.5) {
                a.push(x.genes[i]);
                b.push(y.genes[i]);
            } else {
                a.push(y.genes[i]);
                b.push(x.genes[i]);
            }
        }
        (Chromosome { genes: a }, Chromosome { genes: b })
    } else {
        let split = n.div_ceil(2);
        let mut a = x.genes[..split].to_vec();
        a.extend_from_slice(&y.genes[split..]);
        let mut b = y.genes[..split].to_vec();
        b.extend_from_slice(&x.genes[split..]);
        (Chromosome { genes: a }, Chromosome { genes: b })
    }
}

/// Flip `n_m` distinct genes; an all-zero result gets one uniformly chosen
/// gene set back to 1.
pub fn mutate(mut c: Chromosome, n_m: usize, rng: &mut ChaCha8Rng) -> Chromosome {
    let n = c.len();
    for idx in rand::seq::index::sample(rng, n, n_m) {
        c.genes[idx] = !c.genes[idx];
    }
    if c.popcount() == 0 {
        let idx = rng.gen_range(0..n);
        c.genes[idx] = true;
    }
    c
}

/// Summary statistics of a per-generation best-fitness trace. `final_value`
/// is the largest trace value inside `[mean − std, mean + std]`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TraceStats {
    pub mean: f64,
    pub std: f64,
    pub max: f64,
    pub final_value: f64,
    /// First generation (0-based) achieving `final_value`.
    pub final_index: usize,
}

pub fn trace_stats(trace: &[f64]) -> Result<TraceStats, GaError> {
    if trace.is_empty() {
        return Err(GaError::EmptyTrace);
    }
    let n = trace.len() as f64;
    let mean = trace.iter().sum::<f64>() / n;
    let std = if trace.len() > 1 {
        (trace.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let max = trace.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut final_value = f64::NEG_INFINITY;
    let mut final_index = 0;
    for (i, &x) in trace.iter().enumerate() {
        if (x - mean).abs() <= std + 1e-12 && x > final_value {
            final_value = x;
            final_index = i;
        }
    }
    Ok(TraceStats {
        mean,
        std,
        max,
        final_value,
        final_index,
    })
}

/// Full account of one GA run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    /// Best fitness of each generation.
    pub trace: Vec<f64>,
    pub best_fitness: f64,
    pub best_chromosome: Chromosome,
    pub mean: f64,
    pub std: f64,
    pub max: f64,
    /// The representative statistic: max trace value within one std of the
    /// trace mean.
    pub final_fitness: f64,
    pub final_chromosome: Chromosome,
    pub stop_reason: StopReason,
    pub elapsed_minutes: f64,
    pub generations_run: usize,
    /// Generation cap after all checkpoint extensions.
    pub max_generations: usize,
}

impl RunReport {
    /// Mask of the final (representative) solution.
    pub fn selected(&self) -> &[bool] {
        &self.final_chromosome.genes
    }
}

/// Evolve feature masks over `data` with the standard wrapped model for the
/// configured mode.
pub fn run(data: &LabeledData, cfg: &GaConfig) -> Result<RunReport, GaError> {
    match cfg.mode {
        GaMode::Supervised => run_with_model(data, &SvmModel { folds: cfg.folds }, cfg),
        GaMode::Unsupervised => run_with_model(
            data,
            &KmeansModel {
                k: cfg.k.unwrap_or(2),
            },
            cfg,
        ),
    }
}

/// Evaluate a generation, memoizing duplicate gene vectors. Wrapper
/// evaluations dominate runtime, so distinct masks run in parallel with
/// seeds derived from (run seed, generation, first chromosome index).
fn evaluate_generation(
    pop: &Population,
    data: &LabeledData,
    model: &dyn WrappedModel,
    cfg: &GaConfig,
    generation: usize,
    max_generations: usize,
    checkpoints: usize,
) -> Result<Vec<f64>, GaError> {
    debug_assert!(pop.iter().all(|c| c.popcount() > 0));
    let mut first_idx: HashMap<&Chromosome, usize> = HashMap::new();
    let mut unique: Vec<(usize, &Chromosome)> = Vec::new();
    for (i, c) in pop.iter().enumerate() {
        if !first_idx.contains_key(c) {
            first_idx.insert(c, i);
            unique.push((i, c));
        }
    }
    let evaluated: Vec<(usize, Result<f64, LearnError>)> = unique
        .par_iter()
        .map(|&(idx, c)| {
            let ctx = EvalContext {
                generation,
                chromosome: idx,
                max_generations,
                checkpoints,
            };
            let seed = derive_seed(cfg.seed, generation, idx);
            let perf = model.performance(data, &c.genes, seed, &ctx);
            (
                idx,
                perf.map(|p| {
                    family_fitness(cfg.fitness_family, cfg.lambda, p, c.popcount(), c.len())
                }),
            )
        })
        .collect();
    let mut by_first: HashMap<usize, f64> = HashMap::new();
    for (idx, res) in evaluated {
        by_first.insert(
            idx,
            res.map_err(|source| GaError::Learn {
                generation,
                source,
            })?,
        );
    }
    Ok(pop
        .iter()
        .map(|c| by_first[&first_idx[c]])
        .collect())
}

/// GA loop with a caller-supplied wrapped model (stub learners in tests).
pub fn run_with_model(
    data: &LabeledData,
    model: &dyn WrappedModel,
    cfg: &GaConfig,
) -> Result<RunReport, GaError> {
    let n_if = data.matrix().n_cols();
    cfg.validate(n_if)?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop: Population = (0..cfg.population_size)
        .map(|_| draw_chromosome(n_if, &mut rng))
        .collect();

    let mut max_generations = cfg.max_generations;
    let mut trace: Vec<f64> = Vec::new();
    let mut gen_best: Vec<Chromosome> = Vec::new();
    let mut global_best: Option<(f64, Chromosome)> = None;
    let mut fitness_check: Option<f64> = None;
    let mut checkpoints = 0usize;
    let mut stagnant = 0usize;
    let mut generation = 0usize;

    let stop_reason = loop {
        generation += 1;
        let fits = evaluate_generation(
            &pop,
            data,
            model,
            cfg,
            generation,
            max_generations,
            checkpoints,
        )?;
        debug_assert_eq!(pop.len(), cfg.population_size);

        let mut local = 0usize;
        for i in 1..fits.len() {
            if fits[i] > fits[local] {
                local = i;
            }
        }
        trace.push(fits[local]);
        gen_best.push(pop[local].clone());

        let improved = global_best
            .as_ref()
            .is_none_or(|(gb, _)| fits[local] > *gb);
        if improved {
            global_best = Some((fits[local], pop[local].clone()));
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        let best = global_best.as_ref().expect("set on first generation").0;

        // fitness checkpoint: record at the 50% crossing, then extend the
        // cap by 50% on a +0.02 improvement and wait for the next crossing
        match fitness_check {
            None => {
                if generation >= max_generations.div_ceil(2) {
                    fitness_check = Some(best);
                    checkpoints += 1;
                }
            }
            Some(check) => {
                if best > check + 0.02 {
                    max_generations = (max_generations as f64 * 1.5).ceil() as usize;
                    fitness_check = None;
                }
            }
        }

        if max_generations > 1000 && best == 1.0 {
            break StopReason::Saturation;
        }
        if stagnant >= ((max_generations as f64) * 0.8).ceil() as usize {
            break StopReason::Stagnation;
        }
        if generation >= max_generations {
            break StopReason::MaxGenerations;
        }
        if let Some(minutes) = cfg.max_minutes {
            if start.elapsed().as_secs_f64() / 60.0 >= minutes {
                break StopReason::TimeBudget;
            }
        }

        // steps 3–6: elitist parents, midpoint crossover, n_m mutations
        let parents = select_parents(&fits, &pop, cfg.mating_pool);
        let mut next: Population = parents.iter().map(|&i| pop[i].clone()).collect();
        for pair in parents.chunks(2) {
            let (a, b) = crossover_pair(&pop[pair[0]], &pop[pair[1]], cfg.uniform_crossover, &mut rng);
            next.push(mutate(a, cfg.mutations, &mut rng));
            next.push(mutate(b, cfg.mutations, &mut rng));
        }
        pop = next;
    };

    let stats = trace_stats(&trace)?;
    let (best_fitness, best_chromosome) = global_best.expect("at least one generation ran");
    Ok(RunReport {
        trace,
        best_fitness,
        best_chromosome,
        mean: stats.mean,
        std: stats.std,
        max: stats.max,
        final_fitness: stats.final_value,
        final_chromosome: gen_best[stats.final_index].clone(),
        stop_reason,
        elapsed_minutes: start.elapsed().as_secs_f64() / 60.0,
        generations_run: generation,
        max_generations,
    })
}
