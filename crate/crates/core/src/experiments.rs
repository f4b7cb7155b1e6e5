//! Sampling and exhaustive experiments over k-subsets of `[n] = {1, ..., n}`.
//!
//! Stochastic runs are split into fixed-size shards of samples. Shard `s` draws
//! from a ChaCha stream keyed by `(seed, s)`, so the output depends only on the
//! seed and the configuration, never on how many workers process the shards.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial_u64, CompositionTable};
use crate::lattice::successive_minima;
use crate::sumset::{SumsetSequence, DEFAULT_SUMSET_CAP};
use crate::theory::popular_sizes;
use crate::types::h_type_with_table;
use crate::{composition_count, decimal, Error, IntegerSet, Result};

/// Samples per RNG shard.
pub const SHARD_SIZE: u64 = 1024;

/// Largest `C(n, k)` an exhaustive scan or census will walk by default.
pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 200_000_000;

/// Environment variable read by the CLI for the default worker count.
pub const WORKERS_ENV: &str = "SUMSETS_WORKERS";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Sets are drawn from `{1, ..., n}`.
    pub n: u64,
    pub k: usize,
    pub h: u32,
    /// Number of random sets; 0 means every k-subset.
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 || self.n < self.k as u64 {
            return Err(Error::invalid("need n >= k >= 2"));
        }
        if self.h == 0 {
            return Err(Error::invalid("h must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::invalid("workers must be at least 1"));
        }
        if self.n > i64::MAX as u64 / (self.h as u64 + 1) {
            return Err(Error::invalid("n is too large for the sampling kernel"));
        }
        Ok(())
    }
}

/// Occurrence counts of observed values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, value: u64) {
        *self.counts.entry(value).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(mut self, other: Histogram) -> Histogram {
        for (v, c) in other.counts {
            *self.counts.entry(v).or_insert(0) += c;
        }
        self.total += other.total;
        self
    }

    pub fn count(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn proportion(&self, value: u64) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(value) as f64 / self.total as f64
        }
    }

    /// `value,count,proportion` rows with a header line.
    pub fn to_csv(&self, value_header: &str) -> String {
        let mut out = format!("{value_header},count,proportion\n");
        for (v, c) in &self.counts {
            out.push_str(&format!("{v},{c},{}\n", *c as f64 / self.total as f64));
        }
        out
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))
}

fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// A uniform k-subset of `{1, ..., n}`, sorted.
pub fn sample_subset(rng: &mut ChaCha8Rng, n: u64, k: usize) -> Vec<i64> {
    let mut v: Vec<i64> = rand::seq::index::sample(rng, n as usize, k)
        .into_iter()
        .map(|i| i as i64 + 1)
        .collect();
    v.sort_unstable();
    v
}

/// Runs `f` on every sample of every shard and folds the results shard by shard.
fn sharded<R, F>(samples: u64, seed: u64, workers: usize, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<R> + Sync,
{
    let shards = samples.div_ceil(SHARD_SIZE);
    let per_shard = |s: u64| -> Result<Vec<R>> {
        let mut rng = shard_rng(seed, s);
        let len = SHARD_SIZE.min(samples - s * SHARD_SIZE);
        (0..len).map(|_| f(&mut rng)).collect()
    };
    let nested: Vec<Vec<R>> = pool(workers)?.install(|| {
        (0..shards)
            .into_par_iter()
            .map(per_shard)
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(nested.into_iter().flatten().collect())
}

fn sumset_size(elements: &[i64], h: u32) -> Result<u64> {
    let mut seq = SumsetSequence::new(elements.to_vec(), DEFAULT_SUMSET_CAP);
    Ok(seq.advance_to(h)?.len() as u64)
}

/// Calls `f` on every k-subset of `{lo, ..., hi}` in lexicographic order.
fn for_each_subset(lo: i64, hi: i64, k: usize, prefix: &mut Vec<i64>, f: &mut dyn FnMut(&[i64]) -> Result<()>) -> Result<()> {
    if k == 0 {
        return f(prefix);
    }
    let mut x = lo;
    while x + k as i64 - 1 <= hi {
        prefix.push(x);
        for_each_subset(x + 1, hi, k - 1, prefix, f)?;
        prefix.pop();
        x += 1;
    }
    Ok(())
}

fn check_budget(n: u64, k: usize, budget: u64) -> Result<u64> {
    let count = crate::binomial(&BigInt::from(n), k as u64);
    match count.to_u64() {
        Some(c) if c <= budget => Ok(c),
        _ => Err(Error::ResourceLimit {
            what: "number of k-subsets",
            requested: count.to_string(),
            limit: budget,
        }),
    }
}

/// Exact frequency of `|hA|` over every k-subset `A` of `[n]`.
pub fn exhaustive_scan(n: u64, k: usize, h: u32) -> Result<Histogram> {
    exhaustive_scan_with(n, k, h, 1, DEFAULT_EXHAUSTIVE_BUDGET)
}

pub fn exhaustive_scan_with(n: u64, k: usize, h: u32, workers: usize, budget: u64) -> Result<Histogram> {
    ExperimentConfig { n, k, h, samples: 0, seed: 0, workers }.validate()?;
    check_budget(n, k, budget)?;
    let n = n as i64;
    let firsts: Vec<i64> = (1..=n - k as i64 + 1).collect();
    let parts = pool(workers)?.install(|| {
        firsts
            .par_iter()
            .map(|&first| {
                let mut hist = Histogram::new();
                let mut prefix = vec![first];
                for_each_subset(first + 1, n, k - 1, &mut prefix, &mut |a| {
                    hist.record(sumset_size(a, h)?);
                    Ok(())
                })?;
                Ok(hist)
            })
            .collect::<Result<Vec<Histogram>>>()
    })?;
    Ok(parts.into_iter().fold(Histogram::new(), Histogram::merge))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSummary {
    pub config: ExperimentConfig,
    pub exhaustive: bool,
    pub evaluated: u64,
    #[serde(with = "decimal::int")]
    pub min_size: BigInt,
    #[serde(with = "decimal::int")]
    pub max_size: BigInt,
    pub distinct_sizes: usize,
    /// Fraction of sets with `|hA| = C(h+k-1, k-1)`.
    pub bh_fraction: f64,
    pub non_bh_count: u64,
    /// `M - C(h-a+k-1, k-1)` for `2 <= a <= h`.
    #[serde(with = "decimal::int_vec")]
    pub popular_sizes: Vec<BigInt>,
    /// Fraction of non-`B_h` sets whose size is in `popular_sizes`.
    pub popular_coverage: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomExperiment {
    pub histogram: Histogram,
    pub summary: RandomSummary,
}

/// Histogram of `|hA|` over uniform random k-subsets of `[n]` (or all of them
/// when `samples == 0`), with the `B_h` fraction and popular-size coverage.
pub fn random_subset_experiment(config: &ExperimentConfig) -> Result<RandomExperiment> {
    config.validate()?;
    let ExperimentConfig { n, k, h, samples, seed, workers } = *config;
    let exhaustive = samples == 0;
    let histogram = if exhaustive {
        exhaustive_scan_with(n, k, h, workers, DEFAULT_EXHAUSTIVE_BUDGET)?
    } else {
        let sizes = sharded(samples, seed, workers, |rng| sumset_size(&sample_subset(rng, n, k), h))?;
        let mut hist = Histogram::new();
        for s in sizes {
            hist.record(s);
        }
        hist
    };

    let max_size = composition_count(h as u64, k);
    let min_size = BigInt::from(h) * BigInt::from(k) - BigInt::from(h) + 1;
    let max_u64 = max_size.to_u64();
    let bh_count = max_u64.map_or(0, |m| histogram.count(m));
    let non_bh_count = histogram.total - bh_count;
    let popular = popular_sizes(h as u64, k);
    let popular_hits: u64 = popular
        .iter()
        .filter_map(|s| s.to_u64())
        .map(|s| histogram.count(s))
        .sum();
    let summary = RandomSummary {
        config: config.clone(),
        exhaustive,
        evaluated: histogram.total,
        min_size,
        max_size,
        distinct_sizes: histogram.counts.len(),
        bh_fraction: bh_count as f64 / histogram.total as f64,
        non_bh_count,
        popular_sizes: popular,
        popular_coverage: if non_bh_count == 0 { 0.0 } else { popular_hits as f64 / non_bh_count as f64 },
    };
    Ok(RandomExperiment { histogram, summary })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimaConfig {
    pub n: u64,
    pub k: usize,
    pub samples: u64,
    pub seed: u64,
    /// Even L1 norm bound for the minima search.
    pub cap: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimaSummary {
    pub config: MinimaConfig,
    /// Mean of `h_1` over samples where it was found within the cap.
    pub mean_h1: f64,
    pub std_h1: f64,
    pub h1_truncation_rate: f64,
    /// Statistics of `h_2` over samples where it was found within the cap.
    pub mean_h2: Option<f64>,
    pub std_h2: Option<f64>,
    pub h2_truncation_rate: f64,
    /// `n^{1/(k-2)}`, the scale the mean of `h_1` is compared against.
    pub scale: f64,
    pub h1_histogram: Histogram,
    pub h2_histogram: Histogram,
}

fn mean_std(values: &[u64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n;
    let var = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

/// Distribution of the first two lattice minima over random k-subsets of `[n]`.
pub fn minima_statistics(config: &MinimaConfig) -> Result<MinimaSummary> {
    let MinimaConfig { n, k, samples, seed, cap, workers } = *config;
    if k < 4 || n < k as u64 {
        return Err(Error::invalid("minima statistics need n >= k >= 4"));
    }
    if samples == 0 {
        return Err(Error::invalid("samples must be positive"));
    }
    if cap < 4 || cap % 2 == 1 {
        return Err(Error::invalid("cap must be even and at least 4"));
    }
    if workers == 0 {
        return Err(Error::invalid("workers must be at least 1"));
    }
    let results = sharded(samples, seed, workers, |rng| {
        let a = IntegerSet::<i64>::new(sample_subset(rng, n, k))?;
        let report = successive_minima(&a, 2, cap)?;
        Ok((report.h1(), report.h2()))
    })?;

    let mut h1_histogram = Histogram::new();
    let mut h2_histogram = Histogram::new();
    for (h1, h2) in &results {
        if let Some(v) = h1 {
            h1_histogram.record(*v);
        }
        if let Some(v) = h2 {
            h2_histogram.record(*v);
        }
    }
    let h1s: Vec<u64> = results.iter().filter_map(|r| r.0).collect();
    let h2s: Vec<u64> = results.iter().filter_map(|r| r.1).collect();
    let (mean_h1, std_h1) = mean_std(&h1s).unwrap_or((f64::NAN, f64::NAN));
    let h2_stats = mean_std(&h2s);
    Ok(MinimaSummary {
        config: config.clone(),
        mean_h1,
        std_h1,
        h1_truncation_rate: 1.0 - h1s.len() as f64 / samples as f64,
        mean_h2: h2_stats.map(|s| s.0),
        std_h2: h2_stats.map(|s| s.1),
        h2_truncation_rate: 1.0 - h2s.len() as f64 / samples as f64,
        scale: (n as f64).powf(1.0 / (k as f64 - 2.0)),
        h1_histogram,
        h2_histogram,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    /// Lexicographically least k-subset of `[n]` with this type.
    pub representative: IntegerSet<i64>,
    pub class_count: usize,
    /// Number of k-subsets of `[n]` with this type.
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCensus {
    pub n: u64,
    pub k: usize,
    pub h: u32,
    /// Distinct h-types among k-subsets of `[n]`; a lower bound on the number of
    /// h-types of k-element integer sets.
    pub type_count: usize,
    pub types: Vec<CensusEntry>,
}

/// Distinct h-types among all k-subsets of `[n]`.
pub fn type_census(n: u64, k: usize, h: u32) -> Result<TypeCensus> {
    type_census_with(n, k, h, 1, DEFAULT_EXHAUSTIVE_BUDGET)
}

pub fn type_census_with(n: u64, k: usize, h: u32, workers: usize, budget: u64) -> Result<TypeCensus> {
    ExperimentConfig { n, k, h, samples: 0, seed: 0, workers }.validate()?;
    check_budget(n, k, budget)?;
    let table = CompositionTable::new(h, k)?;
    let n = n as i64;
    let firsts: Vec<i64> = (1..=n - k as i64 + 1).collect();
    type Seen = HashMap<Vec<u32>, (Vec<i64>, usize, u64)>;
    let parts: Vec<Seen> = pool(workers)?.install(|| {
        firsts
            .par_iter()
            .map(|&first| {
                let mut seen: Seen = HashMap::new();
                let mut prefix = vec![first];
                for_each_subset(first + 1, n, k - 1, &mut prefix, &mut |a| {
                    let set = IntegerSet::<i64>::from_sorted_unchecked(a.to_vec());
                    let t = h_type_with_table(&set, &table)?;
                    seen.entry(t.class_ids)
                        .and_modify(|e| e.2 += 1)
                        .or_insert((a.to_vec(), t.class_count, 1));
                    Ok(())
                })?;
                Ok(seen)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut merged: Seen = HashMap::new();
    for part in parts {
        for (ids, (rep, count, mult)) in part {
            merged
                .entry(ids)
                .and_modify(|e| {
                    if rep < e.0 {
                        e.0 = rep.clone();
                    }
                    e.2 += mult;
                })
                .or_insert((rep, count, mult));
        }
    }
    let mut types: Vec<CensusEntry> = merged
        .into_values()
        .map(|(rep, class_count, multiplicity)| CensusEntry {
            representative: IntegerSet::from_sorted_unchecked(rep),
            class_count,
            multiplicity,
        })
        .collect();
    types.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(TypeCensus { n: n as u64, k, h, type_count: types.len(), types })
}

/// `C(n, k)` as `u64`, if it fits.
pub fn subset_count(n: u64, k: usize) -> Option<u64> {
    binomial_u64(n, k as u64)
}
