//! Head-resolution timing on alternating undo/redo histories.
//!
//! A history of length `n` is one set followed by `n` undo/redo pairs, all on
//! one replica. The undo restores always anchor the initial set, while each
//! redo anchors the undo before it, so resolving a redo head without the
//! cache walks the whole chain.

use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::history::History;
use crate::id::OpId;
use crate::replica::{Replica, ReplicaConfig};
use crate::resolver::{get_values, resolve_heads, resolve_heads_cached, RestoreCache};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("invalid bench config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchMode {
    UndoHead,
    RedoHeadUncached,
    RedoHeadCached,
}

impl BenchMode {
    pub const ALL: [BenchMode; 3] = [
        BenchMode::UndoHead,
        BenchMode::RedoHeadUncached,
        BenchMode::RedoHeadCached,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchMode::UndoHead => "undo-head",
            BenchMode::RedoHeadUncached => "redo-head-uncached",
            BenchMode::RedoHeadCached => "redo-head-cached",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub lengths: Vec<usize>,
    pub runs: usize,
    pub modes: Vec<BenchMode>,
    /// Shuffles the order in which (mode, length) cells are measured.
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            lengths: vec![200, 400, 600, 800],
            runs: 1024,
            modes: BenchMode::ALL.to_vec(),
            seed: 0,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.lengths.is_empty() || self.lengths.contains(&0) {
            return Err(BenchError::InvalidConfig("lengths must be positive".into()));
        }
        if self.runs == 0 {
            return Err(BenchError::InvalidConfig("runs must be at least 1".into()));
        }
        if self.modes.is_empty() {
            return Err(BenchError::InvalidConfig("no modes selected".into()));
        }
        Ok(())
    }
}

pub struct AlternatingHistory {
    pub n: usize,
    pub history: History<i64>,
    pub last_undo: OpId,
    pub last_redo: OpId,
}

pub fn alternating_history(n: usize) -> AlternatingHistory {
    let config = ReplicaConfig {
        caching: false,
        ..ReplicaConfig::default()
    };
    let mut replica: Replica<i64> = Replica::with_config("A", config).expect("valid id");
    let first = replica.set(1);
    let (mut last_undo, mut last_redo) = (first.id.clone(), first.id);
    for _ in 0..n {
        last_undo = replica
            .undo()
            .expect("a set is always on the undo stack")
            .id;
        last_redo = replica
            .redo()
            .expect("redo stack is consistent")
            .expect("an undo was just made")
            .id;
    }
    AlternatingHistory {
        n,
        history: replica.history().clone(),
        last_undo,
        last_redo,
    }
}

impl AlternatingHistory {
    /// A cache holding every restore below the last redo, as a replica that
    /// had been reading its values after each operation would have.
    pub fn warm_cache(&self) -> RestoreCache {
        let mut cache = RestoreCache::new();
        let redo = self.history.get(&self.last_redo).expect("redo is applied");
        let anchor = redo
            .anchor()
            .and_then(|a| self.history.get(a))
            .expect("anchor is applied");
        resolve_heads_cached(&self.history, &anchor.preds, &mut cache).expect("history is closed");
        cache
    }

    fn head(&self, mode: BenchMode) -> &OpId {
        match mode {
            BenchMode::UndoHead => &self.last_undo,
            _ => &self.last_redo,
        }
    }

    /// Traversal steps for resolving the mode's head. Uncached modes use an
    /// empty cache, which visits exactly what the uncached traversal visits.
    pub fn steps(&self, mode: BenchMode) -> usize {
        let mut cache = match mode {
            BenchMode::RedoHeadCached => self.warm_cache(),
            _ => RestoreCache::new(),
        };
        resolve_heads_cached(&self.history, [self.head(mode)], &mut cache)
            .expect("history is closed")
            .stats
            .visited
    }

    /// One timed resolution of the mode's head. In cached mode the head's
    /// own entry is evicted again after timing, so `warm` is left as it was.
    pub fn time_once(&self, mode: BenchMode, warm: &mut RestoreCache) -> (Duration, usize) {
        let head = self.head(mode);
        match mode {
            BenchMode::RedoHeadCached => {
                let start = Instant::now();
                let resolved =
                    resolve_heads_cached(&self.history, [head], warm).expect("history is closed");
                let values = black_box(resolved.values());
                let elapsed = start.elapsed();
                warm.remove(head);
                (elapsed, values.len())
            }
            _ => {
                let start = Instant::now();
                let terminal = resolve_heads(&self.history, [head]).expect("history is closed");
                let values = black_box(get_values(terminal).expect("traces diverge"));
                (start.elapsed(), values.len())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSample {
    pub mode: BenchMode,
    pub n: usize,
    pub runs: usize,
    pub median_ms: f64,
    pub min_ms: f64,
    pub steps: usize,
    pub values: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchHeader {
    pub schema_version: u32,
    pub runs: usize,
    pub lengths: Vec<usize>,
    pub modes: Vec<BenchMode>,
    pub seed: u64,
    /// What the timings cover.
    pub measures: &'static str,
    /// History construction time per length, timed separately.
    pub construction_ms: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub header: BenchHeader,
    pub samples: Vec<BenchSample>,
}

impl BenchReport {
    pub fn sample(&self, mode: BenchMode, n: usize) -> Option<&BenchSample> {
        self.samples.iter().find(|s| s.mode == mode && s.n == n)
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn median(samples: &mut [f64]) -> f64 {
    assert!(!samples.is_empty(), "median of nothing");
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2.0
    }
}

pub fn measure(hist: &AlternatingHistory, mode: BenchMode, runs: usize) -> BenchSample {
    let mut warm = match mode {
        BenchMode::RedoHeadCached => hist.warm_cache(),
        _ => RestoreCache::new(),
    };
    let mut times = Vec::with_capacity(runs);
    let mut values = 0;
    for _ in 0..runs {
        let (t, v) = hist.time_once(mode, &mut warm);
        times.push(ms(t));
        values = v;
    }
    let min_ms = times.iter().copied().fold(f64::INFINITY, f64::min);
    BenchSample {
        mode,
        n: hist.n,
        runs,
        median_ms: median(&mut times),
        min_ms,
        steps: hist.steps(mode),
        values,
    }
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    config.validate()?;
    let mut histories = Vec::new();
    let mut construction_ms = Vec::new();
    for &n in &config.lengths {
        let start = Instant::now();
        let hist = alternating_history(n);
        construction_ms.push((n, ms(start.elapsed())));
        histories.push(hist);
    }

    let mut cells: Vec<(usize, BenchMode)> = (0..histories.len())
        .flat_map(|h| config.modes.iter().map(move |&m| (h, m)))
        .collect();
    cells.shuffle(&mut ChaCha8Rng::seed_from_u64(config.seed));
    let mut samples: Vec<BenchSample> = cells
        .into_iter()
        .map(|(h, mode)| measure(&histories[h], mode, config.runs))
        .collect();
    samples.sort_by_key(|s| (s.mode, s.n));

    Ok(BenchReport {
        header: BenchHeader {
            schema_version: SCHEMA_VERSION,
            runs: config.runs,
            lengths: config.lengths.clone(),
            modes: config.modes.clone(),
            seed: config.seed,
            measures: "head resolution only; history construction and cache warm-up excluded",
            construction_ms,
        },
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_history_shape() {
        let h = alternating_history(3);
        assert_eq!(h.history.len(), 7);
        assert_eq!(h.history.heads().iter().next(), Some(&h.last_redo));
        // redo resolves back to the initial value, undo of a root to nothing
        let mut cache = RestoreCache::new();
        let redo = resolve_heads_cached(&h.history, [&h.last_redo], &mut cache).unwrap();
        assert_eq!(redo.values(), vec![1]);
        let undo = resolve_heads(&h.history, [&h.last_undo]).unwrap();
        assert!(undo.is_empty());
    }

    #[test]
    fn step_counts() {
        for n in [1, 5, 50] {
            let h = alternating_history(n);
            assert_eq!(h.steps(BenchMode::UndoHead), 1);
            assert_eq!(h.steps(BenchMode::RedoHeadUncached), n + 1);
            assert_eq!(h.steps(BenchMode::RedoHeadCached), 2);
        }
    }

    #[test]
    fn warm_cache_hits_once() {
        let h = alternating_history(40);
        let mut cache = h.warm_cache();
        let r = resolve_heads_cached(&h.history, [&h.last_redo], &mut cache).unwrap();
        assert_eq!(r.stats.cache_hits, 1);
        assert_eq!(r.values(), vec![1]);
    }

    #[test]
    fn config_validation() {
        assert!(BenchConfig::default().validate().is_ok());
        let bad = BenchConfig {
            runs: 0,
            ..BenchConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = BenchConfig {
            lengths: vec![0],
            ..BenchConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn small_bench_runs() {
        let config = BenchConfig {
            lengths: vec![5, 10],
            runs: 3,
            ..BenchConfig::default()
        };
        let report = run_bench(&config).unwrap();
        assert_eq!(report.samples.len(), 6);
        assert_eq!(
            report
                .sample(BenchMode::RedoHeadUncached, 10)
                .unwrap()
                .steps,
            11
        );
    }
}
