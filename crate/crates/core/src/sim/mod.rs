//! Deterministic multi-replica simulation.
//!
//! A [`Simulation`] owns a set of named replicas holding JSON values and
//! executes [`Step`]s against them one at a time. Syncs ship the operations
//! the receiver is missing through a [`DeliverySchedule`], which may
//! duplicate and reorder them. Everything is single threaded and seeded, so
//! the same scenario and schedule always give the same report.

mod oracle;
mod random;
mod scenario;
mod schedule;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value as Json;
use thiserror::Error;

use crate::op::Operation;
use crate::replica::{Replica, ReplicaConfig, ReplicaError};
use crate::wire::WireOpId;

pub use oracle::permutation_oracle;
pub use random::{random_op_set, random_scenario, MAX_RANDOM_REPLICAS, MAX_RANDOM_STEPS};
pub use scenario::{Scenario, Step};
pub use schedule::DeliverySchedule;

/// Replicas in the simulator hold arbitrary JSON values.
pub type SimReplica = Replica<Json>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("unknown replica {0:?}")]
    UnknownReplica(String),
    #[error("replica {0:?} is declared twice")]
    DuplicateReplica(String),
    #[error("{count} operations exceed the permutation limit of {max}")]
    TooManyOps { count: usize, max: usize },
    #[error("random scenario bounds violated: {0}")]
    Bounds(String),
    #[error(transparent)]
    Replica(#[from] ReplicaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    pub caching: bool,
    /// Also resolve every snapshot without the cache and record mismatches.
    pub cross_check: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            caching: true,
            cross_check: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicaSnapshot {
    pub replica: String,
    pub values: Vec<Json>,
    pub undo: Vec<WireOpId>,
    pub redo: Vec<WireOpId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub expected: Json,
    pub actual: Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    pub index: usize,
    pub step: Step,
    pub snapshots: Vec<ReplicaSnapshot>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckOutcome>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DeliveryStats {
    pub shipped: usize,
    pub duplicates: usize,
    pub buffered: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub steps: Vec<StepReport>,
    pub delivery: DeliveryStats,
    /// `(step index, replica)` pairs where cached and uncached values differ.
    pub cache_mismatches: Vec<(usize, String)>,
}

impl ScenarioReport {
    pub fn checks(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.steps.iter().filter_map(|s| s.check.as_ref())
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> usize {
        self.checks().filter(|c| !c.passed).count()
    }

    /// Snapshot after the last step, if any step ran.
    pub fn final_snapshots(&self) -> Option<&[ReplicaSnapshot]> {
        self.steps.last().map(|s| s.snapshots.as_slice())
    }

    /// Whether every replica ended with the same value list.
    pub fn converged(&self) -> bool {
        match self.final_snapshots() {
            None => true,
            Some(snaps) => snaps.windows(2).all(|w| w[0].values == w[1].values),
        }
    }
}

pub struct Simulation {
    names: Vec<String>,
    replicas: Vec<SimReplica>,
    schedule: DeliverySchedule,
    options: SimOptions,
    rng: ChaCha8Rng,
    delivery: DeliveryStats,
}

impl Simulation {
    pub fn new(
        replicas: &[String],
        schedule: DeliverySchedule,
        options: SimOptions,
    ) -> Result<Self, SimError> {
        let mut names: Vec<String> = Vec::new();
        let mut states = Vec::new();
        for name in replicas {
            if names.contains(name) {
                return Err(SimError::DuplicateReplica(name.clone()));
            }
            let config = ReplicaConfig {
                caching: options.caching,
                ..ReplicaConfig::default()
            };
            states.push(Replica::with_config(name, config)?);
            names.push(name.clone());
        }
        Ok(Simulation {
            names,
            replicas: states,
            schedule,
            options,
            rng: schedule.rng(),
            delivery: DeliveryStats::default(),
        })
    }

    fn index(&self, name: &str) -> Result<usize, SimError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| SimError::UnknownReplica(name.to_owned()))
    }

    pub fn replica(&self, name: &str) -> Result<&SimReplica, SimError> {
        Ok(&self.replicas[self.index(name)?])
    }

    pub fn replica_mut(&mut self, name: &str) -> Result<&mut SimReplica, SimError> {
        let idx = self.index(name)?;
        Ok(&mut self.replicas[idx])
    }

    pub fn replicas(&self) -> impl Iterator<Item = (&str, &SimReplica)> {
        self.names.iter().map(String::as_str).zip(&self.replicas)
    }

    pub fn delivery_stats(&self) -> &DeliveryStats {
        &self.delivery
    }

    pub fn schedule(&self) -> &DeliverySchedule {
        &self.schedule
    }

    pub fn options(&self) -> &SimOptions {
        &self.options
    }

    /// Union of everything any replica has applied or buffered, by id.
    pub fn all_ops(&self) -> Vec<Operation<Json>> {
        let mut ops: Vec<Operation<Json>> = Vec::new();
        for r in &self.replicas {
            for op in r.history().ops().chain(r.history().pending()) {
                ops.push(op.clone());
            }
        }
        ops.sort_by(|a, b| a.id.cmp(&b.id));
        ops.dedup_by(|a, b| a.id == b.id);
        ops
    }

    fn sync(&mut self, from: usize, to: usize) -> Result<(), SimError> {
        if from == to {
            return Ok(());
        }
        let source = self.replicas[from].history();
        let target = self.replicas[to].history();
        let mut batch: Vec<Operation<Json>> = source
            .ops()
            .chain(source.pending())
            .filter(|op| !target.knows(&op.id))
            .cloned()
            .collect();
        batch.sort_by(|a, b| a.id.cmp(&b.id));
        let shipped = batch.len();
        let batch = self.schedule.shuffle(batch, &mut self.rng);
        self.delivery.shipped += shipped;
        self.delivery.duplicates += batch.len() - shipped;
        for op in batch {
            let outcome = self.replicas[to].apply_remote(op)?;
            if outcome == crate::history::InsertOutcome::Buffered {
                self.delivery.buffered += 1;
            }
        }
        Ok(())
    }

    fn sync_all(&mut self) -> Result<(), SimError> {
        for r in 1..self.replicas.len() {
            self.sync(r, 0)?;
        }
        for r in 1..self.replicas.len() {
            self.sync(0, r)?;
        }
        Ok(())
    }

    pub fn snapshot(&self, idx: usize) -> ReplicaSnapshot {
        let r = &self.replicas[idx];
        ReplicaSnapshot {
            replica: self.names[idx].clone(),
            values: r.values(),
            undo: r.undo_stack().into_iter().map(WireOpId).collect(),
            redo: r.redo_stack().into_iter().map(WireOpId).collect(),
        }
    }

    /// Executes one step. `index` is only used for labeling the report.
    pub fn step(&mut self, index: usize, step: &Step) -> Result<StepReport, SimError> {
        for name in step.replicas() {
            self.index(name)?;
        }
        let mut check = None;
        match step {
            Step::Set { replica, value } => {
                self.replica_mut(replica)?.local_set(value.clone());
            }
            Step::Undo { replica } => {
                self.replica_mut(replica)?.undo();
            }
            Step::Redo { replica } => {
                self.replica_mut(replica)?.redo()?;
            }
            Step::Sync { from, to } => {
                let (from, to) = (self.index(from)?, self.index(to)?);
                self.sync(from, to)?;
            }
            Step::SyncAll => self.sync_all()?,
            Step::Check {
                replica,
                values,
                label,
            } => {
                let actual = self.replica(replica)?.values();
                check = Some(CheckOutcome {
                    passed: &actual == values,
                    label: label.clone(),
                    expected: Json::Array(values.clone()),
                    actual: Json::Array(actual),
                });
            }
            Step::CheckStacks {
                replica,
                undo,
                redo,
                label,
            } => {
                let snap = self.snapshot(self.index(replica)?);
                let stacks =
                    |u: &[WireOpId], r: &[WireOpId]| serde_json::json!({ "undo": u, "redo": r });
                check = Some(CheckOutcome {
                    passed: &snap.undo == undo && &snap.redo == redo,
                    label: label.clone(),
                    expected: stacks(undo, redo),
                    actual: stacks(&snap.undo, &snap.redo),
                });
            }
        }
        let snapshots = (0..self.replicas.len()).map(|i| self.snapshot(i)).collect();
        Ok(StepReport {
            index,
            step: step.clone(),
            snapshots,
            check,
        })
    }

    /// Replica names whose cached and uncached values disagree right now.
    pub fn cache_mismatches(&self) -> Vec<String> {
        self.replicas()
            .filter(|(_, r)| r.values() != r.uncached_values())
            .map(|(n, _)| n.to_owned())
            .collect()
    }
}

/// Runs every step of `scenario` and collects a report. Failed checks are
/// recorded in the report, not returned as errors.
pub fn run_scenario(
    scenario: &Scenario,
    schedule: DeliverySchedule,
    options: SimOptions,
) -> Result<ScenarioReport, SimError> {
    let mut sim = Simulation::new(&scenario.replicas, schedule, options)?;
    for step in &scenario.steps {
        for name in step.replicas() {
            sim.index(name)?;
        }
    }
    let mut report = ScenarioReport::default();
    for (index, step) in scenario.steps.iter().enumerate() {
        report.steps.push(sim.step(index, step)?);
        if options.cross_check {
            for name in sim.cache_mismatches() {
                report.cache_mismatches.push((index, name));
            }
        }
    }
    report.delivery = sim.delivery.clone();
    Ok(report)
}
