//! A single replica of the register, with local undo and redo.
//!
//! Undo and redo both emit restore operations. The undo stack only ever holds
//! this replica's own set operations and the redo stack only its own restore
//! operations; remote operations never touch either stack.

use std::cell::RefCell;
use std::collections::VecDeque;

use thiserror::Error;

use crate::history::{History, HistoryError, InsertOutcome};
use crate::id::{IdError, OpId, ReplicaId};
use crate::op::{OpKind, Operation};
use crate::resolver::{register_values, ResolveError, RestoreCache};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplicaError {
    #[error(transparent)]
    EmptyReplicaId(#[from] IdError),
    #[error(transparent)]
    MalformedOperation(#[from] HistoryError),
    #[error("operation {0} claims to come from this replica but was never generated here")]
    OwnOperationEcho(OpId),
    #[error("redo stack entry {0} does not anchor a set operation")]
    CorruptStack(OpId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplicaConfig {
    /// Maximum entries per stack; the oldest entry is dropped beyond it.
    pub stack_limit: Option<usize>,
    /// Memoize restore resolution across queries.
    pub caching: bool,
}

impl Default for ReplicaConfig {
    fn default() -> Self {
        ReplicaConfig {
            stack_limit: None,
            caching: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Replica<V> {
    id: ReplicaId,
    history: History<V>,
    counter: u64,
    undo_stack: VecDeque<OpId>,
    redo_stack: VecDeque<OpId>,
    cache: RefCell<RestoreCache>,
    config: ReplicaConfig,
}

fn push_bounded(stack: &mut VecDeque<OpId>, id: OpId, limit: Option<usize>) {
    stack.push_back(id);
    if let Some(limit) = limit {
        while stack.len() > limit {
            stack.pop_front();
        }
    }
}

impl<V: Clone> Replica<V> {
    pub fn new(id: impl AsRef<str>) -> Result<Self, ReplicaError> {
        Self::with_config(id, ReplicaConfig::default())
    }

    pub fn with_config(id: impl AsRef<str>, config: ReplicaConfig) -> Result<Self, ReplicaError> {
        Ok(Replica {
            id: ReplicaId::new(id)?,
            history: History::new(),
            counter: 0,
            undo_stack: VecDeque::new(),
            redo_stack: VecDeque::new(),
            cache: RefCell::new(RestoreCache::new()),
            config,
        })
    }

    pub fn id(&self) -> &ReplicaId {
        &self.id
    }

    pub fn history(&self) -> &History<V> {
        &self.history
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn config(&self) -> ReplicaConfig {
        self.config
    }

    /// Bottom first, top last.
    pub fn undo_stack(&self) -> Vec<OpId> {
        self.undo_stack.iter().cloned().collect()
    }

    /// Bottom first, top last.
    pub fn redo_stack(&self) -> Vec<OpId> {
        self.redo_stack.iter().cloned().collect()
    }

    pub fn can_undo(&self) -> bool {
        !self.undo_stack.is_empty()
    }

    pub fn can_redo(&self) -> bool {
        !self.redo_stack.is_empty()
    }

    fn next_id(&mut self) -> OpId {
        self.counter += 1;
        OpId::new(self.counter, self.id.clone())
    }

    fn apply_local(&mut self, op: &Operation<V>) {
        self.history
            .insert(op.clone())
            .expect("locally generated operations are well formed and causally ready");
    }

    /// Assigns `value` (or deletes with `None`) and returns the operation to
    /// broadcast.
    pub fn local_set(&mut self, value: Option<V>) -> Operation<V> {
        let id = self.next_id();
        let op = Operation::set(id.clone(), self.history.heads().iter().cloned(), value);
        self.apply_local(&op);
        push_bounded(&mut self.undo_stack, id, self.config.stack_limit);
        self.redo_stack.clear();
        op
    }

    pub fn set(&mut self, value: V) -> Operation<V> {
        self.local_set(Some(value))
    }

    pub fn delete(&mut self) -> Operation<V> {
        self.local_set(None)
    }

    /// Undoes this replica's most recent undoable set. Returns `None` when
    /// there is nothing to undo.
    pub fn undo(&mut self) -> Option<Operation<V>> {
        let target = self.undo_stack.pop_back()?;
        let id = self.next_id();
        let op = Operation::restore(id.clone(), self.history.heads().iter().cloned(), target);
        self.apply_local(&op);
        push_bounded(&mut self.redo_stack, id, self.config.stack_limit);
        Some(op)
    }

    /// Redoes the most recent undo. Returns `Ok(None)` when there is nothing
    /// to redo.
    pub fn redo(&mut self) -> Result<Option<Operation<V>>, ReplicaError> {
        let Some(target) = self.redo_stack.back().cloned() else {
            return Ok(None);
        };
        let undone_set = match self.history.get(&target).map(|op| &op.kind) {
            Some(OpKind::Restore { anchor }) => anchor.clone(),
            _ => return Err(ReplicaError::CorruptStack(target)),
        };
        if !self.history.get(&undone_set).is_some_and(Operation::is_set) {
            return Err(ReplicaError::CorruptStack(target));
        }
        self.redo_stack.pop_back();
        let id = self.next_id();
        let op = Operation::restore(id, self.history.heads().iter().cloned(), target);
        self.apply_local(&op);
        push_bounded(&mut self.undo_stack, undone_set, self.config.stack_limit);
        Ok(Some(op))
    }

    pub fn apply_remote(&mut self, op: Operation<V>) -> Result<InsertOutcome, ReplicaError> {
        if op.id.replica() == &self.id && !self.history.knows(&op.id) {
            return Err(ReplicaError::OwnOperationEcho(op.id));
        }
        let counter = op.id.counter();
        let outcome = self.history.insert(op)?;
        self.counter = self.counter.max(counter);
        Ok(outcome)
    }

    pub fn try_values(&self) -> Result<Vec<V>, ResolveError> {
        if self.config.caching {
            register_values(&self.history, Some(&mut self.cache.borrow_mut()))
        } else {
            register_values(&self.history, None)
        }
    }

    /// The register's current values, in the order every replica agrees on.
    pub fn values(&self) -> Vec<V> {
        self.try_values()
            .expect("the history only holds causally closed operations")
    }

    /// Values computed without the cache, regardless of configuration.
    pub fn uncached_values(&self) -> Vec<V> {
        register_values(&self.history, None)
            .expect("the history only holds causally closed operations")
    }

    pub fn cache_len(&self) -> usize {
        self.cache.borrow().len()
    }
}
