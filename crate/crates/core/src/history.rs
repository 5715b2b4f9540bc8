//! The operation-history DAG with causal-delivery buffering.
//!
//! Operations are applied only once every predecessor has been applied.
//! Anything that arrives early is parked in a pending buffer and applied as
//! soon as its dependencies show up, smallest [`OpId`] first.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::id::OpId;
use crate::op::Operation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    /// The operation (and possibly some buffered ones) is now in the history.
    Applied,
    /// Some predecessor is missing; the operation waits in the buffer.
    Buffered,
    /// Already applied or already buffered. Nothing changed.
    Duplicate,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HistoryError {
    #[error("malformed operation {id}: {reason}")]
    MalformedOperation { id: OpId, reason: String },
}

#[derive(Debug, Clone)]
struct Node<V> {
    op: Operation<V>,
    successors: usize,
}

#[derive(Debug, Clone)]
pub struct History<V> {
    nodes: HashMap<OpId, Node<V>>,
    heads: BTreeSet<OpId>,
    pending: BTreeMap<OpId, Operation<V>>,
    // missing predecessor -> buffered ops blocked on it
    waiting: HashMap<OpId, Vec<OpId>>,
}

impl<V> Default for History<V> {
    fn default() -> Self {
        History {
            nodes: HashMap::new(),
            heads: BTreeSet::new(),
            pending: BTreeMap::new(),
            waiting: HashMap::new(),
        }
    }
}

impl<V> History<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, id: &OpId) -> Option<&Operation<V>> {
        self.nodes.get(id).map(|n| &n.op)
    }

    pub fn contains(&self, id: &OpId) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn is_pending(&self, id: &OpId) -> bool {
        self.pending.contains_key(id)
    }

    /// Applied or buffered.
    pub fn knows(&self, id: &OpId) -> bool {
        self.contains(id) || self.is_pending(id)
    }

    /// Number of applied operations.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn heads(&self) -> &BTreeSet<OpId> {
        &self.heads
    }

    /// Applied operations in no particular order.
    pub fn ops(&self) -> impl Iterator<Item = &Operation<V>> {
        self.nodes.values().map(|n| &n.op)
    }

    /// Buffered operations in ascending id order.
    pub fn pending(&self) -> impl Iterator<Item = &Operation<V>> {
        self.pending.values()
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    /// Largest counter among applied and buffered operations.
    pub fn max_counter(&self) -> u64 {
        let applied = self.nodes.keys().map(OpId::counter).max().unwrap_or(0);
        let pending = self.pending.keys().map(OpId::counter).max().unwrap_or(0);
        applied.max(pending)
    }

    pub fn is_causally_ready(&self, op: &Operation<V>) -> bool {
        op.preds.iter().all(|p| self.nodes.contains_key(p))
    }

    pub fn insert(&mut self, op: Operation<V>) -> Result<InsertOutcome, HistoryError> {
        if self.knows(&op.id) {
            return Ok(InsertOutcome::Duplicate);
        }
        if let Some(reason) = op.structural_violation() {
            return Err(HistoryError::MalformedOperation { id: op.id, reason });
        }
        if !self.is_causally_ready(&op) {
            for pred in op.preds.iter().filter(|p| !self.nodes.contains_key(p)) {
                self.waiting
                    .entry(pred.clone())
                    .or_default()
                    .push(op.id.clone());
            }
            self.pending.insert(op.id.clone(), op);
            return Ok(InsertOutcome::Buffered);
        }
        if let Some(reason) = self.anchor_violation(&op) {
            return Err(HistoryError::MalformedOperation { id: op.id, reason });
        }
        let mut ready = BTreeSet::new();
        self.apply(op, &mut ready);
        while let Some(id) = ready.pop_first() {
            let Some(op) = self.pending.remove(&id) else {
                continue;
            };
            // A buffered op whose anchor is not among its ancestors can only
            // be detected now; it is dropped rather than applied.
            if self.anchor_violation(&op).is_some() {
                continue;
            }
            self.apply(op, &mut ready);
        }
        Ok(InsertOutcome::Applied)
    }

    // Once all predecessors are applied every ancestor is too, so a missing
    // anchor cannot be an ancestor.
    fn anchor_violation(&self, op: &Operation<V>) -> Option<String> {
        let anchor = op.anchor()?;
        if self.nodes.contains_key(anchor) {
            None
        } else {
            Some(format!("anchor {anchor} is not an ancestor of {}", op.id))
        }
    }

    fn apply(&mut self, op: Operation<V>, ready: &mut BTreeSet<OpId>) {
        for pred in &op.preds {
            if let Some(node) = self.nodes.get_mut(pred) {
                node.successors += 1;
            }
            self.heads.remove(pred);
        }
        let id = op.id.clone();
        self.heads.insert(id.clone());
        self.nodes.insert(id.clone(), Node { op, successors: 0 });

        if let Some(blocked) = self.waiting.remove(&id) {
            for waiting_id in blocked {
                if let Some(waiting_op) = self.pending.get(&waiting_id) {
                    if self.is_causally_ready(waiting_op) {
                        ready.insert(waiting_id);
                    }
                }
            }
        }
    }

    /// Number of applied operations that list `id` as a predecessor.
    pub fn successor_count(&self, id: &OpId) -> Option<usize> {
        self.nodes.get(id).map(|n| n.successors)
    }
}
