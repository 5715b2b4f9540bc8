//! Operation records.

use std::collections::BTreeSet;

use crate::id::OpId;

/// Payload of an operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpKind<V> {
    /// Assigns `value` to the register. `None` is a deletion.
    Set { value: Option<V> },
    /// Restores the register to the state just before `anchor`.
    Restore { anchor: OpId },
}

/// A single register operation together with its causal dependencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation<V> {
    pub id: OpId,
    pub preds: BTreeSet<OpId>,
    pub kind: OpKind<V>,
}

impl<V> Operation<V> {
    pub fn set(id: OpId, preds: impl IntoIterator<Item = OpId>, value: Option<V>) -> Self {
        Operation {
            id,
            preds: preds.into_iter().collect(),
            kind: OpKind::Set { value },
        }
    }

    pub fn restore(id: OpId, preds: impl IntoIterator<Item = OpId>, anchor: OpId) -> Self {
        Operation {
            id,
            preds: preds.into_iter().collect(),
            kind: OpKind::Restore { anchor },
        }
    }

    pub fn is_set(&self) -> bool {
        matches!(self.kind, OpKind::Set { .. })
    }

    pub fn is_restore(&self) -> bool {
        matches!(self.kind, OpKind::Restore { .. })
    }

    pub fn is_root(&self) -> bool {
        self.preds.is_empty()
    }

    pub fn anchor(&self) -> Option<&OpId> {
        match &self.kind {
            OpKind::Restore { anchor } => Some(anchor),
            OpKind::Set { .. } => None,
        }
    }

    /// The assigned value of a `Set`; `None` for deletions and restores.
    pub fn value(&self) -> Option<&V> {
        match &self.kind {
            OpKind::Set { value } => value.as_ref(),
            OpKind::Restore { .. } => None,
        }
    }

    /// Checks the structural rules that can be verified without a history:
    /// no self references and strictly increasing counters along every edge.
    pub(crate) fn structural_violation(&self) -> Option<String> {
        for pred in &self.preds {
            if pred == &self.id {
                return Some(format!("{} lists itself as a predecessor", self.id));
            }
            if pred.counter() >= self.id.counter() {
                return Some(format!(
                    "{} has counter not greater than predecessor {}",
                    self.id, pred
                ));
            }
        }
        if let Some(anchor) = self.anchor() {
            if anchor == &self.id {
                return Some(format!("{} anchors itself", self.id));
            }
            if anchor.counter() >= self.id.counter() {
                return Some(format!(
                    "{} has counter not greater than anchor {}",
                    self.id, anchor
                ));
            }
        }
        None
    }
}
