//! Replica identifiers and operation identifiers.
//!
//! An [`OpId`] is a Lamport timestamp paired with the id of the replica that
//! generated the operation. Ids compare by counter first and by replica id on
//! ties, which gives a total order that extends the happens-before relation.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("replica id must not be empty")]
    EmptyReplicaId,
}

/// Opaque, non-empty replica identifier.
///
/// Ordering is plain lexicographic byte order of the underlying string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReplicaId(Arc<str>);

impl ReplicaId {
    pub fn new(id: impl AsRef<str>) -> Result<Self, IdError> {
        let id = id.as_ref();
        if id.is_empty() {
            return Err(IdError::EmptyReplicaId);
        }
        Ok(ReplicaId(Arc::from(id)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for ReplicaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for ReplicaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<&str> for ReplicaId {
    type Error = IdError;

    fn try_from(value: &str) -> Result<Self, Self::Error> {
        ReplicaId::new(value)
    }
}

/// Identity of an operation: `(counter, replica)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OpId {
    counter: u64,
    replica: ReplicaId,
}

impl OpId {
    pub fn new(counter: u64, replica: ReplicaId) -> Self {
        OpId { counter, replica }
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn replica(&self) -> &ReplicaId {
        &self.replica
    }
}

/// Total order on operation ids: counter first, then replica id, with the
/// lexicographically greater replica winning a counter tie.
pub fn compare_opids(a: &OpId, b: &OpId) -> Ordering {
    a.counter
        .cmp(&b.counter)
        .then_with(|| a.replica.cmp(&b.replica))
}

impl Ord for OpId {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_opids(self, other)
    }
}

impl PartialOrd for OpId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for OpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.counter, self.replica)
    }
}

impl fmt::Display for OpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
