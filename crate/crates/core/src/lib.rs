//! A replicated multi-value register with local undo and redo.
//!
//! Every replica keeps the full operation history as a DAG. Besides plain
//! set operations there is a single restore operation, which points at an
//! earlier operation (its anchor) and brings the register back to the state
//! just before it. Undo restores past the replica's own last set; redo
//! restores past the undo. Because undo and redo are ordinary operations,
//! they replicate like any other edit and all replicas converge.
//!
//! ```
//! use mvr_undo::Replica;
//!
//! let mut a: Replica<&str> = Replica::new("A").unwrap();
//! let mut b: Replica<&str> = Replica::new("B").unwrap();
//!
//! b.apply_remote(a.set("red")).unwrap();
//! a.apply_remote(b.set("green")).unwrap();
//!
//! // A undoes its own change, skipping over B's newer one.
//! let undo = a.undo().unwrap();
//! b.apply_remote(undo).unwrap();
//! assert!(a.values().is_empty());
//!
//! let redo = a.redo().unwrap().unwrap();
//! b.apply_remote(redo).unwrap();
//! assert_eq!(b.values(), vec!["green"]);
//! ```
//!
//! Module map:
//!
//! - [`id`], [`op`], [`history`]: identifiers, operations and the causally
//!   buffered history DAG.
//! - [`resolver`]: turning heads into ordered register values, with an
//!   optional per-restore cache.
//! - [`replica`]: the user-facing register with undo and redo stacks.
//! - [`wire`]: JSON encoding of operations.
//! - [`sim`]: seeded multi-replica simulation, scenario files and a
//!   permutation oracle.
//! - [`bench`]: timing of head resolution on alternating undo/redo chains.
//!
//! The `examples/` directory has a runnable program for each of these.

pub mod bench;
pub mod fixtures;
pub mod history;
pub mod id;
pub mod op;
pub mod replica;
pub mod report;
pub mod resolver;
pub mod sim;
pub mod wire;

pub use history::{History, HistoryError, InsertOutcome};
pub use id::{compare_opids, IdError, OpId, ReplicaId};
pub use op::{OpKind, Operation};
pub use replica::{Replica, ReplicaConfig, ReplicaError};
pub use resolver::{
    compare_traces, get_values, register_values, resolve_heads, resolve_heads_cached, OpIdTrace,
    ResolveError, RestoreCache, TerminalHead,
};
