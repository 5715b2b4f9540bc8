//! Reference histories and bundled scenario files.

use crate::id::{OpId, ReplicaId};
use crate::op::Operation;
use crate::sim::Scenario;

/// Shorthand for building ids in tests and examples. Panics on an empty
/// replica name.
pub fn opid(counter: u64, replica: &str) -> OpId {
    OpId::new(
        counter,
        ReplicaId::new(replica).expect("non-empty replica id"),
    )
}

/// The two-replica history with concurrent sets, concurrent undos and a
/// chain of three redos, in ascending id order (which is also a causal
/// order). Values are small integers.
pub fn walkthrough_ops() -> Vec<Operation<i64>> {
    vec![
        Operation::set(opid(1, "A"), [], Some(1)),
        Operation::set(opid(2, "B"), [opid(1, "A")], Some(2)),
        Operation::set(opid(3, "A"), [opid(2, "B")], Some(4)),
        Operation::set(opid(3, "B"), [opid(2, "B")], Some(3)),
        Operation::set(opid(4, "B"), [opid(3, "A"), opid(3, "B")], Some(5)),
        Operation::restore(opid(5, "A"), [opid(4, "B")], opid(3, "A")),
        Operation::restore(opid(5, "B"), [opid(4, "B")], opid(4, "B")),
        Operation::restore(opid(6, "B"), [opid(5, "A"), opid(5, "B")], opid(3, "B")),
        Operation::set(opid(7, "A"), [opid(6, "B")], Some(6)),
        Operation::restore(opid(7, "B"), [opid(6, "B")], opid(2, "B")),
        Operation::restore(opid(8, "B"), [opid(7, "A"), opid(7, "B")], opid(7, "B")),
        Operation::restore(opid(9, "B"), [opid(8, "B")], opid(6, "B")),
        Operation::restore(opid(10, "B"), [opid(9, "B")], opid(5, "B")),
    ]
}

/// `(file name, contents)` of every scenario shipped in `fixtures/`.
pub const BUNDLED: &[(&str, &str)] = &[
    (
        "walkthrough.json",
        include_str!("../fixtures/walkthrough.json"),
    ),
    (
        "two_registers_global_undo.json",
        include_str!("../fixtures/two_registers_global_undo.json"),
    ),
    (
        "two_registers_local_undo.json",
        include_str!("../fixtures/two_registers_local_undo.json"),
    ),
    (
        "one_register_global_undo.json",
        include_str!("../fixtures/one_register_global_undo.json"),
    ),
    (
        "one_register_local_undo.json",
        include_str!("../fixtures/one_register_local_undo.json"),
    ),
    (
        "undo_without_own_changes.json",
        include_str!("../fixtures/undo_without_own_changes.json"),
    ),
    (
        "undo_revives_hidden_set.json",
        include_str!("../fixtures/undo_revives_hidden_set.json"),
    ),
];

/// Parses a bundled scenario by file name.
pub fn bundled(name: &str) -> Option<Scenario> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| Scenario::from_json(text).expect("bundled fixtures are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_fixture_parses() {
        for (name, _) in BUNDLED {
            let s = bundled(name).unwrap();
            assert!(!s.steps.is_empty(), "{name}");
        }
        assert!(bundled("nope.json").is_none());
    }

    #[test]
    fn walkthrough_ops_are_well_formed() {
        for op in walkthrough_ops() {
            assert!(op.structural_violation().is_none(), "{:?}", op.id);
        }
    }
}
