use itertools::Itertools;

use super::SimError;
use crate::id::OpId;
use crate::op::Operation;
use crate::replica::Replica;

fn outsider_id<V>(ops: &[Operation<V>]) -> String {
    let mut id = String::from("oracle");
    while ops.iter().any(|op| op.id.replica().as_str() == id) {
        id.push('~');
    }
    id
}

/// Delivers `ops` to a fresh replica in every possible order and reports
/// whether all orders end in the same values and heads.
pub fn permutation_oracle<V: Clone + PartialEq>(
    ops: &[Operation<V>],
    max_ops: usize,
) -> Result<bool, SimError> {
    if ops.len() > max_ops {
        return Err(SimError::TooManyOps {
            count: ops.len(),
            max: max_ops,
        });
    }
    let name = outsider_id(ops);
    let mut reference: Option<(Vec<V>, Vec<OpId>)> = None;
    for order in ops.iter().permutations(ops.len()) {
        let mut replica: Replica<V> = Replica::new(&name)?;
        for op in order {
            replica.apply_remote(op.clone())?;
        }
        if replica.history().pending_len() != 0 {
            return Ok(false);
        }
        let state = (
            replica.values(),
            replica.history().heads().iter().cloned().collect(),
        );
        match &reference {
            None => reference = Some(state),
            Some(expected) if *expected != state => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::walkthrough_ops;

    #[test]
    fn first_five_walkthrough_ops_agree() {
        assert!(permutation_oracle(&walkthrough_ops()[..5], 7).unwrap());
    }

    #[test]
    fn single_op() {
        assert!(permutation_oracle(&walkthrough_ops()[..1], 7).unwrap());
    }

    #[test]
    fn too_many_ops() {
        assert_eq!(
            permutation_oracle(&walkthrough_ops()[..8], 7).unwrap_err(),
            SimError::TooManyOps { count: 8, max: 7 }
        );
    }

    #[test]
    fn open_set_is_reported() {
        // (2,B) without its predecessor never gets applied
        assert!(!permutation_oracle(&walkthrough_ops()[1..3], 7).unwrap());
    }
}
