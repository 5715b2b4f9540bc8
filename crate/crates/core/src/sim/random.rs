use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use super::{DeliverySchedule, Scenario, SimError, SimOptions, Simulation, Step};
use crate::op::Operation;

pub const MAX_RANDOM_REPLICAS: usize = 4;
pub const MAX_RANDOM_STEPS: usize = 40;

const NAMES: [&str; MAX_RANDOM_REPLICAS] = ["A", "B", "C", "D"];

fn random_step(rng: &mut ChaCha8Rng, replicas: &[String]) -> Step {
    let pick = |rng: &mut ChaCha8Rng| replicas[rng.gen_range(0..replicas.len())].clone();
    let roll = rng.gen_range(0..100);
    match roll {
        0..=4 => Step::Set {
            replica: pick(rng),
            value: None,
        },
        5..=39 => Step::Set {
            replica: pick(rng),
            value: Some(json!(rng.gen_range(0..10))),
        },
        40..=59 => Step::Undo { replica: pick(rng) },
        60..=74 => Step::Redo { replica: pick(rng) },
        _ if replicas.len() > 1 => {
            let from = rng.gen_range(0..replicas.len());
            let to = (from + rng.gen_range(1..replicas.len())) % replicas.len();
            Step::Sync {
                from: replicas[from].clone(),
                to: replicas[to].clone(),
            }
        }
        _ => Step::Undo { replica: pick(rng) },
    }
}

/// A seeded mix of set/undo/redo/sync steps, `steps` long in total, whose
/// last step is a `SyncAll`.
pub fn random_scenario(seed: u64, replicas: usize, steps: usize) -> Result<Scenario, SimError> {
    if !(1..=MAX_RANDOM_REPLICAS).contains(&replicas) {
        return Err(SimError::Bounds(format!(
            "replica count {replicas} not in 1..={MAX_RANDOM_REPLICAS}"
        )));
    }
    if !(1..=MAX_RANDOM_STEPS).contains(&steps) {
        return Err(SimError::Bounds(format!(
            "step count {steps} not in 1..={MAX_RANDOM_STEPS}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = NAMES[..replicas].iter().map(|s| s.to_string()).collect();
    let mut body: Vec<Step> = (0..steps - 1)
        .map(|_| random_step(&mut rng, &names))
        .collect();
    body.push(Step::SyncAll);
    let mut scenario = Scenario::new(names, body);
    scenario.name = Some(format!("random-{seed}-{replicas}x{steps}"));
    Ok(scenario)
}

/// A causally closed set of exactly `count` operations produced by random
/// editing on two or three replicas, with `count` drawn from `1..=max_ops`.
pub fn random_op_set(seed: u64, max_ops: usize) -> Vec<Operation<Json>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=max_ops.max(1));
    let replicas = rng.gen_range(2..=3);
    let names: Vec<String> = NAMES[..replicas].iter().map(|s| s.to_string()).collect();
    let mut sim = Simulation::new(
        &names,
        DeliverySchedule::in_order(seed),
        SimOptions::default(),
    )
    .expect("fixed replica names are valid");
    let mut made = 0;
    let mut index = 0;
    while made < count {
        let step = random_step(&mut rng, &names);
        sim.step(index, &step)
            .expect("random steps only reference declared replicas");
        index += 1;
        made = sim.all_ops().len();
    }
    sim.all_ops()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_scenario() {
        assert_eq!(
            random_scenario(1, 2, 10).unwrap(),
            random_scenario(1, 2, 10).unwrap()
        );
        assert_ne!(
            random_scenario(1, 2, 10).unwrap(),
            random_scenario(2, 2, 10).unwrap()
        );
    }

    #[test]
    fn ends_with_sync_all() {
        for seed in 0..20 {
            let s = random_scenario(seed, 3, 17).unwrap();
            assert_eq!(s.steps.len(), 17);
            assert_eq!(s.steps.last(), Some(&Step::SyncAll));
        }
    }

    #[test]
    fn single_replica_has_no_syncs() {
        let s = random_scenario(7, 1, 40).unwrap();
        assert!(s.steps[..39]
            .iter()
            .all(|s| !matches!(s, Step::Sync { .. })));
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(random_scenario(1, 0, 10).is_err());
        assert!(random_scenario(1, 5, 10).is_err());
        assert!(random_scenario(1, 2, 0).is_err());
        assert!(random_scenario(1, 2, 41).is_err());
    }

    #[test]
    fn op_sets_are_causally_closed_and_sized() {
        for seed in 0..50 {
            let ops = random_op_set(seed, 6);
            assert!((1..=6).contains(&ops.len()));
            let ids: Vec<_> = ops.iter().map(|o| o.id.clone()).collect();
            for op in &ops {
                assert!(op.preds.iter().all(|p| ids.contains(p)));
            }
        }
    }
}
