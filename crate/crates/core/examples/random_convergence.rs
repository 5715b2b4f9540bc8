// Seeded random runs with duplicated and reordered delivery.

use mvr_undo::sim::{
    permutation_oracle, random_op_set, random_scenario, run_scenario, DeliverySchedule, SimOptions,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut converged = 0;
    for seed in 1..=50 {
        let scenario = random_scenario(seed, 3, 30)?;
        let schedule = DeliverySchedule {
            seed,
            duplication_rate: 0.2,
            reorder_window: 4,
        };
        let options = SimOptions {
            caching: true,
            cross_check: true,
        };
        let report = run_scenario(&scenario, schedule, options)?;
        if !report.converged() || !report.cache_mismatches.is_empty() {
            return Err(format!("seed {seed} diverged").into());
        }
        converged += 1;
    }
    println!("{converged} random runs converged");

    for seed in 1..=10 {
        let ops = random_op_set(seed, 5);
        let agree = permutation_oracle(&ops, 6)?;
        println!(
            "seed {seed}: {} ops, every delivery order agrees: {agree}",
            ops.len()
        );
        assert!(agree);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
