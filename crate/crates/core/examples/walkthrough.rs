// Replays the bundled two-replica walkthrough and prints each state.

use mvr_undo::fixtures::bundled;
use mvr_undo::sim::{run_scenario, DeliverySchedule, SimOptions, Step};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = bundled("walkthrough.json").expect("fixture is bundled");
    let report = run_scenario(
        &scenario,
        DeliverySchedule::default(),
        SimOptions::default(),
    )?;
    for step in &report.steps {
        match (&step.step, &step.check) {
            (Step::Check { label, .. } | Step::CheckStacks { label, .. }, Some(c)) => {
                let label = label.as_deref().unwrap_or("");
                println!(
                    "  {label:<5} {} {}",
                    if c.passed { "ok" } else { "FAILED" },
                    c.actual
                );
            }
            (s, _) => println!("{}", mvr_undo::report::describe_step(s)),
        }
    }
    let failed = report.failed_checks();
    println!("{failed} failed checks");
    if failed > 0 {
        return Err(format!("{failed} checks failed").into());
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
