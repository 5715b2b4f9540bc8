// Writing a scenario as JSON, reading it back and replaying it.

use serde_json::json;

use mvr_undo::report::render_run;
use mvr_undo::sim::{run_scenario, DeliverySchedule, Scenario, SimOptions, Step};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let set = |r: &str, v: &str| Step::Set {
        replica: r.into(),
        value: Some(json!(v)),
    };
    let scenario = Scenario::new(
        ["A", "B"],
        vec![
            set("A", "black"),
            Step::SyncAll,
            set("A", "red"),
            set("B", "green"),
            Step::SyncAll,
            Step::Undo {
                replica: "A".into(),
            },
            Step::SyncAll,
            Step::Check {
                replica: "B".into(),
                values: vec![json!("black")],
                label: Some("state before red".into()),
            },
        ],
    );
    let text = scenario.to_json_pretty();
    println!("{text}");

    let parsed = Scenario::from_json(&text)?;
    assert_eq!(parsed, scenario);
    let report = run_scenario(&parsed, DeliverySchedule::default(), SimOptions::default())?;
    print!("{}", render_run(&parsed, &report));
    if !report.all_checks_pass() {
        return Err("check failed".into());
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
