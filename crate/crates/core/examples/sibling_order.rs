// How concurrent values are ordered: traces from heads to set operations.

use mvr_undo::fixtures::{opid, walkthrough_ops};
use mvr_undo::resolver::sort_terminal_heads;
use mvr_undo::{resolve_heads, History};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut history = History::new();
    for op in walkthrough_ops() {
        let id = op.id.clone();
        history.insert(op)?;
        if id == opid(9, "B") {
            break;
        }
    }
    println!(
        "heads: {:?}",
        history
            .heads()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );

    let mut terminal = resolve_heads(&history, history.heads())?;
    sort_terminal_heads(&mut terminal)?;
    for t in &terminal {
        let path: Vec<String> = t.trace.ids().iter().map(ToString::to_string).collect();
        println!("{:?} via {}", t.set_op.value(), path.join(" -> "));
    }
    let values: Vec<i64> = terminal
        .iter()
        .filter_map(|t| t.set_op.value().copied())
        .collect();
    println!("register: {values:?}");
    assert_eq!(values, vec![3, 4, 2]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
