// Traversal work with and without the restore cache on undo/redo chains.

use mvr_undo::bench::{alternating_history, BenchMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>6} {:>10} {:>12} {:>10}",
        "n", "undo", "redo", "redo+cache"
    );
    for n in [10, 100, 1000] {
        let h = alternating_history(n);
        let undo = h.steps(BenchMode::UndoHead);
        let uncached = h.steps(BenchMode::RedoHeadUncached);
        let cached = h.steps(BenchMode::RedoHeadCached);
        println!("{n:>6} {undo:>10} {uncached:>12} {cached:>10}");
        assert_eq!(uncached, n + 1);
        assert_eq!(cached, 2);
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
