// Shipping operations as JSON and delivering them out of order.

use mvr_undo::{wire, InsertOutcome, Replica};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut author: Replica<String> = Replica::new("A")?;
    let mut ops = vec![author.set("one".to_owned()), author.set("two".to_owned())];
    ops.push(author.undo().expect("two can be undone"));
    ops.push(author.redo()?.expect("the undo can be redone"));

    let encoded: Vec<String> = ops.iter().map(wire::to_json).collect();
    for line in &encoded {
        println!("{line}");
    }

    let mut reader: Replica<String> = Replica::new("B")?;
    for line in encoded.iter().rev() {
        let op: mvr_undo::Operation<String> = wire::from_json(line)?;
        let outcome = reader.apply_remote(op)?;
        println!(
            "{:<10?} pending={} values={:?}",
            outcome,
            reader.history().pending_len(),
            reader.values()
        );
    }
    assert_eq!(reader.values(), author.values());

    let again = wire::from_json(&encoded[0])?;
    assert_eq!(reader.apply_remote(again)?, InsertOutcome::Duplicate);
    println!("redelivery ignored");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
