// Two replicas editing one register, with local undo and redo.

use mvr_undo::{Replica, ReplicaConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut alice: Replica<String> = Replica::new("alice")?;
    let mut bob: Replica<String> = Replica::new("bob")?;

    bob.apply_remote(alice.set("draft".to_owned()))?;
    alice.apply_remote(bob.set("final".to_owned()))?;
    println!("both see {:?}", alice.values());

    // undo brings back the state from just before alice's edit
    let undo = alice.undo().expect("alice has an edit to undo");
    bob.apply_remote(undo)?;
    println!(
        "after alice undo: {:?} / {:?}",
        alice.values(),
        bob.values()
    );
    assert_eq!(alice.values(), bob.values());

    let redo = alice.redo()?.expect("the undo can be redone");
    bob.apply_remote(redo)?;
    println!("after alice redo: {:?}", bob.values());

    // concurrent edits are both kept
    let a = alice.set("left".to_owned());
    let b = bob.set("right".to_owned());
    alice.apply_remote(b)?;
    bob.apply_remote(a)?;
    println!("concurrent: {:?}", alice.values());
    assert_eq!(alice.values(), bob.values());
    assert_eq!(alice.values().len(), 2);

    // deletions are ordinary operations and can be undone too
    bob.apply_remote(alice.delete())?;
    println!("after delete: {:?}", alice.values());
    bob.apply_remote(alice.undo().expect("the delete is on the stack"))?;
    println!("delete undone: {:?}", bob.values());

    // a bounded replica forgets its oldest undo entries
    let mut small: Replica<u32> = Replica::with_config(
        "carol",
        ReplicaConfig {
            stack_limit: Some(2),
            ..ReplicaConfig::default()
        },
    )?;
    for v in 0..5 {
        small.set(v);
    }
    println!("bounded undo stack: {:?}", small.undo_stack());
    assert_eq!(small.undo_stack().len(), 2);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
