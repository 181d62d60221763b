//! One line per acceptance criterion; fails if any criterion fails.

use tropsing::acceptance::{run_all, seed_from_env};

#[test]
fn acceptance_criteria() {
    let seed = seed_from_env();
    println!("seed {seed}");
    let outcomes = run_all(seed);
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
