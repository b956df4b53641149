//! One PASS/FAIL line per acceptance criterion. `FLOWPOLY_SUITE` selects a
//! subset (same names as `flowpoly verify --suite`); the default is all ten.

use flowpoly::cache::TraceStore;
use flowpoly::suite::{run, suite_ids, Context};

fn main() {
    let name = std::env::var("FLOWPOLY_SUITE").unwrap_or_else(|_| "full".into());
    let ids = match suite_ids(&name) {
        Ok(ids) => ids,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("\nacceptance suite {name:?}");
    let ctx = Context::new(TraceStore::in_memory());
    let results = run(&ids, &ctx, |o| println!("{}", o.line()));
    let passed = results.iter().filter(|o| o.passed).count();
    println!("{passed}/{} criteria passed\n", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
