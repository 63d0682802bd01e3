//! End-to-end acceptance criteria at their pinned tolerances.
//!
//! Runs without the libtest harness so every `PASS`/`FAIL` line is printed,
//! followed by the measurements and each comparison that missed its threshold.
//! Numeric arguments select a subset: `cargo test --test acceptance -- 5 6`.

use std::process::ExitCode;

use mimetic_core::harness::{verify_criterion, CRITERIA};

const SEED: u64 = 20240611;

fn main() -> ExitCode {
    let picked: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u8> = if picked.is_empty() { CRITERIA.to_vec() } else { picked };
    let mut failed = Vec::new();
    for id in ids {
        let r = match verify_criterion(id, SEED) {
            Ok(r) => r,
            Err(e) => {
                println!("criterion {id}: ERROR {e}");
                failed.push(id);
                continue;
            }
        };
        println!("{r}");
        for n in &r.notes {
            println!("    {n}");
        }
        for f in &r.failures {
            println!("    FAILED: {f}");
        }
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
