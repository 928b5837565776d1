//! One line per acceptance criterion, seeded and reproducible.
//!
//! Run with `cargo test -p rootval --test acceptance`. Exits non-zero if
//! any criterion fails.

use std::process::ExitCode;

use rootval::verify::{run, VerifyConfig, CRITERIA, DEFAULT_SEED};

fn main() -> ExitCode {
    let cfg = VerifyConfig::new(DEFAULT_SEED);
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let start = std::time::Instant::now();
        let rep = run(id, &cfg).unwrap();
        println!(
            "{} criterion {:>2} {:<17} checked={:<6} failures={:<3} {:>6.1}s",
            if rep.passed { "PASS" } else { "FAIL" },
            rep.id,
            rep.name,
            rep.checked,
            rep.failures,
            start.elapsed().as_secs_f64()
        );
        for note in &rep.notes {
            println!("     {}", note);
        }
        if let Some(f) = &rep.first_failure {
            println!("     first failure: {}", f);
        }
        if !rep.passed {
            failed.push(rep.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {:?}", failed);
        ExitCode::FAILURE
    }
}
