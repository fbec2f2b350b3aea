//! Acceptance criteria, one PASS/FAIL line each.

fn main() {
    let results = foundry::cli::suite::run_suite(false);
    for r in &results {
        println!("{}", r.line());
    }
    if !results.iter().all(|r| r.passed()) {
        std::process::exit(1);
    }
}
