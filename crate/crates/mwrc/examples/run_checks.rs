//! Runs the named numerical checks and prints one line each.
//! Pass `--quick` to skip the slow ones.

fn main() {
    let quick = std::env::args().any(|a| a == "--quick");
    let outcomes = mwrc::verify::run_all(!quick);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed} of {} checks passed", outcomes.len());
}
