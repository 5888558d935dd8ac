//! Runs the synthetic benchmark and prints held-out scores per learner.

use std::time::Instant;

use coverageability_core::selection::GridSpec;
use coverageability_core::synthetic::run_benchmark;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let start = Instant::now();
    let run = run_benchmark(2000, seed, &GridSpec::reduced())?;
    for r in run.learners.iter().chain(std::iter::once(&run.weighted_voter)) {
        println!(
            "{:<5} r2 {:.4} rmse {:.4} mae {:.4}  {}",
            r.model.kind, r.report.r2, r.report.rmse, r.report.mae, r.model.hyperparameters
        );
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
