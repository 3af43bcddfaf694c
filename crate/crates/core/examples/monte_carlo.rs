//! Seeded trials in parallel, written as CSV to stdout.
//!
//!     cargo run --release --example monte_carlo -- 20 4

use tornpaper::codec::ParamSpec;
use tornpaper::experiment::{roundtrip, write_trials_csv, ExperimentConfig, TrialSummary};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let trials = args.next().unwrap_or(8);
    let jobs = args.next().unwrap_or(0);
    let cfg = ExperimentConfig {
        jobs,
        ..ExperimentConfig::new(ParamSpec::new(1 << 16, 3, 0.3, 8, 0.5, 0.02), trials, 0)
    };
    let (_, records) = roundtrip(&cfg).expect("valid configuration");
    write_trials_csv(std::io::stdout().lock(), &records).unwrap();
    eprintln!("{:?}", TrialSummary::of(&records));
}
