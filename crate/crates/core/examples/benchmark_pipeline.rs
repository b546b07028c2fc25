//! A small noise sweep through the benchmark harness.

use clap::Parser;
use screwkit::cli::{non_monotone, run_benchmark, write_benchmark_csv, Cli, Command};

fn main() -> screwkit::Result<()> {
    let cli = Cli::parse_from([
        "screwkit",
        "benchmark",
        "--n-traj",
        "40",
        "--seed",
        "5",
        "--sweep-t-mm",
        "0,2,8",
        "--method",
        "closed-form",
    ]);
    let Command::Benchmark(args) = cli.command else {
        unreachable!()
    };

    let levels = run_benchmark(&args)?;
    for level in &levels {
        println!(
            "t_mm {:>4}: {} rows, {} failed",
            level.noise.trans_sigma * 1000.0,
            level.rows.len(),
            level.failed
        );
    }
    for (cat, metric) in non_monotone(&levels) {
        println!("note: {metric} of {cat} does not grow with noise at this sample size");
    }
    let mut csv = Vec::new();
    write_benchmark_csv(&mut csv, &args, &levels)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}
