//! Empirical approximation error against the closed-form bound as m grows.

use rnca::bounds::{run_sweep, write_sweep_csv, BoundKind, SweepConfig, SweepParam};

fn main() -> rnca::Result<()> {
    let mut cfg = SweepConfig::new(
        BoundKind::Pca,
        SweepParam::M,
        vec![32.0, 128.0, 512.0, 2048.0],
    );
    cfg.base_n = 128;
    cfg.trials = 10;
    let report = run_sweep(&cfg)?;
    write_sweep_csv(&report.records, std::io::stdout())?;
    println!("log-log slope {:.3}", report.log_log_slope);
    Ok(())
}
