//! Seeded streams make every run reproducible: the same config produces
//! byte-identical CSV regardless of thread count.

use aoi_lab::harness::{builtin_setting, curves_csv, git_blob_hash, run_experiment};

fn main() -> aoi_lab::Result<()> {
    let config = builtin_setting("2.c")?.with_horizon(2_000).with_replications(50).with_seed(42);
    let first = curves_csv(&run_experiment(&config)?)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let second = curves_csv(&pool.install(|| run_experiment(&config))?)?;
    println!("default pool   {}", git_blob_hash(&first));
    println!("single thread  {}", git_blob_hash(&second));
    assert_eq!(first, second);
    Ok(())
}
