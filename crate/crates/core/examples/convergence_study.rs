//! Refinement study on the disk equality case: oracle error and the spread
//! of every check shrink at the expected rates.
//!
//! Run with `cargo run --release --example convergence_study`.

use symcomp::pipeline::{bundled, convergence};

fn main() -> symcomp::Result<()> {
    let cfg = bundled("disk_equality")?;
    let table = convergence(&cfg, 3, 1.0, None)?;
    print!("{}", table.to_text());
    Ok(())
}
