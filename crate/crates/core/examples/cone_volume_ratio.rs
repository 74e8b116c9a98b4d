//! Flat cone with volume ratio θ = 0.75: the comparison ball shrinks to
//! radius r/√θ and the L¹ bound picks up the factor θ. The cone apex lies
//! outside the smoothness hypotheses, so the run is flagged exploratory.
//!
//! Run with `cargo run --release --example cone_volume_ratio`.

use symcomp::pipeline::{bundled, run, RunOptions};

fn main() -> symcomp::Result<()> {
    let cfg = bundled("cone_disk")?;
    let out = run(&cfg, &RunOptions { write: false, ..Default::default() })?;
    let r = &out.report;
    println!("θ = {}, beyond hypotheses: {}", r.case.theta, r.case.beyond_hypotheses);
    println!("|Ω| = {:.6}, R♯ = {:.6} (r/√θ = {:.6})", r.summary.area, r.summary.radius_sharp, 0.5 / r.case.theta.sqrt());
    for name in ["l1", "min", "isoperimetric"] {
        let c = r.check(name).expect("check is part of the default set");
        println!("  {name:<14} margin {:>+10.3e}  {}", c.margin, c.verdict.as_str());
    }
    for note in &r.notes {
        println!("note: {note}");
    }
    Ok(())
}
