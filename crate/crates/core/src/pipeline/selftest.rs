//! Bundled cases plus randomized invariant suites.

use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::report::Report;
use super::{bundled, run, RunOptions, BUNDLED};
use crate::compare::CheckEntry;
use crate::error::{Error, Result};
use crate::fem::ScalarField;
use crate::geometry::Manifold;
use crate::mesh::{build_mesh, DomainSpec, Mesh};
use crate::rearrange::{concentration_check, distribution_function, hardy_littlewood_check, DistributionData, RearrangedProfile};

pub const SELFTEST_SEED: u64 = 20_240_611;

/// Worst |μ(t) − A(1−t)²| for the hat field on one triangle.
pub fn single_triangle_error() -> Result<f64> {
    let area = 0.5;
    let mesh = Arc::new(Mesh::from_parts(
        Manifold::plane(),
        vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        vec![[0, 1, 2]],
        vec![[0, 1], [1, 2], [2, 0]],
        1.0,
        None,
    )?);
    let u = ScalarField::new(mesh, vec![1.0, 0.0, 0.0])?;
    let levels: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
    let d = distribution_function(&u, &levels)?;
    let mut worst: f64 = 0.0;
    for (&t, &mu) in levels.iter().zip(d.measures()) {
        worst = worst.max((mu - area * (1.0 - t) * (1.0 - t)).abs());
    }
    for k in 0..1000 {
        let t = (k as f64 + 0.37) / 1000.0;
        worst = worst.max((d.measure_at(t) - area * (1.0 - t) * (1.0 - t)).abs());
    }
    Ok(worst)
}

/// Smallest Hardy–Littlewood margin over `pairs` random nodal field pairs.
pub fn hardy_littlewood_suite(seed: u64, pairs: usize) -> Result<f64> {
    let mesh = Arc::new(build_mesh(&DomainSpec::Disk { radius: 1.0 }, &Manifold::plane(), 0.2)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..pairs {
        let field = |rng: &mut ChaCha8Rng| {
            let values = (0..mesh.num_vertices()).map(|_| rng.random_range(0.0..2.0)).collect();
            ScalarField::new(mesh.clone(), values)
        };
        let f = field(&mut rng)?;
        let g = field(&mut rng)?;
        worst = worst.min(hardy_littlewood_check(&f, &g)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConcentrationAgreement {
    pub sources: usize,
    pub agreements: usize,
    /// Sources for which the condition fails (so both verdicts are exercised).
    pub failing: usize,
}

/// Compares the bathtub-reduced concentration verdict (n = 3) with brute
/// force over all unions of cells of a random 10-cell partition.
pub fn concentration_bruteforce_suite(seed: u64, sources: usize) -> Result<ConcentrationAgreement> {
    const CELLS: usize = 10;
    const N: usize = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ConcentrationAgreement {
        sources,
        agreements: 0,
        failing: 0,
    };
    for k in 0..sources {
        let areas: Vec<f64> = (0..CELLS).map(|_| rng.random_range(0.5..1.5)).collect();
        let mut values: Vec<f64> = (0..CELLS).map(|_| rng.random_range(0.0..1.0)).collect();
        if k % 2 == 1 {
            // a spike makes small sets carry most of the mass
            let i = rng.random_range(0..CELLS);
            values[i] += rng.random_range(2.0..20.0);
        }
        let total: f64 = areas.iter().sum();
        let mass: f64 = areas.iter().zip(&values).map(|(a, v)| a * v).sum();
        let exponent = (N as f64 - 2.0) / N as f64;
        let brute_ok = (1u32..(1 << CELLS)).all(|mask| {
            let (mut e_area, mut e_mass) = (0.0, 0.0);
            for i in 0..CELLS {
                if mask & (1 << i) != 0 {
                    e_area += areas[i];
                    e_mass += areas[i] * values[i];
                }
            }
            e_mass <= (e_area / total).powf(exponent) * mass + 1e-12 * mass
        });
        let fstar = RearrangedProfile::from_distribution(&DistributionData::from_cells(&values, &areas)?);
        let bathtub_ok = concentration_check(&fstar, N, total)?.margin >= -1e-12 * mass;
        if brute_ok == bathtub_ok {
            out.agreements += 1;
        }
        if !brute_ok {
            out.failing += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestOutcome {
    pub cases: Vec<Report>,
    pub invariants: Vec<CheckEntry>,
    pub passed: bool,
}

impl SelftestOutcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("selftest serialization cannot fail") + "\n"
    }
}

/// Runs every bundled case and the invariant suites. With `out`, each case
/// writes its artifacts to `out/<name>` and the summary to `out/selftest.json`.
pub fn selftest(out: Option<&Path>) -> Result<SelftestOutcome> {
    let mut cases = Vec::new();
    for (name, _) in BUNDLED {
        let cfg = bundled(name)?;
        let opts = RunOptions {
            out: out.map(|d| d.join(name)),
            tol_scale: 1.0,
            write: out.is_some(),
        };
        cases.push(run(&cfg, &opts)?.report);
    }
    let mut invariants = Vec::new();
    invariants.push(CheckEntry::identity("single_triangle_distribution", single_triangle_error()?, 0.0, 1e-12));
    let hl = hardy_littlewood_suite(SELFTEST_SEED, 50)?;
    invariants.push(CheckEntry::with_margin("hardy_littlewood_random", 0.0, hl, hl, 1e-8, None));
    let conc = concentration_bruteforce_suite(SELFTEST_SEED, 20)?;
    invariants.push(CheckEntry::identity(
        "concentration_bruteforce",
        conc.agreements as f64,
        conc.sources as f64,
        0.0,
    ));
    let passed = cases.iter().all(Report::passed) && invariants.iter().all(|c| c.verdict.passed());
    let outcome = SelftestOutcome {
        cases,
        invariants,
        passed,
    };
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let p = dir.join("selftest.json");
        std::fs::write(&p, outcome.to_json()).map_err(|e| Error::io(&p, e))?;
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_suites() {
        assert!(single_triangle_error().unwrap() < 1e-12);
        assert!(hardy_littlewood_suite(1, 3).unwrap() >= -1e-8);
        let c = concentration_bruteforce_suite(1, 6).unwrap();
        assert_eq!(c.agreements, c.sources);
    }
}
