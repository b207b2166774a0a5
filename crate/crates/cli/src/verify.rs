//! Seeded random property run. Case `i` draws from its own ChaCha stream
//! (`seed`, stream `i`), so any case can be replayed alone and the parallel
//! schedule cannot change the results.

use std::path::Path;

use lulu::properties::{full_suite, interior_bounds, Check, Faults};
use lulu::random::{random_padded_pl, random_pl, RandomConfig};
use lulu::PLFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{io, CliError};

#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub seed: u64,
    pub count: usize,
    pub delta_range: (f64, f64),
    pub pieces: (usize, usize),
    pub jump_prob: f64,
    pub tolerance: f64,
    pub faults: Faults,
}

#[derive(Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub index: usize,
    pub delta: f64,
    pub function: PLFunction,
    /// Constant-margin variant used for the interior checks.
    pub interior_function: PLFunction,
    pub failed: Vec<Check>,
}

struct CaseResult {
    delta: f64,
    f: PLFunction,
    g: PLFunction,
    checks: Vec<Check>,
}

fn run_case(p: &VerifyParams, index: usize) -> Result<CaseResult, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(index as u64);
    let cfg = RandomConfig {
        pieces: p.pieces,
        ..RandomConfig::default().with_jumps(p.jump_prob)
    };
    let (dlo, dhi) = p.delta_range;
    let delta = if dlo == dhi { dlo } else { rng.gen_range(dlo..=dhi) };
    let invalid = |e: lulu::LuluError| CliError::InvalidParams(e.to_string());
    let f = random_pl(&mut rng, &cfg).map_err(invalid)?;
    let g = random_padded_pl(&mut rng, &cfg, 2.0 * delta).map_err(invalid)?;
    let internal = |e: lulu::LuluError| CliError::Internal(format!("case {index}: {e}"));
    let mut checks = full_suite(&f, delta, p.tolerance, p.faults).map_err(internal)?;
    checks.extend(interior_bounds(&g, delta, p.tolerance).map_err(internal)?);
    Ok(CaseResult { delta, f, g, checks })
}

fn check_params(p: &VerifyParams) -> Result<(), CliError> {
    let (dlo, dhi) = p.delta_range;
    if !(dlo.is_finite() && dhi.is_finite() && 0.0 < dlo && dlo <= dhi) {
        return Err(CliError::InvalidParams(format!(
            "delta range must satisfy 0 < min <= max, got [{dlo}, {dhi}]"
        )));
    }
    if !(0.0..=1.0).contains(&p.jump_prob) {
        return Err(CliError::InvalidParams("jump probability must be in [0, 1]".into()));
    }
    Ok(())
}

/// Runs the suite, prints the per-check matrix, and writes one
/// counterexample file per failing case into `artifact_dir`.
pub fn run(p: &VerifyParams, artifact_dir: &Path) -> Result<bool, CliError> {
    check_params(p)?;
    let results: Vec<Result<CaseResult, CliError>> = (0..p.count).into_par_iter().map(|i| run_case(p, i)).collect();

    let mut names: Vec<String> = vec![];
    let mut passed: Vec<usize> = vec![];
    let mut failures = vec![];
    for (index, r) in results.into_iter().enumerate() {
        let case = r?;
        for c in &case.checks {
            let k = match names.iter().position(|n| *n == c.name) {
                Some(k) => k,
                None => {
                    names.push(c.name.clone());
                    passed.push(0);
                    names.len() - 1
                }
            };
            if c.passed {
                passed[k] += 1;
            }
        }
        let failed: Vec<Check> = case.checks.into_iter().filter(|c| !c.passed).collect();
        if !failed.is_empty() {
            failures.push(Counterexample {
                seed: p.seed,
                index,
                delta: case.delta,
                function: case.f,
                interior_function: case.g,
                failed,
            });
        }
    }

    println!("seed {} count {}", p.seed, p.count);
    let width = names.iter().map(String::len).max().unwrap_or(0);
    for (n, ok) in names.iter().zip(&passed) {
        let mark = if *ok == p.count { "PASS" } else { "FAIL" };
        println!("{mark} {n:width$} {ok}/{}", p.count);
    }
    if p.count == 0 {
        println!("no cases");
    }

    for c in &failures {
        let path = artifact_dir.join(format!("counterexample-{}-{}.json", c.seed, c.index));
        let body = serde_json::to_string_pretty(c).expect("counterexamples serialize");
        io::write(&path, &(body + "\n"))?;
        eprintln!("counterexample written to {}", path.display());
    }
    Ok(failures.is_empty())
}
