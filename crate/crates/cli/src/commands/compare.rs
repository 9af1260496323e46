use anyhow::{bail, Result};
use clap::Args;
use rand::Rng;
use serde::Serialize;
use starmetric::tdefiner::{compare, Comparison};
use starmetric::{Ordering, TDefiner};

use crate::config::{FileConfig, ToleranceArgs};
use crate::{emit_json, Verdict};

fn parse_ordering(s: &str) -> Result<Ordering, String> {
    serde_json::from_value(serde_json::Value::String(s.to_owned())).map_err(|_| {
        "expected weaker-or-equal, stronger-or-equal, equal or incomparable-on-samples".to_owned()
    })
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Two or more built-in names; all four when omitted.
    pub names: Vec<String>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Pairs are drawn from [0, max)².
    #[arg(long, default_value_t = 10.0)]
    pub max: f64,
    /// Exit 1 unless the (single) comparison has this verdict.
    #[arg(long, value_parser = parse_ordering)]
    pub expect: Option<Ordering>,
    #[arg(long, env = "STARMETRIC_SEED")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    seed: u64,
    samples: usize,
    max: f64,
    comparisons: Vec<Comparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<Ordering>,
}

pub fn run(args: &CompareArgs) -> Result<Verdict> {
    let cfg = args.tol.resolve(&FileConfig::default())?;
    let seed = args.seed.unwrap_or(0);
    let stars: Vec<TDefiner> = if args.names.is_empty() {
        TDefiner::builtins()
    } else {
        args.names.iter().map(|n| TDefiner::builtin(n)).collect::<Result<_, _>>()?
    };
    if stars.len() < 2 {
        bail!("name at least two t-definers");
    }
    if args.expect.is_some() && stars.len() != 2 {
        bail!("--expect needs exactly two t-definers");
    }
    if args.samples == 0 || !(args.max > 0.0) || !args.max.is_finite() {
        bail!("--samples and --max must be positive");
    }
    let mut rng = crate::rng(seed);
    let mut pairs = vec![(0.0, 0.0), (0.0, args.max / 2.0), (args.max / 2.0, 0.0)];
    pairs.extend((0..args.samples).map(|_| (rng.gen_range(0.0..args.max), rng.gen_range(0.0..args.max))));

    let mut comparisons = Vec::new();
    for i in 0..stars.len() {
        for j in i + 1..stars.len() {
            let c = compare(&stars[i], &stars[j], &pairs, &cfg)?;
            eprintln!("{} vs {}: {:?} on {} samples", c.first, c.second, c.verdict, c.samples);
            comparisons.push(c);
        }
    }
    let passed = args.expect.map_or(true, |e| comparisons[0].verdict == e);
    emit_json(&Report {
        command: "compare-tdefiners",
        seed,
        samples: pairs.len(),
        max: args.max,
        comparisons,
        expected: args.expect,
    })?;
    Ok(Verdict::from_passed(passed))
}
