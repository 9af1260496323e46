use anyhow::Result;
use clap::Args;
use rand::Rng;
use serde::Serialize;
use starmetric::metric::{check_star_metric_axioms, AxiomCheckOptions};
use starmetric::tdefiner::check_tdefiner_axioms;
use starmetric::{LawReport, TDefiner};

use super::PointSource;
use crate::config::{SpaceArgs, SpaceConfig};
use crate::{emit_json, Verdict};

#[derive(Debug, Clone, Args)]
pub struct CheckLawsArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub source: PointSource,
    /// Check the space's distances against this t-definer instead.
    #[arg(long)]
    pub force_tdefiner: Option<String>,
    /// Sample this many triangles when N³ is larger.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    /// Seeded triples on [0, 10)³ for the t-definer laws.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, env = "STARMETRIC_SEED")]
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    space: SpaceConfig,
    space_name: String,
    checked_tdefiner: String,
    source: String,
    seed: u64,
    budget: u64,
    tdefiner_laws: LawReport,
    metric_laws: LawReport,
    passed: bool,
}

pub fn run(args: &CheckLawsArgs) -> Result<Verdict> {
    let r = args.space.resolve(args.seed)?;
    let mut space = r.space.build(&r.tol)?;
    if let Some(name) = &args.force_tdefiner {
        space = space.with_star(TDefiner::builtin(name)?);
    }
    let data = args.source.load(&space, r.seed)?;

    let mut rng = crate::rng(r.seed);
    let mut triples = vec![(0.0, 0.0, 0.0), (0.0, 1.0, 2.0)];
    triples.extend((0..args.samples).map(|_| {
        (
            rng.gen_range(0.0..10.0),
            rng.gen_range(0.0..10.0),
            rng.gen_range(0.0..10.0),
        )
    }));
    let tdefiner_laws = check_tdefiner_axioms(space.star(), &triples, &r.tol)?;
    let opts = AxiomCheckOptions {
        pseudometric: space.is_pseudometric(),
        triple_budget: args.budget,
        seed: r.seed,
    };
    let metric_laws = check_star_metric_axioms(&space, &data.points, &r.tol, &opts)?;
    let passed = tdefiner_laws.passed() && metric_laws.passed();

    eprintln!(
        "check-laws: {} on {} points: {}",
        space.name(),
        data.points.len(),
        if passed { "PASS" } else { "FAIL" }
    );
    for report in [&tdefiner_laws, &metric_laws] {
        for c in report.failures() {
            eprintln!("  {} failed {} of {} times", c.law, c.violations, c.samples_tested);
            if let Some(w) = &c.witness {
                eprintln!("    witness {:?}: {} vs {} (margin {})", w.inputs, w.lhs, w.rhs, w.margin);
            }
        }
    }

    emit_json(&Report {
        command: "check-laws",
        space: r.space,
        space_name: space.name().to_owned(),
        checked_tdefiner: space.star().name().to_owned(),
        source: data.source,
        seed: r.seed,
        budget: args.budget,
        tdefiner_laws,
        metric_laws,
        passed,
    })?;
    Ok(Verdict::from_passed(passed))
}
