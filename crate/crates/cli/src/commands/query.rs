use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{ArgGroup, Args};
use serde::Serialize;
use starmetric::index::SearchStats;
use starmetric::topology::ball_members;
use starmetric::{brute_force, brute_force_range, Ball, Neighbor, VpTree};

use crate::config::{SpaceArgs, SpaceConfig};
use crate::ingest::{self, Format};
use crate::{emit_json, Verdict};

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["k", "radius"])))]
pub struct QueryArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub queries: PathBuf,
    /// Overrides format detection for both files.
    #[arg(long, value_enum)]
    pub data_format: Option<Format>,
    /// k nearest neighbors.
    #[arg(long)]
    pub k: Option<usize>,
    /// All points with distance strictly below this radius.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 16)]
    pub leaf_size: usize,
    /// Vantage-point selection seed.
    #[arg(long, env = "STARMETRIC_SEED")]
    pub seed: Option<u64>,
    /// Record every pruned subtree and compare with a full scan.
    #[arg(long)]
    pub audit: bool,
}

#[derive(Serialize)]
struct QueryResult {
    query: usize,
    point: Vec<f64>,
    neighbors: Vec<Neighbor>,
    short: bool,
    stats: SearchStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pruned_subtrees_sound: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_match: Option<bool>,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    space: SpaceConfig,
    space_name: String,
    data: String,
    points: usize,
    seed: u64,
    leaf_size: usize,
    tree_depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    audit: bool,
    results: Vec<QueryResult>,
    mean_distance_evaluations: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    all_match: Option<bool>,
}

fn same(a: &[Neighbor], b: &[Neighbor]) -> bool {
    a.len() == b.len()
        && a
            .iter()
            .zip(b)
            .all(|(x, y)| x.index == y.index && x.distance.to_bits() == y.distance.to_bits())
}

pub fn run(args: &QueryArgs) -> Result<Verdict> {
    let r = args.space.resolve(args.seed)?;
    let space = r.space.build(&r.tol)?;
    let data = ingest::ingest(&args.data, args.data_format)?;
    ingest::check_against(&data, &space)?;
    let queries = ingest::ingest(&args.queries, args.data_format)?;
    if queries.points.arity() != data.points.arity() {
        bail!(
            "queries have {} coordinates, data has {}",
            queries.points.arity(),
            data.points.arity()
        );
    }
    ingest::check_against(&queries, &space)?;
    if args.k == Some(0) {
        bail!("--k must be at least 1");
    }
    if let Some(rad) = args.radius {
        if !(rad >= 0.0) || !rad.is_finite() {
            bail!("--radius must be finite and non-negative");
        }
    }

    let tree = VpTree::build(&data.points, &space, args.leaf_size, r.seed)?;
    let mut results = Vec::with_capacity(queries.points.len());
    let mut evals = 0usize;
    for (qi, q) in queries.points.iter().enumerate() {
        let (res, oracle) = match (args.k, args.radius) {
            (Some(k), _) => {
                let res = tree.knn_with(q, k, &r.tol, args.audit)?;
                let oracle = args
                    .audit
                    .then(|| brute_force(&data.points, &space, q, k))
                    .transpose()?
                    .map(|want| same(&res.neighbors, &want));
                (res, oracle)
            }
            (None, Some(rad)) => {
                let res = tree.range_query_with(q, rad, &r.tol, args.audit)?;
                let oracle = if args.audit {
                    let want = brute_force_range(&data.points, &space, q, rad)?;
                    let ball = Ball::new(&space, q.clone(), rad)?;
                    let members = ball_members(&ball, &data.points)?;
                    let mut got: Vec<_> = res.neighbors.iter().map(|n| &n.point).collect();
                    let mut via_ball: Vec<_> = members.iter().collect();
                    let key = |p: &&starmetric::Point| p.coords().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
                    got.sort_by_key(key);
                    via_ball.sort_by_key(key);
                    Some(same(&res.neighbors, &want) && got == via_ball)
                } else {
                    None
                };
                (res, oracle)
            }
            (None, None) => unreachable!("clap requires --k or --radius"),
        };
        evals += res.stats.distance_evaluations;
        let sound = args.audit.then(|| res.stats.audit_sound());
        let mut stats = res.stats;
        stats.skips.clear();
        results.push(QueryResult {
            query: qi,
            point: q.coords().to_vec(),
            neighbors: res.neighbors,
            short: res.short,
            stats,
            pruned_subtrees_sound: sound,
            oracle_match: oracle,
        });
    }

    let all_match = args.audit.then(|| {
        results
            .iter()
            .all(|q| q.oracle_match == Some(true) && q.pruned_subtrees_sound == Some(true))
    });
    let mean = evals as f64 / results.len() as f64;
    eprintln!(
        "query: {} queries over {} points in {}, mean {:.1} distance evaluations{}",
        results.len(),
        data.points.len(),
        space.name(),
        mean,
        match all_match {
            Some(true) => ", audit: all match",
            Some(false) => ", audit: MISMATCH",
            None => "",
        }
    );
    emit_json(&Report {
        command: "query",
        space: r.space,
        space_name: space.name().to_owned(),
        data: data.source,
        points: data.points.len(),
        seed: r.seed,
        leaf_size: args.leaf_size,
        tree_depth: tree.depth(),
        k: args.k,
        radius: args.radius,
        audit: args.audit,
        results,
        mean_distance_evaluations: mean,
        all_match,
    })?;
    Ok(Verdict::from_passed(all_match != Some(false)))
}
