use anyhow::{bail, Result};
use clap::Args;
use serde::Serialize;
use starmetric::metric::product_factor;
use starmetric::topology::{normal_separation, product_ball_inclusion_check, separation_radius};
use starmetric::{Error, LawReport, Point, PointSet, StarMetricSpace, TDefiner};

use super::{load_set, sample_coord};
use crate::config::{SpaceArgs, SpaceConfig};
use crate::{emit_json, Verdict};

#[derive(Debug, Clone, Args)]
pub struct TopologyArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// First point set, inline (`1,2,3` or `0,0;1,1`) or `@file`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Second point set; enables the separation checks.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Radius for the product ball inclusion check, centered at the first point of A.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Random probe points used to look for overlaps.
    #[arg(long, default_value_t = 10_000)]
    pub candidates: usize,
    /// Probe points placed on the segment between each separated pair.
    #[arg(long, default_value_t = 64)]
    pub segment_probes: usize,
    #[arg(long, env = "STARMETRIC_SEED")]
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct PairResult {
    a: Vec<f64>,
    b: Vec<f64>,
    distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    overlap: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    passed: bool,
}

#[derive(Serialize)]
struct NormalResult {
    u_radii: Vec<f64>,
    v_radii: Vec<f64>,
    exclusion_a: Vec<f64>,
    exclusion_b: Vec<f64>,
    shared_candidate: Option<Vec<f64>>,
    passed: bool,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    space: SpaceConfig,
    space_name: String,
    seed: u64,
    candidates: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    separation: Vec<PairResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normal_separation: Option<NormalResult>,
    inclusion: LawReport,
    passed: bool,
}

/// Uniform points over the bounding box of `sets`, padded by `pad`.
fn probes(space: &StarMetricSpace, sets: &[&PointSet], pad: f64, n: usize, seed: u64) -> Result<Vec<Point>> {
    let arity = space.arity();
    let mut lo = vec![f64::INFINITY; arity];
    let mut hi = vec![f64::NEG_INFINITY; arity];
    for p in sets.iter().flat_map(|s| s.iter()) {
        for (j, &v) in p.coords().iter().enumerate() {
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
    }
    let mut rng = crate::rng(seed);
    (0..n)
        .map(|_| {
            let coords = (0..arity)
                .map(|j| sample_coord(&mut rng, space.domains()[j], lo[j] - pad, hi[j] + pad))
                .collect();
            Ok(Point::new(coords)?)
        })
        .collect()
}

fn segment(x: &Point, y: &Point, n: usize) -> Vec<Point> {
    (1..=n)
        .filter_map(|i| {
            let t = i as f64 / (n + 1) as f64;
            let c = x.coords().iter().zip(y.coords()).map(|(a, b)| a + t * (b - a)).collect();
            Point::new(c).ok()
        })
        .collect()
}

fn separate_pair(space: &StarMetricSpace, x: &Point, y: &Point, probes: &[Point], seg: usize, cfg: &starmetric::ToleranceConfig) -> Result<PairResult> {
    let distance = space.dist(x, y)?;
    let mut res = PairResult {
        a: x.coords().to_vec(),
        b: y.coords().to_vec(),
        distance,
        radius: None,
        overlap: None,
        error: None,
        passed: false,
    };
    let s = match separation_radius(space, x, y, cfg) {
        Ok(s) => s,
        Err(Error::Usage(msg)) => {
            res.error = Some(msg);
            return Ok(res);
        }
        Err(e) => return Err(e.into()),
    };
    res.radius = Some(s);
    let line = segment(x, y, seg);
    res.overlap = probes
        .iter()
        .chain(&line)
        .find(|p| space.dist_raw(x.coords(), p.coords()) < s && space.dist_raw(y.coords(), p.coords()) < s)
        .map(|p| p.coords().to_vec());
    res.passed = res.overlap.is_none();
    Ok(res)
}

pub fn run(args: &TopologyArgs) -> Result<Verdict> {
    let r = args.space.resolve(args.seed)?;
    let space = r.space.build(&r.tol)?;
    if !(args.radius > 0.0) || !args.radius.is_finite() {
        bail!("--radius must be positive and finite");
    }
    let a = load_set(&args.a, &space)?;
    let b = args.b.as_deref().map(|s| load_set(s, &space)).transpose()?;

    let mut sets = vec![&a.points];
    if let Some(b) = &b {
        sets.push(&b.points);
    }
    let probe_points = probes(&space, &sets, args.radius, args.candidates, r.seed)?;

    let mut separation = Vec::new();
    let mut normal = None;
    if let Some(b) = &b {
        for x in &a.points {
            for y in &b.points {
                separation.push(separate_pair(&space, x, y, &probe_points, args.segment_probes, &r.tol)?);
            }
        }
        let mut shared_pool = probe_points.clone();
        for x in &a.points {
            for y in &b.points {
                shared_pool.extend(segment(x, y, args.segment_probes));
            }
        }
        let pool = PointSet::new(shared_pool)?;
        normal = Some(match normal_separation(&space, &a.points, &b.points, &r.tol) {
            Ok(sep) => {
                let shared = sep.shared_candidate(&pool).map(|p| p.coords().to_vec());
                NormalResult {
                    u_radii: sep.u.iter().map(|b| b.radius()).collect(),
                    v_radii: sep.v.iter().map(|b| b.radius()).collect(),
                    exclusion_a: sep.exclusion_a,
                    exclusion_b: sep.exclusion_b,
                    passed: shared.is_none(),
                    shared_candidate: shared,
                }
            }
            Err(Error::Usage(msg)) => {
                eprintln!("normal separation not possible: {msg}");
                NormalResult {
                    u_radii: vec![],
                    v_radii: vec![],
                    exclusion_a: vec![],
                    exclusion_b: vec![],
                    shared_candidate: None,
                    passed: false,
                }
            }
            Err(e) => return Err(e.into()),
        });
    }

    // product inclusion runs on factors of the configured t-definer
    let star = TDefiner::builtin(&r.space.tdefiner)?;
    let factors = vec![product_factor(&star, &r.tol)?; space.arity()];
    let center = a.points.points()[0].clone();
    let in_domain = |p: &Point| {
        p.coords()
            .iter()
            .zip(factors.iter().map(|f| f.domains()[0]))
            .all(|(&v, d)| d.contains(v))
    };
    if !in_domain(&center) {
        bail!("the first point of A is outside the factor domain of {}", star.name());
    }
    let mut extra = {
        let mut rng = crate::rng(r.seed ^ 0x5eed);
        let fold = star.power(args.radius, factors.len());
        (0..args.candidates)
            .map(|_| {
                let c = center
                    .coords()
                    .iter()
                    .zip(&factors)
                    .map(|(&x, f)| sample_coord(&mut rng, f.domains()[0], x - 1.5 * fold, x + 1.5 * fold))
                    .collect();
                Point::new(c)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?
    };
    extra.extend(probe_points.iter().filter(|p| in_domain(p)).cloned());
    let inclusion = product_ball_inclusion_check(&factors, &star, &center, args.radius, &PointSet::new(extra)?)?;

    let sep_ok = separation.iter().all(|p| p.passed);
    let normal_ok = normal.as_ref().map_or(true, |n| n.passed);
    let passed = sep_ok && normal_ok && inclusion.passed();
    eprintln!(
        "topology-check: {}: {} separated pairs ({} failed), normal separation {}, inclusion chain {}",
        space.name(),
        separation.len(),
        separation.iter().filter(|p| !p.passed).count(),
        match &normal {
            None => "skipped",
            Some(n) if n.passed => "ok",
            Some(_) => "FAILED",
        },
        if inclusion.passed() { "ok" } else { "FAILED" }
    );
    emit_json(&Report {
        command: "topology-check",
        space: r.space,
        space_name: space.name().to_owned(),
        seed: r.seed,
        candidates: args.candidates,
        separation,
        normal_separation: normal,
        inclusion,
        passed,
    })?;
    Ok(Verdict::from_passed(passed))
}
