mod ball_grid;
mod check_laws;
mod compare;
mod query;
mod residuum;
mod topology;

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use rand::Rng;
use starmetric::{Domain, Point, PointSet, StarMetricSpace};

use crate::ingest::{self, Dataset, Format};

pub use ball_grid::{run as ball_grid, BallGridArgs};
pub use check_laws::{run as check_laws, CheckLawsArgs};
pub use compare::{run as compare_tdefiners, CompareArgs};
pub use query::{run as query, QueryArgs};
pub use residuum::{run as residuum, ResiduumArgs};
pub use topology::{run as topology_check, TopologyArgs};

/// Where the points come from: an inline list, a file or the generator.
#[derive(Debug, Clone, Args)]
pub struct PointSource {
    /// Inline points, e.g. `1,16,25` or `0,0;1,2`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["data", "generate"])]
    pub points: Option<String>,
    /// CSV or JSON file with one point per row.
    #[arg(long, conflicts_with = "generate")]
    pub data: Option<PathBuf>,
    /// Overrides format detection by file extension.
    #[arg(long, value_enum)]
    pub data_format: Option<Format>,
    /// Draw this many seeded uniform points instead.
    #[arg(long)]
    pub generate: Option<usize>,
    /// Coordinate range of generated points: `[0, scale)` or `[-scale, scale)`.
    #[arg(long, default_value_t = 100.0)]
    pub scale: f64,
}

impl PointSource {
    pub fn load(&self, space: &StarMetricSpace, seed: u64) -> Result<Dataset> {
        let data = if let Some(text) = &self.points {
            ingest::parse_inline(text, space.arity())?
        } else if let Some(path) = &self.data {
            ingest::ingest(path, self.data_format)?
        } else if let Some(n) = self.generate {
            generate(space, n, self.scale, seed)?
        } else {
            bail!("no points: pass --points, --data or --generate");
        };
        ingest::check_against(&data, space)?;
        Ok(data)
    }
}

/// Inline list, or `@path` for a file.
pub fn load_set(spec: &str, space: &StarMetricSpace) -> Result<Dataset> {
    let data = match spec.strip_prefix('@') {
        Some(path) => ingest::ingest(path.as_ref(), None)?,
        None => ingest::parse_inline(spec, space.arity())?,
    };
    ingest::check_against(&data, space)?;
    Ok(data)
}

pub fn sample_coord(rng: &mut impl Rng, domain: Domain, lo: f64, hi: f64) -> f64 {
    let lo = match domain {
        Domain::NonNegative => lo.max(0.0),
        Domain::Real => lo,
    };
    if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}

fn generate(space: &StarMetricSpace, n: usize, scale: f64, seed: u64) -> Result<Dataset> {
    if n == 0 {
        bail!("--generate needs at least one point");
    }
    if !(scale > 0.0 && scale.is_finite()) {
        bail!("--scale must be positive and finite");
    }
    let mut rng = crate::rng(seed);
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        let coords = space
            .domains()
            .iter()
            .map(|&d| sample_coord(&mut rng, d, -scale, scale))
            .collect();
        pts.push(Point::new(coords)?);
    }
    let source = format!("generated(n={n}, scale={scale}, seed={seed})");
    Ok(Dataset {
        points: PointSet::new(pts)?.with_source(source.clone()),
        source,
        format: Format::Csv,
        rows: (1..=n).collect(),
    })
}
