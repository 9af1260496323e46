use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::{Args, ValueEnum};
use serde::Serialize;
use starmetric::topology::{ball_grid, CELL_BOUNDARY, CELL_IN, CELL_OUT};
use starmetric::{Point, Window};

use crate::config::{SpaceArgs, SpaceConfig};
use crate::{emit_json, parse_numbers, write_atomic, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridFormat {
    Pgm,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct BallGridArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub center: String,
    #[arg(long)]
    pub radius: f64,
    /// `x_min,x_max,y_min,y_max`; defaults to the center ± 1.5·radius.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long, default_value_t = 301)]
    pub resolution: usize,
    /// Defaults to the output file extension, then pgm.
    #[arg(long, value_enum)]
    pub format: Option<GridFormat>,
    /// Grid file. Without it the grid goes to stdout and the report to stderr.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct Counts {
    out: usize,
    #[serde(rename = "in")]
    inside: usize,
    boundary: usize,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    space: SpaceConfig,
    space_name: String,
    center: Vec<f64>,
    radius: f64,
    window: Window,
    resolution: usize,
    format: GridFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
    counts: Counts,
}

fn format_for(path: Option<&Path>) -> GridFormat {
    match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => GridFormat::Csv,
        _ => GridFormat::Pgm,
    }
}

pub fn run(args: &BallGridArgs) -> Result<Verdict> {
    let r = args.space.resolve(None)?;
    let space = r.space.build(&r.tol)?;
    let center = parse_numbers(&args.center, 2, "--center")?;
    let window = match &args.window {
        Some(w) => {
            let v = parse_numbers(w, 4, "--window")?;
            Window::new(v[0], v[1], v[2], v[3])?
        }
        None => {
            let h = 1.5 * args.radius;
            Window::new(center[0] - h, center[0] + h, center[1] - h, center[1] + h)?
        }
    };
    let grid = ball_grid(
        &space,
        &Point::new(center.clone())?,
        args.radius,
        &window,
        args.resolution,
        &r.tol,
    )?;
    let format = args.format.unwrap_or_else(|| format_for(args.output.as_deref()));
    let body = match format {
        GridFormat::Pgm => grid.to_pgm(),
        GridFormat::Csv => grid.to_csv(),
    };
    let counts = Counts {
        out: grid.count(CELL_OUT),
        inside: grid.count(CELL_IN),
        boundary: grid.count(CELL_BOUNDARY),
    };
    eprintln!(
        "ball-grid: {} r={} {}x{}: {} in, {} out, {} boundary",
        space.name(),
        args.radius,
        args.resolution,
        args.resolution,
        counts.inside,
        counts.out,
        counts.boundary
    );
    let report = Report {
        command: "ball-grid",
        space: r.space,
        space_name: space.name().to_owned(),
        center,
        radius: args.radius,
        window,
        resolution: args.resolution,
        format,
        output: args.output.as_ref().map(|p| p.display().to_string()),
        counts,
    };
    match &args.output {
        Some(path) => {
            write_atomic(path, body.as_bytes())?;
            emit_json(&report)?;
        }
        None => {
            std::io::stdout().lock().write_all(body.as_bytes())?;
            eprintln!("{}", serde_json::to_string(&report)?);
        }
    }
    Ok(Verdict::Pass)
}
