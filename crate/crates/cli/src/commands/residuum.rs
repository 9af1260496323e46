use anyhow::Result;
use clap::{Args, ValueEnum};
use serde::Serialize;
use starmetric::TDefiner;

use crate::config::{FileConfig, ToleranceArgs};
use crate::{emit_json, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed form when available, bisection otherwise.
    Auto,
    Closed,
    Numeric,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct ResiduumArgs {
    #[arg(long)]
    pub tdefiner: String,
    #[arg(allow_negative_numbers = true)]
    pub a: f64,
    #[arg(allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[command(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    tdefiner: String,
    a: f64,
    b: f64,
    method: Method,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    discrepancy: Option<f64>,
}

pub fn run(args: &ResiduumArgs) -> Result<Verdict> {
    let cfg = args.tol.resolve(&FileConfig::default())?;
    let star = TDefiner::builtin(&args.tdefiner)?;
    let (a, b) = (args.a, args.b);
    let (closed, numeric) = match args.method {
        Method::Auto => (None, None),
        Method::Closed => (Some(star.residuum_closed(a, b)?), None),
        Method::Numeric => (None, Some(star.residuum_numeric(a, b, &cfg)?)),
        Method::Both => (
            Some(star.residuum_closed(a, b)?),
            Some(star.residuum_numeric(a, b, &cfg)?),
        ),
    };
    let value = match (closed, numeric) {
        (Some(c), _) => c,
        (None, Some(n)) => n,
        (None, None) => star.residuum(a, b, &cfg)?,
    };
    let discrepancy = closed.zip(numeric).map(|(c, n)| (c - n).abs());

    match discrepancy {
        Some(d) => eprintln!(
            "{}: {a} -o {b} = {} (closed), {} (numeric), |diff| = {d:e}",
            star.name(),
            closed.unwrap_or(value),
            numeric.unwrap_or(value)
        ),
        None => eprintln!("{}: {a} -o {b} = {value}", star.name()),
    }
    emit_json(&Report {
        command: "residuum",
        tdefiner: star.name().to_owned(),
        a,
        b,
        method: args.method,
        value,
        closed,
        numeric,
        discrepancy,
    })?;
    Ok(Verdict::Pass)
}
