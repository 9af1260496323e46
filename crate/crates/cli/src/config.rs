use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use starmetric::metric::{build_space, Construction};
use starmetric::tdefiner::BUILTIN_NAMES;
use starmetric::{StarMetricSpace, ToleranceConfig};

/// Contents of a `--config` JSON file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub tdefiner: Option<String>,
    pub construction: Option<Construction>,
    pub arity: Option<usize>,
    pub pseudometric: Option<bool>,
    pub seed: Option<u64>,
    pub abs_tol: Option<f64>,
    pub numeric_residuum_tol: Option<f64>,
    pub max_bisection_iters: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Flags shared by every subcommand that builds a space.
#[derive(Debug, Clone, Default, Args)]
pub struct SpaceArgs {
    /// One of lukasiewicz, max, s, p.
    #[arg(long)]
    pub tdefiner: Option<String>,
    /// induced, signed_line, product_max, product_T or euclidean_L.
    #[arg(long)]
    pub construction: Option<Construction>,
    #[arg(long)]
    pub arity: Option<usize>,
    /// Treat the space as a pseudometric (check reflexivity only).
    #[arg(long)]
    pub pseudometric: bool,
    /// JSON file with the same keys; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ToleranceArgs {
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub numeric_residuum_tol: Option<f64>,
    #[arg(long)]
    pub max_bisection_iters: Option<usize>,
}

impl ToleranceArgs {
    pub fn resolve(&self, file: &FileConfig) -> Result<ToleranceConfig> {
        let d = ToleranceConfig::default();
        let cfg = ToleranceConfig {
            abs_tol: self.abs_tol.or(file.abs_tol).unwrap_or(d.abs_tol),
            numeric_residuum_tol: self
                .numeric_residuum_tol
                .or(file.numeric_residuum_tol)
                .unwrap_or(d.numeric_residuum_tol),
            max_bisection_iters: self
                .max_bisection_iters
                .or(file.max_bisection_iters)
                .unwrap_or(d.max_bisection_iters),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceConfig {
    pub tdefiner: String,
    pub construction: Construction,
    pub arity: usize,
    pub pseudometric: bool,
}

impl SpaceConfig {
    pub fn validate(&self) -> Result<()> {
        if !BUILTIN_NAMES.contains(&self.tdefiner.as_str()) {
            bail!(
                "unknown t-definer {:?}; expected one of {}",
                self.tdefiner,
                BUILTIN_NAMES.join(", ")
            );
        }
        if self.arity == 0 {
            bail!("arity must be positive");
        }
        match self.construction {
            Construction::EuclideanL if self.tdefiner != "lukasiewicz" => {
                bail!("euclidean_L requires --tdefiner lukasiewicz")
            }
            Construction::SignedLine if !matches!(self.tdefiner.as_str(), "lukasiewicz" | "s") => {
                bail!("signed_line requires --tdefiner lukasiewicz or s")
            }
            Construction::Induced | Construction::SignedLine if self.arity != 1 => {
                bail!("{} spaces have arity 1, got {}", self.construction, self.arity)
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self, cfg: &ToleranceConfig) -> Result<StarMetricSpace> {
        self.validate()?;
        let space = build_space(&self.tdefiner, self.construction, self.arity, cfg)?;
        Ok(if self.pseudometric { space.into_pseudometric() } else { space })
    }
}

/// Everything a subcommand needs after merging flags, file and environment.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub space: SpaceConfig,
    pub tol: ToleranceConfig,
    pub seed: u64,
}

impl SpaceArgs {
    pub fn file(&self) -> Result<FileConfig> {
        match &self.config {
            Some(p) => FileConfig::load(p),
            None => Ok(FileConfig::default()),
        }
    }

    /// Flags win over the file; the seed falls back to the file, then 0.
    pub fn resolve(&self, seed_flag: Option<u64>) -> Result<Resolved> {
        let file = self.file()?;
        let Some(tdefiner) = self.tdefiner.clone().or(file.tdefiner.clone()) else {
            bail!("no t-definer given; pass --tdefiner or set it in --config");
        };
        let space = SpaceConfig {
            tdefiner,
            construction: self.construction.or(file.construction).unwrap_or(Construction::Induced),
            arity: self.arity.or(file.arity).unwrap_or(1),
            pseudometric: self.pseudometric || file.pseudometric.unwrap_or(false),
        };
        space.validate()?;
        Ok(Resolved {
            space,
            tol: self.tol.resolve(&file)?,
            seed: seed_flag.or(file.seed).unwrap_or(0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(t: &str, c: Construction, arity: usize) -> SpaceConfig {
        SpaceConfig {
            tdefiner: t.into(),
            construction: c,
            arity,
            pseudometric: false,
        }
    }

    #[test]
    fn invariants() {
        assert!(cfg("p", Construction::Induced, 1).validate().is_ok());
        assert!(cfg("p", Construction::Induced, 2).validate().is_err());
        assert!(cfg("p", Construction::EuclideanL, 2).validate().is_err());
        assert!(cfg("lukasiewicz", Construction::EuclideanL, 2).validate().is_ok());
        assert!(cfg("max", Construction::SignedLine, 1).validate().is_err());
        assert!(cfg("s", Construction::SignedLine, 1).validate().is_ok());
        assert!(cfg("q", Construction::Induced, 1).validate().is_err());
        assert!(cfg("max", Construction::ProductT, 0).validate().is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("starmetric-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        fs::write(&path, r#"{"tdefiner":"max","construction":"product_T","arity":3,"seed":9}"#).unwrap();
        let args = SpaceArgs {
            tdefiner: Some("p".into()),
            config: Some(path.clone()),
            ..Default::default()
        };
        let r = args.resolve(None).unwrap();
        assert_eq!(r.space, cfg("p", Construction::ProductT, 3));
        assert_eq!(r.seed, 9);
        assert_eq!(args.resolve(Some(4)).unwrap().seed, 4);
        fs::remove_dir_all(dir).unwrap();
    }
}
