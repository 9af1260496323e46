//! ⋆-metric spaces: constructions and the axiom checker.
//!
//! Every t-definer induces a ⋆-metric on `[0, ∞)` through its residuum,
//! `d(a, b) = (a ⊸ b) ⋆ (b ⊸ a)`. Finite products of spaces sharing one
//! t-definer are ⋆-metric under both the coordinatewise maximum and the
//! ⋆-fold of the coordinate distances.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{Point, PointSet};
use crate::report::{LawCheck, LawReport, Witness};
use crate::tdefiner::{TDefiner, ToleranceConfig};

/// Distance between two coordinate slices of the space's arity.
pub type DistFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

/// Admissible values of one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    NonNegative,
    Real,
}

impl Domain {
    pub fn contains(self, v: f64) -> bool {
        v.is_finite()
            && match self {
                Domain::NonNegative => v >= 0.0,
                Domain::Real => true,
            }
    }
}

/// A point domain, a distance and the t-definer its triangle inequality uses.
///
/// Spaces are immutable and cheap to clone.
#[derive(Clone)]
pub struct StarMetricSpace {
    name: String,
    star: TDefiner,
    dist: DistFn,
    domains: Vec<Domain>,
    pseudometric: bool,
}

impl fmt::Debug for StarMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StarMetricSpace")
            .field("name", &self.name)
            .field("star", &self.star.name())
            .field("arity", &self.arity())
            .field("pseudometric", &self.pseudometric)
            .finish()
    }
}

impl StarMetricSpace {
    /// A custom space; one [`Domain`] per coordinate.
    pub fn new(
        name: impl Into<String>,
        star: TDefiner,
        domains: Vec<Domain>,
        dist: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if domains.is_empty() {
            return Err(Error::Usage("a space needs arity at least 1".into()));
        }
        Ok(StarMetricSpace {
            name: name.into(),
            star,
            dist: Arc::new(dist),
            domains,
            pseudometric: false,
        })
    }

    /// Marks the space as a ⋆-pseudometric (distinct points may be at distance 0).
    pub fn into_pseudometric(mut self) -> Self {
        self.pseudometric = true;
        self
    }

    /// The same distance, with the triangle inequality judged under `star`.
    pub fn with_star(&self, star: TDefiner) -> Self {
        StarMetricSpace {
            name: format!("{} under {}", self.name, star.name()),
            star,
            ..self.clone()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn star(&self) -> &TDefiner {
        &self.star
    }

    pub fn arity(&self) -> usize {
        self.domains.len()
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    pub fn is_pseudometric(&self) -> bool {
        self.pseudometric
    }

    /// Checks arity and coordinate domains.
    pub fn validate(&self, p: &Point) -> Result<()> {
        if p.arity() != self.arity() {
            return Err(Error::Usage(format!(
                "point {:?} has arity {}, space {} has arity {}",
                p.coords(),
                p.arity(),
                self.name,
                self.arity()
            )));
        }
        for (i, (&v, d)) in p.coords().iter().zip(&self.domains).enumerate() {
            if !d.contains(v) {
                return Err(Error::Domain(format!(
                    "point {:?}: coordinate {} = {} is outside {:?} required by {}",
                    p.coords(),
                    i + 1,
                    v,
                    d,
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn validate_set(&self, points: &PointSet) -> Result<()> {
        for (i, p) in points.iter().enumerate() {
            self.validate(p).map_err(|e| match e {
                Error::Domain(m) => Error::Domain(format!("point #{}: {m}", i + 1)),
                Error::Usage(m) => Error::Usage(format!("point #{}: {m}", i + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.validate(p).is_ok()
    }

    /// Checked distance.
    pub fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        self.validate(x)?;
        self.validate(y)?;
        Ok((self.dist)(x.coords(), y.coords()))
    }

    /// Distance between validated points.
    #[inline]
    pub fn dist_raw(&self, x: &[f64], y: &[f64]) -> f64 {
        (self.dist)(x, y)
    }
}

/// `d(a, b) = (a ⊸ b) ⋆ (b ⊸ a)` on `[0, ∞)`.
///
/// If the residuum has to be bisected and fails to converge, the distance
/// is NaN, which every downstream check treats as a failure.
pub fn induced_metric(star: &TDefiner, cfg: &ToleranceConfig) -> Result<StarMetricSpace> {
    cfg.validate()?;
    let cfg = *cfg;
    let op = star.clone();
    StarMetricSpace::new(
        format!("induced({})", star.name()),
        star.clone(),
        vec![Domain::NonNegative],
        move |x, y| {
            let (a, b) = (x[0], y[0]);
            match (op.residuum(a, b, &cfg), op.residuum(b, a, &cfg)) {
                (Ok(ab), Ok(ba)) => op.apply_raw(ab, ba),
                _ => f64::NAN,
            }
        },
    )
}

/// `d_L(a, b) = |b − a|` or `d_s(a, b) = √|b² − a²|` on all of ℝ.
///
/// The `s` version vanishes on `b = −a`, so it is registered as a
/// ⋆-pseudometric.
pub fn signed_line_space(star: &TDefiner) -> Result<StarMetricSpace> {
    match star.name() {
        "lukasiewicz" => StarMetricSpace::new(
            "signed_line(lukasiewicz)",
            star.clone(),
            vec![Domain::Real],
            |x, y| (y[0] - x[0]).abs(),
        ),
        "s" => Ok(StarMetricSpace::new(
            "signed_line(s)",
            star.clone(),
            vec![Domain::Real],
            |x, y| ((y[0] - x[0]) * (y[0] + x[0])).abs().sqrt(),
        )?
        .into_pseudometric()),
        other => Err(Error::Unsupported(format!(
            "the signed line extension exists only for lukasiewicz and s, not {other}"
        ))),
    }
}

struct Factors {
    spaces: Vec<StarMetricSpace>,
    offsets: Vec<usize>,
    domains: Vec<Domain>,
    pseudometric: bool,
}

fn split_factors(factors: &[StarMetricSpace]) -> Result<Factors> {
    let first = factors
        .first()
        .ok_or_else(|| Error::Usage("a product needs at least one factor".into()))?;
    if let Some(f) = factors.iter().find(|f| f.star().name() != first.star().name()) {
        return Err(Error::Usage(format!(
            "all factors must share one t-definer: {} uses {}, {} uses {}",
            first.name(),
            first.star().name(),
            f.name(),
            f.star().name()
        )));
    }
    let mut offsets = Vec::with_capacity(factors.len() + 1);
    let mut domains = Vec::new();
    offsets.push(0);
    for f in factors {
        domains.extend_from_slice(f.domains());
        offsets.push(domains.len());
    }
    Ok(Factors {
        spaces: factors.to_vec(),
        offsets,
        domains,
        pseudometric: factors.iter().any(|f| f.is_pseudometric()),
    })
}

impl Factors {
    fn distances<'a>(&'a self, x: &'a [f64], y: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        self.spaces.iter().enumerate().map(move |(i, f)| {
            let (lo, hi) = (self.offsets[i], self.offsets[i + 1]);
            f.dist_raw(&x[lo..hi], &y[lo..hi])
        })
    }

    fn names(&self) -> String {
        self.spaces.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")
    }

    fn finish(
        self,
        name: String,
        star: TDefiner,
        dist: impl Fn(&Factors, &[f64], &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<StarMetricSpace> {
        let pseudo = self.pseudometric;
        let domains = self.domains.clone();
        let space = StarMetricSpace::new(name, star, domains, move |x, y| dist(&self, x, y))?;
        Ok(if pseudo { space.into_pseudometric() } else { space })
    }
}

/// `d_max(x̄, ȳ) = max_i d_i(x_i, y_i)`.
pub fn product_max(factors: &[StarMetricSpace]) -> Result<StarMetricSpace> {
    let parts = split_factors(factors)?;
    let name = format!("product_max({})", parts.names());
    let star = factors[0].star().clone();
    parts.finish(name, star, |f, x, y| f.distances(x, y).fold(0.0, f64::max))
}

/// `d_T(x̄, ȳ) = d_1(x_1, y_1) ⋆ … ⋆ d_n(x_n, y_n)`, folded left in factor order.
pub fn product_t(factors: &[StarMetricSpace]) -> Result<StarMetricSpace> {
    let parts = split_factors(factors)?;
    let name = format!("product_T({})", parts.names());
    let star = factors[0].star().clone();
    let op = star.clone();
    parts.finish(name, star, move |f, x, y| op.fold(f.distances(x, y)))
}

/// `d_E(x̄, ȳ) = √(Σ d_i(x_i, y_i)²)`, only for ordinary (⋆_L) metric factors.
pub fn euclidean_product_l(factors: &[StarMetricSpace]) -> Result<StarMetricSpace> {
    if let Some(f) = factors.iter().find(|f| f.star().name() != "lukasiewicz") {
        return Err(Error::Unsupported(format!(
            "the Euclidean product needs lukasiewicz factors; {} uses {}",
            f.name(),
            f.star().name()
        )));
    }
    let parts = split_factors(factors)?;
    let name = format!("euclidean_L({})", parts.names());
    let star = factors[0].star().clone();
    parts.finish(name, star, |f, x, y| {
        f.distances(x, y).map(|d| d * d).sum::<f64>().sqrt()
    })
}

/// How a space is assembled from a built-in t-definer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    #[serde(rename = "induced")]
    Induced,
    #[serde(rename = "signed_line")]
    SignedLine,
    #[serde(rename = "product_max")]
    ProductMax,
    #[serde(rename = "product_T")]
    ProductT,
    #[serde(rename = "euclidean_L")]
    EuclideanL,
}

impl Construction {
    pub const NAMES: [&'static str; 5] = [
        "induced",
        "signed_line",
        "product_max",
        "product_T",
        "euclidean_L",
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Construction::Induced => "induced",
            Construction::SignedLine => "signed_line",
            Construction::ProductMax => "product_max",
            Construction::ProductT => "product_T",
            Construction::EuclideanL => "euclidean_L",
        }
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "induced" => Construction::Induced,
            "signed_line" => Construction::SignedLine,
            "product_max" => Construction::ProductMax,
            "product_T" => Construction::ProductT,
            "euclidean_L" => Construction::EuclideanL,
            other => {
                return Err(Error::Usage(format!(
                    "unknown construction {other:?}; expected one of {}",
                    Construction::NAMES.join(", ")
                )))
            }
        })
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The scalar factor used by product constructions: the real line for
/// ⋆_L (where `|b − a|` is an ordinary metric), the induced space on
/// `[0, ∞)` otherwise.
pub fn product_factor(star: &TDefiner, cfg: &ToleranceConfig) -> Result<StarMetricSpace> {
    if star.name() == "lukasiewicz" {
        signed_line_space(star)
    } else {
        induced_metric(star, cfg)
    }
}

/// Builds a space from the `(t-definer, construction, arity)` namespace.
pub fn build_space(
    tdefiner: &str,
    construction: Construction,
    arity: usize,
    cfg: &ToleranceConfig,
) -> Result<StarMetricSpace> {
    let star = TDefiner::builtin(tdefiner)?;
    if arity == 0 {
        return Err(Error::Usage("arity must be positive".into()));
    }
    let scalar_only = |c: Construction| {
        if arity != 1 {
            Err(Error::Usage(format!("{c} spaces have arity 1, got {arity}")))
        } else {
            Ok(())
        }
    };
    match construction {
        Construction::Induced => {
            scalar_only(construction)?;
            induced_metric(&star, cfg)
        }
        Construction::SignedLine => {
            scalar_only(construction)?;
            signed_line_space(&star)
        }
        Construction::ProductMax => product_max(&vec![product_factor(&star, cfg)?; arity]),
        Construction::ProductT => product_t(&vec![product_factor(&star, cfg)?; arity]),
        Construction::EuclideanL => {
            euclidean_product_l(&vec![product_factor(&star, cfg)?; arity])
        }
    }
}

pub const LAW_M1: &str = "M1 identity of indiscernibles";
pub const LAW_M1_WEAK: &str = "M1' reflexivity";
pub const LAW_M2: &str = "M2 symmetry";
pub const LAW_M3: &str = "M3* star triangle";

/// Options for [`check_star_metric_axioms`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheckOptions {
    /// Check M1′ (`x = y ⇒ d = 0`) instead of M1.
    pub pseudometric: bool,
    /// Above this many triples, that many are drawn uniformly instead.
    pub triple_budget: u64,
    pub seed: u64,
}

impl Default for AxiomCheckOptions {
    fn default() -> Self {
        AxiomCheckOptions {
            pseudometric: false,
            triple_budget: 1_000_000,
            seed: 0,
        }
    }
}

const MATRIX_LIMIT: usize = 2048;

/// Checks M1 (or M1′) and M2 on all `N²` ordered pairs and M3⋆ on all `N³`
/// ordered triples, or on `triple_budget` seeded uniform triples when `N³`
/// exceeds it. Comparisons use `abs_tol`; distinct points closer than
/// `abs_tol` but not at exactly zero are M1 violations flagged as
/// tolerance-ambiguous.
pub fn check_star_metric_axioms(
    space: &StarMetricSpace,
    points: &PointSet,
    cfg: &ToleranceConfig,
    opts: &AxiomCheckOptions,
) -> Result<LawReport> {
    space.validate_set(points)?;
    let tol = cfg.abs_tol;
    let pts = points.points();
    let n = pts.len();
    let star = space.star();

    let matrix: Option<Vec<f64>> = (n <= MATRIX_LIMIT).then(|| {
        let mut m = Vec::with_capacity(n * n);
        for x in pts {
            for y in pts {
                m.push(space.dist_raw(x.coords(), y.coords()));
            }
        }
        m
    });
    let d = |i: usize, j: usize| match &matrix {
        Some(m) => m[i * n + j],
        None => space.dist_raw(pts[i].coords(), pts[j].coords()),
    };
    let coords = |idx: &[usize]| idx.iter().map(|&i| pts[i].coords().to_vec()).collect();

    let mut m1 = LawCheck::new(if opts.pseudometric { LAW_M1_WEAK } else { LAW_M1 });
    let mut m2 = LawCheck::new(LAW_M2);
    let mut m3 = LawCheck::new(LAW_M3);
    let mut pair_checks = 0u64;

    for i in 0..n {
        for j in 0..n {
            pair_checks += 1;
            let dij = d(i, j);
            let same = pts[i] == pts[j];
            let m1_violation = if same {
                (!(dij <= tol)).then(|| Witness {
                    inputs: coords(&[i, j]),
                    lhs: dij,
                    rhs: 0.0,
                    margin: dij,
                    tolerance_ambiguous: false,
                })
            } else if !opts.pseudometric && !(dij > tol) {
                Some(Witness {
                    inputs: coords(&[i, j]),
                    lhs: dij,
                    rhs: tol,
                    margin: tol - dij,
                    tolerance_ambiguous: dij > 0.0,
                })
            } else {
                None
            };
            m1.record(m1_violation);

            let dji = d(j, i);
            let gap = (dij - dji).abs();
            m2.record((!(gap <= tol)).then(|| Witness {
                inputs: coords(&[i, j]),
                lhs: dij,
                rhs: dji,
                margin: gap,
                tolerance_ambiguous: false,
            }));
        }
    }

    let mut triangle = |x: usize, y: usize, z: usize| {
        let lhs = d(x, y);
        let rhs = star.apply_raw(d(x, z), d(z, y));
        m3.record((!(lhs <= rhs + tol)).then(|| Witness {
            inputs: coords(&[x, y, z]),
            lhs,
            rhs,
            margin: lhs - rhs,
            tolerance_ambiguous: lhs - rhs <= tol,
        }));
    };

    let total = (n as u64).saturating_pow(3);
    let sampled = total > opts.triple_budget;
    if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.triple_budget {
            let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            triangle(x, y, z);
        }
    } else {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    triangle(x, y, z);
                }
            }
        }
    }

    let mut report = LawReport::new(format!(
        "star-metric axioms: {} under {}",
        space.name(),
        star.name()
    ));
    let triangle_checks = m3.samples_tested;
    report.checks = vec![m1, m2, m3];
    report.tolerances = vec![("abs_tol".into(), tol)];
    report.sample_seed = sampled.then_some(opts.seed);
    report.counters = vec![
        ("points".into(), n as u64),
        ("pair_checks".into(), pair_checks),
        ("triangle_checks".into(), triangle_checks),
    ];
    Ok(report)
}

/// Re-evaluates a reported violation. Returns `true` when it still fails.
pub fn replay_witness(
    space: &StarMetricSpace,
    law: &str,
    witness: &Witness,
    cfg: &ToleranceConfig,
) -> Result<bool> {
    let pts: Vec<Point> = witness
        .inputs
        .iter()
        .map(|c| Point::new(c.clone()))
        .collect::<Result<_>>()?;
    let need = |k: usize| {
        if pts.len() == k {
            Ok(())
        } else {
            Err(Error::Usage(format!("{law} witnesses carry {k} points, got {}", pts.len())))
        }
    };
    let tol = cfg.abs_tol;
    match law {
        LAW_M1 | LAW_M1_WEAK => {
            need(2)?;
            let d = space.dist(&pts[0], &pts[1])?;
            Ok(if pts[0] == pts[1] {
                !(d <= tol)
            } else {
                law == LAW_M1 && !(d > tol)
            })
        }
        LAW_M2 => {
            need(2)?;
            let gap = (space.dist(&pts[0], &pts[1])? - space.dist(&pts[1], &pts[0])?).abs();
            Ok(!(gap <= tol))
        }
        LAW_M3 => {
            need(3)?;
            let lhs = space.dist(&pts[0], &pts[1])?;
            let rhs = space
                .star()
                .apply(space.dist(&pts[0], &pts[2])?, space.dist(&pts[2], &pts[1])?)?;
            Ok(!(lhs <= rhs + tol))
        }
        other => Err(Error::Usage(format!("unknown law {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn d(space: &StarMetricSpace, x: impl Into<Point>, y: impl Into<Point>) -> f64 {
        space.dist(&x.into(), &y.into()).unwrap()
    }

    #[test]
    fn induced_examples() {
        let c = &cfg();
        let l = induced_metric(&TDefiner::lukasiewicz(), c).unwrap();
        assert_eq!(d(&l, 3.0, 5.0), 2.0);
        let m = induced_metric(&TDefiner::maximum(), c).unwrap();
        assert_eq!(d(&m, 4.0, 4.0), 0.0);
        assert_eq!(d(&m, 2.0, 7.0), 7.0);
        let p = induced_metric(&TDefiner::p(), c).unwrap();
        assert_eq!(d(&p, 1.0, 25.0), 16.0);
        let s = induced_metric(&TDefiner::s(), c).unwrap();
        assert_eq!(d(&s, 3.0, 5.0), 4.0);
    }

    #[test]
    fn induced_rejects_negative_points() {
        let p = induced_metric(&TDefiner::p(), &cfg()).unwrap();
        assert!(matches!(p.dist(&(-1.0).into(), &1.0.into()), Err(Error::Domain(_))));
    }

    #[test]
    fn induced_matches_named_formulas() {
        let c = &cfg();
        let spaces: Vec<(StarMetricSpace, fn(f64, f64) -> f64)> = vec![
            (induced_metric(&TDefiner::lukasiewicz(), c).unwrap(), |a, b| (b - a).abs()),
            (induced_metric(&TDefiner::maximum(), c).unwrap(), |a, b| {
                if a == b {
                    0.0
                } else {
                    a.max(b)
                }
            }),
            (induced_metric(&TDefiner::s(), c).unwrap(), |a, b| (b * b - a * a).abs().sqrt()),
            (induced_metric(&TDefiner::p(), c).unwrap(), |a, b| (b.sqrt() - a.sqrt()).powi(2)),
        ];
        for (space, formula) in &spaces {
            for i in 0..30 {
                for j in 0..30 {
                    let (a, b) = (i as f64 * 0.37, j as f64 * 0.41);
                    let got = d(space, a, b);
                    let want = formula(a, b);
                    assert!((got - want).abs() <= 1e-9 * (1.0 + want), "{}: d({a},{b}) {got} vs {want}", space.name());
                }
            }
        }
    }

    #[test]
    fn signed_line_examples() {
        let l = signed_line_space(&TDefiner::lukasiewicz()).unwrap();
        assert_eq!(d(&l, -2.0, 3.0), 5.0);
        assert!(!l.is_pseudometric());
        let s = signed_line_space(&TDefiner::s()).unwrap();
        assert_eq!(d(&s, -3.0, 3.0), 0.0);
        assert_eq!(d(&s, 0.0, 5.0), 5.0);
        assert!(s.is_pseudometric());
        assert!(matches!(signed_line_space(&TDefiner::p()), Err(Error::Unsupported(_))));
        assert!(matches!(signed_line_space(&TDefiner::maximum()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn signed_s_line_fails_m1_but_passes_as_pseudometric() {
        let s = signed_line_space(&TDefiner::s()).unwrap();
        let pts = PointSet::from_scalars(&[-3.0, 3.0, 1.0]).unwrap();
        let strict = AxiomCheckOptions::default();
        let report = check_star_metric_axioms(&s, &pts, &cfg(), &strict).unwrap();
        let m1 = report.check(LAW_M1).unwrap();
        assert!(!m1.passed);
        assert!(!m1.witness.as_ref().unwrap().tolerance_ambiguous);
        let pseudo = AxiomCheckOptions { pseudometric: true, ..strict };
        assert!(check_star_metric_axioms(&s, &pts, &cfg(), &pseudo).unwrap().passed());
    }

    #[test]
    fn product_examples() {
        let c = &cfg();
        let dl = induced_metric(&TDefiner::lukasiewicz(), c).unwrap();
        let dp = induced_metric(&TDefiner::p(), c).unwrap();
        let dm = induced_metric(&TDefiner::maximum(), c).unwrap();

        let pmax = product_max(&[dl.clone(), dl.clone()]).unwrap();
        assert_eq!(d(&pmax, [0.0, 0.0], [1.0, 2.0]), 2.0);
        let pmax_p = product_max(&[dp.clone(), dp.clone()]).unwrap();
        assert_eq!(d(&pmax_p, [1.0, 1.0], [25.0, 16.0]), 16.0);

        let pt = product_t(&[dl.clone(), dl.clone()]).unwrap();
        assert_eq!(d(&pt, [0.0, 0.0], [1.0, 2.0]), 3.0);
        let pt_m = product_t(&[dm.clone(), dm.clone()]).unwrap();
        assert_eq!(d(&pt_m, [0.0, 0.0], [2.0, 7.0]), 7.0);

        let pe = euclidean_product_l(&[dl.clone(), dl.clone()]).unwrap();
        assert_eq!(d(&pe, [0.0, 0.0], [3.0, 4.0]), 5.0);
        assert_eq!(d(&pe, [3.0, 4.0], [3.0, 4.0]), 0.0);
    }

    #[test]
    fn single_factor_products_equal_the_factor() {
        let c = &cfg();
        for star in TDefiner::builtins() {
            let f = induced_metric(&star, c).unwrap();
            let pm = product_max(std::slice::from_ref(&f)).unwrap();
            let pt = product_t(std::slice::from_ref(&f)).unwrap();
            for i in 0..20 {
                for j in 0..20 {
                    let (a, b) = (i as f64 * 0.7, j as f64 * 1.3);
                    let base = d(&f, a, b);
                    assert_eq!(d(&pm, a, b), base);
                    assert_eq!(d(&pt, a, b), base);
                }
            }
        }
        let l = signed_line_space(&TDefiner::lukasiewicz()).unwrap();
        let pe = euclidean_product_l(std::slice::from_ref(&l)).unwrap();
        for x in [-3.5, -1.0, 0.0, 0.25, 7.0] {
            assert_eq!(d(&pe, x, 1.5), d(&l, x, 1.5));
        }
    }

    #[test]
    fn product_errors() {
        let c = &cfg();
        let dl = induced_metric(&TDefiner::lukasiewicz(), c).unwrap();
        let dp = induced_metric(&TDefiner::p(), c).unwrap();
        assert!(matches!(product_max(&[dl.clone(), dp.clone()]), Err(Error::Usage(_))));
        assert!(matches!(product_t(&[dl.clone(), dp.clone()]), Err(Error::Usage(_))));
        assert!(matches!(product_max(&[]), Err(Error::Usage(_))));
        assert!(matches!(euclidean_product_l(&[dp.clone(), dp]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn build_space_namespace() {
        let c = &cfg();
        let s = build_space("p", Construction::Induced, 1, c).unwrap();
        assert_eq!(s.arity(), 1);
        let s = build_space("max", Construction::ProductT, 3, c).unwrap();
        assert_eq!(s.arity(), 3);
        assert_eq!(s.domains(), &[Domain::NonNegative; 3]);
        let s = build_space("lukasiewicz", Construction::EuclideanL, 2, c).unwrap();
        assert_eq!(s.domains(), &[Domain::Real; 2]);
        assert!(build_space("p", Construction::Induced, 2, c).is_err());
        assert!(build_space("p", Construction::EuclideanL, 2, c).is_err());
        assert!(build_space("max", Construction::SignedLine, 1, c).is_err());
        assert!(build_space("q", Construction::Induced, 1, c).is_err());
        for name in Construction::NAMES {
            assert_eq!(name.parse::<Construction>().unwrap().as_str(), name);
        }
    }

    #[test]
    fn worked_points_pass_under_p_and_fail_under_addition() {
        let p = induced_metric(&TDefiner::p(), &cfg()).unwrap();
        let pts = PointSet::from_scalars(&[1.0, 16.0, 25.0]).unwrap();
        let opts = AxiomCheckOptions::default();
        let report = check_star_metric_axioms(&p, &pts, &cfg(), &opts).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.counter("pair_checks"), Some(9));
        assert_eq!(report.counter("triangle_checks"), Some(27));

        let forced = p.with_star(TDefiner::lukasiewicz());
        let report = check_star_metric_axioms(&forced, &pts, &cfg(), &opts).unwrap();
        let m3 = report.check(LAW_M3).unwrap();
        assert!(!m3.passed);
        let w = m3.witness.as_ref().unwrap();
        assert_eq!(w.inputs, vec![vec![1.0], vec![25.0], vec![16.0]]);
        assert_eq!((w.lhs, w.rhs, w.margin), (16.0, 10.0, 6.0));
        assert!(replay_witness(&forced, LAW_M3, w, &cfg()).unwrap());
        assert!(!replay_witness(&p, LAW_M3, w, &cfg()).unwrap());
    }

    #[test]
    fn ultrametric_passes_under_every_builtin() {
        let m = induced_metric(&TDefiner::maximum(), &cfg()).unwrap();
        let pts = PointSet::from_scalars(&[0.0, 0.5, 1.0, 2.0, 2.5, 7.0, 7.0, 11.0]).unwrap();
        for star in TDefiner::builtins() {
            let report =
                check_star_metric_axioms(&m.with_star(star), &pts, &cfg(), &AxiomCheckOptions::default())
                    .unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn tolerance_ambiguous_m1() {
        let tiny = StarMetricSpace::new("tiny", TDefiner::lukasiewicz(), vec![Domain::Real], |x, y| {
            if x[0] == y[0] {
                0.0
            } else {
                1e-12
            }
        })
        .unwrap();
        let pts = PointSet::from_scalars(&[0.0, 1.0]).unwrap();
        let report =
            check_star_metric_axioms(&tiny, &pts, &cfg(), &AxiomCheckOptions::default()).unwrap();
        let w = report.check(LAW_M1).unwrap().witness.clone().unwrap();
        assert!(w.tolerance_ambiguous);
    }

    #[test]
    fn budget_sampling_is_seeded() {
        let l = induced_metric(&TDefiner::lukasiewicz(), &cfg()).unwrap();
        let pts = PointSet::from_scalars(&(0..20).map(f64::from).collect::<Vec<_>>()).unwrap();
        let opts = AxiomCheckOptions {
            triple_budget: 500,
            seed: 7,
            ..AxiomCheckOptions::default()
        };
        let a = check_star_metric_axioms(&l, &pts, &cfg(), &opts).unwrap();
        let b = check_star_metric_axioms(&l, &pts, &cfg(), &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sample_seed, Some(7));
        assert_eq!(a.counter("triangle_checks"), Some(500));
        assert_eq!(a.counter("pair_checks"), Some(400));
    }

    #[test]
    fn axiom_check_names_the_offending_point() {
        let p = induced_metric(&TDefiner::p(), &cfg()).unwrap();
        let pts = PointSet::from_scalars(&[1.0, -4.0]).unwrap();
        match check_star_metric_axioms(&p, &pts, &cfg(), &AxiomCheckOptions::default()) {
            Err(Error::Domain(msg)) => assert!(msg.contains("point #2"), "{msg}"),
            other => panic!("expected domain error, got {other:?}"),
        }
    }
}
