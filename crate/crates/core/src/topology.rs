//! Constructive procedures on the ⋆-metric topology.
//!
//! Each procedure returns the object its existence argument builds: the
//! interior radius `ε = d(x, y) ⊸ r` for a point of an open ball, the
//! Hausdorff separation radius `s` with `s ⋆ s < d(a, b)`, the ball covers
//! separating two finite sets, and the ball-inclusion chain between the
//! product metrics. Membership tests are plain strict comparisons; every
//! numerical back-off happens when radii are constructed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{product_max, product_t, StarMetricSpace};
use crate::point::{Point, PointSet};
use crate::report::{LawCheck, LawReport, Witness};
use crate::tdefiner::{TDefiner, ToleranceConfig};

/// The open ball `N_r(a) = { b : d(a, b) < r }`.
#[derive(Debug, Clone)]
pub struct Ball<'a> {
    space: &'a StarMetricSpace,
    center: Point,
    radius: f64,
}

impl<'a> Ball<'a> {
    pub fn new(space: &'a StarMetricSpace, center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Usage(format!("ball radius must be positive and finite, got {radius}")));
        }
        space.validate(&center)?;
        Ok(Ball { space, center, radius })
    }

    pub fn space(&self) -> &'a StarMetricSpace {
        self.space
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Distance from the center to a validated point.
    pub fn distance_to(&self, p: &Point) -> Result<f64> {
        self.space.dist(&self.center, p)
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        Ok(self.distance_to(p)? < self.radius)
    }
}

/// The candidates lying in the ball, in input order.
pub fn ball_members(ball: &Ball<'_>, candidates: &PointSet) -> Result<Vec<Point>> {
    ball.space.validate_set(candidates)?;
    Ok(candidates
        .iter()
        .filter(|p| ball.space.dist_raw(ball.center.coords(), p.coords()) < ball.radius)
        .cloned()
        .collect())
}

/// `ε = d(center, y) ⊸ r`: every `z` with `d(y, z) < ε` is in the ball.
pub fn interior_witness(ball: &Ball<'_>, y: &Point, cfg: &ToleranceConfig) -> Result<f64> {
    let d = ball.distance_to(y)?;
    if !(d < ball.radius) {
        return Err(Error::Usage(format!(
            "{:?} is not inside the ball: distance {d} >= radius {}",
            y.coords(),
            ball.radius
        )));
    }
    let eps = ball.space.star().residuum(d, ball.radius, cfg)?;
    if !(eps > 0.0) {
        return Err(Error::Usage(format!(
            "{:?} lies on the boundary of the ball to working precision",
            y.coords()
        )));
    }
    Ok(eps)
}

/// Largest `s` (up to bisection tolerance, then backed off by `abs_tol`)
/// with `s ⋆ s < r`.
pub fn self_fold_bound(star: &TDefiner, r: f64, cfg: &ToleranceConfig) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Usage(format!("bound must be positive and finite, got {r}")));
    }
    let g = |s: f64| star.apply_raw(s, s);
    let (mut lo, mut hi) = (0.0_f64, r);
    let mut converged = false;
    for _ in 0..cfg.max_bisection_iters {
        if hi - lo <= cfg.numeric_residuum_tol {
            converged = true;
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            converged = true;
            break;
        }
        if g(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if !converged && hi - lo > cfg.numeric_residuum_tol {
        return Err(Error::NoConvergence {
            lo,
            hi,
            iterations: cfg.max_bisection_iters,
        });
    }
    if lo == 0.0 {
        // r is below the bracket resolution; continuity gives some r/2^k.
        lo = std::iter::successors(Some(r * 0.5), |s| Some(s * 0.5))
            .take(1100)
            .find(|&s| s > 0.0 && g(s) < r)
            .ok_or_else(|| Error::Domain(format!("no s > 0 with s ⋆ s < {r} found")))?;
        return Ok(lo);
    }
    let backed = lo - cfg.abs_tol;
    Ok(if backed > 0.0 { backed } else { lo * 0.5 })
}

/// A radius `s > 0` with `s ⋆ s < d(a, b)`; the balls `N_s(a)` and `N_s(b)`
/// are then disjoint.
pub fn separation_radius(
    space: &StarMetricSpace,
    a: &Point,
    b: &Point,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let d = space.dist(a, b)?;
    if !(d > 0.0) {
        return Err(Error::Usage(format!(
            "{:?} and {:?} are indiscernible (distance {d})",
            a.coords(),
            b.coords()
        )));
    }
    self_fold_bound(space.star(), d, cfg)
}

/// Ball covers `U ⊇ A` and `V ⊇ B` with `U ∩ V = ∅`.
#[derive(Debug, Clone)]
pub struct NormalSeparation<'a> {
    pub u: Vec<Ball<'a>>,
    pub v: Vec<Ball<'a>>,
    /// Radius around each point of A whose ball misses B (after shrinking).
    pub exclusion_a: Vec<f64>,
    pub exclusion_b: Vec<f64>,
}

impl NormalSeparation<'_> {
    fn covers(balls: &[Ball<'_>], p: &Point) -> bool {
        balls
            .iter()
            .any(|b| b.space.dist_raw(b.center.coords(), p.coords()) < b.radius)
    }

    /// First candidate lying in both `U` and `V`, if any.
    pub fn shared_candidate<'p>(&self, candidates: &'p PointSet) -> Option<&'p Point> {
        candidates
            .iter()
            .find(|p| Self::covers(&self.u, p) && Self::covers(&self.v, p))
    }
}

fn exclusion_radius(space: &StarMetricSpace, x: &Point, others: &PointSet, cfg: &ToleranceConfig) -> Result<f64> {
    let r = others
        .iter()
        .map(|o| space.dist_raw(x.coords(), o.coords()))
        .fold(f64::INFINITY, f64::min);
    if !(r > 0.0) {
        return Err(Error::Usage(format!(
            "{:?} is at distance 0 from the other set",
            x.coords()
        )));
    }
    let shrunk = r - cfg.abs_tol;
    Ok(if shrunk > 0.0 { shrunk } else { r * 0.5 })
}

/// Separates two finite, disjoint point sets by unions of balls.
///
/// For `a ∈ A`, `r_a` is the smallest distance from `a` to `B` minus one
/// tolerance step, so `N_{r_a}(a)` misses `B`; the ball put into `U` has
/// radius `s_a` with `s_a ⋆ s_a < r_a`. `V` is built symmetrically.
pub fn normal_separation<'a>(
    space: &'a StarMetricSpace,
    a_set: &PointSet,
    b_set: &PointSet,
    cfg: &ToleranceConfig,
) -> Result<NormalSeparation<'a>> {
    space.validate_set(a_set)?;
    space.validate_set(b_set)?;
    for a in a_set {
        if let Some(b) = b_set.iter().find(|b| *b == a) {
            return Err(Error::Usage(format!(
                "the sets overlap at {:?}",
                b.coords()
            )));
        }
    }
    let cover = |from: &PointSet, against: &PointSet| -> Result<(Vec<Ball<'a>>, Vec<f64>)> {
        let mut balls = Vec::with_capacity(from.len());
        let mut radii = Vec::with_capacity(from.len());
        for x in from {
            let r = exclusion_radius(space, x, against, cfg)?;
            let s = self_fold_bound(space.star(), r, cfg)?;
            balls.push(Ball::new(space, x.clone(), s)?);
            radii.push(r);
        }
        Ok((balls, radii))
    };
    let (u, exclusion_a) = cover(a_set, b_set)?;
    let (v, exclusion_b) = cover(b_set, a_set)?;
    Ok(NormalSeparation {
        u,
        v,
        exclusion_a,
        exclusion_b,
    })
}

pub const LAW_T_IN_MAX: &str = "N_r^T within N_r^max";
pub const LAW_MAX_IN_FOLD: &str = "N_r^max within N_(r*..*r)^T";

/// Checks `N_r^T(a) ⊆ N_r^max(a) ⊆ N_{r⋆…⋆r}^T(a)` pointwise on the candidates.
pub fn product_ball_inclusion_check(
    factors: &[StarMetricSpace],
    star: &TDefiner,
    center: &Point,
    r: f64,
    candidates: &PointSet,
) -> Result<LawReport> {
    if let Some(f) = factors.iter().find(|f| f.star().name() != star.name()) {
        return Err(Error::Usage(format!(
            "factor {} uses {}, expected {}",
            f.name(),
            f.star().name(),
            star.name()
        )));
    }
    let taxi = product_t(factors)?;
    let maxi = product_max(factors)?;
    let small_t = Ball::new(&taxi, center.clone(), r)?;
    let max_ball = Ball::new(&maxi, center.clone(), r)?;
    let folded = star.power(r, factors.len());
    let big_t = Ball::new(&taxi, center.clone(), folded)?;
    taxi.validate_set(candidates)?;

    let mut first = LawCheck::new(LAW_T_IN_MAX);
    let mut second = LawCheck::new(LAW_MAX_IN_FOLD);
    let (mut n_small, mut n_max, mut n_big, mut n_out) = (0u64, 0u64, 0u64, 0u64);
    for p in candidates {
        let dt = taxi.dist_raw(center.coords(), p.coords());
        let dm = maxi.dist_raw(center.coords(), p.coords());
        let in_small = dt < small_t.radius();
        let in_max = dm < max_ball.radius();
        let in_big = dt < big_t.radius();
        n_small += u64::from(in_small);
        n_max += u64::from(in_max);
        n_big += u64::from(in_big);
        n_out += u64::from(!(in_small || in_max || in_big));
        let w = |lhs: f64, rhs: f64| Witness {
            inputs: vec![center.coords().to_vec(), p.coords().to_vec()],
            lhs,
            rhs,
            margin: rhs - lhs,
            tolerance_ambiguous: false,
        };
        first.record((in_small && !in_max).then(|| w(dm, r)));
        second.record((in_max && !in_big).then(|| w(dt, folded)));
    }

    let mut report = LawReport::new(format!(
        "product ball inclusion: {} factors under {}",
        factors.len(),
        star.name()
    ));
    report.checks = vec![first, second];
    report.tolerances = vec![("radius".into(), r), ("folded_radius".into(), folded)];
    report.counters = vec![
        ("in_T".into(), n_small),
        ("in_max".into(), n_max),
        ("in_folded_T".into(), n_big),
        ("outside_all".into(), n_out),
    ];
    Ok(report)
}

/// Axis-aligned rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let ok = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite())
            && x_min <= x_max
            && y_min <= y_max;
        if !ok {
            return Err(Error::Usage(format!(
                "invalid window [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Window { x_min, x_max, y_min, y_max })
    }

    pub fn square(half_width: f64) -> Result<Self> {
        Window::new(-half_width, half_width, -half_width, half_width)
    }
}

/// Cell values of a membership grid.
pub const CELL_OUT: u8 = 0;
pub const CELL_IN: u8 = 1;
pub const CELL_BOUNDARY: u8 = 2;

/// Ball membership sampled on a regular grid over a window.
///
/// Row 0 is the top edge (`y = y_max`), column 0 the left edge
/// (`x = x_min`); both edges are sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipGrid {
    pub resolution: usize,
    pub window: Window,
    pub center: Vec<f64>,
    pub radius: f64,
    pub space: String,
    pub cells: Vec<u8>,
}

fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        0.5 * (lo + hi)
    } else {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    }
}

impl MembershipGrid {
    pub fn x(&self, col: usize) -> f64 {
        axis(self.window.x_min, self.window.x_max, self.resolution, col)
    }

    pub fn y(&self, row: usize) -> f64 {
        axis(self.window.y_max, self.window.y_min, self.resolution, row)
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.resolution + col]
    }

    pub fn count(&self, value: u8) -> usize {
        self.cells.iter().filter(|&&c| c == value).count()
    }

    /// Plain PGM (P2), maxval 2.
    pub fn to_pgm(&self) -> String {
        let mut out = format!(
            "P2\n# starmetric ball-grid space={} center={},{} radius={} window={},{},{},{}\n{} {}\n2\n",
            self.space,
            self.center[0],
            self.center[1],
            self.radius,
            self.window.x_min,
            self.window.x_max,
            self.window.y_min,
            self.window.y_max,
            self.resolution,
            self.resolution
        );
        for row in self.cells.chunks(self.resolution) {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// One line per cell: `row,col,x,y,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,x,y,value\n");
        for row in 0..self.resolution {
            for col in 0..self.resolution {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row,
                    col,
                    self.x(col),
                    self.y(row),
                    self.get(row, col)
                ));
            }
        }
        out
    }
}

/// Samples ball membership over a window of a two-coordinate space.
///
/// Cells with `|d − r| < abs_tol` are marked [`CELL_BOUNDARY`].
pub fn ball_grid(
    space: &StarMetricSpace,
    center: &Point,
    r: f64,
    window: &Window,
    resolution: usize,
    cfg: &ToleranceConfig,
) -> Result<MembershipGrid> {
    if space.arity() != 2 {
        return Err(Error::Usage(format!(
            "ball grids need a two-coordinate space, {} has arity {}",
            space.name(),
            space.arity()
        )));
    }
    if resolution == 0 {
        return Err(Error::Usage("resolution must be positive".into()));
    }
    let ball = Ball::new(space, center.clone(), r)?;
    for (x, y) in [
        (window.x_min, window.y_min),
        (window.x_max, window.y_max),
        (window.x_min, window.y_max),
        (window.x_max, window.y_min),
    ] {
        space.validate(&Point::new(vec![x, y])?)?;
    }
    let mut grid = MembershipGrid {
        resolution,
        window: *window,
        center: center.coords().to_vec(),
        radius: r,
        space: space.name().to_owned(),
        cells: Vec::with_capacity(resolution * resolution),
    };
    for row in 0..resolution {
        let y = grid.y(row);
        for col in 0..resolution {
            let x = grid.x(col);
            let d = space.dist_raw(ball.center().coords(), &[x, y]);
            grid.cells.push(if (d - r).abs() < cfg.abs_tol {
                CELL_BOUNDARY
            } else if d < r {
                CELL_IN
            } else {
                CELL_OUT
            });
        }
    }
    Ok(grid)
}
