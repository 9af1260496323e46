//! T-definers and their residuums.
//!
//! A t-definer is a binary operator `⋆` on `[0, ∞)` that is commutative,
//! associative, nondecreasing in each argument, has `0` as identity and is
//! continuous. Its residuum is
//!
//! ```text
//! a ⊸ b = min { c ≥ 0 : c ⋆ a ≥ b }
//! ```
//!
//! and satisfies the residuation property `c ≥ a ⊸ b  ⇔  c ⋆ a ≥ b`.
//!
//! Residuums are evaluated in closed form when one was registered with the
//! operator, otherwise by bisection on `c ↦ c ⋆ a` over `[0, b]` (`b` is
//! always feasible because `b ⋆ a ≥ b`). User-defined operators without a
//! closed form pay the bisection cost on every residuum call.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{LawCheck, LawReport, Witness};

/// Shared binary function on non-negative reals.
pub type BinaryFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Stable names of the built-in t-definers.
pub const BUILTIN_NAMES: [&str; 4] = ["lukasiewicz", "max", "s", "p"];

/// Continuity probe step sizes, from coarse to fine.
pub const CONTINUITY_LADDER: [f64; 3] = [1e-2, 1e-4, 1e-6];

/// Numerical tolerances shared by the whole crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Absolute slack for comparing real values.
    pub abs_tol: f64,
    /// Target bracket width for bisection (both in argument and value space).
    pub numeric_residuum_tol: f64,
    pub max_bisection_iters: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            abs_tol: 1e-9,
            numeric_residuum_tol: 1e-10,
            max_bisection_iters: 200,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !finite_nonneg(self.abs_tol) || !finite_nonneg(self.numeric_residuum_tol) {
            return Err(Error::Usage(
                "tolerances must be finite and non-negative".into(),
            ));
        }
        if self.max_bisection_iters == 0 {
            return Err(Error::Usage("max_bisection_iters must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_operand(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::Domain(format!("{name} = {v} is not finite")));
    }
    if v < 0.0 {
        return Err(Error::Domain(format!("{name} = {v} is negative")));
    }
    Ok(())
}

/// A named t-definer with an optional closed-form residuum.
///
/// Cloning is cheap; the operator and residuum are shared.
#[derive(Clone)]
pub struct TDefiner {
    name: String,
    description: String,
    apply: BinaryFn,
    residuum_closed_form: Option<BinaryFn>,
}

impl fmt::Debug for TDefiner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TDefiner")
            .field("name", &self.name)
            .field("closed_form_residuum", &self.residuum_closed_form.is_some())
            .finish()
    }
}

impl TDefiner {
    /// Registers an operator. Nothing about it is checked here; run
    /// [`check_tdefiner_axioms`] to gather evidence that it is a t-definer.
    pub fn new(
        name: impl Into<String>,
        description: impl Into<String>,
        apply: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TDefiner {
            name: name.into(),
            description: description.into(),
            apply: Arc::new(apply),
            residuum_closed_form: None,
        }
    }

    /// Attaches a closed-form residuum `(a, b) ↦ a ⊸ b`.
    pub fn with_residuum(
        mut self,
        residuum: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.residuum_closed_form = Some(Arc::new(residuum));
        self
    }

    /// `a ⋆ b = a + b`.
    pub fn lukasiewicz() -> Self {
        TDefiner::new("lukasiewicz", "a + b", |a, b| a + b)
            .with_residuum(|a, b| if a >= b { 0.0 } else { b - a })
    }

    /// `a ⋆ b = max(a, b)`, the weakest t-definer.
    pub fn maximum() -> Self {
        TDefiner::new("max", "max(a, b)", f64::max)
            .with_residuum(|a, b| if a >= b { 0.0 } else { b })
    }

    /// `a ⋆ b = √(a² + b²)`.
    pub fn s() -> Self {
        TDefiner::new("s", "sqrt(a^2 + b^2)", f64::hypot).with_residuum(|a, b| {
            if a >= b {
                0.0
            } else {
                ((b - a) * (b + a)).sqrt()
            }
        })
    }

    /// `a ⋆ b = (√a + √b)²`, evaluated as `a + b + 2√(ab)` so that `a ⋆ 0 = a`
    /// and `a ⋆ b ≥ max(a, b)` hold exactly in floating point.
    pub fn p() -> Self {
        TDefiner::new("p", "(sqrt(a) + sqrt(b))^2", |a, b| a + b + 2.0 * (a * b).sqrt())
            .with_residuum(|a, b| {
                if a >= b {
                    0.0
                } else {
                    let d = b.sqrt() - a.sqrt();
                    d * d
                }
            })
    }

    /// Looks up a built-in by its stable name.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "lukasiewicz" => Ok(TDefiner::lukasiewicz()),
            "max" => Ok(TDefiner::maximum()),
            "s" => Ok(TDefiner::s()),
            "p" => Ok(TDefiner::p()),
            other => Err(Error::Usage(format!(
                "unknown t-definer {other:?}; expected one of {}",
                BUILTIN_NAMES.join(", ")
            ))),
        }
    }

    pub fn builtins() -> Vec<TDefiner> {
        vec![
            TDefiner::lukasiewicz(),
            TDefiner::maximum(),
            TDefiner::s(),
            TDefiner::p(),
        ]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn has_closed_form_residuum(&self) -> bool {
        self.residuum_closed_form.is_some()
    }

    /// `a ⋆ b` with domain checking.
    pub fn apply(&self, a: f64, b: f64) -> Result<f64> {
        check_operand("a", a)?;
        check_operand("b", b)?;
        Ok((self.apply)(a, b))
    }

    /// `a ⋆ b` without domain checking, for inner loops over validated data.
    #[inline]
    pub fn apply_raw(&self, a: f64, b: f64) -> f64 {
        (self.apply)(a, b)
    }

    /// Left fold `v₁ ⋆ v₂ ⋆ … ⋆ vₙ` in the given order; the empty fold is `0`.
    pub fn fold(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        let mut iter = values.into_iter();
        match iter.next() {
            Some(first) => iter.fold(first, |acc, v| (self.apply)(acc, v)),
            None => 0.0,
        }
    }

    /// `r ⋆ r ⋆ … ⋆ r` with `n` copies.
    pub fn power(&self, r: f64, n: usize) -> f64 {
        self.fold(std::iter::repeat(r).take(n))
    }

    /// `a ⊸ b`, in closed form when available and by bisection otherwise.
    pub fn residuum(&self, a: f64, b: f64, cfg: &ToleranceConfig) -> Result<f64> {
        check_operand("a", a)?;
        check_operand("b", b)?;
        match &self.residuum_closed_form {
            Some(f) => Ok(f(a, b)),
            None => self.bisect_residuum(a, b, cfg),
        }
    }

    /// `a ⊸ b` by bisection, ignoring any closed form.
    pub fn residuum_numeric(&self, a: f64, b: f64, cfg: &ToleranceConfig) -> Result<f64> {
        check_operand("a", a)?;
        check_operand("b", b)?;
        self.bisect_residuum(a, b, cfg)
    }

    /// `a ⊸ b` by the registered closed form only.
    pub fn residuum_closed(&self, a: f64, b: f64) -> Result<f64> {
        check_operand("a", a)?;
        check_operand("b", b)?;
        match &self.residuum_closed_form {
            Some(f) => Ok(f(a, b)),
            None => Err(Error::Unsupported(format!(
                "t-definer {} has no closed-form residuum",
                self.name
            ))),
        }
    }

    /// `a ⊸ b` by the requested route.
    pub fn residuum_with(
        &self,
        method: ResiduumMethod,
        a: f64,
        b: f64,
        cfg: &ToleranceConfig,
    ) -> Result<f64> {
        match method {
            ResiduumMethod::Auto => self.residuum(a, b, cfg),
            ResiduumMethod::Closed => self.residuum_closed(a, b),
            ResiduumMethod::Numeric => self.residuum_numeric(a, b, cfg),
        }
    }

    /// Smallest `c` in `[0, b]` with `c ⋆ a ≥ b`.
    ///
    /// Returns the left end of the final bracket, so the result never
    /// overshoots the true minimum by more than rounding. The bracket is
    /// considered closed once both its width and the spread of `c ⋆ a` over
    /// it are within `numeric_residuum_tol`, or once its ends are adjacent
    /// floats.
    fn bisect_residuum(&self, a: f64, b: f64, cfg: &ToleranceConfig) -> Result<f64> {
        let f = |c: f64| (self.apply)(c, a);
        if f(0.0) >= b {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = (0.0_f64, b);
        let mut f_lo = f(lo);
        let mut f_hi = f(hi);
        if f_hi < b {
            return Err(Error::Domain(format!(
                "{}: {b} ⋆ {a} = {f_hi} < {b}; the operator is not a t-definer here",
                self.name
            )));
        }
        let tol = cfg.numeric_residuum_tol;
        for _ in 0..cfg.max_bisection_iters {
            if hi - lo <= tol && f_hi - f_lo <= tol {
                return Ok(lo);
            }
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                return Ok(lo);
            }
            let f_mid = f(mid);
            if f_mid >= b {
                hi = mid;
                f_hi = f_mid;
            } else {
                lo = mid;
                f_lo = f_mid;
            }
        }
        if hi - lo <= tol && f_hi - f_lo <= tol {
            return Ok(lo);
        }
        Err(Error::NoConvergence {
            lo,
            hi,
            iterations: cfg.max_bisection_iters,
        })
    }
}

/// Which residuum route to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResiduumMethod {
    /// Closed form when registered, bisection otherwise.
    Auto,
    Closed,
    Numeric,
}

/// Sample-based position of one t-definer relative to another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    /// `a ⋆₁ b ≤ a ⋆₂ b` on every sample.
    WeakerOrEqual,
    /// `a ⋆₁ b ≥ a ⋆₂ b` on every sample.
    StrongerOrEqual,
    Equal,
    IncomparableOnSamples,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub first: String,
    pub second: String,
    pub verdict: Ordering,
    pub samples: usize,
    /// First sample with `a ⋆₁ b > a ⋆₂ b` beyond tolerance.
    pub first_above: Option<(f64, f64)>,
    /// First sample with `a ⋆₁ b < a ⋆₂ b` beyond tolerance.
    pub first_below: Option<(f64, f64)>,
}

/// Pointwise comparison of two t-definers on the given `(a, b)` samples.
///
/// The verdict only speaks for the samples; there is no global maximum of
/// this order to compare against.
pub fn compare(
    first: &TDefiner,
    second: &TDefiner,
    samples: &[(f64, f64)],
    cfg: &ToleranceConfig,
) -> Result<Comparison> {
    if samples.is_empty() {
        return Err(Error::Usage("compare needs at least one sample pair".into()));
    }
    let mut first_above = None;
    let mut first_below = None;
    for &(a, b) in samples {
        let x = first.apply(a, b)?;
        let y = second.apply(a, b)?;
        if x > y + cfg.abs_tol && first_above.is_none() {
            first_above = Some((a, b));
        }
        if y > x + cfg.abs_tol && first_below.is_none() {
            first_below = Some((a, b));
        }
        if first_above.is_some() && first_below.is_some() {
            break;
        }
    }
    let verdict = match (first_above, first_below) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::WeakerOrEqual,
        (Some(_), None) => Ordering::StrongerOrEqual,
        (Some(_), Some(_)) => Ordering::IncomparableOnSamples,
    };
    Ok(Comparison {
        first: first.name().to_owned(),
        second: second.name().to_owned(),
        verdict,
        samples: samples.len(),
        first_above,
        first_below,
    })
}

fn validate_triples(triples: &[(f64, f64, f64)]) -> Result<()> {
    if triples.is_empty() {
        return Err(Error::Usage("at least one sample triple is required".into()));
    }
    for &(a, b, c) in triples {
        check_operand("a", a)?;
        check_operand("b", b)?;
        check_operand("c", c)?;
    }
    Ok(())
}

fn witness(inputs: &[f64], lhs: f64, rhs: f64, margin: f64) -> Witness {
    Witness {
        inputs: inputs.iter().map(|&v| vec![v]).collect(),
        lhs,
        rhs,
        margin,
        tolerance_ambiguous: false,
    }
}

/// `lhs == rhs` within `tol`.
fn equal_within(inputs: &[f64], lhs: f64, rhs: f64, tol: f64) -> Option<Witness> {
    let gap = (lhs - rhs).abs();
    // NaN must fail as well
    if gap <= tol {
        None
    } else {
        Some(witness(inputs, lhs, rhs, gap))
    }
}

/// `lhs ≤ rhs` within `tol`.
fn at_most(inputs: &[f64], lhs: f64, rhs: f64, tol: f64) -> Option<Witness> {
    if lhs <= rhs + tol {
        None
    } else {
        Some(witness(inputs, lhs, rhs, lhs - rhs))
    }
}

pub const LAW_T1: &str = "T1 commutativity";
pub const LAW_T2: &str = "T2 associativity";
pub const LAW_T3: &str = "T3 monotonicity";
pub const LAW_T4: &str = "T4 identity";
pub const LAW_T5: &str = "T5 continuity (sampled)";
pub const LAW_LOWER_BOUND: &str = "dominates max";

/// Sampled evidence for T1–T5 and `a ⋆ b ≥ max(a, b)`.
///
/// T1–T4 are checked within `abs_tol` on every triple. Continuity cannot be
/// certified by sampling; T5 passes when `|(a+δ) ⋆ b − a ⋆ b|` shrinks to at
/// most half of its previous value (plus `10·abs_tol`) at every rung of
/// [`CONTINUITY_LADDER`].
pub fn check_tdefiner_axioms(
    star: &TDefiner,
    triples: &[(f64, f64, f64)],
    cfg: &ToleranceConfig,
) -> Result<LawReport> {
    validate_triples(triples)?;
    let tol = cfg.abs_tol;
    let op = |x: f64, y: f64| star.apply_raw(x, y);

    let mut t1 = LawCheck::new(LAW_T1);
    let mut t2 = LawCheck::new(LAW_T2);
    let mut t3 = LawCheck::new(LAW_T3);
    let mut t4 = LawCheck::new(LAW_T4);
    let mut t5 = LawCheck::new(LAW_T5);
    let mut lower = LawCheck::new(LAW_LOWER_BOUND);

    for &(a, b, c) in triples {
        t1.record(equal_within(&[a, b], op(a, b), op(b, a), tol));
        t2.record(equal_within(&[a, b, c], op(a, op(b, c)), op(op(a, b), c), tol));

        let (small, large) = if a <= b { (a, b) } else { (b, a) };
        t3.record(
            at_most(&[small, large, c], op(small, c), op(large, c), tol)
                .or_else(|| at_most(&[small, large, c], op(c, small), op(c, large), tol)),
        );

        t4.record(equal_within(&[a, 0.0], op(a, 0.0), a, tol));
        t4.record(equal_within(&[0.0, b], op(0.0, b), b, tol));

        let bound = a.max(b);
        let ab = op(a, b);
        lower.record(if ab >= bound - tol {
            None
        } else {
            Some(witness(&[a, b], ab, bound, bound - ab))
        });

        let mut prev: Option<f64> = None;
        let mut bad = None;
        for delta in CONTINUITY_LADDER {
            let jump = (op(a + delta, b) - ab).abs();
            if let Some(p) = prev {
                let allowed = 0.5 * p + 10.0 * tol;
                if !(jump <= allowed) && bad.is_none() {
                    bad = Some(Witness {
                        inputs: vec![vec![a], vec![b], vec![delta]],
                        lhs: jump,
                        rhs: allowed,
                        margin: jump - allowed,
                        tolerance_ambiguous: false,
                    });
                }
            }
            prev = Some(jump);
        }
        t5.record(bad);
    }

    let mut report = LawReport::new(format!("t-definer axioms: {}", star.name()));
    report.checks = vec![t1, t2, t3, t4, t5, lower];
    report.tolerances = vec![("abs_tol".into(), tol)];
    Ok(report)
}

pub const LAW_L1: &str = "L1 minimum attained";
pub const LAW_L2: &str = "L2 0 ⊸ a = a";
pub const LAW_L3: &str = "L3 zero iff a >= b";
pub const LAW_L4: &str = "L4 a ⋆ (a ⊸ b) = max";
pub const LAW_L5: &str = "L5 a⊸b >= (b⊸c)⊸(a⊸c)";
pub const LAW_L6: &str = "L6 a⊸b <= (a⊸c) ⋆ (c⊸b)";
pub const LAW_RESIDUATION: &str = "residuation";
pub const LAW_ANTITONE_A: &str = "antitone in a";
pub const LAW_MONOTONE_B: &str = "monotone in b";

/// Sampled evidence for the residuum laws on every `(a, b, c)` triple.
///
/// `tol` is the slack for all comparisons; it is also the one-sided margin
/// of the residuation check (`c ⋆ a ≥ b ⇒ c ≥ a⊸b − tol` and
/// `c ≥ a⊸b + tol ⇒ c ⋆ a ≥ b`).
pub fn check_residuum_laws(
    star: &TDefiner,
    triples: &[(f64, f64, f64)],
    method: ResiduumMethod,
    tol: f64,
    cfg: &ToleranceConfig,
) -> Result<LawReport> {
    validate_triples(triples)?;
    let op = |x: f64, y: f64| star.apply_raw(x, y);
    let res = |x: f64, y: f64| star.residuum_with(method, x, y, cfg);

    let mut l1 = LawCheck::new(LAW_L1);
    let mut l2 = LawCheck::new(LAW_L2);
    let mut l3 = LawCheck::new(LAW_L3);
    let mut l4 = LawCheck::new(LAW_L4);
    let mut l5 = LawCheck::new(LAW_L5);
    let mut l6 = LawCheck::new(LAW_L6);
    let mut residuation = LawCheck::new(LAW_RESIDUATION);
    let mut antitone = LawCheck::new(LAW_ANTITONE_A);
    let mut monotone = LawCheck::new(LAW_MONOTONE_B);

    for &(a, b, c) in triples {
        let r_ab = res(a, b)?;
        let r_ac = res(a, c)?;
        let r_cb = res(c, b)?;
        let r_bc = res(b, c)?;
        let input = [a, b, c];

        // Attained: r ⋆ a ≥ b. Minimal: the sampled c is no smaller unless infeasible.
        let attained = op(r_ab, a);
        l1.record(if attained >= b - tol {
            if op(c, a) >= b && c < r_ab - tol {
                Some(witness(&input, c, r_ab, r_ab - c))
            } else {
                None
            }
        } else {
            Some(witness(&input, attained, b, b - attained))
        });

        for x in [a, b, c] {
            l2.record(equal_within(&[0.0, x], res(0.0, x)?, x, tol));
        }

        l3.record(if a >= b {
            at_most(&[a, b], r_ab, 0.0, tol)
        } else if r_ab == 0.0 && a < b - tol {
            Some(witness(&[a, b], r_ab, 0.0, b - a))
        } else {
            None
        });

        l4.record(equal_within(&[a, b], op(a, r_ab), a.max(b), tol));

        let nested = res(r_bc, r_ac)?;
        l5.record(at_most(&input, nested, r_ab, tol));

        l6.record(at_most(&input, r_ab, op(r_ac, r_cb), tol));

        let feasible = op(c, a) >= b;
        residuation.record(if feasible && c < r_ab - tol {
            Some(witness(&[a, b, c], c, r_ab, r_ab - c))
        } else if !feasible && c >= r_ab + tol {
            Some(witness(&[a, b, c], op(c, a), b, b - op(c, a)))
        } else {
            None
        });

        // c doubles as a second first argument and as a second target.
        antitone.record(if a <= c {
            at_most(&input, r_cb, r_ab, tol)
        } else {
            at_most(&input, r_ab, r_cb, tol)
        });
        monotone.record(if b <= c {
            at_most(&input, r_ab, r_ac, tol)
        } else {
            at_most(&input, r_ac, r_ab, tol)
        });
    }

    let mut report = LawReport::new(format!(
        "residuum laws: {} ({:?})",
        star.name(),
        method
    ));
    report.checks = vec![l1, l2, l3, l4, l5, l6, residuation, antitone, monotone];
    report.tolerances = vec![
        ("tol".into(), tol),
        ("numeric_residuum_tol".into(), cfg.numeric_residuum_tol),
    ];
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    /// Smallest grid value `c = k·h` in `[0, b]` with `c ⋆ a ≥ b`.
    fn grid_inf(star: &TDefiner, a: f64, b: f64, h: f64) -> f64 {
        let steps = (b / h).ceil() as usize;
        (0..=steps)
            .map(|k| (k as f64 * h).min(b))
            .find(|&c| star.apply_raw(c, a) >= b)
            .unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(TDefiner::lukasiewicz().apply(2.0, 3.0).unwrap(), 5.0);
        assert_eq!(TDefiner::maximum().apply(2.0, 3.0).unwrap(), 3.0);
        assert_eq!(TDefiner::p().apply(1.0, 16.0).unwrap(), 25.0);
        assert_eq!(TDefiner::s().apply(3.0, 4.0).unwrap(), 5.0);
    }

    #[test]
    fn apply_rejects_bad_operands() {
        let l = TDefiner::lukasiewicz();
        assert!(matches!(l.apply(-1.0, 2.0), Err(Error::Domain(_))));
        assert!(matches!(l.apply(1.0, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(l.apply(f64::INFINITY, 0.0), Err(Error::Domain(_))));
        assert!(matches!(l.residuum(1.0, -2.0, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn builtin_namespace() {
        for name in BUILTIN_NAMES {
            assert_eq!(TDefiner::builtin(name).unwrap().name(), name);
        }
        assert!(matches!(TDefiner::builtin("min"), Err(Error::Usage(_))));
    }

    #[test]
    fn residuum_examples_against_grid_oracle() {
        let h = 1e-4;
        let cases = [
            (TDefiner::lukasiewicz(), 3.0, 5.0, 2.0),
            (TDefiner::s(), 3.0, 5.0, 4.0),
            (TDefiner::maximum(), 2.0, 7.0, 7.0),
        ];
        for (star, a, b, expected) in cases {
            let oracle = grid_inf(&star, a, b, h);
            assert!((oracle - expected).abs() <= h, "{}: oracle {oracle}", star.name());
            let got = star.residuum(a, b, &cfg()).unwrap();
            assert!((got - expected).abs() < 1e-12, "{}: {got}", star.name());
            let num = star.residuum_numeric(a, b, &cfg()).unwrap();
            assert!((num - expected).abs() < 1e-8, "{}: numeric {num}", star.name());
        }
        for star in TDefiner::builtins() {
            assert_eq!(star.residuum(5.0, 3.0, &cfg()).unwrap(), 0.0);
            assert_eq!(star.residuum_numeric(5.0, 3.0, &cfg()).unwrap(), 0.0);
        }
    }

    #[test]
    fn numeric_residuum_examples() {
        let p = TDefiner::p();
        let oracle = (25f64.sqrt() - 1f64.sqrt()).powi(2);
        let got = p.residuum_numeric(1.0, 25.0, &cfg()).unwrap();
        assert!((got - oracle).abs() < 1e-8, "{got}");
        assert!((TDefiner::lukasiewicz().residuum_numeric(0.0, 4.0, &cfg()).unwrap() - 4.0).abs() < 1e-9);
        assert!((TDefiner::s().residuum_numeric(0.0, 3.0, &cfg()).unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn numeric_residuum_never_overshoots() {
        // Left end of the bracket: infeasible or exactly the minimum.
        for star in TDefiner::builtins() {
            for &(a, b) in &[(1.0, 2.0), (0.3, 7.5), (4.0, 4.000001), (0.0, 9.0)] {
                let num = star.residuum_numeric(a, b, &cfg()).unwrap();
                let exact = star.residuum_closed(a, b).unwrap();
                assert!(num <= exact + 1e-12, "{} {a} {b}: {num} > {exact}", star.name());
            }
        }
    }

    #[test]
    fn bisection_reports_bracket_on_iteration_exhaustion() {
        let star = TDefiner::new("plain-sum", "a + b", |a, b| a + b);
        let tight = ToleranceConfig {
            max_bisection_iters: 3,
            ..ToleranceConfig::default()
        };
        match star.residuum(1.0, 9.0, &tight) {
            Err(Error::NoConvergence { lo, hi, iterations }) => {
                assert_eq!(iterations, 3);
                assert_eq!((lo, hi), (7.875, 9.0));
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
        // Without a closed form the default route is bisection.
        assert!((star.residuum(1.0, 9.0, &cfg()).unwrap() - 8.0).abs() < 1e-9);
        assert!(matches!(star.residuum_closed(1.0, 9.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn compare_examples() {
        let grid: Vec<(f64, f64)> = (0..=20)
            .flat_map(|i| (0..=20).map(move |j| (i as f64 * 0.5, j as f64 * 0.5)))
            .collect();
        let c = &cfg();
        let v = compare(&TDefiner::maximum(), &TDefiner::s(), &grid, c).unwrap();
        assert_eq!(v.verdict, Ordering::WeakerOrEqual);
        assert!(v.first_above.is_none() && v.first_below.is_some());
        let v = compare(&TDefiner::lukasiewicz(), &TDefiner::p(), &grid, c).unwrap();
        assert_eq!(v.verdict, Ordering::WeakerOrEqual);
        let v = compare(&TDefiner::p(), &TDefiner::s(), &grid, c).unwrap();
        assert_eq!(v.verdict, Ordering::StrongerOrEqual);
        for star in TDefiner::builtins() {
            assert_eq!(compare(&star, &star, &grid, c).unwrap().verdict, Ordering::Equal);
        }
        assert!(matches!(
            compare(&TDefiner::p(), &TDefiner::s(), &[], c),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn compare_detects_incomparable() {
        // Agrees with max below 1 and exceeds + above 1 on the diagonal.
        let odd = TDefiner::new("odd", "", |a: f64, b: f64| {
            if a.max(b) < 1.0 {
                a.max(b)
            } else {
                3.0 * (a + b)
            }
        });
        let v = compare(&odd, &TDefiner::lukasiewicz(), &[(0.5, 0.5), (2.0, 2.0)], &cfg()).unwrap();
        assert_eq!(v.verdict, Ordering::IncomparableOnSamples);
        assert_eq!(v.first_below, Some((0.5, 0.5)));
        assert_eq!(v.first_above, Some((2.0, 2.0)));
    }

    #[test]
    fn axiom_suite_builtins_pass_on_grid() {
        let grid: Vec<(f64, f64, f64)> = (0..6)
            .flat_map(|i| {
                (0..6).flat_map(move |j| (0..6).map(move |k| (i as f64 * 1.7, j as f64, k as f64 * 0.3)))
            })
            .collect();
        for star in TDefiner::builtins() {
            let report = check_tdefiner_axioms(&star, &grid, &cfg()).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn identity_violation_is_witnessed() {
        let shifted = TDefiner::new("shifted", "a + b + 1", |a, b| a + b + 1.0);
        let report = check_tdefiner_axioms(&shifted, &[(2.0, 0.0, 1.0)], &cfg()).unwrap();
        let t4 = report.check(LAW_T4).unwrap();
        assert!(!t4.passed);
        let w = t4.witness.as_ref().unwrap();
        assert_eq!(w.inputs, vec![vec![2.0], vec![0.0]]);
        assert_eq!(w.lhs, 3.0);
        assert!(report.check(LAW_T1).unwrap().passed);
        assert!(report.check(LAW_T2).unwrap().passed);
    }

    #[test]
    fn continuity_probe_flags_a_jump() {
        let jumpy = TDefiner::new("jumpy", "", |a: f64, b: f64| {
            let m = a.max(b);
            if m > 1.0 {
                a + b + 1.0
            } else {
                a + b
            }
        });
        let report = check_tdefiner_axioms(&jumpy, &[(1.0, 0.5, 0.0)], &cfg()).unwrap();
        assert!(!report.check(LAW_T5).unwrap().passed);
        // The square-root cusp of ⋆_p at 0 is continuous and must not trip it.
        let report = check_tdefiner_axioms(&TDefiner::p(), &[(0.0, 10.0, 0.0)], &cfg()).unwrap();
        assert!(report.check(LAW_T5).unwrap().passed, "{report}");
    }

    #[test]
    fn literal_clause_five_has_a_counterexample() {
        // a⊸b ≥ (a⊸c)⊸(c⊸b) fails at a=5, c=0, b=10 under addition;
        // the suite checks the form that follows from residuation instead.
        let l = TDefiner::lukasiewicz();
        let c = &cfg();
        let lhs = l.residuum(5.0, 10.0, c).unwrap();
        let literal = l
            .residuum(l.residuum(5.0, 0.0, c).unwrap(), l.residuum(0.0, 10.0, c).unwrap(), c)
            .unwrap();
        assert!(lhs < literal);
        let report = check_residuum_laws(&l, &[(5.0, 10.0, 0.0)], ResiduumMethod::Closed, 1e-9, c).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn residuum_laws_detect_a_wrong_closed_form() {
        let bad = TDefiner::new("bad", "a + b", |a, b| a + b).with_residuum(|a, b| (b - a).abs());
        let report =
            check_residuum_laws(&bad, &[(5.0, 3.0, 1.0)], ResiduumMethod::Closed, 1e-9, &cfg()).unwrap();
        assert!(!report.check(LAW_L3).unwrap().passed);
    }
}
