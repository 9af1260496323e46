use std::fmt;

use serde::{Deserialize, Serialize};

/// Evidence for a single failed law: the inputs that break it and by how much.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// The sampled inputs, in the order the law names them.
    pub inputs: Vec<Vec<f64>>,
    /// Left-hand side of the violated relation.
    pub lhs: f64,
    /// Right-hand side of the violated relation.
    pub rhs: f64,
    /// How far the relation is violated (positive means broken).
    pub margin: f64,
    /// Set when the violation is within numerical noise rather than clear-cut.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub tolerance_ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawCheck {
    pub law: String,
    pub passed: bool,
    pub samples_tested: u64,
    pub violations: u64,
    /// First violation found, if any.
    pub witness: Option<Witness>,
}

impl LawCheck {
    pub fn new(law: impl Into<String>) -> Self {
        LawCheck {
            law: law.into(),
            passed: true,
            samples_tested: 0,
            violations: 0,
            witness: None,
        }
    }

    /// Records one sample; `violation` carries the witness when the law fails.
    pub fn record(&mut self, violation: Option<Witness>) {
        self.samples_tested += 1;
        if let Some(w) = violation {
            self.violations += 1;
            self.passed = false;
            if self.witness.is_none() {
                self.witness = Some(w);
            }
        }
    }
}

/// Structured pass/fail evidence for a suite of sampled laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub suite: String,
    pub checks: Vec<LawCheck>,
    /// Named tolerances the suite compared against.
    pub tolerances: Vec<(String, f64)>,
    /// Seed used when the suite subsampled its inputs.
    pub sample_seed: Option<u64>,
    /// Free-form counters (for example per-region membership counts).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counters: Vec<(String, u64)>,
}

impl LawReport {
    pub fn new(suite: impl Into<String>) -> Self {
        LawReport {
            suite: suite.into(),
            checks: Vec::new(),
            tolerances: Vec::new(),
            sample_seed: None,
            counters: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, law: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == law)
    }

    pub fn counter(&self, name: &str) -> Option<u64> {
        self.counters.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.suite, if self.passed() { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            write!(
                f,
                "  {:<28} {} ({} samples",
                c.law,
                if c.passed { "pass" } else { "FAIL" },
                c.samples_tested
            )?;
            if c.violations > 0 {
                write!(f, ", {} violations", c.violations)?;
            }
            write!(f, ")")?;
            if let Some(w) = &c.witness {
                write!(f, " witness {:?}: {} vs {} (margin {:e})", w.inputs, w.lhs, w.rhs, w.margin)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
