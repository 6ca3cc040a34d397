//! Structured result of a single inequality check.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

/// Outcome of a check. `Inconclusive` is reserved for comparisons where
/// both sides are infinite (or undefined).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Parameter value attached to a report.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Num(f64),
    Text(String),
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Num(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Num(v as f64)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Text(v)
    }
}

impl Serialize for ParamValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ParamValue::Num(v) => serialize_real(v, s),
            ParamValue::Text(t) => s.serialize_str(t),
        }
    }
}

/// Finite reals as JSON numbers; `inf`, `-inf` and `nan` as strings.
pub fn serialize_real<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// One inequality check: `margin ≥ −tolerance` means pass. The margin is
/// sign-normalized so that it is `lhs − rhs` for `lhs ≥ rhs` checks and
/// `rhs − lhs` for `lhs ≤ rhs` checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    #[serde(serialize_with = "serialize_real")]
    pub lhs: f64,
    #[serde(serialize_with = "serialize_real")]
    pub rhs: f64,
    #[serde(serialize_with = "serialize_real")]
    pub margin: f64,
    #[serde(serialize_with = "serialize_real")]
    pub tolerance: f64,
    pub pass: bool,
    pub params: BTreeMap<String, ParamValue>,
    pub seed: u64,
    #[serde(skip)]
    pub verdict: Verdict,
}

/// How a check treats `+∞` on the side that is supposed to be larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfinityPolicy {
    /// `+∞` large side passes, `−∞` fails, both infinite is inconclusive.
    Standard,
    /// `+∞` on the large side passes regardless of the small side.
    LargeInfinitePasses,
}

fn decide(small: f64, large: f64, tol: f64, policy: InfinityPolicy) -> (f64, Verdict) {
    if small.is_nan() || large.is_nan() {
        return (f64::NAN, Verdict::Inconclusive);
    }
    if large == f64::INFINITY && policy == InfinityPolicy::LargeInfinitePasses {
        return (f64::INFINITY, Verdict::Pass);
    }
    match (small.is_infinite(), large.is_infinite()) {
        (true, true) if small == large => (f64::NAN, Verdict::Inconclusive),
        (_, true) if large > 0.0 => (f64::INFINITY, Verdict::Pass),
        (_, true) => (f64::NEG_INFINITY, Verdict::Fail),
        (true, false) if small > 0.0 => (f64::NEG_INFINITY, Verdict::Fail),
        (true, false) => (f64::INFINITY, Verdict::Pass),
        (false, false) => {
            let margin = large - small;
            let v = if margin >= -tol { Verdict::Pass } else { Verdict::Fail };
            (margin, v)
        }
    }
}

impl VerificationReport {
    fn build(name: &str, lhs: f64, rhs: f64, margin: f64, tol: f64, verdict: Verdict) -> Self {
        let mut params = BTreeMap::new();
        if verdict == Verdict::Inconclusive {
            params.insert("status".to_string(), ParamValue::from("inconclusive"));
        }
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            margin,
            tolerance: tol,
            pass: verdict == Verdict::Pass,
            params,
            seed: 0,
            verdict,
        }
    }

    /// Check of `lhs ≥ rhs − tol`.
    pub fn at_least(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let (margin, verdict) = decide(rhs, lhs, tol, InfinityPolicy::Standard);
        Self::build(name, lhs, rhs, margin, tol, verdict)
    }

    /// Check of `lhs ≤ rhs + tol`.
    pub fn at_most(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::at_most_with(name, lhs, rhs, tol, InfinityPolicy::Standard)
    }

    pub fn at_most_with(name: &str, lhs: f64, rhs: f64, tol: f64, policy: InfinityPolicy) -> Self {
        let (margin, verdict) = decide(lhs, rhs, tol, policy);
        Self::build(name, lhs, rhs, margin, tol, verdict)
    }

    /// Boolean check (e.g. majorization) carried as margin and tolerance.
    pub fn from_margin(name: &str, lhs: f64, rhs: f64, margin: f64, tol: f64) -> Self {
        let verdict = if margin.is_nan() {
            Verdict::Inconclusive
        } else if margin >= -tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self::build(name, lhs, rhs, margin, tol, verdict)
    }

    pub fn with_param(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Multiplies the tolerance by `scale` and re-decides finite margins.
    pub fn rescale_tolerance(mut self, scale: f64) -> Self {
        self.tolerance *= scale;
        if self.margin.is_finite() && self.verdict != Verdict::Inconclusive {
            self.verdict = if self.margin >= -self.tolerance { Verdict::Pass } else { Verdict::Fail };
            self.pass = self.verdict == Verdict::Pass;
        }
        self
    }

    pub fn is_inconclusive(&self) -> bool {
        self.verdict == Verdict::Inconclusive
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Counts over a sequence of reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

impl SuiteSummary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut s = SuiteSummary { total: reports.len(), passed: 0, failed: 0, inconclusive: 0 };
        for r in reports {
            match r.verdict {
                Verdict::Pass => s.passed += 1,
                Verdict::Fail => s.failed += 1,
                Verdict::Inconclusive => s.inconclusive += 1,
            }
        }
        s
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.inconclusive == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margins_and_verdicts() {
        let r = VerificationReport::at_least("x", 2.0, 1.0, 0.0);
        assert!(r.pass && r.margin == 1.0);
        let r = VerificationReport::at_least("x", 1.0, 1.5, 0.4);
        assert!(!r.pass && r.verdict == Verdict::Fail);
        let r = VerificationReport::at_most("x", 1.0, 1.2, 0.0);
        assert!(r.pass && (r.margin - 0.2).abs() < 1e-15);
        let r = VerificationReport::at_most("x", 1.0, 0.999, 0.01);
        assert!(r.pass && r.margin < 0.0);
    }

    #[test]
    fn infinity_conventions() {
        assert!(VerificationReport::at_least("x", f64::INFINITY, 5.0, 0.0).pass);
        assert!(!VerificationReport::at_least("x", f64::NEG_INFINITY, 5.0, 0.0).pass);
        let r = VerificationReport::at_least("x", f64::INFINITY, f64::INFINITY, 0.0);
        assert!(r.is_inconclusive() && !r.pass);
        assert_eq!(r.params["status"], ParamValue::from("inconclusive"));
        let r = VerificationReport::at_most_with("x", f64::INFINITY, f64::INFINITY, 0.0, InfinityPolicy::LargeInfinitePasses);
        assert!(r.pass);
        assert!(VerificationReport::at_most("x", 0.0, f64::INFINITY, 0.0).pass);
        assert!(!VerificationReport::at_most("x", f64::INFINITY, 3.0, 0.0).pass);
    }

    #[test]
    fn json_schema() {
        let r = VerificationReport::at_least("epi", 1.0, f64::NEG_INFINITY, 1e-3).with_param("p", 2.0).with_seed(7);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, ["lhs", "margin", "name", "params", "pass", "rhs", "seed", "tolerance"]);
        assert_eq!(v["rhs"], "-inf");
        assert_eq!(v["margin"], "inf");
        assert_eq!(v["params"]["p"], 2.0);
        assert_eq!(v["seed"], 7);
    }

    #[test]
    fn summary_counts() {
        let reports = vec![
            VerificationReport::at_least("a", 1.0, 0.0, 0.0),
            VerificationReport::at_least("b", 0.0, 1.0, 0.0),
            VerificationReport::at_least("c", f64::INFINITY, f64::INFINITY, 0.0),
        ];
        let s = SuiteSummary::of(&reports);
        assert_eq!((s.total, s.passed, s.failed, s.inconclusive), (3, 1, 1, 1));
        assert!(!s.all_passed());
    }
}
