//! Experiment reports and their CSV / JSON forms.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::rng::RngHandle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Measured tables with no pass/fail claim.
    Info,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// How an estimate is compared with its reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Check {
    /// `|estimate − reference| ≤ tolerance`.
    Equality {
        tolerance: f64,
    },
    /// `estimate ≤ reference + half_width`.
    UpperBound,
    /// `estimate ≥ reference − half_width`.
    LowerBound,
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub n: usize,
    pub samples: u64,
    pub estimate: f64,
    pub half_width: f64,
    pub reference: f64,
    pub check: Check,
    pub verdict: Verdict,
    pub seed: RngHandle,
    /// Plain sample mean when `estimate` is a robust estimator.
    pub plain_mean: Option<f64>,
}

impl ExperimentReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        n: usize,
        samples: u64,
        estimate: f64,
        half_width: f64,
        reference: f64,
        check: Check,
        seed: RngHandle,
    ) -> Self {
        let verdict = match check {
            Check::Equality { tolerance } => {
                Verdict::from_bool((estimate - reference).abs() <= tolerance)
            }
            Check::UpperBound => Verdict::from_bool(estimate <= reference + half_width),
            Check::LowerBound => Verdict::from_bool(estimate >= reference - half_width),
            Check::Informational => Verdict::Info,
        };
        Self {
            name: name.to_string(),
            n,
            samples,
            estimate,
            half_width,
            reference,
            check,
            verdict,
            seed,
            plain_mean: None,
        }
    }

    pub fn with_plain_mean(mut self, m: f64) -> Self {
        self.plain_mean = Some(m);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{:<4} {:<20} n={:<3} estimate={:.6} ± {:.3e} reference={:.6} samples={}",
            self.verdict.as_str().to_uppercase(),
            self.name,
            self.n,
            self.estimate,
            self.half_width,
            self.reference,
            self.samples
        )
    }
}

pub const CSV_HEADER: &str = "name,n,samples,estimate,half_width,reference,verdict,seed";

fn csv_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        String::new()
    }
}

pub fn reports_to_csv(reports: &[ExperimentReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.name,
            r.n,
            r.samples,
            csv_float(r.estimate),
            csv_float(r.half_width),
            csv_float(r.reference),
            r.verdict.as_str(),
            r.seed.seed
        ));
    }
    out
}

/// Sorted-key JSON array.
pub fn reports_to_json(reports: &[ExperimentReport]) -> String {
    let v = Value::Array(reports.iter().map(ExperimentReport::to_json).collect());
    serde_json::to_string_pretty(&v).expect("reports serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        let s = RngHandle::new(1);
        let r = ExperimentReport::new(
            "x",
            2,
            10,
            2.1,
            0.05,
            2.0,
            Check::Equality { tolerance: 0.2 },
            s,
        );
        assert_eq!(r.verdict, Verdict::Pass);
        let r = ExperimentReport::new(
            "x",
            2,
            10,
            2.3,
            0.05,
            2.0,
            Check::Equality { tolerance: 0.2 },
            s,
        );
        assert_eq!(r.verdict, Verdict::Fail);
        let r = ExperimentReport::new("x", 2, 10, 3.04, 0.05, 3.0, Check::UpperBound, s);
        assert_eq!(r.verdict, Verdict::Pass);
        let r = ExperimentReport::new("x", 2, 10, 3.06, 0.05, 3.0, Check::UpperBound, s);
        assert_eq!(r.verdict, Verdict::Fail);
        let r = ExperimentReport::new("x", 2, 10, 0.46, 0.05, 0.5, Check::LowerBound, s);
        assert_eq!(r.verdict, Verdict::Pass);
        let r = ExperimentReport::new("x", 2, 10, 1e9, 0.0, f64::NAN, Check::Informational, s);
        assert!(r.passed());
    }

    #[test]
    fn csv_and_json_layout() {
        let r = ExperimentReport::new(
            "det_moment",
            2,
            100,
            2.0,
            0.1,
            2.0,
            Check::UpperBound,
            RngHandle::new(9),
        );
        let csv = reports_to_csv(std::slice::from_ref(&r));
        assert_eq!(
            csv,
            format!("{CSV_HEADER}\ndet_moment,2,100,2,0.1,2,pass,9\n")
        );
        let v: Value = serde_json::from_str(&reports_to_json(&[r])).unwrap();
        assert_eq!(v[0]["verdict"], "pass");
        assert_eq!(v[0]["check"]["kind"], "upper_bound");
        let keys: Vec<&String> = v[0].as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
