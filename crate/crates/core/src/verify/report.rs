use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub bandwidth: u64,
    /// Sample, shell or threshold index, depending on the quantity.
    pub index: u64,
    pub quantity: String,
    pub value: f64,
}

/// Acceptance predicate evaluated on the recorded observations only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Criterion {
    /// With `c_B` the maximum of `quantity` at bandwidth `B` (bandwidths ascending),
    /// `(c_last - c_{last-2}) / c_{last-2} < growth`. Fewer than three bandwidths is inconclusive.
    Plateau { quantity: String, growth: f64 },
    /// Every value of `quantity` lies in `[min, max]`.
    Within {
        quantity: String,
        min: Option<f64>,
        max: Option<f64>,
    },
    /// Values of `quantity` in index order never increase.
    NonIncreasing { quantity: String },
    /// Inconclusive unless every value of `quantity` equals 1.
    Requires { quantity: String },
    /// Worst verdict of the parts, with fail ranking below inconclusive.
    All { parts: Vec<Criterion> },
    /// Records data without judging it.
    Diagnostic,
}

fn values<'a>(obs: &'a [Observation], q: &'a str) -> impl Iterator<Item = &'a Observation> + 'a {
    obs.iter().filter(move |o| o.quantity == q)
}

impl Criterion {
    pub fn evaluate(&self, obs: &[Observation]) -> Verdict {
        match self {
            Criterion::Plateau { quantity, growth } => {
                let curve = max_by_bandwidth(obs, quantity);
                if curve.len() < 3 {
                    return Verdict::Inconclusive;
                }
                let last = curve[curve.len() - 1].1;
                let base = curve[curve.len() - 3].1;
                if !(last.is_finite() && base.is_finite()) {
                    return Verdict::Fail;
                }
                if (last - base) / base < *growth {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                }
            }
            Criterion::Within { quantity, min, max } => {
                let mut any = false;
                for o in values(obs, quantity) {
                    any = true;
                    let ok = o.value.is_finite()
                        && min.is_none_or(|m| o.value >= m)
                        && max.is_none_or(|m| o.value <= m);
                    if !ok {
                        return Verdict::Fail;
                    }
                }
                if any {
                    Verdict::Pass
                } else {
                    Verdict::Inconclusive
                }
            }
            Criterion::NonIncreasing { quantity } => {
                let mut seq: Vec<&Observation> = values(obs, quantity).collect();
                seq.sort_by_key(|o| (o.bandwidth, o.index));
                if seq.len() < 2 {
                    return Verdict::Inconclusive;
                }
                if seq.windows(2).all(|w| w[1].value <= w[0].value) {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                }
            }
            Criterion::Requires { quantity } => {
                let mut seq = values(obs, quantity).peekable();
                if seq.peek().is_some() && seq.all(|o| o.value == 1.0) {
                    Verdict::Pass
                } else {
                    Verdict::Inconclusive
                }
            }
            Criterion::All { parts } => parts
                .iter()
                .map(|c| c.evaluate(obs))
                .max_by_key(|v| match v {
                    Verdict::Pass => 0,
                    Verdict::Inconclusive => 1,
                    Verdict::Fail => 2,
                })
                .unwrap_or(Verdict::Inconclusive),
            Criterion::Diagnostic => Verdict::Inconclusive,
        }
    }
}

/// `(bandwidth, max value)` for `quantity`, bandwidths ascending.
pub fn max_by_bandwidth(obs: &[Observation], quantity: &str) -> Vec<(u64, f64)> {
    let mut by: BTreeMap<u64, f64> = BTreeMap::new();
    for o in values(obs, quantity) {
        let e = by.entry(o.bandwidth).or_insert(f64::NEG_INFINITY);
        // NaN propagates so that a broken sample cannot pass silently.
        *e = if o.value.is_nan() || e.is_nan() {
            f64::NAN
        } else {
            e.max(o.value)
        };
    }
    by.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    /// Every input needed to rerun the experiment, including the seed.
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub observations: Vec<Observation>,
    pub criterion: Criterion,
    pub verdict: Verdict,
    /// Empirical constants such as the largest observed ratio.
    pub constants: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(
        experiment: &str,
        parameters: BTreeMap<String, serde_json::Value>,
        observations: Vec<Observation>,
        criterion: Criterion,
    ) -> Self {
        let verdict = criterion.evaluate(&observations);
        ExperimentReport {
            experiment: experiment.to_string(),
            parameters,
            observations,
            criterion,
            verdict,
            constants: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_constant(mut self, name: &str, value: f64) -> Self {
        self.constants.insert(name.to_string(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Re-evaluates the stored criterion against the stored observations.
    pub fn recheck(&self) -> bool {
        self.criterion.evaluate(&self.observations) == self.verdict
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per observation: `bandwidth,index,quantity,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bandwidth,index,quantity,value\n");
        for o in &self.observations {
            let _ = writeln!(
                out,
                "{},{},{},{:e}",
                o.bandwidth, o.index, o.quantity, o.value
            );
        }
        out
    }

    pub fn max_of(&self, quantity: &str) -> f64 {
        values(&self.observations, quantity)
            .map(|o| o.value)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn obs(bandwidth: u64, index: u64, quantity: &str, value: f64) -> Observation {
    Observation {
        bandwidth,
        index,
        quantity: quantity.to_string(),
        value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plateau() -> Criterion {
        Criterion::Plateau {
            quantity: "c".into(),
            growth: 0.05,
        }
    }

    #[test]
    fn plateau_rule() {
        let flat = vec![
            obs(8, 0, "c", 1.0),
            obs(16, 0, "c", 1.02),
            obs(32, 0, "c", 1.04),
            obs(32, 1, "c", 0.5),
        ];
        assert_eq!(plateau().evaluate(&flat), Verdict::Pass);
        let growing = vec![
            obs(8, 0, "c", 1.0),
            obs(16, 0, "c", 1.5),
            obs(32, 0, "c", 2.0),
        ];
        assert_eq!(plateau().evaluate(&growing), Verdict::Fail);
        assert_eq!(plateau().evaluate(&growing[..2]), Verdict::Inconclusive);
        let broken = vec![
            obs(8, 0, "c", 1.0),
            obs(16, 0, "c", 1.0),
            obs(32, 0, "c", f64::NAN),
        ];
        assert_eq!(plateau().evaluate(&broken), Verdict::Fail);
    }

    #[test]
    fn combined_rules() {
        let o = vec![
            obs(4, 0, "r", 0.5),
            obs(4, 1, "r", 1.0),
            obs(0, 0, "t", 3.0),
            obs(0, 1, "t", 2.0),
            obs(0, 0, "h", 1.0),
        ];
        let within = Criterion::Within {
            quantity: "r".into(),
            min: None,
            max: Some(1.0),
        };
        let dec = Criterion::NonIncreasing {
            quantity: "t".into(),
        };
        let req = Criterion::Requires {
            quantity: "h".into(),
        };
        let all = Criterion::All {
            parts: vec![within, dec, req],
        };
        assert_eq!(all.evaluate(&o), Verdict::Pass);
        let mut o2 = o.clone();
        o2[4].value = 0.5;
        assert_eq!(all.evaluate(&o2), Verdict::Inconclusive);
        o2[0].value = 2.0;
        assert_eq!(all.evaluate(&o2), Verdict::Fail);
    }

    #[test]
    fn report_round_trip_and_recheck() {
        let r = ExperimentReport::new(
            "demo",
            BTreeMap::new(),
            vec![obs(8, 0, "c", 1.0)],
            Criterion::Diagnostic,
        )
        .with_constant("c", 1.0);
        let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(back.recheck());
        assert_eq!(r.to_csv(), "bandwidth,index,quantity,value\n8,0,c,1e0\n");
    }
}
