//! Config-file syntax for weights, e.g. `{"kind":"log_power","s":1.0,"b1":0.0,"b2":0.0}`.

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bounded::BoundedFn;
use super::repr::{BgRepr, Tabulated};
use super::RoFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RoLiteral {
    LogPower {
        s: f64,
        #[serde(default)]
        b1: f64,
        #[serde(default)]
        b2: f64,
    },
    PowerSineLog {
        s: f64,
        theta: f64,
    },
    Bg {
        beta: BoundedLiteral,
        gamma: BoundedLiteral,
    },
    Tabulated {
        t: Vec<f64>,
        phi: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundedLiteral {
    Const {
        value: f64,
    },
    SinLog {
        amp: f64,
        #[serde(default = "one")]
        freq: f64,
        #[serde(default)]
        phase: f64,
    },
    InvOnePlusLog {
        scale: f64,
    },
    Sum {
        terms: Vec<BoundedLiteral>,
    },
}

fn one() -> f64 {
    1.0
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} must be finite, got {v}")))
    }
}

impl TryFrom<&BoundedLiteral> for BoundedFn {
    type Error = Error;

    fn try_from(lit: &BoundedLiteral) -> Result<Self> {
        Ok(match lit {
            BoundedLiteral::Const { value } => BoundedFn::Const(finite("value", *value)?),
            BoundedLiteral::SinLog { amp, freq, phase } => BoundedFn::SinLog {
                amp: finite("amp", *amp)?,
                freq: finite("freq", *freq)?,
                phase: finite("phase", *phase)?,
            },
            BoundedLiteral::InvOnePlusLog { scale } => BoundedFn::InvOnePlusLog {
                scale: finite("scale", *scale)?,
            },
            BoundedLiteral::Sum { terms } => BoundedFn::Sum(
                terms
                    .iter()
                    .map(BoundedFn::try_from)
                    .collect::<Result<Vec<_>>>()?,
            ),
        })
    }
}

impl TryFrom<&BoundedFn> for BoundedLiteral {
    type Error = Error;

    fn try_from(f: &BoundedFn) -> Result<Self> {
        Ok(match f {
            BoundedFn::Const(value) => BoundedLiteral::Const { value: *value },
            BoundedFn::SinLog { amp, freq, phase } => BoundedLiteral::SinLog {
                amp: *amp,
                freq: *freq,
                phase: *phase,
            },
            BoundedFn::InvOnePlusLog { scale } => BoundedLiteral::InvOnePlusLog { scale: *scale },
            BoundedFn::Sum(terms) => BoundedLiteral::Sum {
                terms: terms
                    .iter()
                    .map(BoundedLiteral::try_from)
                    .collect::<Result<Vec<_>>>()?,
            },
            BoundedFn::Custom { .. } => {
                return Err(Error::Unsupported(
                    "custom callables have no literal form".into(),
                ))
            }
        })
    }
}

impl TryFrom<RoLiteral> for RoFunction {
    type Error = Error;

    fn try_from(lit: RoLiteral) -> Result<Self> {
        match lit {
            RoLiteral::LogPower { s, b1, b2 } => Ok(RoFunction::log_power(
                finite("s", s)?,
                finite("b1", b1)?,
                finite("b2", b2)?,
            )),
            RoLiteral::PowerSineLog { s, theta } => RoFunction::power_sine_log(s, theta),
            RoLiteral::Bg { beta, gamma } => Ok(RoFunction::Bg(Arc::new(BgRepr::new(
                BoundedFn::try_from(&beta)?,
                BoundedFn::try_from(&gamma)?,
            )?))),
            RoLiteral::Tabulated { t, phi } => {
                Ok(RoFunction::Tabulated(Arc::new(Tabulated::new(t, phi)?)))
            }
        }
    }
}

impl RoFunction {
    pub fn to_literal(&self) -> Result<RoLiteral> {
        Ok(match self {
            RoFunction::LogPower { s, b1, b2 } => RoLiteral::LogPower {
                s: *s,
                b1: *b1,
                b2: *b2,
            },
            RoFunction::PowerSineLog { s, theta } => RoLiteral::PowerSineLog {
                s: *s,
                theta: *theta,
            },
            RoFunction::Bg(bg) => RoLiteral::Bg {
                beta: BoundedLiteral::try_from(bg.beta())?,
                gamma: BoundedLiteral::try_from(bg.gamma())?,
            },
            RoFunction::Tabulated(tab) => RoLiteral::Tabulated {
                t: tab.t().to_vec(),
                phi: tab.phi().to_vec(),
            },
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        RoFunction::try_from(serde_json::from_str::<RoLiteral>(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_literal()?)?)
    }
}

impl FromStr for RoFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RoFunction::from_json(s)
    }
}

impl Serialize for RoFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_literal()
            .map_err(serde::ser::Error::custom)?
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RoFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let lit = RoLiteral::deserialize(deserializer)?;
        RoFunction::try_from(lit).map_err(serde::de::Error::custom)
    }
}
