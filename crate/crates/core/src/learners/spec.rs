use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::ClassTag;
use crate::error::open_unit;
use crate::{Error, Result};

/// Learning algorithm tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Erm,
    DirectSum,
    Generic,
    Parities,
    Points,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Erm => "erm",
            Algorithm::DirectSum => "direct-sum",
            Algorithm::Generic => "generic",
            Algorithm::Parities => "parities",
            Algorithm::Points => "points",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "erm" => Algorithm::Erm,
            "direct-sum" => Algorithm::DirectSum,
            "generic" => Algorithm::Generic,
            "parities" | "parity" => Algorithm::Parities,
            "points" | "point" => Algorithm::Points,
            other => return Err(Error::Unsupported(format!("unknown learner `{other}`"))),
        })
    }
}

/// Accuracy and privacy parameters of a learner run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerSpec {
    pub algorithm: Algorithm,
    pub class: ClassTag,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub epsilon_prime: Option<f64>,
    pub delta: f64,
    pub proper: bool,
    pub agnostic: bool,
}

impl LearnerSpec {
    pub fn validate(&self) -> Result<()> {
        open_unit("alpha", self.alpha)?;
        open_unit("beta", self.beta)?;
        if self.algorithm != Algorithm::Erm {
            crate::error::positive("epsilon", self.epsilon)?;
        }
        if self.delta != 0.0 || matches!(self.algorithm, Algorithm::Parities | Algorithm::Points | Algorithm::Generic) {
            open_unit("delta", self.delta)?;
        }
        match (self.algorithm, self.epsilon_prime) {
            (Algorithm::Generic, Some(e)) => crate::error::positive("epsilon_prime", e)?,
            (Algorithm::Generic, None) => {
                return Err(Error::Unsupported("the generic learner needs epsilon_prime".into()))
            }
            (_, Some(e)) => return Err(Error::param("epsilon_prime", e, "only the generic learner takes epsilon_prime")),
            (_, None) => {}
        }
        let class_ok = match self.algorithm {
            Algorithm::Parities => self.class == ClassTag::Parity,
            Algorithm::Points => self.class == ClassTag::Point,
            _ => true,
        };
        if !class_ok {
            return Err(Error::Unsupported(format!("{} cannot learn the {} class", self.algorithm, self.class)));
        }
        Ok(())
    }
}
