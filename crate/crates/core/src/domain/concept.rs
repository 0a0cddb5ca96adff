use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::universe::{DomainElement, Universe, UniverseKind};
use crate::{Error, Result};

/// The concept classes this crate knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassTag {
    Point,
    Thresh,
    Parity,
    Zero,
}

impl ClassTag {
    /// Enumerates the class over `universe` in parameter order.
    pub fn concepts(self, universe: &Universe) -> Result<Vec<Concept>> {
        self.check_universe(universe)?;
        Ok(match self {
            ClassTag::Point => (0..universe.size()).map(Concept::Point).collect(),
            ClassTag::Thresh => (0..universe.size()).map(Concept::Thresh).collect(),
            ClassTag::Parity => (0..universe.size()).map(Concept::Parity).collect(),
            ClassTag::Zero => vec![Concept::Zero],
        })
    }

    pub fn class_size(self, universe: &Universe) -> u64 {
        match self {
            ClassTag::Zero => 1,
            _ => universe.size() as u64,
        }
    }

    /// VC dimension: 1 for points and thresholds, `d` for parities.
    pub fn vc_dimension(self, universe: &Universe) -> Result<u32> {
        self.check_universe(universe)?;
        Ok(match self {
            ClassTag::Point | ClassTag::Thresh => 1,
            ClassTag::Parity => universe.dimension().unwrap_or(0),
            ClassTag::Zero => 0,
        })
    }

    pub fn check_universe(self, universe: &Universe) -> Result<()> {
        if self == ClassTag::Parity && universe.dimension().is_none() {
            return Err(Error::UniverseMismatch {
                concept: "parity class".into(),
                reason: "parities need a bit-vector universe".into(),
            });
        }
        Ok(())
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::Point => "point",
            ClassTag::Thresh => "thresh",
            ClassTag::Parity => "parity",
            ClassTag::Zero => "zero",
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "point" | "points" => Ok(ClassTag::Point),
            "thresh" | "threshold" | "thresholds" => Ok(ClassTag::Thresh),
            "parity" | "parities" => Ok(ClassTag::Parity),
            "zero" => Ok(ClassTag::Zero),
            other => Err(Error::Unsupported(format!("unknown concept class `{other}`"))),
        }
    }
}

/// A concept (or hypothesis) from one of the supported classes.
///
/// * `Point(p)(x) = 1` iff `x = p`
/// * `Thresh(p)(x) = 1` iff `x <= p`
/// * `Parity(a)(x) = <a, x> mod 2`
/// * `Zero(x) = 0`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "class", content = "parameter", rename_all = "lowercase")]
pub enum Concept {
    Point(u32),
    Thresh(u32),
    Parity(u32),
    Zero,
}

impl Concept {
    pub fn tag(&self) -> ClassTag {
        match self {
            Concept::Point(_) => ClassTag::Point,
            Concept::Thresh(_) => ClassTag::Thresh,
            Concept::Parity(_) => ClassTag::Parity,
            Concept::Zero => ClassTag::Zero,
        }
    }

    pub fn parameter(&self) -> Option<u32> {
        match *self {
            Concept::Point(p) | Concept::Thresh(p) | Concept::Parity(p) => Some(p),
            Concept::Zero => None,
        }
    }

    /// Evaluates without checking the universe. Use [`Concept::eval`] at
    /// API boundaries.
    #[inline]
    pub fn apply(&self, x: DomainElement) -> bool {
        match *self {
            Concept::Point(p) => x.index() == p,
            Concept::Thresh(p) => x.index() <= p,
            Concept::Parity(a) => (a & x.bits()).count_ones() & 1 == 1,
            Concept::Zero => false,
        }
    }

    pub fn check(&self, universe: &Universe) -> Result<()> {
        let mismatch = |reason: &str| Error::UniverseMismatch {
            concept: self.to_string(),
            reason: reason.to_string(),
        };
        match *self {
            Concept::Point(p) | Concept::Thresh(p) if p >= universe.size() => {
                Err(mismatch("parameter outside the universe"))
            }
            Concept::Parity(a) => match universe.kind() {
                UniverseKind::BitVectors { .. } if a < universe.size() => Ok(()),
                UniverseKind::BitVectors { .. } => Err(mismatch("parameter has too many bits")),
                UniverseKind::Indexed => Err(mismatch("parities need a bit-vector universe")),
            },
            _ => Ok(()),
        }
    }

    pub fn eval(&self, universe: &Universe, x: DomainElement) -> Result<bool> {
        self.check(universe)?;
        universe.check(x)?;
        Ok(self.apply(x))
    }
}

/// `(f XOR g)(x)`, the query class used when sanitizing for a learner.
pub fn xor_eval(universe: &Universe, f: &Concept, g: &Concept, x: DomainElement) -> Result<bool> {
    Ok(f.eval(universe, x)? ^ g.eval(universe, x)?)
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parameter() {
            Some(p) => write!(f, "{}:{}", self.tag(), p),
            None => write!(f, "{}", self.tag()),
        }
    }
}

impl FromStr for Concept {
    type Err = Error;

    /// Parses `point:3`, `thresh:2`, `parity:5` or `zero`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unsupported(format!("cannot parse concept `{s}`"));
        let (tag, param) = match s.trim().split_once(':') {
            Some((t, p)) => (t.parse::<ClassTag>()?, Some(p.trim().parse::<u32>().map_err(|_| bad())?)),
            None => (s.parse::<ClassTag>()?, None),
        };
        match (tag, param) {
            (ClassTag::Point, Some(p)) => Ok(Concept::Point(p)),
            (ClassTag::Thresh, Some(p)) => Ok(Concept::Thresh(p)),
            (ClassTag::Parity, Some(p)) => Ok(Concept::Parity(p)),
            (ClassTag::Zero, None) => Ok(Concept::Zero),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(i: u32) -> DomainElement {
        DomainElement::new(i)
    }

    #[test]
    fn point_and_threshold_definitions() {
        let u = Universe::indexed(5).unwrap();
        let p = Concept::Point(2);
        assert!(p.eval(&u, el(2)).unwrap());
        assert!(!p.eval(&u, el(3)).unwrap());
        let t = Concept::Thresh(2);
        for x in 0..5 {
            assert_eq!(t.eval(&u, el(x)).unwrap(), x <= 2);
        }
    }

    #[test]
    fn parity_inner_product() {
        let u = Universe::bit_vectors(2).unwrap();
        // (1,1)·(1,1) = 2 = 0 mod 2
        assert!(!Concept::Parity(0b11).eval(&u, el(0b11)).unwrap());
        assert!(Concept::Parity(0b11).eval(&u, el(0b01)).unwrap());
        assert!(!Concept::Parity(0).eval(&u, el(0b11)).unwrap());
    }

    #[test]
    fn zero_is_constant() {
        let u = Universe::indexed(3).unwrap();
        assert!(u.elements().all(|x| !Concept::Zero.eval(&u, x).unwrap()));
    }

    #[test]
    fn xor_examples() {
        let u = Universe::indexed(3).unwrap();
        let got: Vec<bool> = u
            .elements()
            .map(|x| xor_eval(&u, &Concept::Point(0), &Concept::Point(1), x).unwrap())
            .collect();
        assert_eq!(got, vec![true, true, false]);

        let u = Universe::indexed(5).unwrap();
        let got: Vec<u32> = u
            .elements()
            .filter(|&x| xor_eval(&u, &Concept::Thresh(1), &Concept::Thresh(3), x).unwrap())
            .map(|x| x.index())
            .collect();
        assert_eq!(got, vec![2, 3]);

        let f = Concept::Thresh(2);
        assert!(u.elements().all(|x| !xor_eval(&u, &f, &f, x).unwrap()));
    }

    #[test]
    fn universe_mismatch_is_an_error() {
        let u = Universe::indexed(4).unwrap();
        assert!(matches!(
            Concept::Point(4).eval(&u, el(0)),
            Err(Error::UniverseMismatch { .. })
        ));
        assert!(Concept::Parity(1).eval(&u, el(0)).is_err());
        assert!(Concept::Point(1).eval(&u, el(9)).is_err());
        let b = Universe::bit_vectors(2).unwrap();
        assert!(Concept::Parity(4).eval(&b, el(0)).is_err());
    }

    #[test]
    fn display_round_trips() {
        for c in [Concept::Point(3), Concept::Thresh(0), Concept::Parity(5), Concept::Zero] {
            assert_eq!(c.to_string().parse::<Concept>().unwrap(), c);
        }
        assert!("point".parse::<Concept>().is_err());
        assert!("zero:1".parse::<Concept>().is_err());
    }
}
