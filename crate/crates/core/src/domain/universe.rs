use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest supported `|X|` for indexed universes.
pub const MAX_UNIVERSE_SIZE: u32 = 1 << 20;
/// Largest supported bit-vector dimension.
pub const MAX_PARITY_DIMENSION: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DomainElement(u32);

impl DomainElement {
    /// Builds an element without a universe check. Callers validate through
    /// [`Universe::element`] at API boundaries.
    pub const fn new(index: u32) -> Self {
        DomainElement(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    /// The element read as a bit vector (bit `i` of the index is coordinate `i`).
    pub const fn bits(self) -> u32 {
        self.0
    }
}

impl std::fmt::Display for DomainElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UniverseKind {
    Indexed,
    BitVectors { d: u32 },
}

/// A finite, explicitly indexed domain `X = {0, …, size - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Universe {
    kind: UniverseKind,
    size: u32,
}

impl Universe {
    pub fn indexed(size: u32) -> Result<Self> {
        if !(2..=MAX_UNIVERSE_SIZE).contains(&size) {
            return Err(Error::InvalidUniverse(format!(
                "size {size} must lie in [2, {MAX_UNIVERSE_SIZE}]"
            )));
        }
        Ok(Universe {
            kind: UniverseKind::Indexed,
            size,
        })
    }

    /// `{0,1}^d`, with elements encoded as the integers `0..2^d`.
    pub fn bit_vectors(d: u32) -> Result<Self> {
        if !(1..=MAX_PARITY_DIMENSION).contains(&d) {
            return Err(Error::InvalidUniverse(format!(
                "dimension {d} must lie in [1, {MAX_PARITY_DIMENSION}]"
            )));
        }
        Ok(Universe {
            kind: UniverseKind::BitVectors { d },
            size: 1 << d,
        })
    }

    pub fn kind(&self) -> UniverseKind {
        self.kind
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn dimension(&self) -> Option<u32> {
        match self.kind {
            UniverseKind::BitVectors { d } => Some(d),
            UniverseKind::Indexed => None,
        }
    }

    pub fn contains(&self, x: DomainElement) -> bool {
        x.0 < self.size
    }

    pub fn element(&self, index: u32) -> Result<DomainElement> {
        let x = DomainElement(index);
        self.check(x)?;
        Ok(x)
    }

    pub fn check(&self, x: DomainElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                element: x.0 as u64,
                size: self.size as u64,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = DomainElement> {
        (0..self.size).map(DomainElement)
    }

    /// Largest element; every threshold except the all-ones one labels it 0.
    pub fn max_element(&self) -> DomainElement {
        DomainElement(self.size - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_sizes() {
        assert!(Universe::indexed(1).is_err());
        assert!(Universe::indexed(MAX_UNIVERSE_SIZE + 1).is_err());
        assert!(Universe::bit_vectors(0).is_err());
        assert!(Universe::bit_vectors(21).is_err());
        assert_eq!(Universe::bit_vectors(3).unwrap().size(), 8);
    }

    #[test]
    fn element_checks_range() {
        let u = Universe::indexed(4).unwrap();
        assert!(u.element(3).is_ok());
        assert_eq!(
            u.element(4),
            Err(Error::ElementOutOfRange { element: 4, size: 4 })
        );
    }
}
