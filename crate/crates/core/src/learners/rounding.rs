use crate::domain::{ClassTag, Concept, Universe};
use crate::{Error, Result};

/// Nearest parity to a hypothesis given as a truth table over `{0,1}^d`,
/// measured by disagreement under the uniform distribution. Lowest
/// parameter wins ties.
pub fn round_parity(universe: &Universe, table: &[bool]) -> Result<Concept> {
    ClassTag::Parity.check_universe(universe)?;
    let d = universe.dimension().expect("parity universes have a dimension");
    if d > 12 {
        return Err(Error::Unsupported(format!("round_parity enumerates 4^d pairs; d = {d} exceeds 12")));
    }
    if table.len() != universe.size() as usize {
        return Err(Error::OutcomeMismatch { left: table.len(), right: universe.size() as usize });
    }
    let distance = |a: u32| {
        table
            .iter()
            .enumerate()
            .filter(|&(x, &h)| h != ((a & x as u32).count_ones() & 1 == 1))
            .count()
    };
    let best = (0..universe.size()).min_by_key(|&a| distance(a)).expect("universe is nonempty");
    Ok(Concept::Parity(best))
}
