use num_rational::Ratio;

use super::concept::Concept;
use super::database::LabeledView;
use super::distribution::Distribution;
use crate::{Error, Result};

/// Number of rows of `view` that `h` labels incorrectly.
pub fn mismatches(view: &LabeledView<'_>, h: &Concept) -> usize {
    view.iter().filter(|&(x, y)| h.apply(x) != y).count()
}

/// `error_S(h) = |{i : h(x_i) != y_i}| / n`, exactly.
pub fn empirical_error(view: &LabeledView<'_>, h: &Concept) -> Result<Ratio<u64>> {
    if view.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    h.check(view.database().universe())?;
    Ok(Ratio::new(mismatches(view, h) as u64, view.len() as u64))
}

/// `error_D(c, h) = Pr_{x ~ D}[h(x) != c(x)]`, summed exactly over the universe.
pub fn generalization_error(dist: &Distribution, c: &Concept, h: &Concept) -> Result<f64> {
    let u = dist.universe();
    c.check(u)?;
    h.check(u)?;
    Ok(u.elements()
        .filter(|&x| c.apply(x) != h.apply(x))
        .map(|x| dist.mass(x))
        .sum())
}
