use rand::RngCore;

use super::hypothesis::{LearnOutcome, MultiHypothesis, MultiLearner};
use crate::domain::{ClassTag, Concept, LabeledView, MultiLabeledDatabase, UniverseKind};
use crate::{Error, Result};

/// Mismatch count of every concept of the class, in parameter order.
pub(crate) fn mismatch_table(view: &LabeledView<'_>, class: ClassTag) -> Result<Vec<(Concept, usize)>> {
    let db = view.database();
    let universe = db.universe();
    class.check_universe(universe)?;
    let size = universe.size() as usize;
    // per element: (rows labeled 1, rows labeled 0)
    let mut ones = vec![0usize; size];
    let mut zeros = vec![0usize; size];
    for (x, y) in view.iter() {
        if y {
            ones[x.index() as usize] += 1;
        } else {
            zeros[x.index() as usize] += 1;
        }
    }
    let total_ones: usize = ones.iter().sum();
    Ok(match class {
        ClassTag::Zero => vec![(Concept::Zero, total_ones)],
        ClassTag::Point => (0..size)
            .map(|p| (Concept::Point(p as u32), total_ones - ones[p] + zeros[p]))
            .collect(),
        ClassTag::Thresh => {
            let mut errs = Vec::with_capacity(size);
            let mut err = total_ones;
            for p in 0..size {
                err = err - ones[p] + zeros[p];
                errs.push((Concept::Thresh(p as u32), err));
            }
            errs
        }
        ClassTag::Parity => {
            debug_assert!(matches!(universe.kind(), UniverseKind::BitVectors { .. }));
            (0..size as u32)
                .map(|a| {
                    let c = Concept::Parity(a);
                    let err = (0..size)
                        .map(|x| if c.apply(crate::domain::DomainElement::new(x as u32)) { zeros[x] } else { ones[x] })
                        .sum();
                    (c, err)
                })
                .collect()
        }
    })
}

/// Empirical-error minimizer over the class; lowest parameter wins ties.
pub fn erm_single(view: &LabeledView<'_>, class: ClassTag) -> Result<Concept> {
    if view.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let table = mismatch_table(view, class)?;
    let best = table.iter().min_by_key(|(_, e)| *e).expect("classes are nonempty");
    Ok(best.0)
}

/// Per-label ERM.
pub fn erm_multi(s: &MultiLabeledDatabase, class: ClassTag) -> Result<MultiHypothesis> {
    if s.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    (0..s.k())
        .map(|j| erm_single(&s.view(j)?, class))
        .collect::<Result<Vec<_>>>()
        .map(MultiHypothesis::new)
}

/// Non-private ERM baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErmLearner {
    pub class: ClassTag,
}

impl MultiLearner for ErmLearner {
    fn name(&self) -> &'static str {
        "erm"
    }

    fn learn(&self, s: &MultiLabeledDatabase, _rng: &mut dyn RngCore) -> Result<LearnOutcome> {
        Ok(LearnOutcome::non_private(erm_multi(s, self.class)?))
    }
}
