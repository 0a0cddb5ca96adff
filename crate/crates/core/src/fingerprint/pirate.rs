use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::codebook::{Coalition, FingerprintCode, PirateWord};
use crate::domain::{ClassTag, DomainElement, MultiLabeledDatabase, Universe};
use crate::learners::{MultiHypothesis, MultiLearner};
use crate::{Error, Result};

/// How examples are chosen and averages rounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PirateVariant {
    /// Threshold examples, rounding at 1/2.
    Pac,
    /// Threshold examples padded with all-zero junk rows to `n/(3α)` rows,
    /// rounding at `1.5α` on the padded database.
    Padded,
    /// The `i`-th binary string as example `i`; 0 at or below `α`, 1 at or
    /// above `1/2 - α`, 0 and flagged in between.
    Parity,
}

impl PirateVariant {
    /// Class against which learner accuracy is judged.
    pub fn class(self) -> ClassTag {
        match self {
            PirateVariant::Pac | PirateVariant::Padded => ClassTag::Thresh,
            PirateVariant::Parity => ClassTag::Parity,
        }
    }
}

/// Universe and examples `x_1, ..., x_n` (`x_i` is element `i - 1`).
/// Threshold variants use `n + 1` elements so that the last one is labeled
/// 0 by every column and can serve as the junk element.
pub fn pirate_examples(variant: PirateVariant, n: usize) -> Result<(Universe, Vec<DomainElement>)> {
    let universe = match variant {
        PirateVariant::Pac | PirateVariant::Padded => Universe::indexed(n as u32 + 1)?,
        PirateVariant::Parity => {
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::param("n", n as f64, "the parity pirate needs a power of two users"));
            }
            Universe::bit_vectors(n.trailing_zeros())?
        }
    };
    Ok((universe, (0..n as u32).map(DomainElement::new).collect()))
}

/// Everything the pirate saw and produced.
#[derive(Debug, Clone, PartialEq)]
pub struct PirateRun {
    pub word: PirateWord,
    pub hypotheses: Option<MultiHypothesis>,
    pub database: MultiLabeledDatabase,
    /// Every hypothesis is within `α` of the best concept of the class on
    /// the constructed database.
    pub accurate: bool,
    /// The learner failed, or some average fell in the parity middle band.
    pub flagged: bool,
}

/// Slack for comparing averages of a few rows against decimal cut-offs.
const TOLERANCE: f64 = 1e-9;

fn padding_rows(alpha: f64, n: usize) -> Result<usize> {
    if !(alpha > 0.0 && alpha <= 1.0 / 3.0) {
        return Err(Error::param("alpha", alpha, "padding needs 0 < alpha <= 1/3"));
    }
    Ok(((1.0 / (3.0 * alpha) - 1.0) * n as f64).round() as usize)
}

/// Builds the coalition's database (absent users become all-zero nonce
/// rows), runs the learner and rounds the hypotheses' averages into a
/// pirate word. A failed learner yields a uniformly random feasible word.
pub fn pirate_from_learner(
    learner: &dyn MultiLearner,
    code: &dyn FingerprintCode,
    coalition: &Coalition,
    variant: PirateVariant,
    alpha: f64,
    rng: &mut dyn RngCore,
) -> Result<PirateRun> {
    let n = code.users();
    let k = code.length();
    let (universe, xs) = pirate_examples(variant, n)?;
    let mut s = MultiLabeledDatabase::new(universe, k);
    let zeros = vec![false; k];
    for (i, &x) in (1..=n).zip(&xs) {
        if coalition.contains(i) {
            s.push_row(x, &code.codeword(i))?;
        } else {
            s.push_row(x, &zeros)?;
        }
    }
    if variant == PirateVariant::Padded {
        for _ in 0..padding_rows(alpha, n)? {
            s.push_row(universe.max_element(), &zeros)?;
        }
    }

    let outcome = learner.learn(&s, rng)?;
    let Some(h) = outcome.hypotheses else {
        let word = (0..k)
            .map(|j| {
                let ones = coalition.members().any(|i| code.bit(i, j));
                let zeros = coalition.members().any(|i| !code.bit(i, j));
                if ones && zeros { rng.gen() } else { ones }
            })
            .collect();
        return Ok(PirateRun { word, hypotheses: None, database: s, accurate: false, flagged: true });
    };
    if h.k() != k {
        return Err(Error::LabelCountMismatch { row: 0, found: h.k(), expected: k });
    }

    let rows: &[DomainElement] = match variant {
        PirateVariant::Padded => s.elements(),
        _ => &xs,
    };
    let mut flagged = false;
    let word = h
        .hypotheses()
        .iter()
        .map(|c| {
            let avg = rows.iter().filter(|&&x| c.apply(x)).count() as f64 / rows.len() as f64;
            match variant {
                PirateVariant::Pac => avg + TOLERANCE >= 0.5,
                PirateVariant::Padded => avg + TOLERANCE >= 1.5 * alpha,
                PirateVariant::Parity => {
                    if avg + TOLERANCE >= 0.5 - alpha {
                        true
                    } else {
                        flagged |= avg > alpha + TOLERANCE;
                        false
                    }
                }
            }
        })
        .collect();

    let accurate = accuracy_gap(&s, &h, variant.class())? <= alpha + 1e-12;
    Ok(PirateRun { word, hypotheses: Some(h), database: s, accurate, flagged })
}

/// `max_j (error_{S|_j}(h_j) - min_{c ∈ C} error_{S|_j}(c))`.
pub(crate) fn accuracy_gap(s: &MultiLabeledDatabase, h: &MultiHypothesis, class: ClassTag) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (j, c) in h.hypotheses().iter().enumerate() {
        let view = s.view(j)?;
        let best = crate::learners::erm_single(&view, class)?;
        let gap = crate::domain::mismatches(&view, c) as f64 - crate::domain::mismatches(&view, &best) as f64;
        worst = worst.max(gap / s.n() as f64);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Concept;
    use crate::fingerprint::{bs_gen, feasible, Codebook};
    use crate::learners::{ErmLearner, LearnOutcome};
    use crate::rng::stream;

    /// Returns the column concepts themselves.
    struct Oracle(Vec<Concept>);

    impl MultiLearner for Oracle {
        fn name(&self) -> &'static str {
            "oracle"
        }

        fn learn(&self, _s: &MultiLabeledDatabase, _rng: &mut dyn RngCore) -> Result<LearnOutcome> {
            Ok(LearnOutcome::non_private(MultiHypothesis::new(self.0.clone())))
        }
    }

    fn targets(code: &Codebook) -> Vec<Concept> {
        code.column_types().iter().map(|&t| Concept::Thresh(t - 1)).collect()
    }

    #[test]
    fn exact_thresholds_give_feasible_words() {
        let code = bs_gen(6, 50, 0.1, false, &mut stream(1, &[])).unwrap();
        let full = Coalition::full(6);
        for variant in [PirateVariant::Pac, PirateVariant::Padded] {
            let run = pirate_from_learner(&Oracle(targets(&code)), &code, &full, variant, 0.1, &mut stream(2, &[])).unwrap();
            assert!(run.accurate && !run.flagged);
            assert!(feasible(&run.word, &code, &full));
            let expected: Vec<bool> = code.column_types().iter().map(|&t| t >= 3).collect();
            assert_eq!(run.word, expected);
        }
    }

    #[test]
    fn missing_user_merges_adjacent_types() {
        let code = bs_gen(6, 50, 0.1, false, &mut stream(3, &[])).unwrap();
        let coalition = Coalition::without(6, 3).unwrap();
        let erm = ErmLearner { class: ClassTag::Thresh };
        for variant in [PirateVariant::Pac, PirateVariant::Padded] {
            let run = pirate_from_learner(&erm, &code, &coalition, variant, 0.1, &mut stream(4, &[])).unwrap();
            assert!(run.accurate);
            // types 2 and 3 label the database identically once user 3 is a nonce row
            let bit_of = |t: u32| {
                let j = code.column_types().iter().position(|&u| u == t).unwrap();
                run.word[j]
            };
            assert_eq!(bit_of(2), bit_of(3));
        }
    }

    #[test]
    fn zero_hypotheses_give_zero_word() {
        let code = bs_gen(4, 30, 0.1, false, &mut stream(5, &[])).unwrap();
        for variant in [PirateVariant::Pac, PirateVariant::Padded, PirateVariant::Parity] {
            let run = pirate_from_learner(&Oracle(vec![Concept::Zero; 30]), &code, &Coalition::full(4), variant, 0.1, &mut stream(6, &[]))
                .unwrap();
            assert!(run.word.iter().all(|&b| !b));
            assert!(feasible(&run.word, &code, &Coalition::full(4)));
        }
    }

    #[test]
    fn example_maps() {
        let (u, xs) = pirate_examples(PirateVariant::Parity, 8).unwrap();
        assert_eq!(u.dimension(), Some(3));
        assert_eq!(xs.len(), 8);
        assert!(pirate_examples(PirateVariant::Parity, 6).is_err());
        assert_eq!(padding_rows(0.1, 6).unwrap(), 14);
    }
}
