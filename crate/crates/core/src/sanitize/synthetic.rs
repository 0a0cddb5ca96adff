use num_rational::Ratio;

use super::points::SanitizedAnswers;
use crate::domain::{DomainElement, MultiLabeledDatabase};

/// A released synthetic database `D̂` (unlabeled).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticDatabase {
    rows: MultiLabeledDatabase,
}

impl SyntheticDatabase {
    pub(crate) fn from_database(rows: MultiLabeledDatabase) -> Self {
        debug_assert!(!rows.is_empty() && rows.k() == 0);
        SyntheticDatabase { rows }
    }

    pub fn database(&self) -> &MultiLabeledDatabase {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.n()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `c_x(D̂)` as an exact fraction.
    pub fn frequency(&self, x: DomainElement) -> Ratio<u64> {
        let count = self.rows.elements().iter().filter(|&&y| y == x).count();
        Ratio::new(count as u64, self.len() as u64)
    }

    /// Distinct elements of `D̂` in index order.
    pub fn distinct(&self) -> Vec<DomainElement> {
        let mut v = self.rows.elements().to_vec();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Rebuilds a small database whose point frequencies track the answers.
///
/// Counts are first rounded down on a grid of `L = ⌈1/α⌉ + |support|` slots.
/// Remaining slots go to support elements (up to `(a_x + α) L`) and then to
/// sink elements outside the support (up to `α L` each); excess slots are
/// taken back from elements above `(a_x - α) L`. The multiset is finally
/// divided by the gcd of its counts. Whenever a feasible assignment exists
/// on this grid, every point query satisfies `|c_x(D̂) - a_x| <= α`; otherwise
/// the result is the closest effort.
pub fn answers_to_synthetic(ans: &SanitizedAnswers, alpha: f64) -> SyntheticDatabase {
    assert!(alpha > 0.0 && alpha.is_finite(), "alpha must be positive, got {alpha}");
    let universe = *ans.universe();
    let support: Vec<(DomainElement, f64)> = ans.support().collect();
    let slots = (1.0 / alpha).ceil() as u64 + support.len() as u64;
    let l = slots as f64;
    let cap_outside = (alpha * l).floor() as u64;

    let mut counts: Vec<(DomainElement, u64, u64, u64)> = support
        .iter()
        .map(|&(x, a)| {
            let lower = ((a - alpha) * l).ceil().max(0.0) as u64;
            let upper = ((a + alpha) * l).floor() as u64;
            (x, (a * l).floor() as u64, lower, upper)
        })
        .collect();
    let mut total: u64 = counts.iter().map(|c| c.1).sum();

    if total < slots {
        // largest remaining deficit first, lowest index on ties
        let mut order: Vec<usize> = (0..counts.len()).collect();
        order.sort_by(|&i, &j| {
            let di = support[i].1 * l - counts[i].1 as f64;
            let dj = support[j].1 * l - counts[j].1 as f64;
            dj.total_cmp(&di).then(i.cmp(&j))
        });
        for &i in order.iter().cycle().take(order.len() * slots as usize) {
            if total == slots {
                break;
            }
            if counts[i].1 < counts[i].3 {
                counts[i].1 += 1;
                total += 1;
            }
        }
        let mut sinks = universe.elements().filter(|x| ans.get(*x) == 0.0);
        while total < slots && cap_outside > 0 {
            let Some(x) = sinks.next() else { break };
            let add = cap_outside.min(slots - total);
            counts.push((x, add, 0, cap_outside));
            total += add;
        }
    } else if total > slots {
        let mut order: Vec<usize> = (0..counts.len()).collect();
        order.sort_by(|&i, &j| {
            let si = counts[i].1 as f64 - support[i].1 * l;
            let sj = counts[j].1 as f64 - support[j].1 * l;
            sj.total_cmp(&si).then(i.cmp(&j))
        });
        for &i in order.iter().cycle().take(order.len() * total as usize) {
            if total == slots {
                break;
            }
            if counts[i].1 > counts[i].2 {
                counts[i].1 -= 1;
                total -= 1;
            }
        }
    }

    counts.retain(|c| c.1 > 0);
    if counts.is_empty() {
        counts.push((DomainElement::new(0), 1, 0, 1));
    }
    counts.sort_by_key(|c| c.0);
    let g = counts.iter().fold(0, |g, c| gcd(g, c.1));
    let xs = counts
        .iter()
        .flat_map(|&(x, c, _, _)| std::iter::repeat_n(x, (c / g) as usize))
        .collect();
    SyntheticDatabase::from_database(
        MultiLabeledDatabase::unlabeled(universe, xs).expect("elements come from the universe"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Universe;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn answers(u: Universe, pairs: &[(u32, f64)]) -> SanitizedAnswers {
        SanitizedAnswers::new(u, pairs.iter().map(|&(x, a)| (DomainElement::new(x), a)).collect::<BTreeMap<_, _>>())
            .unwrap()
    }

    fn max_dev(ans: &SanitizedAnswers, syn: &SyntheticDatabase) -> f64 {
        ans.universe()
            .elements()
            .map(|x| {
                let f = syn.frequency(x);
                (*f.numer() as f64 / *f.denom() as f64 - ans.get(x)).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn exact_single_element() {
        let u = Universe::indexed(8).unwrap();
        let syn = answers_to_synthetic(&answers(u, &[(5, 1.0)]), 0.1);
        assert!(syn.database().elements().iter().all(|x| x.index() == 5));
    }

    #[test]
    fn halves_reduce_to_two_rows() {
        let u = Universe::indexed(4).unwrap();
        let syn = answers_to_synthetic(&answers(u, &[(1, 0.5), (2, 0.5)]), 0.25);
        let xs: Vec<u32> = syn.database().elements().iter().map(|x| x.index()).collect();
        assert_eq!(xs, vec![1, 2]);
    }

    #[test]
    fn empty_answers_spread_over_sinks() {
        let u = Universe::indexed(32).unwrap();
        let ans = answers(u, &[]);
        let syn = answers_to_synthetic(&ans, 0.2);
        assert!(max_dev(&ans, &syn) <= 0.2 + 1e-12);
        assert!(syn.distinct().len() >= 5);
    }

    proptest! {
        #[test]
        fn round_trip_within_alpha(
            weights in proptest::collection::vec(0.0f64..1.0, 1..6),
            mass in 0.3f64..1.0,
            alpha in 0.05f64..0.5,
        ) {
            let u = Universe::indexed(64).unwrap();
            let total: f64 = weights.iter().sum::<f64>().max(1e-9);
            let pairs: Vec<(u32, f64)> = weights
                .iter()
                .enumerate()
                .map(|(i, w)| (i as u32 * 3, (w / total * mass).min(1.0)))
                .collect();
            let ans = answers(u, &pairs);
            let syn = answers_to_synthetic(&ans, alpha);
            prop_assert!(max_dev(&ans, &syn) <= alpha + 1e-12);
            prop_assert!(syn.len() as u64 <= (1.0 / alpha).ceil() as u64 + ans.support_size() as u64);
        }
    }
}
