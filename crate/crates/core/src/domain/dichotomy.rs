use std::collections::HashMap;

use super::concept::{ClassTag, Concept};
use super::universe::{DomainElement, Universe};
use crate::Result;

/// One labeling of a point set realized by the class, with the first
/// concept (in parameter order) that realizes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dichotomy {
    pub labels: Vec<bool>,
    pub witness: Concept,
}

/// `Π_C(B)`: every labeling of `b` realized by the class, ordered by witness.
///
/// Points and thresholds are handled in closed form; parities are enumerated.
pub fn dichotomy_projection(class: ClassTag, universe: &Universe, b: &[DomainElement]) -> Result<Vec<Dichotomy>> {
    class.check_universe(universe)?;
    for &x in b {
        universe.check(x)?;
    }
    let label = |c: Concept| Dichotomy {
        labels: b.iter().map(|&x| c.apply(x)).collect(),
        witness: c,
    };
    let mut distinct: Vec<u32> = b.iter().map(|x| x.index()).collect();
    distinct.sort_unstable();
    distinct.dedup();

    let witnesses: Vec<Concept> = match class {
        ClassTag::Zero => vec![Concept::Zero],
        ClassTag::Point => {
            let mut ws: Vec<u32> = distinct.clone();
            // lowest element outside B realizes the all-zero labeling
            let outside = (0..universe.size()).find(|p| distinct.binary_search(p).is_err());
            ws.extend(outside);
            ws.sort_unstable();
            ws.into_iter().map(Concept::Point).collect()
        }
        ClassTag::Thresh => {
            // the labeling only changes when the threshold crosses an element of B
            let mut ws = Vec::with_capacity(distinct.len() + 1);
            if distinct.first().is_none_or(|&m| m > 0) {
                ws.push(0);
            }
            ws.extend(distinct.iter().copied());
            ws.into_iter().map(Concept::Thresh).collect()
        }
        ClassTag::Parity => {
            let mut seen: HashMap<Vec<bool>, ()> = HashMap::new();
            let mut out = Vec::new();
            for a in 0..universe.size() {
                let d = label(Concept::Parity(a));
                if seen.insert(d.labels.clone(), ()).is_none() {
                    out.push(d);
                }
            }
            return Ok(out);
        }
    };
    Ok(witnesses.into_iter().map(label).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn els(v: &[u32]) -> Vec<DomainElement> {
        v.iter().map(|&i| DomainElement::new(i)).collect()
    }

    #[test]
    fn empty_b_gives_one_empty_dichotomy() {
        let u = Universe::indexed(3).unwrap();
        for class in [ClassTag::Point, ClassTag::Thresh] {
            let d = dichotomy_projection(class, &u, &[]).unwrap();
            assert_eq!(d.len(), 1);
            assert!(d[0].labels.is_empty());
        }
    }

    #[test]
    fn points_over_three() {
        let u = Universe::indexed(3).unwrap();
        let d = dichotomy_projection(ClassTag::Point, &u, &els(&[0, 1])).unwrap();
        let got: Vec<(Vec<bool>, Concept)> = d.into_iter().map(|d| (d.labels, d.witness)).collect();
        assert_eq!(
            got,
            vec![
                (vec![true, false], Concept::Point(0)),
                (vec![false, true], Concept::Point(1)),
                (vec![false, false], Concept::Point(2)),
            ]
        );
    }

    #[test]
    fn thresholds_over_three() {
        let u = Universe::indexed(3).unwrap();
        let d = dichotomy_projection(ClassTag::Thresh, &u, &els(&[0, 2])).unwrap();
        let labels: Vec<Vec<bool>> = d.into_iter().map(|d| d.labels).collect();
        assert_eq!(labels, vec![vec![true, false], vec![true, true]]);
    }

    #[test]
    fn point_count_formula() {
        let u = Universe::indexed(6).unwrap();
        let d = dichotomy_projection(ClassTag::Point, &u, &els(&[5, 1, 3])).unwrap();
        assert_eq!(d.len(), 4);
        let all = dichotomy_projection(ClassTag::Point, &u, &els(&[0, 1, 2, 3, 4, 5])).unwrap();
        assert_eq!(all.len(), 6);
    }
}
