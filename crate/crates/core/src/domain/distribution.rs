use rand::distributions::{Distribution as _, WeightedIndex};
use rand::Rng;

use super::concept::Concept;
use super::database::MultiLabeledDatabase;
use super::universe::{DomainElement, Universe};
use crate::{Error, Result};

const NORMALIZATION_TOLERANCE: f64 = 1e-12;

fn check_pmf<'a>(probs: impl Iterator<Item = &'a f64>) -> Result<()> {
    let mut total = 0.0;
    for &p in probs {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::InvalidDistribution(format!("entry {p} is not a probability")));
        }
        total += p;
    }
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("mass sums to {total}, not 1")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
enum Sampler {
    Uniform,
    Weighted(WeightedIndex<f64>),
}

/// A probability mass function over a finite universe.
#[derive(Debug, Clone)]
pub struct Distribution {
    universe: Universe,
    pmf: Vec<f64>,
    sampler: Sampler,
}

impl Distribution {
    pub fn new(universe: Universe, pmf: Vec<f64>) -> Result<Self> {
        if pmf.len() != universe.size() as usize {
            return Err(Error::InvalidDistribution(format!(
                "pmf has {} entries for a universe of size {}",
                pmf.len(),
                universe.size()
            )));
        }
        check_pmf(pmf.iter())?;
        let sampler = Sampler::Weighted(
            WeightedIndex::new(&pmf).map_err(|e| Error::InvalidDistribution(e.to_string()))?,
        );
        Ok(Distribution { universe, pmf, sampler })
    }

    /// Uniform over the universe; for `{0,1}^d` this is `U_d`.
    pub fn uniform(universe: Universe) -> Self {
        let n = universe.size() as usize;
        Distribution {
            universe,
            pmf: vec![1.0 / n as f64; n],
            sampler: Sampler::Uniform,
        }
    }

    pub fn point_mass(universe: Universe, x: DomainElement) -> Result<Self> {
        universe.check(x)?;
        let mut pmf = vec![0.0; universe.size() as usize];
        pmf[x.index() as usize] = 1.0;
        Self::new(universe, pmf)
    }

    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(universe: Universe, weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        let mut pmf: Vec<f64> = weights.iter().map(|w| w / total).collect();
        // absorb rounding residue so the normalization check is exact enough
        let residue = 1.0 - pmf.iter().sum::<f64>();
        if let Some(p) = pmf.iter_mut().max_by(|a, b| a.total_cmp(b)) {
            *p += residue;
        }
        Self::new(universe, pmf)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn mass(&self, x: DomainElement) -> f64 {
        self.pmf[x.index() as usize]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DomainElement {
        match &self.sampler {
            Sampler::Uniform => DomainElement::new(rng.gen_range(0..self.universe.size())),
            Sampler::Weighted(w) => DomainElement::new(w.sample(rng) as u32),
        }
    }
}

/// Draws `n` i.i.d. examples from `dist` and labels them by `concepts`.
pub fn sample_database<R: Rng + ?Sized>(
    dist: &Distribution,
    concepts: &[Concept],
    n: usize,
    rng: &mut R,
) -> Result<MultiLabeledDatabase> {
    if n == 0 {
        return Err(Error::param("n", 0.0, "must be at least 1"));
    }
    for c in concepts {
        c.check(dist.universe())?;
    }
    let mut db = MultiLabeledDatabase::new(*dist.universe(), concepts.len());
    let mut labels = vec![false; concepts.len()];
    for _ in 0..n {
        let x = dist.sample(rng);
        for (y, c) in labels.iter_mut().zip(concepts) {
            *y = c.apply(x);
        }
        db.push_row(x, &labels)?;
    }
    Ok(db)
}

/// A distribution over `X × {0,1}^k`, stored as its support.
#[derive(Debug, Clone)]
pub struct LabeledDistribution {
    universe: Universe,
    k: usize,
    support: Vec<(DomainElement, Vec<bool>, f64)>,
    sampler: WeightedIndex<f64>,
}

impl LabeledDistribution {
    pub fn new(universe: Universe, k: usize, support: Vec<(DomainElement, Vec<bool>, f64)>) -> Result<Self> {
        for (x, labels, _) in &support {
            universe.check(*x)?;
            if labels.len() != k {
                return Err(Error::InvalidDistribution(format!(
                    "support entry has {} labels, expected {k}",
                    labels.len()
                )));
            }
        }
        check_pmf(support.iter().map(|(_, _, p)| p))?;
        let sampler = WeightedIndex::new(support.iter().map(|(_, _, p)| *p))
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        Ok(LabeledDistribution { universe, k, support, sampler })
    }

    /// The realizable case: `x ~ dist`, labels given by `concepts`.
    pub fn realizable(dist: &Distribution, concepts: &[Concept]) -> Result<Self> {
        for c in concepts {
            c.check(dist.universe())?;
        }
        let support = dist
            .universe()
            .elements()
            .filter(|&x| dist.mass(x) > 0.0)
            .map(|x| (x, concepts.iter().map(|c| c.apply(x)).collect(), dist.mass(x)))
            .collect();
        Self::new(*dist.universe(), concepts.len(), support)
    }

    /// `x ~ dist` and each label drawn independently with
    /// `P[y_j = 1 | x] = one_prob[j][x]`.
    pub fn independent_labels(dist: &Distribution, one_prob: &[Vec<f64>]) -> Result<Self> {
        let k = one_prob.len();
        let size = dist.universe().size() as usize;
        if one_prob.iter().any(|row| row.len() != size || row.iter().any(|p| !(0.0..=1.0).contains(p))) {
            return Err(Error::InvalidDistribution("label probabilities malformed".into()));
        }
        let mut support = Vec::new();
        for x in dist.universe().elements().filter(|&x| dist.mass(x) > 0.0) {
            for mask in 0u64..(1u64 << k) {
                let labels: Vec<bool> = (0..k).map(|j| mask >> j & 1 == 1).collect();
                let p = labels.iter().enumerate().fold(dist.mass(x), |acc, (j, &y)| {
                    let q = one_prob[j][x.index() as usize];
                    acc * if y { q } else { 1.0 - q }
                });
                if p > 0.0 {
                    support.push((x, labels, p));
                }
            }
        }
        let total: f64 = support.iter().map(|s| s.2).sum();
        for s in &mut support {
            s.2 /= total;
        }
        Self::new(*dist.universe(), k, support)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn support(&self) -> &[(DomainElement, Vec<bool>, f64)] {
        &self.support
    }

    /// `error_{P_j}(h) = Pr_{(x,y) ~ P}[h(x) != y_j]`.
    pub fn error(&self, j: usize, h: &Concept) -> Result<f64> {
        if j >= self.k {
            return Err(Error::LabelOutOfRange { index: j, k: self.k });
        }
        h.check(&self.universe)?;
        Ok(self
            .support
            .iter()
            .filter(|(x, y, _)| h.apply(*x) != y[j])
            .map(|(_, _, p)| p)
            .sum())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (DomainElement, &[bool]) {
        let (x, y, _) = &self.support[self.sampler.sample(rng)];
        (*x, y)
    }

    pub fn sample_database<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<MultiLabeledDatabase> {
        let mut db = MultiLabeledDatabase::new(self.universe, self.k);
        for _ in 0..n {
            let (x, y) = self.sample(rng);
            db.push_row(x, y)?;
        }
        Ok(db)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn rejects_unnormalized_pmf() {
        let u = Universe::indexed(2).unwrap();
        assert!(Distribution::new(u, vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(u, vec![1.5, -0.5]).is_err());
        assert!(Distribution::new(u, vec![1.0]).is_err());
    }

    #[test]
    fn point_mass_gives_identical_rows() {
        let u = Universe::indexed(5).unwrap();
        let d = Distribution::point_mass(u, DomainElement::new(3)).unwrap();
        let db = sample_database(&d, &[Concept::Point(3)], 50, &mut stream(1, &[])).unwrap();
        assert!(db.elements().iter().all(|x| x.index() == 3));
        assert!(db.column(0).iter().all(|&y| y));
    }

    #[test]
    fn unlabeled_and_deterministic() {
        let u = Universe::indexed(8).unwrap();
        let d = Distribution::uniform(u);
        let a = sample_database(&d, &[], 30, &mut stream(9, &[0])).unwrap();
        let b = sample_database(&d, &[], 30, &mut stream(9, &[0])).unwrap();
        assert_eq!(a.k(), 0);
        assert_eq!(a, b);
        assert!(sample_database(&d, &[], 0, &mut stream(9, &[0])).is_err());
    }

    #[test]
    fn labeled_error_matches_hand_value() {
        let u = Universe::indexed(2).unwrap();
        let d = Distribution::uniform(u);
        // P[y=1|x=0] = 0.8, P[y=1|x=1] = 0.1
        let ld = LabeledDistribution::independent_labels(&d, &[vec![0.8, 0.1]]).unwrap();
        let err = ld.error(0, &Concept::Point(0)).unwrap();
        assert!((err - (0.5 * 0.2 + 0.5 * 0.1)).abs() < 1e-12);
        let err_zero = ld.error(0, &Concept::Zero).unwrap();
        assert!((err_zero - (0.5 * 0.8 + 0.5 * 0.1)).abs() < 1e-12);
    }
}
