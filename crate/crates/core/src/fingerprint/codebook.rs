use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::open_unit;
use crate::{Error, Result};

use super::trace::{bs_trace, TraceResult};

/// A pirate codeword `w'`.
pub type PirateWord = Vec<bool>;

/// A code with `n` users (numbered from 1) and `k` positions.
pub trait FingerprintCode {
    fn users(&self) -> usize;

    fn length(&self) -> usize;

    fn bit(&self, user: usize, j: usize) -> bool;

    fn trace(&self, w: &[bool]) -> TraceResult;

    fn codeword(&self, user: usize) -> Vec<bool> {
        (0..self.length()).map(|j| self.bit(user, j)).collect()
    }
}

/// Optimal-length codes with i.i.d. biased columns are not constructed.
pub fn tardos_gen(n: usize, xi: f64) -> Result<Box<dyn FingerprintCode>> {
    let _ = (n, xi);
    Err(Error::Unsupported("Tardos codes are not implemented; use bs_gen".into()))
}

/// `⌈2n³ ln(2n/ξ)⌉` rounded up to a multiple of `n - 1`.
pub fn bs_length(n: usize, xi: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::param("n", n as f64, "needs at least two users"));
    }
    open_unit("xi", xi)?;
    let raw = (2.0 * (n as f64).powi(3) * (2.0 * n as f64 / xi).ln()).ceil() as usize;
    Ok(raw.div_ceil(n - 1) * (n - 1))
}

/// Boneh-Shaw codebook. Column `j` has a hidden type `t_j ∈ 1..n-1` and
/// gives user `i` the bit `i <= t_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    n: usize,
    xi: f64,
    types: Vec<u32>,
}

/// `k/(n-1)` columns of each type in a uniformly random order. With
/// `strict`, `k` must also meet [`bs_length`].
pub fn bs_gen<R: Rng + ?Sized>(n: usize, k: usize, xi: f64, strict: bool, rng: &mut R) -> Result<Codebook> {
    let required = bs_length(n, xi)?;
    if k == 0 || !k.is_multiple_of(n - 1) {
        return Err(Error::CodeLengthNotDivisible { k, divisor: n - 1 });
    }
    if strict && k < required {
        return Err(Error::CodeTooShort { k, required });
    }
    let d = k / (n - 1);
    let mut types: Vec<u32> = (1..n as u32).flat_map(|t| std::iter::repeat_n(t, d)).collect();
    types.shuffle(rng);
    Ok(Codebook { n, xi, types })
}

impl Codebook {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.types.len()
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Columns per type.
    pub fn block_size(&self) -> usize {
        self.types.len() / (self.n - 1)
    }

    /// The secret type assignment.
    pub fn column_types(&self) -> &[u32] {
        &self.types
    }

    pub fn type_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n - 1];
        for &t in &self.types {
            counts[t as usize - 1] += 1;
        }
        counts
    }
}

impl FingerprintCode for Codebook {
    fn users(&self) -> usize {
        self.n
    }

    fn length(&self) -> usize {
        self.types.len()
    }

    fn bit(&self, user: usize, j: usize) -> bool {
        assert!((1..=self.n).contains(&user), "user {user} outside 1..={}", self.n);
        user as u32 <= self.types[j]
    }

    fn trace(&self, w: &[bool]) -> TraceResult {
        bs_trace(w, self)
    }
}

/// A nonempty set of users.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coalition(BTreeSet<usize>);

impl Coalition {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Unsupported("a coalition needs at least one member".into()));
        }
        if let Some(&bad) = set.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::ElementOutOfRange { element: bad as u64, size: n as u64 });
        }
        Ok(Coalition(set))
    }

    pub fn full(n: usize) -> Self {
        Coalition((1..=n).collect())
    }

    /// `[n] \ {i}`.
    pub fn without(n: usize, i: usize) -> Result<Self> {
        Self::new(n, (1..=n).filter(|&u| u != i))
    }

    pub fn contains(&self, user: usize) -> bool {
        self.0.contains(&user)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

/// Marking assumption: every position agrees with some member's bit.
pub fn feasible(w: &[bool], code: &dyn FingerprintCode, coalition: &Coalition) -> bool {
    w.len() == code.length() && w.iter().enumerate().all(|(j, &b)| coalition.members().any(|i| code.bit(i, j) == b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;

    #[test]
    fn reference_length() {
        assert_eq!(bs_length(6, 0.05).unwrap(), 2370);
    }

    #[test]
    fn divisibility_and_strictness() {
        let mut rng = stream(0, &[]);
        assert_eq!(bs_gen(6, 12, 0.05, false, &mut rng), Err(Error::CodeLengthNotDivisible { k: 12, divisor: 5 }));
        assert_eq!(bs_gen(6, 10, 0.05, true, &mut rng), Err(Error::CodeTooShort { k: 10, required: 2370 }));
        assert!(bs_gen(6, 10, 0.05, false, &mut rng).is_ok());
        assert!(tardos_gen(6, 0.05).is_err());
    }

    #[test]
    fn feasibility_examples() {
        let code = bs_gen(4, 9, 0.1, false, &mut stream(1, &[])).unwrap();
        let full = Coalition::full(4);
        assert!(feasible(&[true, false, true, false, true, false, true, false, true], &code, &full));
        let last = Coalition::new(4, [4]).unwrap();
        assert!(feasible(&code.codeword(4), &code, &last));
        assert!(!feasible(&[true; 9], &code, &last));
        assert!(Coalition::new(4, []).is_err());
        assert!(Coalition::new(4, [5]).is_err());
    }

    proptest! {
        #[test]
        fn structure_holds_for_every_seed(seed in any::<u64>(), n in 2usize..8, blocks in 1usize..6) {
            let k = blocks * (n - 1);
            let code = bs_gen(n, k, 0.1, false, &mut stream(seed, &[])).unwrap();
            prop_assert!(code.type_counts().iter().all(|&c| c == blocks));
            prop_assert!(code.codeword(1).iter().all(|&b| b));
            prop_assert!(code.codeword(n).iter().all(|&b| !b));
            for i in 1..n {
                let (upper, lower) = (code.codeword(i), code.codeword(i + 1));
                for j in 0..k {
                    let flipped = upper[j] != lower[j];
                    prop_assert_eq!(flipped, code.column_types()[j] as usize == i);
                    prop_assert!(!lower[j] || upper[j]);
                }
            }
        }
    }
}
