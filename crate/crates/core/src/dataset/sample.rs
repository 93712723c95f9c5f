use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ntcore::{factorize, for_each_mobius_segment, SieveConfig};
use crate::rng;

fn check_feasible(count: u64, lo: u64, hi: u64) -> Result<()> {
    if lo <= hi && count as u128 <= (hi - lo) as u128 + 1 {
        Ok(())
    } else {
        Err(Error::Infeasible { count, lo, hi })
    }
}

/// `count` distinct integers drawn uniformly from `[lo, hi]`, in draw order.
///
/// Draws come from the ChaCha8 stream for `seed`; a value already accepted is
/// redrawn, so the result is a uniformly random ordered sample without
/// replacement.
pub fn sample_unique_integers(count: u64, lo: u64, hi: u64, seed: u64) -> Result<Vec<u64>> {
    check_feasible(count, lo, hi)?;
    let mut stream = rng::stream(seed);
    let mut seen = HashSet::with_capacity(count as usize);
    let mut out = Vec::with_capacity(count as usize);
    while (out.len() as u64) < count {
        let x = rng::in_range(&mut stream, lo, hi);
        if seen.insert(x) {
            out.push(x);
        }
    }
    Ok(out)
}

const CANDIDATE_BATCH: usize = 1 << 14;
const EXACT_COUNT_LIMIT: u64 = 1 << 24;

/// Like [`sample_unique_integers`] restricted to squarefree values: candidates
/// are drawn in the same order and non-squarefree ones are skipped.
pub fn sample_unique_squarefree(count: u64, lo: u64, hi: u64, seed: u64) -> Result<Vec<u64>> {
    let lo = lo.max(1);
    check_feasible(count, lo, hi)?;
    // long intervals are at least half squarefree, so only count when it could matter
    let span = hi - lo + 1;
    if span < EXACT_COUNT_LIMIT || count > span / 2 {
        let mut available = 0u64;
        for_each_mobius_segment(lo, hi, &SieveConfig::default(), |_, seg| {
            available += seg.iter().filter(|&&m| m != 0).count() as u64;
        })?;
        if available < count {
            return Err(Error::Infeasible { count, lo, hi });
        }
    }
    let mut stream = rng::stream(seed);
    let mut seen = HashSet::with_capacity(count as usize);
    let mut out = Vec::with_capacity(count as usize);
    while (out.len() as u64) < count {
        let mut batch = Vec::with_capacity(CANDIDATE_BATCH);
        while batch.len() < CANDIDATE_BATCH {
            let x = rng::in_range(&mut stream, lo, hi);
            if seen.insert(x) {
                batch.push(x);
            }
            if seen.len() as u64 == span {
                break;
            }
        }
        let keep: Vec<bool> = batch
            .par_iter()
            .map(|&x| factorize(x).map(|f| f.is_squarefree()))
            .collect::<Result<_>>()?;
        out.extend(
            batch
                .into_iter()
                .zip(keep)
                .filter(|&(_, k)| k)
                .map(|(x, _)| x)
                .take((count - out.len() as u64) as usize),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_permutation() {
        let mut v = sample_unique_integers(5, 2, 6, 123).unwrap();
        v.sort_unstable();
        assert_eq!(v, vec![2, 3, 4, 5, 6]);
    }

    #[test]
    fn deterministic_and_distinct() {
        let a = sample_unique_integers(50_000, 2, 10_000_000_000_000, 7).unwrap();
        let b = sample_unique_integers(50_000, 2, 10_000_000_000_000, 7).unwrap();
        assert_eq!(a, b);
        let set: HashSet<_> = a.iter().collect();
        assert_eq!(set.len(), a.len());
        assert!(a.iter().all(|&x| (2..=10_000_000_000_000).contains(&x)));
        assert_ne!(
            a,
            sample_unique_integers(50_000, 2, 10_000_000_000_000, 8).unwrap()
        );
    }

    #[test]
    fn infeasible_counts() {
        assert!(matches!(
            sample_unique_integers(6, 2, 6, 0),
            Err(Error::Infeasible { count: 6, .. })
        ));
        assert!(sample_unique_integers(0, 2, 6, 0).unwrap().is_empty());
        assert!(sample_unique_integers(1, 7, 6, 0).is_err());
        // squarefree values in [1, 10]: 1 2 3 5 6 7 10
        assert!(sample_unique_squarefree(8, 1, 10, 0).is_err());
        let mut all = sample_unique_squarefree(7, 1, 10, 0).unwrap();
        all.sort_unstable();
        assert_eq!(all, vec![1, 2, 3, 5, 6, 7, 10]);
    }

    #[test]
    fn uniform_over_small_range() {
        // each value of [0, 9] should lead the sample about equally often
        let mut first = [0u32; 10];
        for seed in 0..20_000 {
            first[sample_unique_integers(3, 0, 9, seed).unwrap()[0] as usize] += 1;
        }
        // chi-square, 9 dof, 0.999 quantile 27.877
        let chi: f64 = first
            .iter()
            .map(|&c| (c as f64 - 2000.0).powi(2) / 2000.0)
            .sum();
        assert!(chi < 27.877, "{first:?}");
    }

    #[test]
    fn squarefree_sample_is_squarefree() {
        let v = sample_unique_squarefree(20_000, 2, 10_000_000_000_000, 3).unwrap();
        assert_eq!(v.len(), 20_000);
        assert!(v.iter().all(|&x| factorize(x).unwrap().is_squarefree()));
        assert_eq!(
            v,
            sample_unique_squarefree(20_000, 2, 10_000_000_000_000, 3).unwrap()
        );
    }
}
