use std::fmt;

use num_bigint::BigUint;

use super::montgomery::Montgomery;
use crate::error::{Error, Result};

/// An ordered list of distinct primes used as CRT moduli.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PrimeBasis {
    primes: Vec<u64>,
}

impl PrimeBasis {
    /// Validates that `primes` is strictly increasing and every entry is prime.
    pub fn new(primes: Vec<u64>) -> Result<Self> {
        for (i, &p) in primes.iter().enumerate() {
            if !is_prime(p) {
                return Err(Error::InvalidBasis(format!("{p} is not prime")));
            }
            if i > 0 && primes[i - 1] >= p {
                return Err(Error::InvalidBasis(format!(
                    "{p} does not exceed the preceding {}",
                    primes[i - 1]
                )));
            }
        }
        Ok(PrimeBasis { primes })
    }

    pub fn empty() -> Self {
        PrimeBasis::default()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.position(p).is_some()
    }

    pub fn position(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    /// The same basis with `p` removed (no-op if absent).
    pub fn without(&self, p: u64) -> PrimeBasis {
        PrimeBasis {
            primes: self.primes.iter().copied().filter(|&q| q != p).collect(),
        }
    }

    /// True if every prime of `self` also appears in `other`.
    pub fn is_subset_of(&self, other: &PrimeBasis) -> bool {
        self.primes.iter().all(|&p| other.contains(p))
    }

    /// Product of all moduli.
    pub fn product(&self) -> BigUint {
        self.primes
            .iter()
            .fold(BigUint::from(1u32), |acc, &p| acc * p)
    }
}

impl fmt::Display for PrimeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.primes.as_slice() {
            [] => write!(f, "[]"),
            [p] => write!(f, "[{p}]"),
            ps if ps.len() <= 6 => {
                let parts: Vec<String> = ps.iter().map(u64::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
            ps => write!(f, "[{}..{}; {} primes]", ps[0], ps[ps.len() - 1], ps.len()),
        }
    }
}

/// All primes `<= limit` by the sieve of Eratosthenes.
pub(crate) fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// The `k` smallest primes.
pub fn first_primes(k: usize) -> PrimeBasis {
    if k == 0 {
        return PrimeBasis::empty();
    }
    // p_k < k (ln k + ln ln k) for k >= 6
    let kf = k.max(6) as f64;
    let bound = (kf * (kf.ln() + kf.ln().ln())).ceil() as u64 + 10;
    let mut primes = primes_up_to(bound);
    primes.truncate(k);
    debug_assert_eq!(primes.len(), k);
    PrimeBasis { primes }
}

/// All primes in `[lo, hi]` in ascending order, found by a segmented sieve.
pub fn primes_in_range(lo: u64, hi: u64) -> PrimeBasis {
    if hi < 2 || lo > hi {
        return PrimeBasis::empty();
    }
    let lo = lo.max(2);
    let small = primes_up_to(hi.isqrt());
    let mut primes = Vec::new();
    const SEGMENT: u64 = 1 << 18;
    let mut start = lo;
    loop {
        let end = hi.min(start.saturating_add(SEGMENT - 1));
        let mut composite = vec![false; (end - start + 1) as usize];
        for &p in &small {
            let first = (p * p).max(start.div_ceil(p) * p);
            let mut m = first;
            while m <= end {
                composite[(m - start) as usize] = true;
                m += p;
            }
        }
        primes.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| start + i as u64),
        );
        if end == hi {
            break;
        }
        start = end + 1;
    }
    PrimeBasis { primes }
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for every `u64`.
///
/// Trial division by the first twelve primes, then Miller-Rabin with those
/// same twelve bases, which is exact below 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    if n >= 1 << 63 {
        return miller_rabin_u128(n);
    }
    let mont = Montgomery::new(n);
    let d_shift = (n - 1).trailing_zeros();
    let d = (n - 1) >> d_shift;
    let one = mont.one();
    let minus_one = mont.enter(n - 1);
    'witness: for &a in &SMALL_PRIMES {
        let mut x = mont.pow(mont.enter(a), d);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..d_shift {
            x = mont.mul(x, x);
            if x == minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Slow path for n >= 2^63, where the Montgomery reduction above could overflow.
fn miller_rabin_u128(n: u64) -> bool {
    let n128 = n as u128;
    let mulmod = |a: u128, b: u128| a * b % n128;
    let powmod = |mut b: u128, mut e: u64| {
        let mut acc = 1u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = powmod(a as u128, d);
        if x == 1 || x == n128 - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n128 - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn first_primes_examples() {
        assert_eq!(first_primes(0).primes(), &[] as &[u64]);
        assert_eq!(first_primes(1).primes(), &[2]);
        let hundred = first_primes(100);
        assert_eq!(hundred.len(), 100);
        assert_eq!(*hundred.primes().last().unwrap(), 541);
        assert_eq!(hundred.primes()[98], 523);
        for k in 1..400 {
            assert_eq!(first_primes(k).len(), k);
        }
    }

    #[test]
    fn range_examples() {
        assert_eq!(primes_in_range(2, 10).primes(), &[2, 3, 5, 7]);
        assert!(primes_in_range(24, 28).is_empty());
        let second = primes_in_range(547, 1223);
        assert_eq!(second.len(), 100);
        assert_eq!(second.primes()[0], 547);
        assert_eq!(*second.primes().last().unwrap(), 1223);
        assert_eq!(&first_primes(200).primes()[100..], second.primes());
    }

    #[test]
    fn range_across_segments_matches_trial_division() {
        let lo = 10_000_000_000u64;
        let got = primes_in_range(lo, lo + 600_000);
        let want: Vec<u64> = (lo..=lo + 600_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(got.primes(), want.as_slice());
    }

    #[test]
    fn is_prime_examples() {
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(is_prime(541));
        assert!(is_prime(999_983));
        assert!(trial_division(999_983));
        assert!(!is_prime(999_966_000_289));
        assert!(is_prime((1 << 63) - 25));
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
                                                       // strong pseudoprimes to several small bases
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
    }

    #[test]
    fn is_prime_matches_trial_division_below_100k() {
        for n in 0..100_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n={n}");
        }
    }

    #[test]
    fn basis_validation() {
        assert!(PrimeBasis::new(vec![2, 3, 5]).is_ok());
        assert!(PrimeBasis::new(vec![2, 4]).is_err());
        assert!(PrimeBasis::new(vec![3, 2]).is_err());
        assert!(PrimeBasis::new(vec![3, 3]).is_err());
        let b = first_primes(5);
        assert_eq!(b.without(3).primes(), &[2, 5, 7, 11]);
        assert_eq!(b.product(), BigUint::from(2310u32));
    }
}
