use std::fmt;
use std::sync::OnceLock;

use super::montgomery::Montgomery;
use super::primes::{is_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Largest integer accepted by [`factorize`] and [`mobius`].
pub const MAX_SUPPORTED: u64 = (1 << 63) - 1;

/// Seed used by [`factorize`]; the result never depends on it, only the work done.
pub const DEFAULT_RHO_SEED: u64 = 0x6d75_2d63_7274;

const TRIAL_LIMIT: u64 = 1000;

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn mobius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| {
                if e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// Factor `n` with the default rho seed.
pub fn factorize(n: u64) -> Result<Factorization> {
    factorize_seeded(n, DEFAULT_RHO_SEED)
}

/// Factor `n`: trial division below 1000, Miller-Rabin on the cofactor, then
/// Brent's rho with curve constants drawn from `seed`.
pub fn factorize_seeded(n: u64, seed: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero("factorize"));
    }
    if n > MAX_SUPPORTED {
        return Err(Error::TooLarge(n));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    for &p in trial_primes() {
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let mut large = Vec::new();
        let mut rng = SplitMix64::new(seed ^ n);
        split_into(rest, &mut rng, &mut large);
        large.sort_unstable();
        for p in large {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    Ok(Factorization { n, factors })
}

/// Push the prime factors (with multiplicity) of `m` onto `out`.
/// `m` has no prime factor below the trial division limit.
fn split_into(m: u64, rng: &mut SplitMix64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if m < TRIAL_LIMIT * TRIAL_LIMIT || is_prime(m) {
        out.push(m);
        return;
    }
    let r = m.isqrt();
    if r * r == m {
        split_into(r, rng, out);
        split_into(r, rng, out);
        return;
    }
    let d = loop {
        let d = brent_rho(m, rng.next_u64() % (m - 1) + 1, rng.next_u64() % m);
        if d != m {
            break d;
        }
    };
    split_into(d, rng, out);
    split_into(m / d, rng, out);
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A nontrivial divisor of odd composite `n`, or `n` itself when this
/// `(c, start)` pair fails.
fn brent_rho(n: u64, c: u64, start: u64) -> u64 {
    const BATCH: u64 = 128;
    let mont = Montgomery::new(n);
    let c = mont.enter(c);
    let f = |x: u64| mont.add(mont.mul(x, x), c);
    let mut y = mont.enter(start);
    let mut x = y;
    let mut ys = y;
    let mut q = mont.one();
    let mut g = 1;
    let mut r = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mont.mul(q, x.abs_diff(y));
            }
            g = gcd(mont.leave(q), n);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 26 {
            return n;
        }
    }
    if g == n {
        // The batch overshot; replay it one step at a time.
        loop {
            ys = f(ys);
            g = gcd(mont.leave(x.abs_diff(ys)), n);
            if g > 1 {
                break;
            }
        }
    }
    g
}

/// The Möbius function.
pub fn mobius(n: u64) -> Result<i8> {
    Ok(factorize(n)?.mobius())
}
