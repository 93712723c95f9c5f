use super::primes::primes_up_to;
use crate::error::{Error, Result};

/// Segmentation and memory limits for the Möbius sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Values processed per segment.
    pub segment_len: u64,
    /// Largest range [`mobius_sieve_with`] will materialize in one vector.
    pub max_output_len: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_len: 1 << 20,
            max_output_len: 1 << 28,
        }
    }
}

/// μ(n) for every n in `[lo, hi]` with the default [`SieveConfig`].
pub fn mobius_sieve(lo: u64, hi: u64) -> Result<Vec<i8>> {
    mobius_sieve_with(lo, hi, &SieveConfig::default())
}

pub fn mobius_sieve_with(lo: u64, hi: u64, config: &SieveConfig) -> Result<Vec<i8>> {
    check_range(lo, hi)?;
    let len = hi - lo + 1;
    if len > config.max_output_len {
        return Err(Error::SieveBudget {
            len,
            budget: config.max_output_len,
        });
    }
    let mut out = Vec::with_capacity(len as usize);
    for_each_mobius_segment(lo, hi, config, |_, seg| out.extend_from_slice(seg))?;
    Ok(out)
}

fn check_range(lo: u64, hi: u64) -> Result<()> {
    if lo == 0 || lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    if hi > super::factor::MAX_SUPPORTED {
        return Err(Error::TooLarge(hi));
    }
    Ok(())
}

/// Streams μ over `[lo, hi]` one segment at a time; `visit` receives the
/// first integer of the segment and its μ values. Memory stays
/// O(segment_len + √hi) whatever the range length.
pub fn for_each_mobius_segment<F>(
    lo: u64,
    hi: u64,
    config: &SieveConfig,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(u64, &[i8]),
{
    check_range(lo, hi)?;
    if config.segment_len == 0 {
        return Err(Error::Config("segment_len must be positive".into()));
    }
    let primes = primes_up_to(hi.isqrt());
    let seg_len = config.segment_len.min(hi - lo + 1) as usize;
    let mut mu = vec![1i8; seg_len];
    // product of the distinct sieving primes dividing each n
    let mut radical = vec![1u64; seg_len];
    let mut start = lo;
    loop {
        let end = hi.min(start + seg_len as u64 - 1);
        let len = (end - start + 1) as usize;
        mu[..len].fill(1);
        radical[..len].fill(1);
        for &p in &primes {
            let mut m = start.div_ceil(p) * p;
            while m <= end {
                let i = (m - start) as usize;
                mu[i] = -mu[i];
                radical[i] *= p;
                m += p;
            }
            let sq = p * p;
            let mut m = start.div_ceil(sq) * sq;
            while m <= end {
                mu[(m - start) as usize] = 0;
                m += sq;
            }
        }
        for i in 0..len {
            // after removing the sieving primes at most one prime > √hi remains
            if mu[i] != 0 && radical[i] != start + i as u64 {
                mu[i] = -mu[i];
            }
        }
        visit(start, &mu[..len]);
        if end == hi {
            return Ok(());
        }
        start = end + 1;
    }
}
