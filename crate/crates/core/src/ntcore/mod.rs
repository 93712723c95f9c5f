//! Exact arithmetic ground truth: primes, factorization, and the Möbius function.

mod factor;
mod montgomery;
mod primes;
mod sieve;

pub use factor::{
    factorize, factorize_seeded, mobius, Factorization, DEFAULT_RHO_SEED, MAX_SUPPORTED,
};
pub use primes::{first_primes, is_prime, primes_in_range, PrimeBasis};
pub use sieve::{for_each_mobius_segment, mobius_sieve, mobius_sieve_with, SieveConfig};
