use std::fmt;
use std::str::FromStr;

use crate::crtenc::CrtVector;
use crate::error::{Error, Result};
use crate::rng;

/// Which residues get replaced by uniform random values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorruptionScheme {
    None,
    RandomizeMod2,
    RandomizeMod3,
    RandomizeMod2And3,
    /// Keep n mod 2 and n mod 3, randomize every other residue.
    RandomizeAllExcept2And3,
}

impl CorruptionScheme {
    pub const ALL: [CorruptionScheme; 5] = [
        CorruptionScheme::None,
        CorruptionScheme::RandomizeMod2,
        CorruptionScheme::RandomizeMod3,
        CorruptionScheme::RandomizeMod2And3,
        CorruptionScheme::RandomizeAllExcept2And3,
    ];

    /// Stable numeric id, mixed into per-example seeds.
    pub fn id(self) -> u64 {
        match self {
            CorruptionScheme::None => 0,
            CorruptionScheme::RandomizeMod2 => 1,
            CorruptionScheme::RandomizeMod3 => 2,
            CorruptionScheme::RandomizeMod2And3 => 3,
            CorruptionScheme::RandomizeAllExcept2And3 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CorruptionScheme::None => "none",
            CorruptionScheme::RandomizeMod2 => "mod2",
            CorruptionScheme::RandomizeMod3 => "mod3",
            CorruptionScheme::RandomizeMod2And3 => "mod23",
            CorruptionScheme::RandomizeAllExcept2And3 => "all-but-23",
        }
    }

    /// Primes that must be present in the basis.
    fn required_primes(self) -> &'static [u64] {
        match self {
            CorruptionScheme::None | CorruptionScheme::RandomizeAllExcept2And3 => &[],
            CorruptionScheme::RandomizeMod2 => &[2],
            CorruptionScheme::RandomizeMod3 => &[3],
            CorruptionScheme::RandomizeMod2And3 => &[2, 3],
        }
    }

    fn touches(self, p: u64) -> bool {
        match self {
            CorruptionScheme::None => false,
            CorruptionScheme::RandomizeMod2 => p == 2,
            CorruptionScheme::RandomizeMod3 => p == 3,
            CorruptionScheme::RandomizeMod2And3 => p == 2 || p == 3,
            CorruptionScheme::RandomizeAllExcept2And3 => p != 2 && p != 3,
        }
    }

    pub fn check_basis(self, basis: &crate::ntcore::PrimeBasis) -> Result<()> {
        match self.required_primes().iter().find(|&&p| !basis.contains(p)) {
            Some(&prime) => Err(Error::SchemeIncompatible {
                scheme: self.name(),
                prime,
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for CorruptionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorruptionScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CorruptionScheme::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown corruption scheme {s:?}")))
    }
}

/// Seed for corrupting the example keyed by `key` (normally n) under `scheme`.
/// Depends only on these three values, so every scheme sees the same n set.
pub fn corruption_seed(global_seed: u64, key: u64, scheme: CorruptionScheme) -> u64 {
    rng::derive_seed(global_seed, &[key, scheme.id()])
}

/// Replace the residues `scheme` targets with uniform draws in `[0, p)`,
/// in ascending prime order from one stream seeded with `seed`.
pub fn corrupt_vector(v: &CrtVector, scheme: CorruptionScheme, seed: u64) -> Result<CrtVector> {
    scheme.check_basis(v.basis())?;
    if scheme == CorruptionScheme::None {
        return Ok(v.clone());
    }
    let mut stream = rng::stream(seed);
    let mut out = v.clone();
    for (i, &p) in v.basis().primes().iter().enumerate() {
        if scheme.touches(p) {
            out = out.with_residue(i, rng::below(&mut stream, p));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crtenc::encode_crt;
    use crate::ntcore::{first_primes, PrimeBasis};

    #[test]
    fn none_is_identity() {
        let v = encode_crt(123_456_789, &first_primes(100));
        assert_eq!(corrupt_vector(&v, CorruptionScheme::None, 9).unwrap(), v);
    }

    #[test]
    fn only_targeted_positions_change() {
        let basis = first_primes(100);
        for n in 2..300u64 {
            let v = encode_crt(n, &basis);
            for scheme in CorruptionScheme::ALL {
                let c = corrupt_vector(&v, scheme, n * 31 + scheme.id()).unwrap();
                for (i, &p) in basis.primes().iter().enumerate() {
                    if !scheme.touches(p) {
                        assert_eq!(c.residues()[i], v.residues()[i], "{scheme} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn all_but_23_keeps_2_and_3() {
        let v = encode_crt(1_000_003, &first_primes(100));
        let c = corrupt_vector(&v, CorruptionScheme::RandomizeAllExcept2And3, 1).unwrap();
        assert_eq!(c.residue_mod(2), v.residue_mod(2));
        assert_eq!(c.residue_mod(3), v.residue_mod(3));
        assert_ne!(c, v);
    }

    #[test]
    fn deterministic_per_seed() {
        let v = encode_crt(77, &first_primes(25));
        let s = CorruptionScheme::RandomizeAllExcept2And3;
        assert_eq!(
            corrupt_vector(&v, s, 5).unwrap(),
            corrupt_vector(&v, s, 5).unwrap()
        );
        assert_ne!(
            corrupt_vector(&v, s, 5).unwrap(),
            corrupt_vector(&v, s, 6).unwrap()
        );
    }

    #[test]
    fn incompatible_basis() {
        let v = encode_crt(10, &PrimeBasis::new(vec![3, 5]).unwrap());
        assert!(matches!(
            corrupt_vector(&v, CorruptionScheme::RandomizeMod2, 0),
            Err(Error::SchemeIncompatible { prime: 2, .. })
        ));
        assert!(corrupt_vector(&v, CorruptionScheme::RandomizeMod3, 0).is_ok());
        assert!(corrupt_vector(&v, CorruptionScheme::RandomizeMod2And3, 0).is_err());
    }

    #[test]
    fn scheme_names_roundtrip() {
        for s in CorruptionScheme::ALL {
            assert_eq!(s.name().parse::<CorruptionScheme>().unwrap(), s);
        }
        assert!("mod5".parse::<CorruptionScheme>().is_err());
    }

    /// Chi-square statistic against the uniform distribution on `bins` cells.
    fn chi_square(counts: &[u64]) -> f64 {
        let total: u64 = counts.iter().sum();
        let expected = total as f64 / counts.len() as f64;
        counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum()
    }

    #[test]
    fn randomized_residues_are_uniform() {
        // 0.999 quantiles of chi-square with 1, 2, 4 and 6 degrees of freedom
        let critical = [(2u64, 10.828), (3, 13.816), (5, 18.467), (7, 22.458)];
        let basis = first_primes(10);
        let draws = 10_000u64;
        for (p, limit) in critical {
            let scheme = match p {
                2 => CorruptionScheme::RandomizeMod2,
                3 => CorruptionScheme::RandomizeMod3,
                _ => CorruptionScheme::RandomizeAllExcept2And3,
            };
            let mut counts = vec![0u64; p as usize];
            for k in 0..draws {
                // fixed n, so any non-uniformity comes from the corruption
                let v = encode_crt(30_030, &basis);
                let c = corrupt_vector(&v, scheme, corruption_seed(17, k, scheme)).unwrap();
                counts[c.residue_mod(p).unwrap() as usize] += 1;
            }
            let stat = chi_square(&counts);
            assert!(stat < limit, "p={p} chi2={stat} counts={counts:?}");
        }
    }
}
