//! Squarefree densities conditioned on divisibility patterns, and the
//! Bayes-optimal predictors they induce.
//!
//! For disjoint prime sets D (dividing n) and Q (not dividing n), the density
//! of squarefree n with that pattern is
//!
//! ```text
//! joint = ∏_{p∈D} 1/(p+1) · ∏_{q∈Q} q/(q+1) · 6/π²
//! prior = ∏_{p∈D} 1/p     · ∏_{q∈Q} (q-1)/q
//! ```
//!
//! so `joint / prior = ∏_{p∈D} p/(p+1) · ∏_{q∈Q} q²/(q²-1) · 6/π²`.
//! Divisibility by distinct primes is independent in natural density, which is
//! what makes `prior` a plain product.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::crtenc::CrtVector;
use crate::error::{Error, Result};
use crate::ntcore::{factorize, PrimeBasis};
use crate::rng;

/// Largest basis accepted by the exact 2^k enumeration.
pub const MAX_EXACT_PRIMES: usize = 30;

/// 6/π², the natural density of squarefree integers.
pub fn squarefree_density() -> f64 {
    6.0 / (PI * PI)
}

/// Which primes of a basis divide n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityPattern {
    basis: PrimeBasis,
    mask: Vec<bool>,
}

impl DivisibilityPattern {
    /// `divides[i]` is true when `basis.primes()[i]` divides n.
    pub fn new(basis: PrimeBasis, divides: Vec<bool>) -> Result<Self> {
        if divides.len() != basis.len() {
            return Err(Error::BasisMismatch(format!(
                "mask of length {} for {} primes",
                divides.len(),
                basis.len()
            )));
        }
        Ok(DivisibilityPattern {
            basis,
            mask: divides,
        })
    }

    /// Pattern in which exactly the listed primes divide n.
    pub fn with_divisors(basis: PrimeBasis, divisors: &[u64]) -> Result<Self> {
        for &p in divisors {
            if !basis.contains(p) {
                return Err(Error::BasisMismatch(format!("{p} not in basis {basis}")));
            }
        }
        let mask = basis
            .primes()
            .iter()
            .map(|p| divisors.contains(p))
            .collect();
        Ok(DivisibilityPattern { basis, mask })
    }

    /// Zero residues of `v` mark the dividing primes.
    pub fn of_vector(v: &CrtVector) -> Self {
        DivisibilityPattern {
            basis: v.basis().clone(),
            mask: v.residues().iter().map(|&r| r == 0).collect(),
        }
    }

    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    pub fn divides(&self) -> &[bool] {
        &self.mask
    }

    pub fn divisors(&self) -> Vec<u64> {
        self.basis
            .primes()
            .iter()
            .zip(&self.mask)
            .filter(|(_, &d)| d)
            .map(|(&p, _)| p)
            .collect()
    }

    fn terms(&self) -> impl Iterator<Item = (f64, bool)> + '_ {
        self.basis
            .primes()
            .iter()
            .map(|&p| p as f64)
            .zip(self.mask.iter().copied())
    }
}

/// Density of squarefree integers with exactly this divisibility pattern.
pub fn joint_density(pattern: &DivisibilityPattern) -> f64 {
    pattern.terms().fold(squarefree_density(), |acc, (p, d)| {
        if d {
            acc / (p + 1.0)
        } else {
            acc * p / (p + 1.0)
        }
    })
}

/// Density of all integers with this divisibility pattern.
pub fn pattern_prior(pattern: &DivisibilityPattern) -> f64 {
    pattern.terms().fold(
        1.0,
        |acc, (p, d)| {
            if d {
                acc / p
            } else {
                acc * (p - 1.0) / p
            }
        },
    )
}

/// P(squarefree | pattern) = joint / prior.
pub fn conditional_sqfree(pattern: &DivisibilityPattern) -> f64 {
    joint_density(pattern) / pattern_prior(pattern)
}

/// Predicts from the zero/nonzero status of residues over a fixed basis.
/// On an exact tie at conditional probability 1/2 it predicts squarefree.
#[derive(Debug, Clone)]
pub struct BayesModel {
    basis: PrimeBasis,
    /// p/(p+1) for p | n
    divisible: Vec<f64>,
    /// p²/(p²-1) for p ∤ n
    coprime: Vec<f64>,
}

impl BayesModel {
    pub fn new(basis: PrimeBasis) -> Self {
        let divisible = basis
            .primes()
            .iter()
            .map(|&p| p as f64 / (p as f64 + 1.0))
            .collect();
        let coprime = basis
            .primes()
            .iter()
            .map(|&p| {
                let sq = p as f64 * p as f64;
                sq / (sq - 1.0)
            })
            .collect();
        BayesModel {
            basis,
            divisible,
            coprime,
        }
    }

    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    /// P(squarefree | zero pattern of `v` on the model basis).
    pub fn conditional(&self, v: &CrtVector) -> Result<f64> {
        let mut c = squarefree_density();
        for (i, &p) in self.basis.primes().iter().enumerate() {
            let r = v.residue_mod(p).ok_or_else(|| {
                Error::BasisMismatch(format!(
                    "model prime {p} missing from input basis {}",
                    v.basis()
                ))
            })?;
            c *= if r == 0 {
                self.divisible[i]
            } else {
                self.coprime[i]
            };
        }
        Ok(c)
    }

    pub fn predict_mu2(&self, v: &CrtVector) -> Result<u8> {
        Ok((self.conditional(v)? >= 0.5) as u8)
    }

    /// The pattern says nothing about the sign, so μ = ±1 each get half of
    /// the squarefree mass: predict +1 when that half, c/2, is at least the
    /// mass 1 − c of μ = 0 (c ≥ 2/3), otherwise 0.
    pub fn predict_mu(&self, v: &CrtVector) -> Result<i8> {
        Ok((self.conditional(v)? >= 2.0 / 3.0) as i8)
    }
}

/// Visit `(joint, prior)` for all 2^k patterns of `basis`, depth first.
/// Each internal node costs one multiplication per branch, O(2^k) in total.
pub fn for_each_pattern<F: FnMut(f64, f64)>(basis: &PrimeBasis, mut visit: F) -> Result<()> {
    if basis.len() > MAX_EXACT_PRIMES {
        return Err(Error::EnumerationTooLarge {
            k: basis.len(),
            max: MAX_EXACT_PRIMES,
        });
    }
    // (joint factor, prior factor) for "divides" and "does not divide"
    let factors: Vec<[(f64, f64); 2]> = basis
        .primes()
        .iter()
        .map(|&p| {
            let p = p as f64;
            [(1.0 / (p + 1.0), 1.0 / p), (p / (p + 1.0), (p - 1.0) / p)]
        })
        .collect();

    fn walk<F: FnMut(f64, f64)>(
        factors: &[[(f64, f64); 2]],
        joint: f64,
        prior: f64,
        visit: &mut F,
    ) {
        match factors.split_first() {
            None => visit(joint, prior),
            Some((branches, rest)) => {
                for &(j, p) in branches {
                    walk(rest, joint * j, prior * p, visit);
                }
            }
        }
    }
    walk(&factors, squarefree_density(), 1.0, &mut visit);
    Ok(())
}

/// Accuracy of the optimal μ² predictor that sees divisibility by `basis`:
/// Σ over patterns of max(joint, prior − joint).
pub fn exact_accuracy_mu2(basis: &PrimeBasis) -> Result<f64> {
    let mut total = 0.0;
    for_each_pattern(basis, |joint, prior| total += joint.max(prior - joint))?;
    Ok(total)
}

/// Accuracy of the μ predictor when, given the pattern, μ = ±1 are equally
/// likely: Σ over patterns of max(prior − joint, joint/2).
pub fn exact_accuracy_mu(basis: &PrimeBasis) -> Result<f64> {
    let mut total = 0.0;
    for_each_pattern(basis, |joint, prior| {
        total += (prior - joint).max(joint / 2.0)
    })?;
    Ok(total)
}

/// One divisibility pattern with its densities.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternRow {
    pub divisors: Vec<u64>,
    pub joint: f64,
    pub prior: f64,
    pub conditional: f64,
}

/// Every pattern of a small basis, in bitmask order (bit i = i-th prime divides).
pub fn pattern_table(basis: &PrimeBasis) -> Result<Vec<PatternRow>> {
    const MAX_TABLE: usize = 12;
    if basis.len() > MAX_TABLE {
        return Err(Error::EnumerationTooLarge {
            k: basis.len(),
            max: MAX_TABLE,
        });
    }
    let k = basis.len();
    (0u32..1 << k)
        .map(|bits| {
            let mask = (0..k).map(|i| bits >> i & 1 == 1).collect();
            let pat = DivisibilityPattern::new(basis.clone(), mask)?;
            let (j, p) = (joint_density(&pat), pattern_prior(&pat));
            Ok(PatternRow {
                divisors: pat.divisors(),
                joint: j,
                prior: p,
                conditional: j / p,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Mu,
    Mu2,
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Target::Mu => "mu",
            Target::Mu2 => "mu2",
        })
    }
}

/// A sample proportion with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

impl Estimate {
    pub fn from_counts(hits: u64, samples: u64) -> Self {
        let value = if samples == 0 {
            0.0
        } else {
            hits as f64 / samples as f64
        };
        let std_error = if samples == 0 {
            0.0
        } else {
            (value * (1.0 - value) / samples as f64).sqrt()
        };
        Estimate {
            value,
            std_error,
            hits,
            samples,
        }
    }

    /// |value − x| in units of standard error.
    pub fn z_score(&self, x: f64) -> f64 {
        (self.value - x).abs() / self.std_error
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub samples: u64,
    pub seed: u64,
    pub lo: u64,
    pub hi: u64,
}

impl MonteCarloConfig {
    /// Uniform n in [2, 10^13].
    pub fn new(samples: u64, seed: u64) -> Self {
        MonteCarloConfig {
            samples,
            seed,
            lo: 2,
            hi: 10_000_000_000_000,
        }
    }
}

/// Draw `samples` integers uniformly (with replacement) from the stream for
/// `seed`.
pub fn draw_uniform(samples: u64, lo: u64, hi: u64, seed: u64) -> Vec<u64> {
    let mut stream = rng::stream(seed);
    (0..samples)
        .map(|_| rng::in_range(&mut stream, lo, hi))
        .collect()
}

/// Accuracy of [`BayesModel`] against factorization ground truth on uniformly
/// drawn n.
pub fn monte_carlo_accuracy(
    basis: &PrimeBasis,
    config: &MonteCarloConfig,
    target: Target,
) -> Result<Estimate> {
    if config.lo == 0 || config.lo > config.hi {
        return Err(Error::InvalidRange {
            lo: config.lo,
            hi: config.hi,
        });
    }
    let model = BayesModel::new(basis.clone());
    let ns = draw_uniform(config.samples, config.lo, config.hi, config.seed);
    let hits = ns
        .par_iter()
        .map(|&n| {
            let v = crate::crtenc::encode_crt(n, basis);
            let f = factorize(n)?;
            Ok(match target {
                Target::Mu2 => model.predict_mu2(&v)? == f.is_squarefree() as u8,
                Target::Mu => model.predict_mu(&v)? == f.mobius(),
            } as u64)
        })
        .sum::<Result<u64>>()?;
    Ok(Estimate::from_counts(hits, config.samples))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::crtenc::encode_crt;
    use crate::ntcore::{first_primes, for_each_mobius_segment, SieveConfig};

    fn basis(ps: &[u64]) -> PrimeBasis {
        PrimeBasis::new(ps.to_vec()).unwrap()
    }

    fn full_basis() -> PrimeBasis {
        first_primes(10)
    }

    fn pat(ps: &[u64], divisors: &[u64]) -> DivisibilityPattern {
        DivisibilityPattern::with_divisors(basis(ps), divisors).unwrap()
    }

    #[test]
    fn density_constants() {
        assert!((squarefree_density() - 0.607_927_101_854_026_6).abs() < 1e-15);
        assert!((1.0 - squarefree_density() - 0.392_072_898_145_973_4).abs() < 1e-15);
        assert_eq!(joint_density(&pat(&[], &[])), squarefree_density());
    }

    #[test]
    fn single_prime_densities() {
        let c = squarefree_density();
        assert!((joint_density(&pat(&[2], &[2])) - c / 3.0).abs() < 1e-15);
        assert!((joint_density(&pat(&[2], &[])) - 2.0 * c / 3.0).abs() < 1e-15);
        assert!((joint_density(&pat(&[2], &[2])) - 0.20264).abs() < 5e-6);
        assert!((joint_density(&pat(&[2], &[])) - 0.40528).abs() < 5e-6);
        assert_eq!(pattern_prior(&pat(&[2], &[2])), 0.5);
        assert!((pattern_prior(&pat(&[2, 3], &[2, 3])) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn conditionals_match_worked_values() {
        // 0.405285 and 0.810569, quoted truncated to four places
        let even = conditional_sqfree(&pat(&[2], &[2]));
        let odd = conditional_sqfree(&pat(&[2], &[]));
        assert_eq!((even * 1e4).floor(), 4052.0);
        assert_eq!((odd * 1e4).floor(), 8105.0);
        assert!((even - 4.0 / PI.powi(2)).abs() < 1e-15);
        assert!((odd - 8.0 / PI.powi(2)).abs() < 1e-15);
        let c = squarefree_density();
        let want = 4.0 / 3.0 * 9.0 / 8.0 * c;
        assert!((conditional_sqfree(&pat(&[2, 3], &[])) - want).abs() < 1e-12);
        assert!((want - 0.9119).abs() < 5e-5);
        let both = conditional_sqfree(&pat(&[2, 3], &[2, 3]));
        assert!((both - 2.0 / 3.0 * 3.0 / 4.0 * c).abs() < 1e-12);
    }

    /// Exhaustive oracle: among n <= 10^7 coprime to 6, the squarefree
    /// fraction approaches the conditional for the empty pattern over [2, 3].
    #[test]
    fn coprime_to_six_matches_sieve_count() {
        let (mut hits, mut total) = (0u64, 0u64);
        for_each_mobius_segment(1, 10_000_000, &SieveConfig::default(), |start, seg| {
            for (i, &m) in seg.iter().enumerate() {
                let n = start + i as u64;
                if !n.is_multiple_of(2) && !n.is_multiple_of(3) {
                    total += 1;
                    hits += (m != 0) as u64;
                }
            }
        })
        .unwrap();
        let frac = hits as f64 / total as f64;
        assert!(
            (frac - conditional_sqfree(&pat(&[2, 3], &[]))).abs() < 1e-3,
            "{frac}"
        );
    }

    #[test]
    fn odd_squarefree_fraction_below_ten_million() {
        let (mut hits, mut total) = (0u64, 0u64);
        for_each_mobius_segment(1, 10_000_000, &SieveConfig::default(), |start, seg| {
            for (i, &m) in seg.iter().enumerate() {
                if (start + i as u64) % 2 == 1 {
                    total += 1;
                    hits += (m != 0) as u64;
                }
            }
        })
        .unwrap();
        assert!((hits as f64 / total as f64 - 0.8105).abs() < 0.002);
    }

    #[test]
    fn predictions() {
        let m2 = BayesModel::new(basis(&[2]));
        assert_eq!(m2.predict_mu2(&encode_crt(11, &full_basis())).unwrap(), 1);
        let full = first_primes(10);
        assert_eq!(m2.predict_mu2(&encode_crt(10, &full)).unwrap(), 0);
        assert_eq!(m2.predict_mu(&encode_crt(10, &full)).unwrap(), 0);
        assert_eq!(m2.predict_mu(&encode_crt(11, &full)).unwrap(), 1);
        let m23 = BayesModel::new(basis(&[2, 3]));
        assert_eq!(m23.predict_mu2(&encode_crt(12, &full)).unwrap(), 0);
        assert_eq!(m23.predict_mu2(&encode_crt(5, &full)).unwrap(), 1);
        let m10 = BayesModel::new(full.clone());
        assert_eq!(m10.predict_mu2(&encode_crt(31 * 37, &full)).unwrap(), 1);
        let empty = BayesModel::new(PrimeBasis::empty());
        for n in [2u64, 4, 7, 30] {
            assert_eq!(empty.predict_mu(&encode_crt(n, &full)).unwrap(), 0);
            assert_eq!(empty.predict_mu2(&encode_crt(n, &full)).unwrap(), 1);
        }
    }

    #[test]
    fn basis_mismatch() {
        let m = BayesModel::new(basis(&[2, 5]));
        assert!(matches!(
            m.predict_mu2(&encode_crt(9, &basis(&[2, 3]))),
            Err(Error::BasisMismatch(_))
        ));
    }

    #[test]
    fn exact_accuracies() {
        let one = first_primes(1);
        assert!((exact_accuracy_mu2(&one).unwrap() - 0.70264).abs() < 5e-5);
        assert!((exact_accuracy_mu(&one).unwrap() - 0.5).abs() < 1e-3);
        let empty = PrimeBasis::empty();
        assert!((exact_accuracy_mu2(&empty).unwrap() - squarefree_density()).abs() < 1e-15);
        assert!((exact_accuracy_mu(&empty).unwrap() - (1.0 - squarefree_density())).abs() < 1e-15);
        assert!(matches!(
            exact_accuracy_mu2(&first_primes(31)),
            Err(Error::EnumerationTooLarge { k: 31, .. })
        ));
    }

    #[test]
    fn joint_densities_sum_to_density() {
        for k in [0, 1, 5, 12, 20] {
            let (mut joint, mut prior) = (0.0, 0.0);
            for_each_pattern(&first_primes(k), |j, p| {
                joint += j;
                prior += p;
                assert!(0.0 <= j && j <= p && p <= 1.0);
            })
            .unwrap();
            assert!((joint - squarefree_density()).abs() < 1e-12, "k={k}");
            assert!((prior - 1.0).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn table_agrees_with_enumeration() {
        let b = first_primes(6);
        let rows = pattern_table(&b).unwrap();
        assert_eq!(rows.len(), 64);
        let table_acc: f64 = rows.iter().map(|r| r.joint.max(r.prior - r.joint)).sum();
        assert!((table_acc - exact_accuracy_mu2(&b).unwrap()).abs() < 1e-14);
        for r in &rows {
            let pattern = DivisibilityPattern::with_divisors(b.clone(), &r.divisors).unwrap();
            assert!((r.conditional - conditional_sqfree(&pattern)).abs() < 1e-15);
        }
    }

    #[test]
    fn model_conditional_matches_ratio() {
        let b = first_primes(8);
        let m = BayesModel::new(b.clone());
        for n in 1..2000u64 {
            let v = encode_crt(n, &b);
            let ratio = conditional_sqfree(&DivisibilityPattern::of_vector(&v));
            assert!((m.conditional(&v).unwrap() - ratio).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_accuracy_grows_with_basis() {
        let mut prev = exact_accuracy_mu2(&PrimeBasis::empty()).unwrap();
        for k in 1..=15 {
            let acc = exact_accuracy_mu2(&first_primes(k)).unwrap();
            assert!(acc >= prev - 1e-12, "k={k}: {acc} < {prev}");
            prev = acc;
        }
    }

    #[test]
    fn monte_carlo_two_three() {
        let est = monte_carlo_accuracy(
            &basis(&[2, 3]),
            &MonteCarloConfig::new(50_000, 1),
            Target::Mu2,
        )
        .unwrap();
        // exact value for basis [2, 3]
        let exact = exact_accuracy_mu2(&basis(&[2, 3])).unwrap();
        assert!(est.z_score(exact) < 3.0, "{est:?} vs {exact}");
        assert!(est.z_score(0.701) < 3.0);
    }

    proptest! {
        #[test]
        fn prediction_depends_only_on_zero_pattern(n in 1u64..1_000_000_000_000, seed: u64) {
            let b = first_primes(25);
            let v = encode_crt(n, &b);
            let mut stream = crate::rng::stream(seed);
            let residues: Vec<u64> = v
                .residues()
                .iter()
                .zip(b.primes())
                .map(|(&r, &p)| if r == 0 { 0 } else { 1 + crate::rng::below(&mut stream, p - 1) })
                .collect();
            let w = CrtVector::new(b.clone(), residues).unwrap();
            let m = BayesModel::new(b);
            prop_assert_eq!(m.predict_mu2(&v).unwrap(), m.predict_mu2(&w).unwrap());
            prop_assert_eq!(m.predict_mu(&v).unwrap(), m.predict_mu(&w).unwrap());
        }
    }
}
