//! CRT residue vectors, base-b digit tokenization, and exact reconstruction.
//!
//! An integer is written as a sign token (`+` or `-`) followed by its base-b
//! digits, most significant first. A residue vector over moduli p_1 < ... < p_k
//! becomes the stream `+ r_1 + p_1 + r_2 + p_2 ...`, which in base 1000 with
//! moduli below 1000 is exactly 4k tokens.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result, TokenErrorKind};
use crate::ntcore::{is_prime, PrimeBasis};

/// Tokenization base (at least 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Base(u32);

impl Base {
    pub const THOUSAND: Base = Base(1000);

    pub fn new(b: u32) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidBase(b));
        }
        Ok(Base(b))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Residues of an integer modulo each prime of a basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrtVector {
    basis: PrimeBasis,
    residues: Vec<u64>,
}

impl CrtVector {
    pub fn new(basis: PrimeBasis, residues: Vec<u64>) -> Result<Self> {
        if residues.len() != basis.len() {
            return Err(Error::InvalidResidues(format!(
                "{} residues for {} moduli",
                residues.len(),
                basis.len()
            )));
        }
        if let Some((&r, &p)) = residues.iter().zip(basis.primes()).find(|(&r, &p)| r >= p) {
            return Err(Error::InvalidResidues(format!(
                "residue {r} >= modulus {p}"
            )));
        }
        Ok(CrtVector { basis, residues })
    }

    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// Residue modulo `p`, if `p` is in the basis.
    pub fn residue_mod(&self, p: u64) -> Option<u64> {
        self.basis.position(p).map(|i| self.residues[i])
    }

    /// Same vector with the residue at index `i` replaced. Panics if out of range.
    pub(crate) fn with_residue(mut self, i: usize, r: u64) -> Self {
        assert!(r < self.basis.primes()[i]);
        self.residues[i] = r;
        self
    }

    /// Restrict to the primes of `sub`, which must all occur in this basis.
    pub fn project(&self, sub: &PrimeBasis) -> Result<CrtVector> {
        let residues = sub
            .primes()
            .iter()
            .map(|&p| {
                self.residue_mod(p).ok_or_else(|| {
                    Error::BasisMismatch(format!(
                        "prime {p} missing from input basis {}",
                        self.basis
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CrtVector {
            basis: sub.clone(),
            residues,
        })
    }
}

/// Least nonnegative residues of `n` modulo each basis prime.
pub fn encode_crt(n: u64, basis: &PrimeBasis) -> CrtVector {
    CrtVector {
        basis: basis.clone(),
        residues: basis.primes().iter().map(|&p| n % p).collect(),
    }
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "{a} not invertible mod {m}");
    t0.rem_euclid(m as i128) as u64
}

/// The unique `x` in `[0, ∏ p)` with `x ≡ r_i (mod p_i)`.
///
/// Garner's mixed-radix algorithm: the digits are computed with machine
/// arithmetic and only the final assembly uses big integers.
pub fn reconstruct(v: &CrtVector) -> BigUint {
    let primes = v.basis.primes();
    let mut digits: Vec<u64> = Vec::with_capacity(primes.len());
    for (i, (&p, &r)) in primes.iter().zip(&v.residues).enumerate() {
        // value of the partial mixed-radix number mod p, and ∏_{j<i} p_j mod p
        let mut acc = 0u64;
        let mut radix = 1u64;
        for (&d, &q) in digits.iter().zip(&primes[..i]) {
            acc = (acc + d % p * radix) % p;
            radix = radix * (q % p) % p;
        }
        let diff = (r + p - acc) % p;
        digits.push(diff * inverse_mod(radix, p) % p);
    }
    let mut x = BigUint::default();
    for (&d, &p) in digits.iter().zip(primes).rev() {
        x = x * p + d;
    }
    x
}

/// One atomic token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    Plus,
    Minus,
    Digit(u32),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Plus => f.write_str("+"),
            Token::Minus => f.write_str("-"),
            Token::Digit(d) => write!(f, "{d}"),
        }
    }
}

impl FromStr for Token {
    type Err = TokenErrorKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+" => Ok(Token::Plus),
            "-" => Ok(Token::Minus),
            _ if !s.is_empty() && s.len() <= 9 && s.bytes().all(|b| b.is_ascii_digit()) => {
                Ok(Token::Digit(s.parse().expect("ascii digits")))
            }
            _ => Err(TokenErrorKind::UnknownToken(s.to_string())),
        }
    }
}

/// A sequence of tokens; renders space-separated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TokenStream(pub Vec<Token>);

impl TokenStream {
    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parse a space-separated stream. Reports the index of the first bad token.
    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(TokenStream::default());
        }
        s.split(' ')
            .enumerate()
            .map(|(position, t)| t.parse().map_err(|kind| Error::Token { position, kind }))
            .collect::<Result<Vec<_>>>()
            .map(TokenStream)
    }
}

impl fmt::Display for TokenStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

fn push_digits(out: &mut Vec<Token>, mut v: u64, base: Base) {
    let b = base.get() as u64;
    let start = out.len();
    loop {
        out.push(Token::Digit((v % b) as u32));
        v /= b;
        if v == 0 {
            break;
        }
    }
    out[start..].reverse();
}

/// `+` followed by the base-b digits of `v`.
pub fn tokenize_integer(v: u64, base: Base) -> TokenStream {
    let mut out = vec![Token::Plus];
    push_digits(&mut out, v, base);
    TokenStream(out)
}

/// Each residue followed by its modulus, both as signed integers.
pub fn tokenize_input(v: &CrtVector, base: Base) -> TokenStream {
    let mut out = Vec::with_capacity(4 * v.residues.len());
    for (&r, &p) in v.residues.iter().zip(v.basis.primes()) {
        out.push(Token::Plus);
        push_digits(&mut out, r, base);
        out.push(Token::Plus);
        push_digits(&mut out, p, base);
    }
    TokenStream(out)
}

/// Sign token then the digits of `|value|`.
pub fn tokenize_output(value: i64, base: Base) -> TokenStream {
    let mut out = vec![if value < 0 { Token::Minus } else { Token::Plus }];
    push_digits(&mut out, value.unsigned_abs(), base);
    TokenStream(out)
}

/// A signed integer decoded from a stream, with the index of its sign token.
struct Decoded {
    position: usize,
    negative: bool,
    magnitude: u64,
}

fn decode_integers(tokens: &[Token], base: Base) -> Result<Vec<Decoded>> {
    let b = base.get() as u64;
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let negative = match tokens[i] {
            Token::Plus => false,
            Token::Minus => true,
            Token::Digit(_) => {
                return Err(Error::Token {
                    position: i,
                    kind: TokenErrorKind::ExpectedSign,
                })
            }
        };
        let position = i;
        i += 1;
        let mut magnitude = 0u64;
        let mut ndigits = 0;
        while let Some(&Token::Digit(d)) = tokens.get(i) {
            let kind = if d as u64 >= b {
                Some(TokenErrorKind::DigitTooLarge {
                    digit: d as u64,
                    base: base.get(),
                })
            } else if ndigits == 1 && magnitude == 0 {
                Some(TokenErrorKind::LeadingZero)
            } else {
                None
            };
            if let Some(kind) = kind {
                return Err(Error::Token { position: i, kind });
            }
            magnitude = magnitude
                .checked_mul(b)
                .and_then(|m| m.checked_add(d as u64))
                .filter(|&m| m <= i64::MAX as u64)
                .ok_or(Error::Token {
                    position: i,
                    kind: TokenErrorKind::Overflow,
                })?;
            ndigits += 1;
            i += 1;
        }
        if ndigits == 0 {
            return Err(Error::Token {
                position,
                kind: TokenErrorKind::MissingDigits,
            });
        }
        out.push(Decoded {
            position,
            negative,
            magnitude,
        });
    }
    Ok(out)
}

/// Inverse of [`tokenize_input`], validating every residue/modulus pair.
pub fn parse_input(tokens: &TokenStream, base: Base) -> Result<CrtVector> {
    let ints = decode_integers(&tokens.0, base)?;
    if ints.len() % 2 != 0 {
        return Err(Error::Token {
            position: ints.last().map_or(0, |d| d.position),
            kind: TokenErrorKind::UnpairedResidue,
        });
    }
    let mut primes = Vec::with_capacity(ints.len() / 2);
    let mut residues = Vec::with_capacity(ints.len() / 2);
    for pair in ints.chunks_exact(2) {
        let (r, p) = (&pair[0], &pair[1]);
        for d in pair {
            if d.negative {
                return Err(Error::Token {
                    position: d.position,
                    kind: TokenErrorKind::BadSign("-".into()),
                });
            }
        }
        let err = |position, kind| Err(Error::Token { position, kind });
        if !is_prime(p.magnitude) {
            return err(p.position, TokenErrorKind::NotPrime(p.magnitude));
        }
        if primes.last().is_some_and(|&q| q >= p.magnitude) {
            return err(p.position, TokenErrorKind::UnorderedModulus(p.magnitude));
        }
        if r.magnitude >= p.magnitude {
            return err(
                r.position,
                TokenErrorKind::ResidueOutOfRange {
                    residue: r.magnitude,
                    modulus: p.magnitude,
                },
            );
        }
        primes.push(p.magnitude);
        residues.push(r.magnitude);
    }
    Ok(CrtVector {
        basis: PrimeBasis::new(primes)?,
        residues,
    })
}

/// Inverse of [`tokenize_output`]: exactly one signed integer.
pub fn parse_output(tokens: &TokenStream, base: Base) -> Result<i64> {
    let ints = decode_integers(&tokens.0, base)?;
    match ints.as_slice() {
        [d] => Ok(if d.negative {
            -(d.magnitude as i64)
        } else {
            d.magnitude as i64
        }),
        _ => Err(Error::Token {
            position: ints.get(1).map_or(0, |d| d.position),
            kind: TokenErrorKind::ExpectedSingle(ints.len()),
        }),
    }
}
