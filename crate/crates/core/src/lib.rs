//! Möbius and squarefree prediction from CRT residues.
//!
//! * [`ntcore`]: primes, factorization, Möbius values and sieves.
//! * [`crtenc`]: residue vectors, tokenization and reconstruction.
//! * [`dataset`]: sampling, task labels, corruption transforms and dataset files.
//! * [`bayes`]: squarefree densities conditioned on divisibility patterns and
//!   the resulting optimal predictors.
//! * [`eval`]: confusion reports, corruption experiments and density estimates.
//! * [`cli`]: the `mobius-crt` command line.

pub mod bayes;
pub mod cli;
pub mod crtenc;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod ntcore;
pub mod rng;

pub use error::{Error, Result};
