use std::fmt;
use std::str::FromStr;

use crate::crtenc::{encode_crt, tokenize_input, tokenize_output, Base, TokenStream};
use crate::error::{Error, Result};
use crate::ntcore::{factorize, PrimeBasis};

/// What a dataset asks the model to output for `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskKind {
    Mu,
    Mu2,
    /// μ(n) with the domain restricted to squarefree n.
    MuSquarefreeOnly,
    NModM(u64),
    /// 1 if n <= threshold, else 0.
    IntervalIndicator(u64),
    IdentityN,
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaskKind::Mu => f.write_str("mu"),
            TaskKind::Mu2 => f.write_str("mu2"),
            TaskKind::MuSquarefreeOnly => f.write_str("mu-sqfree"),
            TaskKind::NModM(m) => write!(f, "nmod:{m}"),
            TaskKind::IntervalIndicator(t) => write!(f, "interval:{t}"),
            TaskKind::IdentityN => f.write_str("identity"),
        }
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidTask(format!("unrecognized task {s:?}"));
        match s {
            "mu" => return Ok(TaskKind::Mu),
            "mu2" => return Ok(TaskKind::Mu2),
            "mu-sqfree" => return Ok(TaskKind::MuSquarefreeOnly),
            "identity" => return Ok(TaskKind::IdentityN),
            _ => {}
        }
        let (name, arg) = s.split_once(':').ok_or_else(bad)?;
        let arg = crate::cli::parse_count(arg).map_err(|_| bad())?;
        match name {
            "nmod" => Ok(TaskKind::NModM(arg)),
            "interval" => Ok(TaskKind::IntervalIndicator(arg)),
            _ => Err(bad()),
        }
    }
}

/// A labeling rule plus the basis its inputs are encoded over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    kind: TaskKind,
    input_basis: PrimeBasis,
    holdout: Option<u64>,
}

impl Task {
    pub fn new(kind: TaskKind, input_basis: PrimeBasis, holdout: Option<u64>) -> Result<Self> {
        if let TaskKind::NModM(m) = kind {
            if m < 2 {
                return Err(Error::InvalidTask(format!(
                    "modulus {m} must be at least 2"
                )));
            }
        }
        if let Some(p) = holdout {
            if input_basis.contains(p) {
                return Err(Error::InvalidTask(format!(
                    "held-out prime {p} appears in the input basis"
                )));
            }
        }
        Ok(Task {
            kind,
            input_basis,
            holdout,
        })
    }

    pub fn kind(&self) -> TaskKind {
        self.kind
    }

    pub fn input_basis(&self) -> &PrimeBasis {
        &self.input_basis
    }

    pub fn holdout(&self) -> Option<u64> {
        self.holdout
    }
}

/// The target value of `n` under `task`.
pub fn label(n: u64, task: &Task) -> Result<i64> {
    if n == 0 {
        return Err(Error::OutsideTaskDomain {
            n,
            task: task.kind.to_string(),
        });
    }
    Ok(match task.kind {
        TaskKind::Mu => factorize(n)?.mobius() as i64,
        TaskKind::Mu2 => factorize(n)?.is_squarefree() as i64,
        TaskKind::MuSquarefreeOnly => {
            let f = factorize(n)?;
            if !f.is_squarefree() {
                return Err(Error::OutsideTaskDomain {
                    n,
                    task: task.kind.to_string(),
                });
            }
            f.mobius() as i64
        }
        TaskKind::NModM(m) => (n % m) as i64,
        TaskKind::IntervalIndicator(t) => (n <= t) as i64,
        TaskKind::IdentityN => i64::try_from(n).map_err(|_| Error::TooLarge(n))?,
    })
}

/// One tokenized input/output pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub n: u64,
    pub input: TokenStream,
    pub output: TokenStream,
}

impl Example {
    pub fn new(n: u64, task: &Task, base: Base) -> Result<Self> {
        let value = label(n, task)?;
        Ok(Example {
            n,
            input: tokenize_input(&encode_crt(n, &task.input_basis), base),
            output: tokenize_output(value, base),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntcore::first_primes;

    fn task(kind: TaskKind) -> Task {
        Task::new(kind, first_primes(100), None).unwrap()
    }

    #[test]
    fn label_examples() {
        assert_eq!(label(12, &task(TaskKind::Mu2)).unwrap(), 0);
        assert_eq!(label(30, &task(TaskKind::Mu)).unwrap(), -1);
        assert_eq!(
            label(
                3_000_000_000_000,
                &task(TaskKind::IntervalIndicator(5_000_000_000_000))
            )
            .unwrap(),
            1
        );
        assert_eq!(
            label(
                6_000_000_000_000,
                &task(TaskKind::IntervalIndicator(5_000_000_000_000))
            )
            .unwrap(),
            0
        );
        assert_eq!(label(7, &task(TaskKind::NModM(4))).unwrap(), 3);
        assert_eq!(
            label(987_654_321, &task(TaskKind::IdentityN)).unwrap(),
            987_654_321
        );
        assert_eq!(label(15, &task(TaskKind::MuSquarefreeOnly)).unwrap(), 1);
    }

    #[test]
    fn label_domain_errors() {
        assert!(matches!(
            label(12, &task(TaskKind::MuSquarefreeOnly)),
            Err(Error::OutsideTaskDomain { n: 12, .. })
        ));
        assert!(label(0, &task(TaskKind::Mu)).is_err());
    }

    #[test]
    fn task_invariants() {
        assert!(Task::new(TaskKind::NModM(1), first_primes(3), None).is_err());
        assert!(Task::new(TaskKind::NModM(3), first_primes(3), Some(3)).is_err());
        assert!(Task::new(TaskKind::NModM(3), first_primes(100).without(3), Some(3)).is_ok());
    }

    #[test]
    fn task_names_roundtrip() {
        for kind in [
            TaskKind::Mu,
            TaskKind::Mu2,
            TaskKind::MuSquarefreeOnly,
            TaskKind::NModM(4),
            TaskKind::IntervalIndicator(5_000_000_000_000),
            TaskKind::IdentityN,
        ] {
            assert_eq!(kind.to_string().parse::<TaskKind>().unwrap(), kind);
        }
        assert_eq!(
            "interval:5e12".parse::<TaskKind>().unwrap(),
            TaskKind::IntervalIndicator(5_000_000_000_000)
        );
        assert!("nmod".parse::<TaskKind>().is_err());
        assert!("mu3".parse::<TaskKind>().is_err());
    }

    #[test]
    fn example_structure() {
        let ex = Example::new(25, &task(TaskKind::Mu), Base::THOUSAND).unwrap();
        assert_eq!(ex.input.len(), 400);
        assert_eq!(ex.output.to_string(), "+ 0");
        let ex = Example::new(7, &task(TaskKind::Mu), Base::THOUSAND).unwrap();
        assert_eq!(ex.output.to_string(), "- 1");
    }
}
