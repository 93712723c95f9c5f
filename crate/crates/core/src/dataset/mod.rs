//! Sampling, labeling, corruption, and dataset files.

mod corrupt;
mod file;
mod sample;
mod task;

use std::path::Path;

use rayon::prelude::*;

pub use corrupt::{corrupt_vector, corruption_seed, CorruptionScheme};
pub use file::{
    format_line, parse_line, read_dataset, read_records, write_dataset, write_examples, Record,
};
pub use sample::{sample_unique_integers, sample_unique_squarefree};
pub use task::{label, Example, Task, TaskKind};

use crate::crtenc::Base;
use crate::error::{Error, Result};

/// Everything needed to regenerate a dataset bit for bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSpec {
    pub count: u64,
    pub lo: u64,
    pub hi: u64,
    pub seed: u64,
    /// Examples held out for evaluation, taken from the end of the draw order.
    pub split_eval: u64,
    pub task: Task,
    pub base: Base,
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.lo == 0 || self.lo > self.hi {
            return Err(Error::InvalidRange {
                lo: self.lo,
                hi: self.hi,
            });
        }
        if self.count as u128 > (self.hi - self.lo) as u128 + 1 {
            return Err(Error::Infeasible {
                count: self.count,
                lo: self.lo,
                hi: self.hi,
            });
        }
        if self.split_eval >= self.count {
            return Err(Error::Config(format!(
                "eval split {} must be smaller than count {}",
                self.split_eval, self.count
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<Example>,
    pub eval: Vec<Example>,
}

/// Sample, label and tokenize. Labels are computed in parallel but the
/// output order is the draw order.
pub fn generate_examples(spec: &DatasetSpec) -> Result<Split> {
    spec.validate()?;
    let ns = match spec.task.kind() {
        TaskKind::MuSquarefreeOnly => {
            sample_unique_squarefree(spec.count, spec.lo, spec.hi, spec.seed)?
        }
        _ => sample_unique_integers(spec.count, spec.lo, spec.hi, spec.seed)?,
    };
    let mut examples: Vec<Example> = ns
        .par_iter()
        .map(|&n| Example::new(n, &spec.task, spec.base))
        .collect::<Result<_>>()?;
    let eval = examples.split_off((spec.count - spec.split_eval) as usize);
    Ok(Split {
        train: examples,
        eval,
    })
}

/// Generate and write the train and eval files.
pub fn generate_dataset(spec: &DatasetSpec, train_path: &Path, eval_path: &Path) -> Result<Split> {
    let split = generate_examples(spec)?;
    write_dataset(train_path, &split.train)?;
    write_dataset(eval_path, &split.eval)?;
    Ok(split)
}
