//! Predictors, confusion reports, the corruption experiment, and density
//! estimates.
//!
//! Reports render two ways: an aligned text table for reading, and
//! machine-readable records, one per line, of space-separated `key=value`
//! pairs (the first pair is always `record=<type>`).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::bayes::{BayesModel, Estimate, Target};
use crate::crtenc::{encode_crt, reconstruct, CrtVector};
use crate::dataset::{
    corrupt_vector, corruption_seed, label, CorruptionScheme, Record, Task, TaskKind,
};
use crate::error::{Error, Result};
use crate::ntcore::{for_each_mobius_segment, PrimeBasis, SieveConfig, MAX_SUPPORTED};
use crate::rng;

/// Maps a residue vector to a task output.
pub trait Predictor: Sync {
    fn name(&self) -> String;

    /// Fails if inputs over `basis` cannot be handled.
    fn check_compatible(&self, basis: &PrimeBasis) -> Result<()>;

    fn predict(&self, v: &CrtVector) -> Result<i64>;
}

/// Always outputs the same value.
#[derive(Debug, Clone, Copy)]
pub struct ConstantGuess(pub i64);

impl Predictor for ConstantGuess {
    fn name(&self) -> String {
        format!("const:{}", self.0)
    }

    fn check_compatible(&self, _: &PrimeBasis) -> Result<()> {
        Ok(())
    }

    fn predict(&self, _: &CrtVector) -> Result<i64> {
        Ok(self.0)
    }
}

/// Recovers n by CRT and labels it exactly. Needs a basis whose product
/// exceeds the supported integer ceiling so that n is unique.
#[derive(Debug, Clone)]
pub struct GroundTruthOracle {
    task: Task,
}

impl GroundTruthOracle {
    pub fn new(kind: TaskKind) -> Result<Self> {
        Ok(GroundTruthOracle {
            task: Task::new(kind, PrimeBasis::empty(), None)?,
        })
    }
}

impl Predictor for GroundTruthOracle {
    fn name(&self) -> String {
        "oracle".into()
    }

    fn check_compatible(&self, basis: &PrimeBasis) -> Result<()> {
        if basis.product() <= BigUint::from(MAX_SUPPORTED) {
            return Err(Error::BasisMismatch(format!(
                "oracle needs moduli with product above 2^63-1 to recover n; basis {basis} is too small"
            )));
        }
        Ok(())
    }

    fn predict(&self, v: &CrtVector) -> Result<i64> {
        let n = u64::try_from(reconstruct(v))
            .map_err(|_| Error::InvalidResidues("reconstructed value exceeds 64 bits".into()))?;
        label(n, &self.task)
    }
}

/// [`BayesModel`] answering a μ or μ² question.
#[derive(Debug, Clone)]
pub struct BayesPredictor {
    model: BayesModel,
    target: Target,
}

impl BayesPredictor {
    pub fn new(basis: PrimeBasis, target: Target) -> Self {
        BayesPredictor {
            model: BayesModel::new(basis),
            target,
        }
    }

    pub fn model(&self) -> &BayesModel {
        &self.model
    }
}

impl Predictor for BayesPredictor {
    fn name(&self) -> String {
        format!("bayes:{}:{}", self.target, self.model.basis())
    }

    fn check_compatible(&self, basis: &PrimeBasis) -> Result<()> {
        if self.model.basis().is_subset_of(basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch(format!(
                "model basis {} is not contained in input basis {basis}",
                self.model.basis()
            )))
        }
    }

    fn predict(&self, v: &CrtVector) -> Result<i64> {
        Ok(match self.target {
            Target::Mu2 => self.model.predict_mu2(v)? as i64,
            Target::Mu => self.model.predict_mu(v)? as i64,
        })
    }
}

/// An input with its true output. `key` identifies the example across
/// corruption schemes (normally n itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledInput {
    pub key: u64,
    pub input: CrtVector,
    pub label: i64,
}

impl LabeledInput {
    pub fn from_n(n: u64, task: &Task) -> Result<Self> {
        Ok(LabeledInput {
            key: n,
            input: encode_crt(n, task.input_basis()),
            label: label(n, task)?,
        })
    }
}

impl From<Record> for LabeledInput {
    fn from(r: Record) -> Self {
        LabeledInput {
            key: r.key(),
            label: r.output,
            input: r.input,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassTally {
    /// Examples whose true output is this class.
    pub total: u64,
    /// Of those, how many were predicted correctly.
    pub recognized: u64,
    /// Examples predicted as this class.
    pub predicted: u64,
}

/// Per-class totals and correct counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfusionReport {
    pub classes: BTreeMap<i64, ClassTally>,
    pub total: u64,
    pub correct: u64,
}

impl ConfusionReport {
    pub fn accuracy(&self) -> f64 {
        self.estimate().value
    }

    pub fn estimate(&self) -> Estimate {
        Estimate::from_counts(self.correct, self.total)
    }

    fn record(&mut self, truth: i64, prediction: i64) {
        self.total += 1;
        let hit = truth == prediction;
        self.correct += hit as u64;
        let t = self.classes.entry(truth).or_default();
        t.total += 1;
        t.recognized += hit as u64;
        self.classes.entry(prediction).or_default().predicted += 1;
    }

    pub fn render_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>8}  {:>12}  {:>12}  {:>12}",
            "output", "in_eval", "recognized", "predicted"
        );
        for (class, t) in &self.classes {
            let _ = writeln!(
                s,
                "{:>8}  {:>12}  {:>12}  {:>12}",
                class, t.total, t.recognized, t.predicted
            );
        }
        let est = self.estimate();
        let _ = writeln!(
            s,
            "accuracy {:.6} ± {:.6} ({} / {})",
            est.value, est.std_error, self.correct, self.total
        );
        s
    }

    /// `record=class` lines then one `record=summary`; `context` is prepended
    /// to every line (e.g. `predictor=const:1`).
    pub fn render_records(&self, context: &str) -> String {
        let mut s = String::new();
        let prefix = if context.is_empty() {
            String::new()
        } else {
            format!(" {context}")
        };
        for (class, t) in &self.classes {
            let _ = writeln!(
                s,
                "record=class{prefix} output={class} total={} recognized={} predicted={}",
                t.total, t.recognized, t.predicted
            );
        }
        let est = self.estimate();
        let _ = writeln!(
            s,
            "record=summary{prefix} total={} correct={} accuracy={:.6} stderr={:.6}",
            self.total, self.correct, est.value, est.std_error
        );
        s
    }
}

/// Run `pred` over `items` and tally the results. Predictions run in
/// parallel; the report does not depend on scheduling.
pub fn evaluate<P: Predictor + ?Sized>(
    pred: &P,
    items: &[LabeledInput],
) -> Result<ConfusionReport> {
    let predictions = predict_all(pred, items.iter().map(|it| &it.input))?;
    let mut report = ConfusionReport::default();
    for (it, p) in items.iter().zip(predictions) {
        report.record(it.label, p);
    }
    Ok(report)
}

fn predict_all<'a, P, I>(pred: &P, inputs: I) -> Result<Vec<i64>>
where
    P: Predictor + ?Sized,
    I: Iterator<Item = &'a CrtVector>,
{
    let inputs: Vec<&CrtVector> = inputs.collect();
    let mut checked: Vec<&PrimeBasis> = Vec::new();
    for v in &inputs {
        if !checked.contains(&v.basis()) {
            pred.check_compatible(v.basis())?;
            checked.push(v.basis());
        }
    }
    inputs.par_iter().map(|v| pred.predict(v)).collect()
}

/// One row of the corruption experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct CorruptionResult {
    pub scheme: CorruptionScheme,
    pub correct: u64,
    pub sample_size: u64,
    /// Prediction for each input, in input order.
    pub predictions: Vec<i64>,
}

impl CorruptionResult {
    pub fn accuracy(&self) -> f64 {
        self.estimate().value
    }

    pub fn estimate(&self) -> Estimate {
        Estimate::from_counts(self.correct, self.sample_size)
    }
}

/// Inputs corrupted under `scheme`; example `i` uses the seed derived from
/// `(seed, items[i].key, scheme)`.
pub fn corrupt_inputs(
    items: &[LabeledInput],
    scheme: CorruptionScheme,
    seed: u64,
) -> Result<Vec<CrtVector>> {
    items
        .par_iter()
        .map(|it| corrupt_vector(&it.input, scheme, corruption_seed(seed, it.key, scheme)))
        .collect()
}

/// Evaluate `pred` on the same inputs under each scheme.
pub fn corruption_experiment<P: Predictor + ?Sized>(
    pred: &P,
    items: &[LabeledInput],
    schemes: &[CorruptionScheme],
    seed: u64,
) -> Result<Vec<CorruptionResult>> {
    // fail before doing any work if a scheme cannot apply
    for &scheme in schemes {
        for it in items.iter().take(1) {
            scheme.check_basis(it.input.basis())?;
        }
    }
    schemes
        .iter()
        .map(|&scheme| {
            let inputs = corrupt_inputs(items, scheme, seed)?;
            let predictions = predict_all(pred, inputs.iter())?;
            let correct = items
                .iter()
                .zip(&predictions)
                .filter(|(it, &p)| it.label == p)
                .count() as u64;
            Ok(CorruptionResult {
                scheme,
                correct,
                sample_size: items.len() as u64,
                predictions,
            })
        })
        .collect()
}

pub fn render_corruption_table(results: &[CorruptionResult]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<12}  {:>10}  {:>10}  {:>8}",
        "scheme", "accuracy", "stderr", "n"
    );
    for r in results {
        let e = r.estimate();
        let _ = writeln!(
            s,
            "{:<12}  {:>10.6}  {:>10.6}  {:>8}",
            r.scheme.name(),
            e.value,
            e.std_error,
            r.sample_size
        );
    }
    s
}

pub fn render_corruption_records(results: &[CorruptionResult], context: &str) -> String {
    let prefix = if context.is_empty() {
        String::new()
    } else {
        format!(" {context}")
    };
    results
        .iter()
        .map(|r| {
            let e = r.estimate();
            format!(
                "record=corruption{prefix} scheme={} correct={} total={} accuracy={:.6} stderr={:.6}\n",
                r.scheme, r.correct, r.sample_size, e.value, e.std_error
            )
        })
        .collect()
}

/// Which integers a density estimate ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    All,
    Odd,
    Even,
}

impl Restriction {
    pub fn admits(self, n: u64) -> bool {
        match self {
            Restriction::All => true,
            Restriction::Odd => n % 2 == 1,
            Restriction::Even => n.is_multiple_of(2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Restriction::All => "all",
            Restriction::Odd => "odd",
            Restriction::Even => "even",
        }
    }
}

impl std::str::FromStr for Restriction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Restriction::All),
            "odd" => Ok(Restriction::Odd),
            "even" => Ok(Restriction::Even),
            _ => Err(Error::Config(format!("unknown restriction {s:?}"))),
        }
    }
}

fn check_density_range(lo: u64, hi: u64, restriction: Restriction) -> Result<()> {
    if lo == 0 || lo > hi || (lo == hi && !restriction.admits(lo)) {
        return Err(Error::InvalidRange { lo, hi });
    }
    Ok(())
}

/// Squarefree fraction of `sample_count` uniform draws from `[lo, hi]`,
/// keeping only draws admitted by `restriction`.
pub fn empirical_density(
    lo: u64,
    hi: u64,
    sample_count: u64,
    seed: u64,
    restriction: Restriction,
) -> Result<Estimate> {
    check_density_range(lo, hi, restriction)?;
    let mut stream = rng::stream(seed);
    let mut ns = Vec::with_capacity(sample_count as usize);
    while (ns.len() as u64) < sample_count {
        let n = rng::in_range(&mut stream, lo, hi);
        if restriction.admits(n) {
            ns.push(n);
        }
    }
    let hits = ns
        .par_iter()
        .map(|&n| Ok(crate::ntcore::factorize(n)?.is_squarefree() as u64))
        .sum::<Result<u64>>()?;
    Ok(Estimate::from_counts(hits, sample_count))
}

/// Exact squarefree count over `[lo, hi]` by segmented sieve. The standard
/// error is that of a sample of the same size, for comparison only.
pub fn exhaustive_density(lo: u64, hi: u64, restriction: Restriction) -> Result<Estimate> {
    check_density_range(lo, hi, restriction)?;
    let (mut hits, mut total) = (0u64, 0u64);
    for_each_mobius_segment(lo, hi, &SieveConfig::default(), |start, seg| {
        for (i, &m) in seg.iter().enumerate() {
            if restriction.admits(start + i as u64) {
                total += 1;
                hits += (m != 0) as u64;
            }
        }
    })?;
    Ok(Estimate::from_counts(hits, total))
}
