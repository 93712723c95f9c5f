//! The `mobius-crt` command line.
//!
//! Every run first prints a `record=config` line holding the effective
//! configuration, so any output can be replayed from its own header.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bayes::{self, MonteCarloConfig, Target};
use crate::crtenc::{tokenize_input, Base};
use crate::dataset::{
    format_line, generate_dataset, read_dataset, sample_unique_integers, CorruptionScheme,
    DatasetSpec, Example, Task, TaskKind,
};
use crate::error::{Error, Result};
use crate::eval::{
    self, BayesPredictor, ConstantGuess, GroundTruthOracle, LabeledInput, Predictor, Restriction,
};
use crate::ntcore::{factorize, first_primes, primes_in_range, PrimeBasis};
use crate::rng;

/// Parse a nonnegative integer, accepting exact scientific notation (`1e13`, `1.8e6`).
pub fn parse_count(s: &str) -> Result<u64> {
    let bad = || Error::Config(format!("not a nonnegative integer: {s:?}"));
    let s = s.trim().replace('_', "");
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m.to_string(), e.parse::<u32>().map_err(|_| bad())?),
        None => (s.clone(), 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((&mantissa, ""));
    if int.is_empty() && frac.is_empty()
        || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let frac = frac.trim_end_matches('0');
    if frac.len() as u32 > exp {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let value: u64 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    10u64
        .checked_pow(exp - frac.len() as u32)
        .and_then(|scale| value.checked_mul(scale))
        .ok_or_else(bad)
}

fn count_arg(s: &str) -> std::result::Result<u64, String> {
    parse_count(s).map_err(|e| e.to_string())
}

/// A basis together with a prime deliberately left out of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSelection {
    pub basis: PrimeBasis,
    pub holdout: Option<u64>,
}

/// `first:k`, `range:lo:hi`, `list:p1,p2,...` or `first:k-minus:p`.
pub fn parse_basis(s: &str) -> Result<BasisSelection> {
    let bad = |why: &str| Error::Config(format!("bad basis selector {s:?}: {why}"));
    let (kind, rest) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
    match kind {
        "first" => match rest.split_once("-minus:") {
            Some((k, p)) => {
                let full = first_primes(parse_count(k)? as usize);
                let p = parse_count(p)?;
                if !full.contains(p) {
                    return Err(bad("held-out prime is not among the first k"));
                }
                Ok(BasisSelection {
                    basis: full.without(p),
                    holdout: Some(p),
                })
            }
            None => Ok(BasisSelection {
                basis: first_primes(parse_count(rest)? as usize),
                holdout: None,
            }),
        },
        "range" => {
            let (lo, hi) = rest
                .split_once(':')
                .ok_or_else(|| bad("expected range:lo:hi"))?;
            Ok(BasisSelection {
                basis: primes_in_range(parse_count(lo)?, parse_count(hi)?),
                holdout: None,
            })
        }
        "list" => {
            let primes = rest
                .split(',')
                .map(parse_count)
                .collect::<Result<Vec<_>>>()?;
            Ok(BasisSelection {
                basis: PrimeBasis::new(primes)?,
                holdout: None,
            })
        }
        _ => Err(bad("unknown selector kind")),
    }
}

/// `bayes:<basis>`, `const:<value>` or `oracle`.
pub fn parse_predictor(s: &str, task: TaskKind) -> Result<Box<dyn Predictor>> {
    if s == "oracle" {
        return Ok(Box::new(GroundTruthOracle::new(task)?));
    }
    if let Some(v) = s.strip_prefix("const:") {
        let value: i64 = v
            .parse()
            .map_err(|_| Error::Config(format!("bad constant in predictor {s:?}")))?;
        return Ok(Box::new(ConstantGuess(value)));
    }
    if let Some(sel) = s.strip_prefix("bayes:") {
        let basis = parse_basis(sel)?.basis;
        return Ok(Box::new(BayesPredictor::new(basis, bayes_target(task)?)));
    }
    Err(Error::Config(format!("unknown predictor {s:?}")))
}

fn bayes_target(task: TaskKind) -> Result<Target> {
    match task {
        TaskKind::Mu | TaskKind::MuSquarefreeOnly => Ok(Target::Mu),
        TaskKind::Mu2 => Ok(Target::Mu2),
        other => Err(Error::Config(format!(
            "the Bayes predictor answers mu or mu2, not {other}"
        ))),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mobius-crt",
    version,
    about = "Möbius prediction from CRT residues"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate train/eval dataset files.
    Gen(GenArgs),
    /// Exact or Monte-Carlo accuracy of the divisibility-pattern predictor.
    Theory(TheoryArgs),
    /// Evaluate a predictor on a dataset file.
    Eval(EvalArgs),
    /// Evaluate a predictor under each corruption scheme.
    Corrupt(CorruptArgs),
    /// Squarefree density, exhaustive or sampled.
    Density(DensityArgs),
    /// Factor an integer and report μ.
    Factor(FactorArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// mu, mu2, mu-sqfree, nmod:M, interval:T or identity
    #[arg(long)]
    pub task: String,
    /// Restrict sampling to squarefree n (turns `mu` into `mu-sqfree`).
    #[arg(long)]
    pub squarefree_only: bool,
    #[arg(long, value_parser = count_arg)]
    pub count: u64,
    #[arg(long, value_parser = count_arg, default_value = "2")]
    pub min: u64,
    #[arg(long, value_parser = count_arg, default_value = "1e13")]
    pub max: u64,
    /// Examples held out for the eval file.
    #[arg(long = "eval", value_parser = count_arg)]
    pub eval_count: u64,
    #[arg(long, default_value = "first:100")]
    pub primes: String,
    #[arg(long, default_value_t = 1000)]
    pub base: u32,
    #[arg(long, value_parser = count_arg)]
    pub seed: Option<u64>,
    /// Output directory; receives train.txt and eval.txt.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    #[arg(long)]
    pub primes: String,
    /// mu or mu2
    #[arg(long, default_value = "mu2")]
    pub task: String,
    /// Estimate by sampling this many n instead of exact enumeration.
    #[arg(long, value_parser = count_arg)]
    pub monte_carlo: Option<u64>,
    #[arg(long, value_parser = count_arg)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = count_arg, default_value = "2")]
    pub min: u64,
    #[arg(long, value_parser = count_arg, default_value = "1e13")]
    pub max: u64,
    /// Also print the per-pattern conditional table (at most 12 primes).
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// bayes:<basis>, const:<value> or oracle
    #[arg(long)]
    pub predictor: String,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = "mu2")]
    pub task: String,
    #[arg(long, default_value_t = 1000)]
    pub base: u32,
}

#[derive(Debug, Args)]
pub struct CorruptArgs {
    #[arg(long)]
    pub predictor: String,
    #[arg(long, default_value = "none,mod2,mod3,mod23,all-but-23")]
    pub schemes: String,
    /// Number of n to sample (ignored with --data).
    #[arg(long, value_parser = count_arg, default_value = "20000")]
    pub count: u64,
    #[arg(long, value_parser = count_arg)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "mu2")]
    pub task: String,
    /// Basis the sampled inputs are encoded over.
    #[arg(long, default_value = "first:100")]
    pub primes: String,
    #[arg(long, value_parser = count_arg, default_value = "2")]
    pub min: u64,
    #[arg(long, value_parser = count_arg, default_value = "1e13")]
    pub max: u64,
    /// Use the examples of this dataset file instead of sampling.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub base: u32,
    /// Write one dataset file per scheme (<scheme>.txt) into this directory.
    #[arg(long)]
    pub emit_files: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Count every integer in range with the sieve.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, value_parser = count_arg, default_value = "2")]
    pub min: u64,
    #[arg(long, value_parser = count_arg)]
    pub max: u64,
    /// all, odd or even
    #[arg(long, default_value = "all")]
    pub restrict: String,
    #[arg(long, value_parser = count_arg, default_value = "100000")]
    pub samples: u64,
    #[arg(long, value_parser = count_arg)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    #[arg(value_parser = count_arg)]
    pub n: u64,
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| Error::Config(format!("{what} needs an explicit --seed")))
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<output>", e)
}

/// Parse `args` (including the program name) and run, writing reports to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    let text = execute(&cli.command)?;
    out.write_all(text.as_bytes()).map_err(io_err)
}

pub fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Gen(a) => cmd_gen(a),
        Command::Theory(a) => cmd_theory(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Corrupt(a) => cmd_corrupt(a),
        Command::Density(a) => cmd_density(a),
        Command::Factor(a) => cmd_factor(a),
    }
}

fn cmd_gen(a: &GenArgs) -> Result<String> {
    let seed = require_seed(a.seed, "gen")?;
    let mut kind: TaskKind = a.task.parse()?;
    if a.squarefree_only {
        kind = match kind {
            TaskKind::Mu | TaskKind::MuSquarefreeOnly => TaskKind::MuSquarefreeOnly,
            other => {
                return Err(Error::Config(format!(
                    "--squarefree-only applies to mu, not {other}"
                )))
            }
        };
    }
    let sel = parse_basis(&a.primes)?;
    let spec = DatasetSpec {
        count: a.count,
        lo: a.min,
        hi: a.max,
        seed,
        split_eval: a.eval_count,
        task: Task::new(kind, sel.basis, sel.holdout)?,
        base: Base::new(a.base)?,
    };
    spec.validate()?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "record=config command=gen task={kind} count={} min={} max={} eval={} primes={} holdout={} base={} seed={seed} out={}",
        a.count,
        a.min,
        a.max,
        a.eval_count,
        a.primes,
        sel.holdout.map_or("none".to_string(), |p| p.to_string()),
        a.base,
        a.out.display()
    );
    fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    let train_path = a.out.join("train.txt");
    let eval_path = a.out.join("eval.txt");
    let split = generate_dataset(&spec, &train_path, &eval_path)?;
    for (name, path, examples) in [
        ("train", &train_path, &split.train),
        ("eval", &eval_path, &split.eval),
    ] {
        let _ = writeln!(
            s,
            "record=split name={name} examples={} path={}",
            examples.len(),
            path.display()
        );
        for (output, count) in output_histogram(examples) {
            let _ = writeln!(
                s,
                "record=label name={name} output=\"{output}\" count={count}"
            );
        }
    }
    Ok(s)
}

fn output_histogram(examples: &[Example]) -> std::collections::BTreeMap<String, u64> {
    let mut h = std::collections::BTreeMap::new();
    for ex in examples {
        *h.entry(ex.output.to_string()).or_insert(0) += 1;
    }
    h
}

fn target_of(task: &str) -> Result<Target> {
    match task {
        "mu" => Ok(Target::Mu),
        "mu2" => Ok(Target::Mu2),
        _ => Err(Error::Config(format!(
            "theory --task must be mu or mu2, got {task:?}"
        ))),
    }
}

fn cmd_theory(a: &TheoryArgs) -> Result<String> {
    let target = target_of(&a.task)?;
    let basis = parse_basis(&a.primes)?.basis;
    let mut s = String::new();
    match a.monte_carlo {
        Some(samples) => {
            let seed = require_seed(a.seed, "theory --monte-carlo")?;
            let _ = writeln!(
                s,
                "record=config command=theory task={target} primes={} k={} method=monte-carlo samples={samples} seed={seed} min={} max={}",
                a.primes,
                basis.len(),
                a.min,
                a.max
            );
            let cfg = MonteCarloConfig {
                samples,
                seed,
                lo: a.min,
                hi: a.max,
            };
            let est = bayes::monte_carlo_accuracy(&basis, &cfg, target)?;
            let _ = writeln!(
                s,
                "accuracy {:.6} ± {:.6} ({} / {})",
                est.value, est.std_error, est.hits, est.samples
            );
            let _ = writeln!(
                s,
                "record=theory task={target} k={} method=monte-carlo samples={} correct={} accuracy={:.6} stderr={:.6}",
                basis.len(),
                est.samples,
                est.hits,
                est.value,
                est.std_error
            );
        }
        None => {
            let _ = writeln!(
                s,
                "record=config command=theory task={target} primes={} k={} method=exact",
                a.primes,
                basis.len()
            );
            let acc = match target {
                Target::Mu2 => bayes::exact_accuracy_mu2(&basis)?,
                Target::Mu => bayes::exact_accuracy_mu(&basis)?,
            };
            let _ = writeln!(s, "accuracy {acc:.6}");
            let _ = writeln!(
                s,
                "record=theory task={target} k={} method=exact accuracy={acc:.6}",
                basis.len()
            );
        }
    }
    if a.table {
        let rows = bayes::pattern_table(&basis)?;
        let _ = writeln!(
            s,
            "{:<24}  {:>10}  {:>10}  {:>11}",
            "divisors", "joint", "prior", "P(sqfree|.)"
        );
        let joined = |r: &bayes::PatternRow| {
            r.divisors
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        for r in &rows {
            let d = if r.divisors.is_empty() {
                "-".to_string()
            } else {
                joined(r)
            };
            let _ = writeln!(
                s,
                "{d:<24}  {:>10.6}  {:>10.6}  {:>11.6}",
                r.joint, r.prior, r.conditional
            );
        }
        for r in &rows {
            let _ = writeln!(
                s,
                "record=pattern divisors=\"{}\" joint={:.8} prior={:.8} conditional={:.8}",
                joined(r),
                r.joint,
                r.prior,
                r.conditional
            );
        }
    }
    Ok(s)
}

fn cmd_eval(a: &EvalArgs) -> Result<String> {
    let kind: TaskKind = a.task.parse()?;
    let base = Base::new(a.base)?;
    let pred = parse_predictor(&a.predictor, kind)?;
    let items: Vec<LabeledInput> = read_dataset(&a.data, base)?
        .into_iter()
        .map(Into::into)
        .collect();
    let report = eval::evaluate(pred.as_ref(), &items)?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "record=config command=eval predictor={} task={kind} data={} base={}",
        a.predictor,
        a.data.display(),
        a.base
    );
    s.push_str(&report.render_table());
    s.push_str(&report.render_records(&format!("predictor={}", a.predictor)));
    Ok(s)
}

/// Stream id separating the sampling of n from the corruption draws.
const CORRUPT_SAMPLE_STREAM: u64 = 0x5341_4d50;

fn cmd_corrupt(a: &CorruptArgs) -> Result<String> {
    let seed = require_seed(a.seed, "corrupt")?;
    let kind: TaskKind = a.task.parse()?;
    let base = Base::new(a.base)?;
    let schemes = a
        .schemes
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<CorruptionScheme>>>()?;
    let pred = parse_predictor(&a.predictor, kind)?;
    let (items, source) = match &a.data {
        Some(path) => {
            let items: Vec<LabeledInput> = read_dataset(path, base)?
                .into_iter()
                .map(Into::into)
                .collect();
            (items, format!("data={}", path.display()))
        }
        None => {
            let sel = parse_basis(&a.primes)?;
            let task = Task::new(kind, sel.basis, sel.holdout)?;
            let ns = sample_unique_integers(
                a.count,
                a.min,
                a.max,
                rng::derive_seed(seed, &[CORRUPT_SAMPLE_STREAM]),
            )?;
            let items = ns
                .into_iter()
                .map(|n| LabeledInput::from_n(n, &task))
                .collect::<Result<_>>()?;
            (
                items,
                format!(
                    "primes={} count={} min={} max={}",
                    a.primes, a.count, a.min, a.max
                ),
            )
        }
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "record=config command=corrupt predictor={} task={kind} schemes={} seed={seed} {source} base={}",
        a.predictor, a.schemes, a.base
    );
    let results = eval::corruption_experiment(pred.as_ref(), &items, &schemes, seed)?;
    s.push_str(&eval::render_corruption_table(&results));
    s.push_str(&eval::render_corruption_records(
        &results,
        &format!("predictor={}", a.predictor),
    ));
    if let Some(dir) = &a.emit_files {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for &scheme in &schemes {
            let inputs = eval::corrupt_inputs(&items, scheme, seed)?;
            let body: String = inputs
                .iter()
                .zip(&items)
                .map(|(v, it)| {
                    format_line(
                        &tokenize_input(v, base),
                        &crate::crtenc::tokenize_output(it.label, base),
                    )
                })
                .collect();
            let path = dir.join(format!("{scheme}.txt"));
            fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
            let _ = writeln!(s, "record=emit scheme={scheme} path={}", path.display());
        }
    }
    Ok(s)
}

fn cmd_density(a: &DensityArgs) -> Result<String> {
    let restriction: Restriction = a.restrict.parse()?;
    let mut s = String::new();
    let est = if a.exhaustive {
        let _ = writeln!(
            s,
            "record=config command=density method=exhaustive min={} max={} restrict={}",
            a.min,
            a.max,
            restriction.name()
        );
        eval::exhaustive_density(a.min, a.max, restriction)?
    } else {
        let seed = require_seed(a.seed, "sampled density")?;
        let _ = writeln!(
            s,
            "record=config command=density method=sampled min={} max={} restrict={} samples={} seed={seed}",
            a.min,
            a.max,
            restriction.name(),
            a.samples
        );
        eval::empirical_density(a.min, a.max, a.samples, seed, restriction)?
    };
    let _ = writeln!(
        s,
        "squarefree fraction {:.6} ± {:.6} ({} / {})",
        est.value, est.std_error, est.hits, est.samples
    );
    let _ = writeln!(
        s,
        "record=density restrict={} squarefree={} total={} fraction={:.6} stderr={:.6} reference={:.6}",
        restriction.name(),
        est.hits,
        est.samples,
        est.value,
        est.std_error,
        match restriction {
            Restriction::All => bayes::squarefree_density(),
            Restriction::Odd => 4.0 / 3.0 * bayes::squarefree_density(),
            Restriction::Even => 2.0 / 3.0 * bayes::squarefree_density(),
        }
    );
    Ok(s)
}

fn cmd_factor(a: &FactorArgs) -> Result<String> {
    let f = factorize(a.n)?;
    Ok(format!(
        "{} = {}\nrecord=factor n={} factors=\"{}\" mu={} squarefree={}\n",
        a.n,
        f,
        a.n,
        f,
        f.mobius(),
        f.is_squarefree() as u8
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e13").unwrap(), 10_000_000_000_000);
        assert_eq!(parse_count("1.8e6").unwrap(), 1_800_000);
        assert_eq!(parse_count("2000000").unwrap(), 2_000_000);
        assert_eq!(parse_count("5e12").unwrap(), 5_000_000_000_000);
        assert_eq!(parse_count("0").unwrap(), 0);
        assert_eq!(parse_count("1_000").unwrap(), 1000);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("1.25e1").is_err());
        assert!(parse_count("-3").is_err());
        assert!(parse_count("1e20").is_err());
        assert!(parse_count("").is_err());
        assert!(parse_count("e5").is_err());
    }

    #[test]
    fn basis_selectors() {
        assert_eq!(parse_basis("first:25").unwrap().basis, first_primes(25));
        let r = parse_basis("range:547:1223").unwrap();
        assert_eq!(r.basis.len(), 100);
        assert_eq!(parse_basis("list:2,3").unwrap().basis.primes(), &[2, 3]);
        let h = parse_basis("first:100-minus:3").unwrap();
        assert_eq!(h.holdout, Some(3));
        assert_eq!(h.basis.len(), 99);
        assert!(!h.basis.contains(3));
        assert!(parse_basis("list:3,2").is_err());
        assert!(parse_basis("list:2,4").is_err());
        assert!(parse_basis("first:5-minus:13").is_err());
        assert!(parse_basis("primes:5").is_err());
        assert!(parse_basis("first").is_err());
    }

    #[test]
    fn predictors() {
        assert_eq!(
            parse_predictor("const:1", TaskKind::Mu2).unwrap().name(),
            "const:1"
        );
        assert_eq!(
            parse_predictor("oracle", TaskKind::Mu).unwrap().name(),
            "oracle"
        );
        assert_eq!(
            parse_predictor("bayes:list:2,3", TaskKind::Mu2)
                .unwrap()
                .name(),
            "bayes:mu2:[2,3]"
        );
        assert!(parse_predictor("bayes:first:3", TaskKind::NModM(4)).is_err());
        assert!(parse_predictor("random", TaskKind::Mu).is_err());
    }

    fn run_str(args: &[&str]) -> Result<String> {
        let mut out = Vec::new();
        run(
            std::iter::once("mobius-crt").chain(args.iter().copied()),
            &mut out,
        )?;
        Ok(String::from_utf8(out).unwrap())
    }

    #[test]
    fn theory_exact() {
        let s = run_str(&["theory", "--primes", "first:1", "--task", "mu2"]).unwrap();
        assert!(
            s.contains("record=theory task=mu2 k=1 method=exact accuracy=0.702642"),
            "{s}"
        );
        let s = run_str(&["theory", "--primes", "first:1", "--task", "mu"]).unwrap();
        assert!(s.contains("accuracy=0.500000"), "{s}");
        let err = run_str(&["theory", "--primes", "first:100"]).unwrap_err();
        assert!(err.to_string().contains("Monte Carlo"), "{err}");
    }

    #[test]
    fn theory_table() {
        let s = run_str(&["theory", "--primes", "first:1", "--table"]).unwrap();
        assert!(s.contains("record=pattern divisors=\"2\" joint=0.20264237 prior=0.50000000 conditional=0.40528473"), "{s}");
        assert!(s.contains("record=pattern divisors=\"\" joint=0.40528473 prior=0.50000000 conditional=0.81056947"), "{s}");
    }

    #[test]
    fn seeds_are_mandatory() {
        let err =
            run_str(&["corrupt", "--predictor", "bayes:first:25", "--count", "10"]).unwrap_err();
        assert!(err.to_string().contains("--seed"), "{err}");
        assert!(run_str(&["theory", "--primes", "first:3", "--monte-carlo", "10"]).is_err());
        assert!(run_str(&["density", "--max", "1000"]).is_err());
    }

    #[test]
    fn factor_report() {
        let s = run_str(&["factor", "999966000289"]).unwrap();
        assert!(
            s.contains("record=factor n=999966000289 factors=\"999983^2\" mu=0 squarefree=0"),
            "{s}"
        );
        assert!(run_str(&["factor", "0"]).is_err());
    }

    #[test]
    fn density_exhaustive() {
        let s = run_str(&["density", "--exhaustive", "--max", "1e6"]).unwrap();
        assert!(
            s.contains("record=density restrict=all squarefree=607925 total=999999"),
            "{s}"
        );
    }
}
