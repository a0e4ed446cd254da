//! `mevsym` command-line front end.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use mevsym::fairness::{claim1_report, claim2_report, fairness_report, truncation_diagnostic, uncertainty_upper_bound};
use mevsym::fourier::schatten_summary;
use mevsym::intersecting::{intersection_profile, stabilizer_set};
use mevsym::payoffs::{cfmm_payoff, junta_payoff, liquidation_payoff, random_payoff};
use mevsym::sequencing::{condorcet_stats, majority_graph, simulate, valid_orderings};
use mevsym::verify::run_suite;
use mevsym::{
    CfmmModel, JuntaSpec, LatencyModel, LiquidationModel, OrderingSet, Payoff, Permutation, RandomDist, Suite, Table,
    VoteProfile,
};

use io::{Inputs, Output};

#[derive(Parser, Debug)]
#[command(name = "mevsym", version, about = "Fourier analysis of transaction-ordering fairness on S_n")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Output JSON path; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write a flattened CSV here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance for degree detection.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Largest group size accepted.
    #[arg(long, global = true, default_value_t = 8)]
    max_n: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Generate a payoff function and write it as JSON.
    GenPayoff(GenPayoffArgs),
    /// Fourier transform of a payoff.
    Transform(TransformArgs),
    /// Fairness, degree and intersection report for a payoff over a set.
    Analyze(AnalyzeArgs),
    /// Run a verification suite; exits nonzero if any check fails.
    Verify(VerifyArgs),
    /// Build the valid-ordering set from validator votes.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModelKind {
    Cfmm,
    Liquidation,
    Junta,
    Random,
    Delta,
    Constant,
}

#[derive(Args, Debug, Serialize)]
struct GenPayoffArgs {
    #[arg(long, value_enum, required_unless_present = "config")]
    model: Option<ModelKind>,
    /// JSON model description, as echoed in the `config` field of outputs.
    #[arg(long, conflicts_with = "model")]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Trade sizes for the cfmm model, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    deltas: Vec<f64>,
    #[arg(long, default_value_t = 100.0)]
    p0: f64,
    #[arg(long, default_value_t = 0.01)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Half the number of unit trades (liquidation).
    #[arg(long)]
    k: Option<usize>,
    /// Liquidation distance below p0.
    #[arg(long)]
    c: Option<i64>,
    /// Junta constraints `i:j`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pairs: Vec<String>,
    #[arg(long, default_value_t = 1.0)]
    coefficient: f64,
    /// `uniform` or `sparse:K` (random model).
    #[arg(long, default_value = "uniform")]
    dist: String,
    /// One-line permutation for the delta model, comma separated.
    #[arg(long, value_delimiter = ',')]
    perm: Vec<usize>,
    /// Value of the constant model.
    #[arg(long, default_value_t = 1.0)]
    value: f64,
}

#[derive(Args, Debug, Serialize)]
struct TransformArgs {
    #[arg(long)]
    payoff: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct SetArgs {
    /// Ordering-set JSON; all of S_n when neither this nor --stabilizer is given.
    #[arg(long, conflicts_with = "stabilizer")]
    set: Option<PathBuf>,
    /// Stabilizer constraints `i:j`, comma separated.
    #[arg(long, value_delimiter = ',')]
    stabilizer: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
struct AnalyzeArgs {
    #[arg(long)]
    payoff: PathBuf,
    #[command(flatten)]
    set: SetArgs,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    #[arg(long)]
    n: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum VoteModel {
    Iid,
    Adversarial,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    /// Vote profile JSON; otherwise votes are generated.
    #[arg(long, conflicts_with_all = ["n_tx", "validators", "latency"])]
    votes: Option<PathBuf>,
    #[arg(long)]
    n_tx: Option<usize>,
    #[arg(long, default_value_t = 3)]
    validators: usize,
    #[arg(long, value_enum, default_value_t = VoteModel::Iid)]
    latency: VoteModel,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: mevsym::Error| e.to_string())
}

/// Model description accepted by `gen-payoff --config`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
enum ModelConfig {
    Cfmm(CfmmModel),
    Liquidation(LiquidationModel),
    Junta { n: usize, terms: Vec<JuntaSpec> },
    Random { n: usize, seed: u64, dist: RandomDist },
    Delta { perm: Permutation },
    Constant { n: usize, value: f64 },
}

impl ModelConfig {
    fn n(&self) -> usize {
        match self {
            ModelConfig::Cfmm(m) => m.n(),
            ModelConfig::Liquidation(m) => m.n(),
            ModelConfig::Junta { n, .. } | ModelConfig::Random { n, .. } | ModelConfig::Constant { n, .. } => *n,
            ModelConfig::Delta { perm } => perm.n(),
        }
    }

    fn build(&self) -> mevsym::Result<Payoff> {
        match self {
            ModelConfig::Cfmm(m) => cfmm_payoff(m),
            ModelConfig::Liquidation(m) => liquidation_payoff(m),
            ModelConfig::Junta { n, terms } => junta_payoff(terms, *n),
            ModelConfig::Random { n, seed, dist } => random_payoff(*n, *seed, *dist),
            ModelConfig::Delta { perm } => Payoff::delta(perm),
            ModelConfig::Constant { n, value } => Payoff::constant(*n, *value),
        }
    }
}

fn parse_pairs(items: &[String]) -> Result<Vec<(usize, usize)>> {
    items
        .iter()
        .map(|s| {
            let (i, j) = s.split_once(':').with_context(|| format!("constraint {s:?} is not of the form i:j"))?;
            Ok((i.trim().parse().with_context(|| format!("bad point in {s:?}"))?, j.trim().parse().with_context(|| format!("bad image in {s:?}"))?))
        })
        .collect()
}

fn parse_dist(s: &str) -> Result<RandomDist> {
    match s.split_once(':') {
        None if s == "uniform" => Ok(RandomDist::Uniform01),
        Some(("sparse", k)) => Ok(RandomDist::Sparse(k.parse().with_context(|| format!("bad sparse count {k:?}"))?)),
        _ => bail!("--dist must be `uniform` or `sparse:K`, got {s:?}"),
    }
}

fn model_from_flags(a: &GenPayoffArgs, seed: u64) -> Result<ModelConfig> {
    let need_n = || a.n.context("--n is required for this model");
    Ok(match a.model.expect("clap enforces model or config") {
        ModelKind::Cfmm => {
            if a.deltas.is_empty() {
                bail!("--deltas is required for the cfmm model");
            }
            ModelConfig::Cfmm(CfmmModel::new(a.deltas.clone(), a.p0, a.gamma, a.beta)?)
        }
        ModelKind::Liquidation => {
            let k = a.k.context("--k is required for the liquidation model")?;
            let c = a.c.context("--c is required for the liquidation model")?;
            ModelConfig::Liquidation(LiquidationModel::new(k, c, a.p0)?)
        }
        ModelKind::Junta => {
            ModelConfig::Junta { n: need_n()?, terms: vec![JuntaSpec::new(parse_pairs(&a.pairs)?, a.coefficient)] }
        }
        ModelKind::Random => ModelConfig::Random { n: need_n()?, seed, dist: parse_dist(&a.dist)? },
        ModelKind::Delta => {
            let perm = if a.perm.is_empty() { Permutation::identity(need_n()?) } else { Permutation::from_one_line(&a.perm)? };
            ModelConfig::Delta { perm }
        }
        ModelKind::Constant => ModelConfig::Constant { n: need_n()?, value: a.value },
    })
}

fn check_n(n: usize, common: &Common) -> Result<()> {
    if n > common.max_n {
        bail!("n = {n} exceeds --max-n {}", common.max_n);
    }
    Ok(())
}

fn gen_payoff(a: &GenPayoffArgs, common: &Common, out: &mut Output) -> Result<()> {
    let model = match &a.config {
        Some(path) => {
            let text = out.inputs.read(path)?;
            serde_json::from_str::<ModelConfig>(&text).with_context(|| format!("invalid model config {}", path.display()))?
        }
        None => model_from_flags(a, common.seed)?,
    };
    check_n(model.n(), common)?;
    let f = model.build()?;
    let summary = json!({
        "n": f.n(),
        "order": f.len(),
        "min": f.min_value(),
        "max": f.max_value(),
        "mean": f.mean(),
        "support": f.values().iter().filter(|v| **v != 0.0).count(),
    });
    eprintln!("n = {}, n! = {}, min = {}, max = {}, mean = {}", f.n(), f.len(), f.min_value(), f.max_value(), f.mean());
    out.rows = f
        .values()
        .iter()
        .enumerate()
        .map(|(r, v)| {
            let p = Permutation::lehmer_unrank(f.n(), r as u64).expect("rank in range");
            vec![r.to_string(), io::one_line(&p), v.to_string()]
        })
        .collect();
    out.header = vec!["rank", "one_line", "value"];
    out.body = json!({ "model": model, "summary": summary, "payoff": f });
    Ok(())
}

fn block_rows(table: &Table, f: &Payoff) -> Result<(Value, Vec<Vec<String>>)> {
    let spectrum = table.transform(f)?;
    let schatten = schatten_summary(&spectrum);
    let rows = spectrum
        .blocks()
        .iter()
        .zip(&schatten.per_block)
        .map(|(b, (_, sv))| {
            vec![
                b.shape.to_string(),
                b.shape.level().to_string(),
                b.shape.dim().to_string(),
                b.matrix.norm().to_string(),
                sv.first().copied().unwrap_or(0.0).to_string(),
                sv.iter().sum::<f64>().to_string(),
            ]
        })
        .collect();
    let value = json!({
        "spectrum": spectrum,
        "schatten": { "s1": schatten.s1, "sinf": schatten.sinf, "k_ratio": schatten.k_ratio(), "per_block": schatten.per_block },
    });
    Ok((value, rows))
}

const BLOCK_HEADER: [&str; 6] = ["lambda", "level", "dim", "frobenius", "sigma_max", "sigma_sum"];

fn transform(a: &TransformArgs, common: &Common, out: &mut Output) -> Result<()> {
    let f = io::read_payoff(&mut out.inputs, &a.payoff)?;
    check_n(f.n(), common)?;
    let table = Table::new(f.n())?;
    let (mut value, rows) = block_rows(&table, &f)?;
    value["degree"] = match table.degree(&f, common.tol) {
        Ok(d) => json!(d),
        Err(_) => Value::Null,
    };
    value["plancherel"] = json!({
        "sum_f_squared": f.norm2_squared(),
        "weighted_spectrum_energy": table.transform(&f)?.plancherel_energy(),
    });
    out.rows = rows;
    out.header = BLOCK_HEADER.to_vec();
    out.body = value;
    Ok(())
}

fn read_set(a: &SetArgs, n: usize, inputs: &mut Inputs) -> Result<(Value, OrderingSet)> {
    if let Some(path) = &a.set {
        let set = io::read_set(inputs, path)?;
        if set.n() != n {
            return Err(mevsym::Error::DimensionMismatch { expected: n, found: set.n() }.into());
        }
        return Ok((json!({ "file": path }), set));
    }
    if !a.stabilizer.is_empty() {
        let pairs = parse_pairs(&a.stabilizer)?;
        return Ok((json!({ "stabilizer": pairs }), stabilizer_set(n, &pairs)?));
    }
    Ok((json!("full"), OrderingSet::full(n)?))
}

fn analyze(a: &AnalyzeArgs, common: &Common, out: &mut Output) -> Result<()> {
    let f = io::read_payoff(&mut out.inputs, &a.payoff)?;
    check_n(f.n(), common)?;
    let (provenance, set) = read_set(&a.set, f.n(), &mut out.inputs)?;
    if set.is_empty() {
        return Err(mevsym::Error::EmptySet.into());
    }
    let table = Table::new(f.n())?;
    let fairness = fairness_report(&table, &f, &set)?;
    let degree = table.degree(&f, common.tol).ok();
    let profile = intersection_profile(&set)?;
    let uncertainty = uncertainty_upper_bound(&table, &f, &set).ok();
    let claim1 = degree.map(|_| claim1_report(&table, &f, &set, common.tol)).transpose()?;
    let claim2 = claim2_report(&table, &f, &set, common.tol).ok();
    let truncation = match degree {
        Some(s) if profile.t_max < s && s < f.n() => Some(truncation_diagnostic(&table, &f, &set, profile.t_max, s)?),
        _ => None,
    };
    let restricted = f.restrict(&set)?;
    let (restricted_spectrum, _) = block_rows(&table, &restricted)?;
    let (_, rows) = block_rows(&table, &f)?;
    out.rows = rows;
    out.header = BLOCK_HEADER.to_vec();
    out.body = json!({
        "set": { "provenance": provenance, "size": set.len() },
        "fairness": fairness,
        "degree": degree,
        "intersection": profile,
        "uncertainty_bound": uncertainty,
        "claim1": claim1,
        "claim2": claim2,
        "truncation": truncation,
        "restricted_schatten": restricted_spectrum["schatten"],
    });
    Ok(())
}

fn verify(a: &VerifyArgs, common: &Common, out: &mut Output) -> Result<bool> {
    check_n(a.n, common)?;
    let report = run_suite(a.suite, a.n, common.seed, common.tol)?;
    for c in &report.checks {
        eprintln!(
            "{} {}: {}/{} ok (worst {}, threshold {})",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.total - c.failures,
            c.total,
            c.worst,
            c.threshold
        );
    }
    out.header = vec!["check", "total", "failures", "worst", "threshold", "passed"];
    out.rows = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.total.to_string(),
                c.failures.to_string(),
                c.worst.to_string(),
                c.threshold.to_string(),
                c.passed().to_string(),
            ]
        })
        .collect();
    let passed = report.passed;
    out.body = serde_json::to_value(report)?;
    Ok(passed)
}

fn simulate_cmd(a: &SimulateArgs, common: &Common, out: &mut Output) -> Result<()> {
    let votes = match &a.votes {
        Some(path) => {
            let text = out.inputs.read(path)?;
            serde_json::from_str::<VoteProfile>(&text).map_err(|e| match e.line() {
                0 => anyhow::anyhow!("malformed vote profile {}: {e}", path.display()),
                line => anyhow::anyhow!("malformed vote profile {} at line {line}, column {}: {e}", path.display(), e.column()),
            })?
        }
        None => {
            let n = a.n_tx.context("either --votes or --n-tx is required")?;
            check_n(n, common)?;
            let model = match a.latency {
                VoteModel::Iid => LatencyModel::IidShuffle { seed: common.seed },
                VoteModel::Adversarial => LatencyModel::AdversarialCycle,
            };
            simulate(n, a.validators, model)?
        }
    };
    check_n(votes.n_tx(), common)?;
    let graph = majority_graph(&votes);
    let stats = condorcet_stats(&graph);
    let set = valid_orderings(&graph)?;
    let profile = intersection_profile(&set)?;
    eprintln!("|A| = {}, t_max = {}, sccs = {}", set.len(), profile.t_max, stats.num_sccs);
    out.header = vec!["rank", "one_line"];
    out.rows = set.permutations().map(|p| vec![p.lehmer_rank().to_string(), io::one_line(&p)]).collect();
    out.body = json!({
        "votes": votes,
        "graph": graph,
        "stats": stats,
        "intersection": profile,
        "set": set,
    });
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let mut out = Output::default();
    let mut passed = true;
    match &cli.command {
        Command::GenPayoff(a) => gen_payoff(a, &cli.common, &mut out)?,
        Command::Transform(a) => transform(a, &cli.common, &mut out)?,
        Command::Analyze(a) => analyze(a, &cli.common, &mut out)?,
        Command::Verify(a) => passed = verify(a, &cli.common, &mut out)?,
        Command::Simulate(a) => simulate_cmd(a, &cli.common, &mut out)?,
    }
    out.write(&cli.common, &cli.command)?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
