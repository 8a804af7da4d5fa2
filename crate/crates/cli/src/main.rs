//! `ldpc`: command-line front end for ldp-contraction.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ldp_contraction::contraction::{bounds_report, eta_bruteforce, eta_tv_exact};
use ldp_contraction::fisher::{
    fisher_multinomial, fisher_numeric, private_fisher_bound, Bernoulli, FisherMatrix, GaussianLocation,
    GaussianVariance,
};
use ldp_contraction::io::{channel_to_csv, parse_distribution, read_channel, write_channel, Format};
use ldp_contraction::mechanisms::{
    audit_ldp, binary_mechanism, hadamard_response, randomized_response, HadamardConfig,
};
use ldp_contraction::minimax::{bht_sample_complexity, evaluate, table1, BoundName, BoundParams, Table1Params};
use ldp_contraction::prob::divergence;
use ldp_contraction::report::{real, to_json, BoundReport};
use ldp_contraction::simulation::{
    binomial_moment_check, empirical_sample_complexity, simulate_bht, simulate_dist_estimation, Estimator, Harness,
    SimResult, DEFAULT_TRIALS,
};
use ldp_contraction::{Channel, DivergenceKind, Error, ProbVector, Result};

#[derive(Parser, Debug)]
#[command(
    name = "ldpc",
    version,
    about = "Contraction and private minimax bounds for LDP channels"
)]
struct Cli {
    /// Worker threads for simulations; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Build or audit a mechanism.
    #[command(subcommand)]
    Mechanism(MechanismCmd),
    /// Estimate a contraction coefficient of a channel.
    Contract(ContractArgs),
    /// Contraction constants and output-divergence bounds at (eps, tv).
    Bounds(BoundsArgs),
    /// Evaluate one minimax bound.
    Bound(BoundArgs),
    /// Fisher information of a parametric family.
    Fisher(FisherArgs),
    /// Monte Carlo experiments.
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Summary table of private minimax rates as CSV.
    Table1(Table1Args),
}

#[derive(Subcommand, Debug)]
enum MechanismCmd {
    Build(BuildArgs),
    Audit(AuditArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MechanismKind {
    Rr,
    Binary,
    Hadamard,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct BuildArgs {
    #[arg(long, value_enum)]
    kind: MechanismKind,
    #[arg(long)]
    eps: f64,
    /// Alphabet size (rr, hadamard).
    #[arg(long)]
    dim: Option<usize>,
    /// Distributions for the binary mechanism.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// Write to a file (format by extension) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct AuditArgs {
    #[arg(long)]
    channel: PathBuf,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct ContractArgs {
    #[arg(long)]
    channel: PathBuf,
    /// kl, chi2, h2 or tv.
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 201)]
    grid: usize,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct BoundsArgs {
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    tv: f64,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct BoundArgs {
    /// le_cam, entropy, assouad, distribution, hadamard, density, mim,
    /// gaussian_location, bht or van_trees.
    name: String,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    kl: Option<f64>,
    #[arg(long)]
    tv: Option<f64>,
    #[arg(long)]
    h2: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    /// Comma-separated squared TV distances.
    #[arg(long, value_delimiter = ',')]
    tv_sq: Option<Vec<f64>>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    log_vd: Option<f64>,
    #[arg(long)]
    h_theta: Option<f64>,
    #[arg(long)]
    i_theta: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    vol_ratio: Option<f64>,
    #[arg(long)]
    rad: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    sup_trace: Option<f64>,
    /// JSON output (the default).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    Multinomial,
    Bernoulli,
    Gaussian,
    GaussianVariance,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct FisherArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Comma-separated parameter; for multinomial the first k − 1 masses.
    #[arg(long, value_delimiter = ',')]
    theta: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, requires = "n")]
    eps: Option<f64>,
    #[arg(long, requires = "eps")]
    n: Option<f64>,
}

#[derive(Args, Debug)]
struct SimCommon {
    #[arg(long, env = "LDPC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
}

#[derive(Subcommand, Debug)]
enum SimulateCmd {
    /// Distribution estimation risk.
    Dist(DistArgs),
    /// Error rates of the private likelihood-ratio test.
    Bht(BhtArgs),
    /// Empirical sample complexity of private testing.
    Sc(ScArgs),
    /// Binomial central moment.
    Binom(BinomArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DistMechanism {
    Hadamard,
    Rr,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct DistArgs {
    #[command(flatten)]
    common: SimCommon,
    #[arg(long, value_enum, default_value_t = DistMechanism::Hadamard)]
    mechanism: DistMechanism,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    eps: f64,
    /// Sample size; several comma-separated values give a sweep.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    #[arg(long, default_value_t = 2.0)]
    h: f64,
    /// True distribution (comma-separated); uniform if omitted.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct BhtArgs {
    #[command(flatten)]
    common: SimCommon,
    /// Comma-separated masses, or a single Bernoulli success probability.
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    #[arg(long)]
    eps: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct ScArgs {
    #[command(flatten)]
    common: SimCommon,
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    #[arg(long)]
    eps: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct BinomArgs {
    #[command(flatten)]
    common: SimCommon,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    h: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct Table1Args {
    #[arg(long)]
    n: f64,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    h: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    eps: f64,
    /// TV and squared Hellinger distance of the testing pair.
    #[arg(long, default_value_t = 0.8)]
    tv: f64,
    #[arg(long, default_value_t = 0.8)]
    h2: f64,
    #[arg(long)]
    json: bool,
}

fn parse_prob(text: &str) -> Result<ProbVector> {
    let values: Vec<&str> = text.split(',').map(str::trim).collect();
    if let [single] = values.as_slice() {
        let p: f64 = single
            .parse()
            .map_err(|_| Error::Parse(format!("not a number: `{single}`")))?;
        return ProbVector::bernoulli(p);
    }
    parse_distribution(text, Format::Csv)
}

fn emit_json<T: Serialize>(value: &T) -> Result<String> {
    to_json(value)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn fmt(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn report_csv(r: &BoundReport) -> Result<String> {
    let mut w = csv_writer();
    w.write_record([
        "name",
        "value",
        "formula_id",
        "direction",
        "quantity",
        "clamped",
        "up_to_constant",
        "note",
    ])
    .map_err(csv_err)?;
    for e in &r.entries {
        let direction = serde_json::to_value(e.direction).map_err(|e| Error::Parse(e.to_string()))?;
        w.write_record([
            e.name.clone(),
            fmt(e.value),
            e.formula_id.clone(),
            direction.as_str().unwrap_or_default().to_string(),
            e.quantity.clone(),
            e.clamped.to_string(),
            e.up_to_constant.to_string(),
            e.note.clone().unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    finish_csv(w)
}

fn build_mechanism(a: &BuildArgs) -> Result<Channel> {
    let dim = || {
        a.dim.ok_or_else(|| Error::InvalidParameter {
            name: "dim",
            reason: "required for this kind".into(),
        })
    };
    match a.kind {
        MechanismKind::Rr => randomized_response(dim()?, a.eps),
        MechanismKind::Hadamard => hadamard_response(&HadamardConfig::new(dim()?, a.eps)?),
        MechanismKind::Binary => {
            let missing = |name| Error::InvalidParameter {
                name,
                reason: "required for the binary mechanism".into(),
            };
            let p = parse_prob(a.p.as_deref().ok_or_else(|| missing("p"))?)?;
            let q = parse_prob(a.q.as_deref().ok_or_else(|| missing("q"))?)?;
            binary_mechanism(&p, &q, a.eps)
        }
    }
}

#[derive(Serialize)]
struct AuditReport {
    #[serde(with = "real")]
    eps: f64,
    inputs: usize,
    outputs: usize,
}

#[derive(Serialize)]
struct FisherReport {
    family: String,
    theta: Vec<f64>,
    fisher: FisherMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    private_bound: Option<FisherMatrix>,
}

#[derive(Serialize)]
struct SampleComplexityReport {
    sample_complexity: u64,
    #[serde(with = "real")]
    lower: f64,
    #[serde(with = "real")]
    upper: f64,
    #[serde(with = "real")]
    tv: f64,
    #[serde(with = "real")]
    h2: f64,
    #[serde(with = "real")]
    eps: f64,
    trials: u64,
    seed: u64,
}

#[derive(Serialize)]
struct BhtReport {
    type_1: SimResult,
    type_2: SimResult,
}

fn run_fisher(a: &FisherArgs) -> Result<String> {
    let (name, fisher) = match a.family {
        Family::Multinomial => ("multinomial", fisher_multinomial(&a.theta)?),
        Family::Bernoulli => ("bernoulli", fisher_numeric(&Bernoulli, &a.theta)?),
        Family::Gaussian => (
            "gaussian",
            fisher_numeric(&GaussianLocation { sigma: a.sigma }, &a.theta)?,
        ),
        Family::GaussianVariance => ("gaussian_variance", fisher_numeric(&GaussianVariance, &a.theta)?),
    };
    let private_bound = match (a.eps, a.n) {
        (Some(eps), Some(n)) => Some(private_fisher_bound(n, eps, &fisher)?),
        _ => None,
    };
    emit_json(&FisherReport {
        family: name.into(),
        theta: a.theta.clone(),
        fisher,
        private_bound,
    })
}

fn dist_setup(a: &DistArgs) -> Result<(Channel, Estimator, ProbVector)> {
    let p = match &a.p {
        Some(text) => parse_distribution(text, Format::Csv)?,
        None => ProbVector::uniform(a.d)?,
    };
    let (k, est) = match a.mechanism {
        DistMechanism::Hadamard => {
            let cfg = HadamardConfig::new(a.d, a.eps)?;
            (hadamard_response(&cfg)?, Estimator::Hadamard { config: cfg })
        }
        DistMechanism::Rr => (
            randomized_response(a.d, a.eps)?,
            Estimator::RandomizedResponse { eps: a.eps },
        ),
    };
    Ok((k, est, p))
}

fn run_simulate(cmd: &SimulateCmd, harness: &Harness) -> Result<String> {
    match cmd {
        SimulateCmd::Dist(a) => {
            let (k, est, p) = dist_setup(a)?;
            let results =
                a.n.iter()
                    .map(|&n| simulate_dist_estimation(&k, est, &p, n, a.h, a.common.trials, a.common.seed, harness))
                    .collect::<Result<Vec<_>>>()?;
            if a.csv {
                let mut w = csv_writer();
                w.write_record(["n", "risk", "half_width", "trials", "seed"])
                    .map_err(csv_err)?;
                for (n, r) in a.n.iter().zip(&results) {
                    w.write_record([
                        n.to_string(),
                        fmt(r.estimate),
                        fmt(r.half_width),
                        r.trials.to_string(),
                        r.seed.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
                finish_csv(w)
            } else if let [single] = results.as_slice() {
                emit_json(single)
            } else {
                emit_json(&results)
            }
        }
        SimulateCmd::Bht(a) => {
            let p = parse_prob(&a.p)?;
            let q = parse_prob(&a.q)?;
            let results =
                a.n.iter()
                    .map(|&n| simulate_bht(&p, &q, a.eps, n, a.common.trials, a.common.seed, harness))
                    .collect::<Result<Vec<_>>>()?;
            if a.csv {
                let mut w = csv_writer();
                w.write_record(["n", "type_1", "type_1_half_width", "type_2", "type_2_half_width"])
                    .map_err(csv_err)?;
                for (n, (e0, e1)) in a.n.iter().zip(&results) {
                    w.write_record([
                        n.to_string(),
                        fmt(e0.estimate),
                        fmt(e0.half_width),
                        fmt(e1.estimate),
                        fmt(e1.half_width),
                    ])
                    .map_err(csv_err)?;
                }
                finish_csv(w)
            } else {
                let reports: Vec<BhtReport> = results
                    .into_iter()
                    .map(|(type_1, type_2)| BhtReport { type_1, type_2 })
                    .collect();
                match reports.as_slice() {
                    [single] => emit_json(single),
                    _ => emit_json(&reports),
                }
            }
        }
        SimulateCmd::Sc(a) => {
            let p = parse_prob(&a.p)?;
            let q = parse_prob(&a.q)?;
            let tv = divergence(DivergenceKind::Tv, &p, &q)?;
            let h2 = divergence(DivergenceKind::SquaredHellinger, &p, &q)?;
            let sample_complexity =
                empirical_sample_complexity(&p, &q, a.eps, a.common.trials, a.common.seed, harness)?;
            let (lower, upper) = bht_sample_complexity(tv, h2, a.eps)?;
            emit_json(&SampleComplexityReport {
                sample_complexity,
                lower,
                upper,
                tv,
                h2,
                eps: a.eps,
                trials: a.common.trials,
                seed: a.common.seed,
            })
        }
        SimulateCmd::Binom(a) => emit_json(&binomial_moment_check(
            a.n,
            a.p,
            a.h,
            a.common.trials,
            a.common.seed,
            harness,
        )?),
    }
}

fn run_table1(a: &Table1Args) -> Result<String> {
    let rows = table1(&Table1Params {
        n: a.n,
        d: a.d,
        h: a.h,
        beta: a.beta,
        sigma: a.sigma,
        eps: a.eps,
        tv: a.tv,
        h2: a.h2,
    })?;
    if a.json {
        return emit_json(&rows);
    }
    let cell = |v: Option<f64>| v.map(fmt).unwrap_or_else(|| "N.A.".into());
    let mut w = csv_writer();
    w.write_record(["problem", "ub", "previous_lb", "lb"])
        .map_err(csv_err)?;
    for r in &rows {
        w.write_record([r.problem.clone(), cell(r.ub), cell(r.previous_lb), cell(r.lb)])
            .map_err(csv_err)?;
    }
    finish_csv(w)
}

fn run(cli: Cli) -> Result<String> {
    let harness = Harness::new(cli.workers)?;
    match cli.command {
        Command::Mechanism(MechanismCmd::Build(a)) => {
            let k = build_mechanism(&a)?;
            match &a.out {
                Some(path) => {
                    write_channel(path, &k)?;
                    Ok(String::new())
                }
                None if a.csv => channel_to_csv(&k),
                None => emit_json(&k),
            }
        }
        Command::Mechanism(MechanismCmd::Audit(a)) => {
            let k = read_channel(&a.channel)?;
            emit_json(&AuditReport {
                eps: audit_ldp(&k),
                inputs: k.inputs(),
                outputs: k.outputs(),
            })
        }
        Command::Contract(a) => {
            let k = read_channel(&a.channel)?;
            let kind: DivergenceKind = a.kind.parse()?;
            let est = if kind == DivergenceKind::Tv {
                eta_tv_exact(&k)
            } else {
                eta_bruteforce(&k, kind, a.grid)?
            };
            emit_json(&est)
        }
        Command::Bounds(a) => {
            let r = bounds_report(a.eps, a.tv)?;
            if a.csv {
                report_csv(&r)
            } else {
                emit_json(&r)
            }
        }
        Command::Bound(a) => {
            let name: BoundName = a.name.parse()?;
            let params = BoundParams {
                n: a.n,
                eps: Some(a.eps),
                alpha: a.alpha,
                kl: a.kl,
                tv: a.tv,
                h2: a.h2,
                k: a.k,
                tau: a.tau,
                tv_sq: a.tv_sq.clone(),
                d: a.d,
                h: a.h,
                beta: a.beta,
                r: a.r,
                log_vd: a.log_vd,
                h_theta: a.h_theta,
                i_theta: a.i_theta,
                sigma: a.sigma,
                vol_ratio: a.vol_ratio,
                rad: a.rad,
                b: a.b,
                sup_trace: a.sup_trace,
            };
            let r = evaluate(name, &params)?;
            if a.csv {
                report_csv(&r)
            } else {
                emit_json(&r)
            }
        }
        Command::Fisher(a) => run_fisher(&a),
        Command::Simulate(cmd) => run_simulate(&cmd, &harness),
        Command::Table1(a) => run_table1(&a),
    }
}

fn error_line(code: &str, message: &str) -> String {
    serde_json::json!({ "error": code, "message": message }).to_string()
}

fn main() -> ExitCode {
    if std::env::args_os().len() <= 1 {
        eprintln!("{}", Cli::command().render_help());
        return ExitCode::from(2);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                eprint!("{e}");
                return ExitCode::from(2);
            }
            let text = e.to_string();
            let first = text
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("{}", error_line("usage_error", first));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_line(e.code(), &e.to_string()));
            ExitCode::from(2)
        }
    }
}
