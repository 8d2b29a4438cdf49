//! Experiment CLI: one entry point per library operation, JSON/CSV output
//! with the full configuration echoed for replay.
//!
//! Exit codes: 0 success, 1 precondition violation, 2 budget exceeded,
//! 64 unknown subcommand.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use polycoh::budget::Budget;
use polycoh::cohomology::{
    defect, is_approx_cocycle, Cochain, FiltrationKind, FiltrationTag, GroupSpec, Trilean,
};
use polycoh::corrector::{
    cyclic_rank1_correct, greedy_correct, minimax_correct, minimax_growth_experiment,
    synthesize, CorrectionResult, LinearMap, MatrixCochain, NoiseModel,
};
use polycoh::error::Error;
use polycoh::ffpoly::{parse_poly, write_poly, FieldVector, Poly, PrimeModulus};
use polycoh::gowers::{delta_degree, gowers_norm, Algorithm, PhaseFunction, ValueTable};
use polycoh::limits::{koenig_select, lift_correction, InverseSystem};
use polycoh::matrix::Matrix;
use polycoh::rank::{quad_rank_with_certificate, strength_rank, RankCertificate, RankMethod, RankOracle};

#[derive(Parser)]
#[command(name = "polycoh", version, about = "Exact experiments on polynomial rank, uniformity norms and approximate cochain correction")]
struct Cli {
    /// Enumeration budget (points).
    #[arg(long, global = true, default_value_t = 100_000_000)]
    budget: u64,
    /// Worker thread count (default: POLYCOH_WORKERS or all cores). Results
    /// do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank bracket of a polynomial with a certificate.
    Rank {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RankMethodArg::Auto)]
        method: RankMethodArg,
        #[arg(long, default_value_t = 2)]
        ext_degree: usize,
        /// Search bound on the rank (default: number of variables).
        #[arg(long)]
        max_r: Option<usize>,
    },
    /// Gowers U^m norm of a polynomial phase.
    Gowers {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Naive)]
        algorithm: AlgorithmArg,
    },
    /// Nonclassical polynomial degree of a torsion value table.
    DeltaDegree {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_d: usize,
    },
    /// Defect report of a degree-1 cochain.
    Defect {
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long, value_enum, default_value_t = FiltrationArg::Ad)]
        filtration: FiltrationArg,
    },
    /// Approximate-cocycle predicate at level i.
    CocycleCheck {
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long, value_enum, default_value_t = FiltrationArg::Ad)]
        filtration: FiltrationArg,
    },
    /// Bar differential of a cochain.
    Coboundary {
        #[arg(long)]
        cochain: PathBuf,
    },
    /// Correcting-homomorphism search.
    Correct {
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long, value_enum, default_value_t = CorrectMethodArg::Exhaustive)]
        method: CorrectMethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Image degree d (default: largest value degree in the input).
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 16)]
        iterations: usize,
        #[arg(long, default_value_t = 3)]
        restarts: usize,
    },
    /// Synthesize A = chi + bounded-rank noise.
    Synthesize {
        #[arg(long)]
        chi: PathBuf,
        #[arg(long, default_value_t = 1)]
        noise_rank: usize,
        #[arg(long, value_enum, default_value_t = NoiseModelArg::Iid)]
        model: NoiseModelArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Compatible sequence through a finite inverse system.
    Koenig {
        #[arg(long)]
        system: PathBuf,
    },
    /// Lift per-level corrections of a cochain to the top level.
    Lift {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Batch experiments.
    Experiment {
        #[command(subcommand)]
        experiment: ExperimentCommand,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Worst-case exact minimax distance per (n, s) cell and defect level.
    MinimaxGrowth {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Inclusive variable-count range "lo:hi".
        #[arg(long, default_value = "1:2")]
        n_range: String,
        /// Inclusive group-dimension range "lo:hi".
        #[arg(long, default_value = "1:2")]
        s_range: String,
        #[arg(long, default_value_t = 3)]
        defect_cap: usize,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RankMethodArg {
    Auto,
    Quad,
    Subspace,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Naive,
    Derivative,
}

#[derive(Clone, Copy, ValueEnum)]
enum FiltrationArg {
    Ad,
    Bd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorrectMethodArg {
    Exhaustive,
    Greedy,
    Cyclic,
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseModelArg {
    Constant,
    Iid,
}

#[derive(Serialize, Deserialize)]
struct ChiFile {
    p: u32,
    s: usize,
    nvars: usize,
    images: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct MatrixCochainFile {
    p: u32,
    n_max: i64,
    dim: usize,
    /// Row-major matrices for n = -n_max ... n_max.
    values: Vec<Vec<u32>>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand => 64,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    if let Some(workers) = cli.workers.or_else(|| {
        std::env::var("POLYCOH_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    }) {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    match run(&cli) {
        Ok(value) => {
            let text = serde_json::to_string_pretty(&value).expect("serializable");
            match &cli.output {
                Some(path) => {
                    if let Err(err) = fs::write(path, text + "\n") {
                        eprintln!("error: {err}");
                        return ExitCode::from(1);
                    }
                }
                None => println!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::BudgetExceeded { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: &Cli) -> polycoh::Result<Value> {
    let budget = Budget::new(cli.budget as u128);
    let result = match &cli.command {
        Command::Rank {
            input,
            method,
            ext_degree,
            max_r,
        } => run_rank(input, *method, *ext_degree, *max_r, &budget)?,
        Command::Gowers {
            input,
            m,
            algorithm,
        } => run_gowers(input, *m, *algorithm, &budget)?,
        Command::DeltaDegree { table, max_d } => run_delta_degree(table, *max_d, &budget)?,
        Command::Defect {
            cochain,
            filtration,
        } => run_defect(cochain, *filtration, &budget)?,
        Command::CocycleCheck {
            cochain,
            i,
            filtration,
        } => run_cocycle_check(cochain, *i, *filtration, &budget)?,
        Command::Coboundary { cochain } => {
            let c = load_cochain(cochain)?;
            let d = c.coboundary()?;
            json!({
                "config": { "command": "coboundary", "cochain": path_str(cochain) },
                "result": { "degree": d.degree, "cochain": serde_json::from_str::<Value>(&d.to_json()).unwrap() },
            })
        }
        Command::Correct {
            cochain,
            method,
            seed,
            degree,
            iterations,
            restarts,
        } => run_correct(cochain, *method, *seed, *degree, *iterations, *restarts, &budget)?,
        Command::Synthesize {
            chi,
            noise_rank,
            model,
            seed,
            degree,
        } => run_synthesize(chi, *noise_rank, *model, *seed, *degree, &budget)?,
        Command::Koenig { system } => {
            let text = fs::read_to_string(system).map_err(io_error)?;
            let sys = InverseSystem::from_json(&text)?;
            let seq = koenig_select(&sys)?;
            let labels: Vec<&str> = seq
                .indices
                .iter()
                .enumerate()
                .map(|(n, &i)| sys.sets[n][i].as_str())
                .collect();
            json!({
                "config": { "command": "koenig", "system": path_str(system) },
                "result": { "indices": seq.indices, "labels": labels },
            })
        }
        Command::Lift { input, c, degree } => run_lift(input, *c, *degree, &budget)?,
        Command::Experiment { experiment } => run_experiment(experiment, &budget)?,
    };
    let mut value = result;
    if let Value::Object(map) = &mut value {
        map.insert(
            "version".into(),
            Value::String(env!("CARGO_PKG_VERSION").into()),
        );
        if let Some(Value::Object(config)) = map.get_mut("config") {
            config.insert("budget".into(), json!(cli.budget));
        }
    }
    Ok(value)
}

fn io_error(err: std::io::Error) -> Error {
    Error::Precondition(format!("io: {err}"))
}

fn path_str(path: &PathBuf) -> String {
    path.display().to_string()
}

fn load_poly(path: &PathBuf) -> polycoh::Result<Poly> {
    parse_poly(&fs::read_to_string(path).map_err(io_error)?)
}

fn load_cochain(path: &PathBuf) -> polycoh::Result<Cochain> {
    Cochain::from_json(&fs::read_to_string(path).map_err(io_error)?)
}

fn method_name(method: RankMethod) -> &'static str {
    match method {
        RankMethod::QuadraticOracle => "quadratic-oracle",
        RankMethod::SubspaceSearch => "subspace-search",
        RankMethod::Greedy => "greedy",
        RankMethod::Exhaustive => "exhaustive",
    }
}

fn certificate_json(cert: &RankCertificate) -> Value {
    match cert {
        RankCertificate::Decomposition { factors } => json!({
            "type": "decomposition",
            "factors": factors
                .iter()
                .map(|(f, g)| json!([write_poly(f), write_poly(g)]))
                .collect::<Vec<_>>(),
        }),
        RankCertificate::VanishingSubspace(ann) => json!({
            "type": "vanishing-subspace",
            "ext_degree": ann.ext_degree,
            "forms": ann.forms,
        }),
    }
}

fn run_rank(
    input: &PathBuf,
    method: RankMethodArg,
    ext_degree: usize,
    max_r: Option<usize>,
    budget: &Budget,
) -> polycoh::Result<Value> {
    let poly = load_poly(input)?;
    let max_r = max_r.unwrap_or(poly.nvars());
    let result = match method {
        RankMethodArg::Quad => quad_rank_with_certificate(&poly, budget)?,
        RankMethodArg::Subspace => strength_rank(&poly, max_r, ext_degree, budget)?,
        RankMethodArg::Auto => {
            if poly.is_zero() || (poly.is_homogeneous() && poly.degree() == 2 && poly.p().get() != 2)
            {
                quad_rank_with_certificate(&poly, budget)?
            } else if poly.is_homogeneous() {
                strength_rank(&poly, max_r, ext_degree, budget)?
            } else {
                // inhomogeneous: component-wise bracket without certificate
                let mut oracle = RankOracle::new(ext_degree, budget.clone());
                let (lower, upper) = oracle.bracket(&poly)?;
                return Ok(json!({
                    "config": rank_config(input, "auto", ext_degree, max_r),
                    "result": {
                        "lower_bound": lower,
                        "upper_bound": upper,
                        "exact": (lower == upper).then_some(upper),
                        "method": "component-bracket",
                    },
                }));
            }
        }
    };
    let method_str = match method {
        RankMethodArg::Auto => "auto",
        RankMethodArg::Quad => "quad",
        RankMethodArg::Subspace => "subspace",
    };
    Ok(json!({
        "config": rank_config(input, method_str, ext_degree, max_r),
        "result": {
            "lower_bound": result.lower_bound,
            "upper_bound": result.upper_bound,
            "exact": result.exact(),
            "method": method_name(result.method),
            "ext_degree_used": result.ext_degree_used,
            "certificate": result.certificate.as_ref().map(certificate_json),
        },
    }))
}

fn rank_config(input: &PathBuf, method: &str, ext_degree: usize, max_r: usize) -> Value {
    json!({
        "command": "rank",
        "input": path_str(input),
        "method": method,
        "ext_degree": ext_degree,
        "max_r": max_r,
    })
}

fn run_gowers(
    input: &PathBuf,
    m: usize,
    algorithm: AlgorithmArg,
    budget: &Budget,
) -> polycoh::Result<Value> {
    let poly = load_poly(input)?;
    let phase = PhaseFunction::Carrier(poly);
    let (algo, name) = match algorithm {
        AlgorithmArg::Naive => (Algorithm::Naive, "naive"),
        AlgorithmArg::Derivative => (Algorithm::Derivative, "derivative"),
    };
    let result = gowers_norm(&phase, m, algo, budget)?;
    Ok(json!({
        "config": {
            "command": "gowers",
            "input": path_str(input),
            "m": m,
            "algorithm": name,
        },
        "result": {
            "m": result.m,
            "counts": result.counts.counts,
            "total": result.counts.total,
            "modulus": result.counts.modulus,
            "raw_power": result.raw_power(),
            "value": result.value,
        },
    }))
}

/// Table file: header `p=<prime> n=<vars> k=<torsion>`, then one CSV row per
/// point: n coordinates followed by the value mod p^k. Every point must
/// appear exactly once.
fn parse_table(text: &str) -> polycoh::Result<ValueTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty table file".into()))?;
    let mut p_val = None;
    let mut n_val = None;
    let mut k_val = None;
    for part in header.split_whitespace() {
        if let Some(v) = part.strip_prefix("p=") {
            p_val = v.parse::<u32>().ok();
        } else if let Some(v) = part.strip_prefix("n=") {
            n_val = v.parse::<usize>().ok();
        } else if let Some(v) = part.strip_prefix("k=") {
            k_val = v.parse::<u32>().ok();
        }
    }
    let (p_val, n, k) = match (p_val, n_val, k_val) {
        (Some(p), Some(n), Some(k)) => (p, n, k),
        _ => return Err(Error::Parse("table header needs p=, n=, k=".into())),
    };
    let p = PrimeModulus::new(p_val)?;
    let size = (p.get() as usize).pow(n as u32);
    let mut values = vec![None; size];
    for line in lines {
        let nums = line
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad table row {line:?}")))?;
        if nums.len() != n + 1 {
            return Err(Error::Parse(format!(
                "table row needs {} coordinates and a value",
                n
            )));
        }
        let point = FieldVector::new(p, nums[..n].to_vec());
        let slot = point.index();
        if values[slot].is_some() {
            return Err(Error::Parse(format!("duplicate table row {line:?}")));
        }
        values[slot] = Some(nums[n]);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Parse(format!("missing table point {i}"))))
        .collect::<polycoh::Result<Vec<_>>>()?;
    ValueTable::new(p, n, k, values)
}

fn run_delta_degree(table: &PathBuf, max_d: usize, budget: &Budget) -> polycoh::Result<Value> {
    let parsed = parse_table(&fs::read_to_string(table).map_err(io_error)?)?;
    let degree = delta_degree(&parsed, max_d, budget)?;
    Ok(json!({
        "config": { "command": "delta-degree", "table": path_str(table), "max_d": max_d },
        "result": match degree {
            Some(d) => json!({ "degree": d }),
            None => json!({ "degree": null, "note": format!("exceeds max_d = {max_d}") }),
        },
    }))
}

fn filtration_of(arg: FiltrationArg, degree: usize) -> FiltrationTag {
    FiltrationTag {
        kind: match arg {
            FiltrationArg::Ad => FiltrationKind::Homogeneous,
            FiltrationArg::Bd => FiltrationKind::Inhomogeneous,
        },
        degree,
    }
}

fn filtration_name(arg: FiltrationArg) -> &'static str {
    match arg {
        FiltrationArg::Ad => "Ad",
        FiltrationArg::Bd => "Bd",
    }
}

fn run_defect(
    cochain: &PathBuf,
    filtration: FiltrationArg,
    budget: &Budget,
) -> polycoh::Result<Value> {
    let a = load_cochain(cochain)?;
    let tag = filtration_of(filtration, a.max_value_degree());
    let mut oracle = RankOracle::new(2, budget.clone());
    let report = defect(&a, tag, &mut oracle)?;
    Ok(json!({
        "config": {
            "command": "defect",
            "cochain": path_str(cochain),
            "filtration": filtration_name(filtration),
        },
        "result": {
            "max_rank_upper": report.max_rank_upper,
            "max_rank_lower": report.max_rank_lower,
            "argmax": report.argmax.iter().map(|v| v.coords.clone()).collect::<Vec<_>>(),
            "histogram": report
                .histogram
                .iter()
                .map(|((lo, hi), count)| json!({ "lower": lo, "upper": hi, "pairs": count }))
                .collect::<Vec<_>>(),
        },
    }))
}

fn trilean_str(t: Trilean) -> &'static str {
    match t {
        Trilean::True => "true",
        Trilean::False => "false",
        Trilean::Indeterminate => "indeterminate",
    }
}

fn run_cocycle_check(
    cochain: &PathBuf,
    i: usize,
    filtration: FiltrationArg,
    budget: &Budget,
) -> polycoh::Result<Value> {
    let a = load_cochain(cochain)?;
    let tag = filtration_of(filtration, a.max_value_degree());
    let mut oracle = RankOracle::new(2, budget.clone());
    let verdict = is_approx_cocycle(&a, tag, i, &mut oracle)?;
    Ok(json!({
        "config": {
            "command": "cocycle-check",
            "cochain": path_str(cochain),
            "i": i,
            "filtration": filtration_name(filtration),
        },
        "result": { "approx_cocycle": trilean_str(verdict) },
    }))
}

fn correction_json(res: &CorrectionResult) -> Value {
    json!({
        "chi_images": res.chi.images.iter().map(write_poly).collect::<Vec<_>>(),
        "distance": res.distance,
        "method": match res.method {
            polycoh::corrector::CorrectionMethod::Exhaustive => "exhaustive",
            polycoh::corrector::CorrectionMethod::Greedy => "greedy",
            polycoh::corrector::CorrectionMethod::CyclicRank1 => "cyclic-rank1",
        },
        "optimal": res.optimal,
    })
}

fn run_correct(
    cochain: &PathBuf,
    method: CorrectMethodArg,
    seed: u64,
    degree: Option<usize>,
    iterations: usize,
    restarts: usize,
    budget: &Budget,
) -> polycoh::Result<Value> {
    let config = json!({
        "command": "correct",
        "cochain": path_str(cochain),
        "method": match method {
            CorrectMethodArg::Exhaustive => "exhaustive",
            CorrectMethodArg::Greedy => "greedy",
            CorrectMethodArg::Cyclic => "cyclic",
        },
        "seed": seed,
    });
    match method {
        CorrectMethodArg::Cyclic => {
            let text = fs::read_to_string(cochain).map_err(io_error)?;
            let file: MatrixCochainFile =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let p = PrimeModulus::new(file.p)?;
            let values = file
                .values
                .iter()
                .map(|flat| {
                    let rows = flat
                        .chunks(file.dim)
                        .map(|r| r.to_vec())
                        .collect::<Vec<_>>();
                    Matrix::from_rows(p, rows)
                })
                .collect::<polycoh::Result<Vec<_>>>()?;
            let a = MatrixCochain::new(p, file.n_max, file.dim, values)?;
            let res = cyclic_rank1_correct(&a)?;
            Ok(json!({
                "config": config,
                "result": {
                    "slope": matrix_rows(&res.slope),
                    "distance": res.distance,
                    "method": "cyclic-rank1",
                    "optimal": res.optimal,
                    "kernel_structure": res.kernel_structure,
                    "horizon": file.n_max,
                },
            }))
        }
        CorrectMethodArg::Exhaustive | CorrectMethodArg::Greedy => {
            let a = load_cochain(cochain)?;
            let d = degree.unwrap_or_else(|| a.max_value_degree());
            let mut oracle = RankOracle::new(2, budget.clone());
            let res = match method {
                CorrectMethodArg::Exhaustive => minimax_correct(&a, d, &mut oracle)?,
                _ => greedy_correct(&a, d, seed, iterations, restarts, &mut oracle)?,
            };
            Ok(json!({ "config": config, "result": correction_json(&res) }))
        }
    }
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<u32>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j)).collect())
        .collect()
}

fn run_synthesize(
    chi_path: &PathBuf,
    noise_rank: usize,
    model: NoiseModelArg,
    seed: u64,
    degree: Option<usize>,
    budget: &Budget,
) -> polycoh::Result<Value> {
    let text = fs::read_to_string(chi_path).map_err(io_error)?;
    let file: ChiFile = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let p = PrimeModulus::new(file.p)?;
    let group = GroupSpec::new(p, file.s);
    let images = file
        .images
        .iter()
        .map(|t| parse_poly(t).and_then(|q| q.extend_vars(file.nvars)))
        .collect::<polycoh::Result<Vec<_>>>()?;
    let d = degree.unwrap_or_else(|| images.iter().map(|q| q.degree()).max().unwrap_or(2));
    let chi = LinearMap::new(group, images)?;
    let (noise_model, model_name) = match model {
        NoiseModelArg::Constant => (NoiseModel::Constant, "constant"),
        NoiseModelArg::Iid => (NoiseModel::Iid, "iid"),
    };
    let mut oracle = RankOracle::new(2, budget.clone());
    let report = synthesize(&chi, d, noise_rank, noise_model, seed, &mut oracle)?;
    Ok(json!({
        "config": {
            "command": "synthesize",
            "chi": path_str(chi_path),
            "noise_rank": noise_rank,
            "model": model_name,
            "seed": seed,
            "degree": d,
        },
        "result": {
            "cochain": serde_json::from_str::<Value>(&report.cochain.to_json()).unwrap(),
            "defect_upper": report.defect.max_rank_upper,
            "defect_lower": report.defect.max_rank_lower,
        },
    }))
}

fn run_lift(
    input: &PathBuf,
    c: usize,
    degree: Option<usize>,
    budget: &Budget,
) -> polycoh::Result<Value> {
    let p_map = load_cochain(input)?;
    let d = degree.unwrap_or_else(|| p_map.max_value_degree());
    let mut oracle = RankOracle::new(2, budget.clone());
    let report = lift_correction(&p_map, d, c, &mut oracle)?;
    Ok(json!({
        "config": { "command": "lift", "input": path_str(input), "c": c, "degree": d },
        "result": {
            "chi_images": report.chi.images.iter().map(write_poly).collect::<Vec<_>>(),
            "level_bounds": report.level_bounds,
            "level_sizes": report.level_sizes,
            "horizon": report.horizon,
        },
    }))
}

fn parse_range(text: &str) -> polycoh::Result<std::ops::RangeInclusive<usize>> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("range {text:?} is not lo:hi")))?;
    let lo = lo
        .parse()
        .map_err(|_| Error::Parse(format!("bad range bound {lo:?}")))?;
    let hi = hi
        .parse()
        .map_err(|_| Error::Parse(format!("bad range bound {hi:?}")))?;
    Ok(lo..=hi)
}

fn run_experiment(cmd: &ExperimentCommand, budget: &Budget) -> polycoh::Result<Value> {
    match cmd {
        ExperimentCommand::MinimaxGrowth {
            p,
            d,
            n_range,
            s_range,
            defect_cap,
            out,
        } => {
            let prime = PrimeModulus::new(*p)?;
            let rows = minimax_growth_experiment(
                prime,
                *d,
                parse_range(n_range)?,
                parse_range(s_range)?,
                *defect_cap,
                budget,
            )?;
            let mut csv = String::from("p,d,n,s,defect,distance,method,optimal\n");
            for row in &rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    row.p, row.d, row.n, row.s, row.defect, row.distance, row.method, row.optimal
                ));
            }
            fs::write(out, &csv).map_err(io_error)?;
            Ok(json!({
                "config": {
                    "command": "experiment minimax-growth",
                    "p": p,
                    "d": d,
                    "n_range": n_range,
                    "s_range": s_range,
                    "defect_cap": defect_cap,
                    "out": path_str(out),
                },
                "result": {
                    "rows": rows
                        .iter()
                        .map(|r| json!({
                            "p": r.p, "d": r.d, "n": r.n, "s": r.s,
                            "defect": r.defect, "distance": r.distance,
                            "method": r.method, "optimal": r.optimal,
                        }))
                        .collect::<Vec<_>>(),
                },
            }))
        }
    }
}
