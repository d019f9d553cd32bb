mod args;
mod config;
mod error;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use clwe_core::harness::{
    advantage_report, hoeffding_distinguisher, AdvantageConfig, DistinguisherConfig, GridPoint, HoeffdingDistinguisher,
    Learner, LearnerKind, LearnerSpec, Scale, Verdict, VerifyPlan,
};
use clwe_core::instance::{
    generate_mixture_unchecked, generate_null, read_dataset, read_manifest, read_secret, write_dataset, write_secret,
    Dataset, EmbeddingSpec,
};
use clwe_core::oracle::{build_intervals, build_oracle, ltf_weights, oracle_error_bound, oracle_error_exact, OraclePtf};

use args::{Cli, Command, DistinguishArgs, GenerateArgs, LearnerArg, ModeArg, OracleArgs, VerifyArgs};
use config::Resolved;
use error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Param("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Param(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Generate(a) => generate(a, cli.threads),
        Command::Oracle(a) => oracle(a, cli.threads),
        Command::Verify(a) => verify(a, cli.threads),
        Command::Distinguish(a) => distinguish(a, cli.threads),
    }
}

fn print_config(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("config serializes"));
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("value serializes");
    std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

fn generate(a: GenerateArgs, threads: Option<usize>) -> Result<(), CliError> {
    let res = Resolved::from_args(&a.params)?;
    print_config(&json!({
        "command": "generate",
        "params": res,
        "mode": format!("{:?}", a.mode).to_lowercase(),
        "m": a.m,
        "out": a.out,
        "secret": a.secret,
        "embed_deg": a.embed_deg,
        "unsafe": a.allow_overlap,
        "threads": threads,
    }));
    let (ds, w) = match a.mode {
        ModeArg::Planted => {
            let w = res.secret()?;
            let p = res.mixture(w.clone(), a.allow_overlap)?;
            (generate_mixture_unchecked(&p, a.m, res.seed)?, Some(w))
        }
        ModeArg::Null => {
            if a.secret.is_some() {
                return Err(CliError::Param("a null dataset has no secret to write".into()));
            }
            (generate_null(res.n, a.m, res.seed)?, None)
        }
    };
    let ds = match a.embed_deg {
        Some(deg) => ds.embedded(&EmbeddingSpec::new(res.n, deg, None)?)?,
        None => ds,
    };
    write_dataset(&ds, &a.out)?;
    println!("wrote {} samples of length {} to {}", ds.len(), ds.n(), a.out.display());
    println!("file sha256: {}", sha256_file(&a.out)?);
    if let Some(d) = &ds.manifest.secret_digest {
        println!("secret digest: {d}");
    }
    if let (Some(path), Some(w)) = (&a.secret, &w) {
        write_secret(&ds.manifest, w, path)?;
        println!("wrote secret sidecar to {}", path.display());
    }
    Ok(())
}

/// Parameters and secret for commands that act on a planted instance:
/// from a dataset and its sidecar when given, else from the flags.
fn planted_source(
    params: &args::ParamArgs,
    dataset: Option<&Path>,
    secret: Option<&Path>,
) -> Result<(Resolved, Vec<f64>), CliError> {
    let Some(ds_path) = dataset else {
        let res = Resolved::from_args(params)?;
        let w = res.secret()?;
        return Ok((res, w));
    };
    let manifest = read_manifest(ds_path)?;
    let res = Resolved::from_manifest(&manifest)?;
    let Some(sec_path) = secret else {
        return Err(CliError::Missing(format!("{} is blind: pass its secret sidecar with --secret", ds_path.display())));
    };
    let (_, w) = read_secret(sec_path)?;
    let digest = clwe_core::instance::secret_digest(&w);
    if manifest.secret_digest.as_deref() != Some(digest.as_str()) {
        return Err(CliError::Param(format!("{} is not the secret of {}", sec_path.display(), ds_path.display())));
    }
    Ok((res, w))
}

fn planted_oracle(res: &Resolved, w: Vec<f64>, d: u32) -> Result<(OraclePtf, f64, f64), CliError> {
    let p = res.mixture(w.clone(), false)?;
    let o = build_oracle(&build_intervals(&p)?, w, d)?;
    Ok((o, oracle_error_exact(&p, d)?, oracle_error_bound(&p, d)))
}

#[derive(Serialize)]
struct LtfExport<'a> {
    format_version: u16,
    embedding: &'a EmbeddingSpec,
    bias_index: usize,
    weights: Vec<f64>,
}

fn oracle(a: OracleArgs, threads: Option<usize>) -> Result<(), CliError> {
    let (res, w) = planted_source(&a.params, a.dataset.as_deref(), a.secret.as_deref())?;
    let deg = a.deg.unwrap_or(4 * a.d as usize);
    print_config(&json!({
        "command": "oracle",
        "params": res,
        "d": a.d,
        "dataset": a.dataset,
        "out": a.out,
        "export_ltf": a.export_ltf,
        "deg": deg,
        "threads": threads,
    }));
    let (o, exact, bound) = planted_oracle(&res, w, a.d)?;
    println!("degree {} PTF over n = {}", o.degree(), res.n);
    println!("exact misclassification probability: {exact:.10e}");
    println!("tail bound exp(-pi d^2/(beta^2 + gamma^2)): {bound:.10e}");
    if let Some(path) = &a.out {
        std::fs::write(path, o.to_json() + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        println!("wrote oracle to {}", path.display());
    }
    if let Some(path) = &a.export_ltf {
        let spec = EmbeddingSpec::new(res.n, deg, None)?;
        let weights = ltf_weights(&o, &spec)?;
        write_json(path, &LtfExport { format_version: 1, embedding: &spec, bias_index: 0, weights })?;
        println!("wrote {} LTF weights to {}", spec.dim, path.display());
    }
    Ok(())
}

fn parse_grid(s: &str) -> Result<GridPoint, CliError> {
    let bad = || CliError::Param(format!("grid point {s:?} is not GAMMA:OUT_BETA"));
    let (g, b) = s.split_once(':').ok_or_else(bad)?;
    let gamma: f64 = g.trim().parse().map_err(|_| bad())?;
    let out_beta: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(gamma > 0.0 && out_beta > 0.0 && gamma.is_finite() && out_beta.is_finite()) {
        return Err(bad());
    }
    Ok(GridPoint { gamma, out_beta })
}

fn verify(a: VerifyArgs, threads: Option<usize>) -> Result<(), CliError> {
    let scale = if a.quick { Scale::Quick } else { Scale::Full };
    let mut plan = VerifyPlan::new(scale, a.seed);
    plan.criteria = a.only.clone();
    for g in &a.grid {
        plan.grid.push(parse_grid(g)?);
    }
    if let Some(bad) = plan.criteria.iter().find(|&&c| !(1..=10).contains(&c)) {
        return Err(CliError::Param(format!("no check group {bad}; groups are 1 to 10")));
    }
    print_config(&json!({ "command": "verify", "plan": plan, "report": a.report, "threads": threads }));
    let report = clwe_core::harness::verify_all(&plan);
    for c in &report.criteria {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!("{:>2} {status} {} ({} checks, {:.1}s / {:.0}s)", c.id, c.title, c.checks, c.runtime_s, c.runtime_limit_s);
    }
    for k in report.failures() {
        let measured = k.measured.map_or_else(|| "none".to_string(), |v| format!("{v:.6e}"));
        println!("   failed {}: measured {measured}, claimed {}; {}", k.name, k.claimed, k.detail);
    }
    if let Some(path) = &a.report {
        std::fs::write(path, report.to_json() + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        println!("wrote report to {}", path.display());
    }
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Check(format!("{} of {} checks failed", report.failures().count(), report.checks.len())))
    }
}

fn learner_for(a: &DistinguishArgs, oracle: Option<OraclePtf>) -> Result<Learner, CliError> {
    let kind = match a.learner {
        LearnerArg::Oracle => {
            let o = oracle.ok_or_else(|| CliError::Param("the oracle learner needs a planted instance".into()))?;
            return Ok(Learner::Oracle(Box::new(o)));
        }
        LearnerArg::Perceptron => LearnerKind::Perceptron,
        LearnerArg::AveragedPerceptron => LearnerKind::AveragedPerceptron,
        LearnerArg::LogisticGd => LearnerKind::LogisticGd,
        LearnerArg::PolyKernelPerceptron => LearnerKind::PolyKernelPerceptron { degree: a.deg },
    };
    Ok(Learner::Baseline(LearnerSpec::new(kind, a.params.seed)))
}

fn distinguish(a: DistinguishArgs, threads: Option<usize>) -> Result<(), CliError> {
    let uses_oracle = a.learner == LearnerArg::Oracle;
    let dataset = match &a.dataset {
        Some(path) => Some(read_dataset(path)?),
        None => None,
    };
    let source = match (&a.dataset, uses_oracle) {
        (None, _) => Some(planted_source(&a.params, None, None)?),
        (Some(path), true) => Some(planted_source(&a.params, Some(path), a.secret.as_deref())?),
        (Some(_), false) => None,
    };
    if let Some(ds) = &dataset {
        if uses_oracle && ds.manifest.embedding.is_some() {
            return Err(CliError::Param("the oracle reads raw vectors; this dataset is embedded".into()));
        }
    }
    let (oracle, mixture, res) = match &source {
        Some((res, w)) => {
            let (o, _, _) = planted_oracle(res, w.clone(), a.d)?;
            (Some(o), Some(res.mixture(w.clone(), false)?), Some(res.clone()))
        }
        None => (None, None, None),
    };
    let params = match (&res, &dataset) {
        (Some(r), _) => serde_json::to_value(r).expect("params serialize"),
        (None, Some(ds)) => serde_json::to_value(&ds.manifest).expect("manifest serializes"),
        (None, None) => serde_json::Value::Null,
    };
    let config = json!({
        "command": "distinguish",
        "params": params,
        "d": a.d,
        "m": a.m,
        "tau": a.tau,
        "learner": format!("{:?}", a.learner),
        "deg": a.deg,
        "mode": format!("{:?}", a.mode).to_lowercase(),
        "dataset": a.dataset,
        "trials": a.trials,
        "seed": a.params.seed,
        "threads": threads,
    });
    print_config(&config);
    let cfg = DistinguisherConfig::new(a.tau, learner_for(&a, oracle)?)?;

    if let Some(trials) = a.trials {
        let p = mixture.ok_or_else(|| CliError::Param("--trials generates planted data; it cannot use --dataset".into()))?;
        if dataset.is_some() {
            return Err(CliError::Param("--trials generates its own data; drop --dataset".into()));
        }
        let r = advantage_report(&HoeffdingDistinguisher(cfg), &p, &AdvantageConfig { trials, m: a.m, seed: a.params.seed })?;
        println!("distinguisher: {}", r.distinguisher);
        println!("planted called null: {} / {trials}", r.planted_said_null);
        println!("null called null: {} / {trials}", r.null_said_null);
        println!("advantage {:.4}, 95% interval [{:.4}, {:.4}]", r.advantage, r.interval.0, r.interval.1);
        if let Some(path) = &a.report {
            write_json(path, &json!({ "config": config, "advantage": r }))?;
        }
        return Ok(());
    }

    let ds: Dataset = match dataset {
        Some(ds) => ds,
        None => match (a.mode, &mixture) {
            (ModeArg::Planted, Some(p)) => clwe_core::instance::generate_mixture(p, a.m, a.params.seed)?,
            _ => generate_null(a.params.n, a.m, a.params.seed)?,
        },
    };
    let out = hoeffding_distinguisher(&cfg, &ds)?;
    let verdict = match out.verdict {
        Verdict::Planted => "planted",
        Verdict::Null => "null",
    };
    println!("verdict: {verdict}");
    println!(
        "held-out error {:.6} ({} of {}), margin |err - 1/2| = {:.6}, threshold tau/2 = {:.4}",
        out.error.value, out.error.errors, out.error.m, out.margin, out.threshold
    );
    println!("Hoeffding failure bound 2·exp(-(2m/9)·tau²) = {:.3e} at m = {}", out.failure_bound, out.m_total);
    if let Some(w) = &out.warning {
        println!("warning: {w}");
    }
    if let Some(path) = &a.report {
        write_json(path, &json!({ "config": config, "outcome": out }))?;
    }
    Ok(())
}
