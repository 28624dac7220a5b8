//! Command-line front end: batch commands over demand distributions with
//! JSON/CSV artifacts. One command per process; artifacts are written
//! atomically (temp file + rename); every run echoes its fully-resolved
//! configuration for reproducibility.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use mrleq_core::comparative;
use mrleq_core::equilibrium::{
    self, empirical_poa, fundamentals, solve_wholesale_price, MarketConfig, SolveOptions,
};
use mrleq_core::oracle;
use mrleq_core::orders::{self, HrError, OrderKind};
use mrleq_core::reliability::{GridSpec, Property, Reliability, Strictness};
use mrleq_core::{Dist, DistSpec, Error as CoreError, PhiSpec};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "mrleq",
    about = "Wholesale-price equilibria from mean-residual-life fixed points",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputOpts {
    /// output file; stdout otherwise
    #[arg(long)]
    out: Option<PathBuf>,
    /// artifact format; csv applies to tabular outputs only
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the wholesale-price fixed point r* = m(r*)
    Solve {
        /// distribution spec: inline JSON or @file
        #[arg(long)]
        dist: String,
        /// relative solver tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// certificate/scan grid points
        #[arg(long, default_value_t = 2000)]
        grid_points: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Realized market fundamentals for one demand draw
    Fundamentals {
        /// wholesale price; solved from --dist when omitted
        #[arg(long)]
        r_star: Option<f64>,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Sample MRL/GMRL/hazard/GFR curves on a grid
    Profile {
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 2000)]
        grid_points: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Grid certificate for DMRL/DGMRL/IFR/IGFR
    CheckProperty {
        #[arg(long)]
        dist: String,
        /// one of dmrl, dgmrl, ifr, igfr
        #[arg(long)]
        property: String,
        /// require strict monotonicity evidence
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 2000)]
        grid_points: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Stochastic-order certificate between two distributions
    CheckOrder {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        dist2: String,
        /// one of st, hr, mrl, cx, disp, ew
        #[arg(long)]
        order: String,
        #[arg(long, default_value_t = 2000)]
        grid_points: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Brute-force verification: grid argmax, deviations, Monte Carlo
    Oracle {
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 4000)]
        grid_points: usize,
        /// Monte Carlo sample count (skipped when absent)
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Comparative-statics experiment sweeps
    Experiment {
        /// scale | convolution | closure | variability | normal-family | st-exploration
        #[arg(long)]
        name: String,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        dist2: Option<String>,
        /// scale factors for the scale experiment
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 1.5, 2.0, 5.0])]
        c_values: Vec<f64>,
        /// increasing map for the closure experiment, e.g. '{"phi":"power","k":2}'
        #[arg(long)]
        phi: Option<String>,
        /// mixture weight for the closure experiment
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// truncated-normal parameters for the normal-family experiment
        #[arg(long, default_value_t = 10.0)]
        mu1: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma1: f64,
        #[arg(long, default_value_t = 10.0)]
        mu2: f64,
        #[arg(long, default_value_t = 2.0)]
        sigma2: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Reproduce the stochastically-larger-market counterexample
    Counterexample {
        /// directory receiving curves.csv and report.json
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Price of anarchy 1 + 1/n, with an empirical check when --dist is given
    Poa {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        dist: Option<String>,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("MRLEQ_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let (code, kind) = classify(&e);
            let payload = json!({
                "schema_version": SCHEMA_VERSION,
                "error": { "kind": kind, "message": e.to_string() },
            });
            eprintln!("{}", serde_json::to_string_pretty(&payload).unwrap());
            code
        }
    }
}

fn classify(e: &CoreError) -> (ExitCode, &'static str) {
    match e {
        CoreError::Internal(_) => (ExitCode::from(1), "internal"),
        CoreError::SpecParse { .. } => (ExitCode::from(2), "spec_parse"),
        CoreError::ParamDomain(_) => (ExitCode::from(2), "param_domain"),
        CoreError::Domain(_) => (ExitCode::from(2), "domain"),
        CoreError::Unsupported(_) => (ExitCode::from(2), "unsupported"),
        CoreError::Resolution(_) => (ExitCode::from(2), "resolution"),
        CoreError::NoFixedPoint(_) => (ExitCode::from(2), "no_fixed_point"),
        CoreError::NoTransaction { .. } => (ExitCode::from(2), "no_transaction"),
        CoreError::InfiniteMoment(_) => (ExitCode::from(2), "infinite_moment"),
        CoreError::Contract(_) => (ExitCode::from(2), "contract"),
    }
}

/// Loads a distribution spec from inline JSON or `@path`.
fn load_spec(arg: &str) -> Result<DistSpec, CoreError> {
    let text = if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| CoreError::SpecParse {
            pointer: path.to_string(),
            message: format!("cannot read spec file: {e}"),
        })?
    } else {
        arg.to_string()
    };
    DistSpec::parse(&text)
}

fn build_dist(arg: &str) -> Result<(DistSpec, Dist), CoreError> {
    let spec = load_spec(arg)?;
    let dist = spec.build()?;
    Ok((spec, dist))
}

/// Atomic write: temp file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

/// Envelope printed to stdout and optionally written to --out.
fn emit<C: Serialize, R: Serialize>(
    command: &str,
    config: &C,
    result: &R,
    output: &OutputOpts,
    csv: Option<String>,
) -> Result<ExitCode, CoreError> {
    let envelope = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "result": result,
    });
    let body = match output.format {
        Format::Json => serde_json::to_string_pretty(&envelope).unwrap() + "\n",
        Format::Csv => csv.ok_or_else(|| {
            CoreError::Unsupported(format!("command `{command}` has no csv representation"))
        })?,
    };
    match &output.out {
        Some(path) => {
            write_atomic(path, &body).map_err(|e| {
                CoreError::Internal(format!("cannot write {}: {e}", path.display()))
            })?;
            println!(
                "{}",
                json!({"schema_version": SCHEMA_VERSION, "wrote": path})
            );
        }
        None => print!("{body}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn grid_of(points: usize) -> GridSpec {
    GridSpec {
        points,
        ..GridSpec::default()
    }
}

fn run(cmd: Command) -> Result<ExitCode, CoreError> {
    match cmd {
        Command::Solve {
            dist,
            tol,
            grid_points,
            output,
        } => {
            let (spec, d) = build_dist(&dist)?;
            let opts = SolveOptions {
                tol,
                max_iter: 200,
                grid: grid_of(grid_points),
            };
            let eq = solve_wholesale_price(&d, &opts)?;
            let config = json!({
                "dist": spec, "tol": tol, "grid_points": grid_points,
                "max_iter": 200,
            });
            emit("solve", &config, &eq, &output, None)
        }

        Command::Fundamentals {
            r_star,
            dist,
            alpha,
            n,
            output,
        } => {
            let (r_star, spec) = match (r_star, &dist) {
                (Some(r), _) => (r, dist.as_deref().map(load_spec).transpose()?),
                (None, Some(arg)) => {
                    let (spec, d) = build_dist(arg)?;
                    (equilibrium::solve(&d)?.r_star, Some(spec))
                }
                (None, None) => {
                    return Err(CoreError::ParamDomain(
                        "fundamentals needs --r-star or --dist".into(),
                    ))
                }
            };
            let out = fundamentals(r_star, alpha, n)?;
            let config = json!({
                "r_star": r_star, "alpha": alpha, "n": n, "dist": spec,
            });
            emit("fundamentals", &config, &out, &output, None)
        }

        Command::Profile {
            dist,
            grid_points,
            output,
        } => {
            let (spec, d) = build_dist(&dist)?;
            let rel = Reliability::new(&d)?;
            let prof = rel.profile(&grid_of(grid_points))?;
            let config = json!({"dist": spec, "grid_points": grid_points});
            let csv = prof.to_csv();
            emit("profile", &config, &prof, &output, Some(csv))
        }

        Command::CheckProperty {
            dist,
            property,
            strict,
            grid_points,
            output,
        } => {
            let (spec, d) = build_dist(&dist)?;
            let prop: Property = property.parse()?;
            let rel = Reliability::new(&d)?;
            let strictness = if strict {
                Strictness::Strict
            } else {
                Strictness::Weak
            };
            let verdict = rel.check_property(prop, &grid_of(grid_points), strictness)?;
            let config = json!({
                "dist": spec, "property": property, "strict": strict,
                "grid_points": grid_points,
            });
            emit("check-property", &config, &verdict, &output, None)
        }

        Command::CheckOrder {
            dist,
            dist2,
            order,
            grid_points,
            output,
        } => {
            let (spec1, d1) = build_dist(&dist)?;
            let (spec2, d2) = build_dist(&dist2)?;
            let kind: OrderKind = order.parse()?;
            let grid = grid_of(grid_points);
            let config = json!({
                "dist": spec1, "dist2": spec2, "order": order,
                "grid_points": grid_points,
            });
            let verdict = match kind {
                OrderKind::St => orders::check_st(&d1, &d2, &grid)?,
                OrderKind::Mrl => orders::check_mrl(&d1, &d2, &grid)?,
                OrderKind::Cx => orders::check_cx(&d1, &d2, &grid)?,
                OrderKind::Disp => orders::check_disp(&d1, &d2, 200)?,
                OrderKind::Ew => orders::check_ew(&d1, &d2, 500)?,
                OrderKind::Hr => match orders::check_hr(&d1, &d2, &grid) {
                    Ok(v) => v,
                    Err(HrError::DensityUnavailable { fallback }) => {
                        // report the ratio-only fallback, then exit 2
                        let envelope = json!({
                            "schema_version": SCHEMA_VERSION,
                            "command": "check-order",
                            "config": config,
                            "error": {
                                "kind": "unsupported",
                                "message": "density unavailable; survival-ratio fallback reported",
                            },
                            "fallback": fallback,
                        });
                        eprintln!("{}", serde_json::to_string_pretty(&envelope).unwrap());
                        return Ok(ExitCode::from(2));
                    }
                    Err(HrError::Other(e)) => return Err(e),
                },
            };
            emit("check-order", &config, &verdict, &output, None)
        }

        Command::Oracle {
            dist,
            n,
            grid_points,
            samples,
            seed,
            output,
        } => {
            let (spec, d) = build_dist(&dist)?;
            let (r_hat, mut report) = oracle::argmax_grid(&d, n, grid_points)?;
            if let Some(samples) = samples {
                report.mc_estimates =
                    Some(oracle::monte_carlo_profits(&d, r_hat, n, samples, seed)?);
            }
            // deviation audit at representative demand draws
            let mut worst = f64::NEG_INFINITY;
            for p in [0.25, 0.5, 0.75] {
                worst = worst.max(oracle::cournot_deviation_check(
                    d.quantile(p),
                    r_hat,
                    n,
                    2000,
                ));
            }
            report.deviation_max = Some(worst);
            let config = json!({
                "dist": spec, "n": n, "grid_points": grid_points,
                "samples": samples, "seed": seed,
            });
            let csv = report.curve_csv();
            emit("oracle", &config, &report, &output, Some(csv))
        }

        Command::Experiment {
            name,
            dist,
            dist2,
            c_values,
            phi,
            p,
            mu1,
            sigma1,
            mu2,
            sigma2,
            output,
        } => {
            let phi_spec = match &phi {
                Some(text) => {
                    serde_json::from_str::<PhiSpec>(text).map_err(|e| CoreError::SpecParse {
                        pointer: "--phi".into(),
                        message: e.to_string(),
                    })?
                }
                None => PhiSpec::Power { k: 2.0 },
            };
            let dist_or =
                |arg: &Option<String>, fallback: &str| -> Result<(DistSpec, Dist), CoreError> {
                    build_dist(arg.as_deref().unwrap_or(fallback))
                };
            let (report, config): (comparative::ExperimentReport, Value) = match name.as_str() {
                "scale" => {
                    let (spec, d) = dist_or(&dist, r#"{"kind":"uniform","a":0,"b":1}"#)?;
                    let rep = comparative::scale_experiment(&d, &c_values)?;
                    (rep, json!({"name": name, "dist": spec, "c_values": c_values}))
                }
                "convolution" => {
                    let (spec, d) = dist_or(&dist, r#"{"kind":"uniform","a":0,"b":1}"#)?;
                    let (spec_z, z) = dist_or(&dist2, r#"{"kind":"uniform","a":0,"b":1}"#)?;
                    let rep = comparative::convolution_experiment(&d, &z)?;
                    (rep, json!({"name": name, "dist": spec, "dist2": spec_z}))
                }
                "closure" => {
                    let (spec1, x1) = dist_or(&dist, r#"{"kind":"exponential","rate":2}"#)?;
                    let (spec2, x2) = dist_or(&dist2, r#"{"kind":"exponential","rate":1}"#)?;
                    let z = Dist::uniform(0.0, 1.0)?;
                    let rep = comparative::closure_experiments(&x1, &x2, &phi_spec, &z, p)?;
                    (
                        rep,
                        json!({
                            "name": name, "dist": spec1, "dist2": spec2,
                            "phi": phi_spec, "p": p,
                            "z": {"kind": "uniform", "a": 0.0, "b": 1.0},
                        }),
                    )
                }
                "variability" => {
                    let (spec1, x1) = dist_or(&dist, r#"{"kind":"uniform","a":0.25,"b":0.75}"#)?;
                    let (spec2, x2) = dist_or(&dist2, r#"{"kind":"uniform","a":0,"b":1}"#)?;
                    let rep = comparative::variability_experiments(&x1, &x2)?;
                    (rep, json!({"name": name, "dist": spec1, "dist2": spec2}))
                }
                "normal-family" => {
                    let rep = comparative::normal_family_experiment(mu1, sigma1, mu2, sigma2)?;
                    (
                        rep,
                        json!({
                            "name": name, "mu1": mu1, "sigma1": sigma1,
                            "mu2": mu2, "sigma2": sigma2,
                        }),
                    )
                }
                "st-exploration" => {
                    let corpus = default_corpus()?;
                    let rep = comparative::st_price_exploration(&corpus)?;
                    let names: Vec<String> = corpus.iter().map(|d| d.describe()).collect();
                    (rep, json!({"name": name, "corpus": names}))
                }
                other => {
                    return Err(CoreError::ParamDomain(format!(
                        "unknown experiment `{other}`"
                    )))
                }
            };
            let csv = experiment_csv(&report);
            let code = emit("experiment", &config, &report, &output, Some(csv))?;
            if report.summary.fail > 0 {
                return Ok(ExitCode::from(3));
            }
            Ok(code)
        }

        Command::Counterexample { out } => {
            let (report, curves) = comparative::counterexample_reproduction()?;
            let dir = out.unwrap_or_else(|| PathBuf::from("."));
            let report_json = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "counterexample",
                "config": {
                    "f": {"kind": "sinusoid", "omega": std::f64::consts::PI, "kappa": 0.8, "phi": 1.2},
                    "g": {"kind": "exponential", "rate": 0.9},
                },
                "result": report,
                "fixed_points": {"r_star_f": curves.r_star_f, "r_star_g": curves.r_star_g},
            });
            let report_text = serde_json::to_string_pretty(&report_json).unwrap() + "\n";
            write_atomic(&dir.join("curves.csv"), &curves.to_csv())
                .map_err(|e| CoreError::Internal(format!("cannot write curves.csv: {e}")))?;
            write_atomic(&dir.join("report.json"), &report_text)
                .map_err(|e| CoreError::Internal(format!("cannot write report.json: {e}")))?;
            print!("{report_text}");
            if report.summary.fail > 0 {
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Poa { n, dist, output } => {
            let exact = equilibrium::poa(n)?;
            let mut result = json!({"poa": exact});
            let mut config = json!({"n": n});
            if let Some(arg) = &dist {
                let (spec, d) = build_dist(arg)?;
                let cfg = MarketConfig::new(n, d.clone())?;
                let eq = equilibrium::solve(&d)?;
                let grid: Vec<f64> = (1..=6)
                    .map(|k| eq.r_star * (1.0 + 10f64.powi(-k)))
                    .collect();
                let emp = empirical_poa(&cfg, &grid)?;
                result["empirical_poa"] = json!(emp);
                result["r_star"] = json!(eq.r_star);
                config["dist"] = serde_json::to_value(&spec).unwrap();
                config["alpha_grid"] = json!(grid);
            }
            emit("poa", &config, &result, &output, None)
        }
    }
}

/// Corpus for the exploratory sweep.
fn default_corpus() -> Result<Vec<Dist>, CoreError> {
    Ok(vec![
        Dist::exponential(2.0)?,
        Dist::exponential(1.0)?,
        Dist::exponential(0.9)?,
        Dist::uniform(0.0, 1.0)?,
        Dist::uniform(0.0, 2.0)?,
        Dist::truncated_normal(2.0, 1.0)?,
        Dist::mixture(&Dist::exponential(1.0)?, &Dist::exponential(2.0)?, 0.5)?,
    ])
}

/// Case table as CSV, with the standard fixed-point observations as columns.
fn experiment_csv(report: &comparative::ExperimentReport) -> String {
    let mut out = String::from("case,status,inputs,predicted,r_star_low,r_star_high,reason\n");
    let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
    let observed = |c: &comparative::CaseOutcome, key: &str| {
        c.observed
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| format!("{v:.17e}"))
            .unwrap_or_default()
    };
    for c in &report.cases {
        out.push_str(&format!(
            "{},{:?},{},{},{},{},{}\n",
            quote(&c.id),
            c.status,
            quote(&c.inputs),
            quote(&c.predicted),
            observed(c, "r_star_low"),
            observed(c, "r_star_high"),
            quote(c.reason.as_deref().unwrap_or("")),
        ));
    }
    out
}
