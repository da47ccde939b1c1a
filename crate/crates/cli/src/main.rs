//! `qdlab`: run witness constructions, table audits, bound tables and
//! optimizer experiments, emitting JSON or CSV.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use qdlab::lp_reps::{bound_table, haagerup_check, BoundRow, Exponent};
use qdlab::output::{format_float, to_csv, to_json};
use qdlab::pvv::{pvv_record, pvv_sweep, PvvParams, PvvRecord};
use qdlab::qdmod::{
    berg_taper_candidate, free_generators, optimize_projection, pvv_q_candidate, random_candidate,
    shift_obstruction_demo, Ambient, Generator, OptimizerConfig, OptimizerReport, ProjectionCandidate,
};
use qdlab::tables::audit::{audit_via, check_params, Route, SOUNDNESS_TOL};
use qdlab::tables::TablePair;

mod grid;

/// Tolerance for the two-path and `a`/`b` symmetry checks.
const AGREEMENT_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Compute(String),
    #[error("cannot write output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    fn validation(e: impl ToString) -> Self {
        CliError::Validation(e.to_string())
    }

    fn compute(e: impl ToString) -> Self {
        CliError::Compute(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Compute(_) | CliError::Output(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qdlab", version, about = "Quasidiagonality witnesses on free groups")]
struct Cli {
    /// Write results to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Exit with status 3 if any reported check is violated.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Tables {
    #[value(name = "12")]
    Lambda,
    #[value(name = "34")]
    LambdaInverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Direct,
    Conjugation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    /// Bilateral shift on a window of ℤ.
    Shift,
    /// λ_a, λ_b on F_2.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Init {
    /// The two-point taper (shift) or the twisted window projection Q (free).
    Witness,
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Commutator norms and eigenvalue checks for the twisted window projection.
    QdWitness {
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "R")]
        r: usize,
    },
    /// Audit the symbolic inner-product tables against brute force.
    TableAudit {
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "R")]
        r: usize,
        #[arg(long, value_enum, default_value = "12")]
        tables: Tables,
        #[arg(long, value_enum, default_value = "direct")]
        route: RouteArg,
        /// Judge the tables as printed, without the registered errata.
        #[arg(long)]
        printed: bool,
    },
    /// Quasidiagonality and cb-distance upper bounds over a p grid.
    PsBounds {
        #[arg(long, default_value_t = 2)]
        d: u16,
        /// `start:stop:step` (inclusive) or a comma list; `inf` allowed in lists.
        #[arg(long = "p-grid", default_value = "2:32:1")]
        p_grid: String,
        /// Comma list of q values.
        #[arg(long, default_value = "inf")]
        q: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Smallest eigenvalue of the Gram matrix of r^{|s⁻¹t|} over a ball.
    HaagerupCheck {
        #[arg(long, default_value_t = 2)]
        d: u16,
        #[arg(long = "R", default_value_t = 3)]
        r: usize,
        #[arg(long = "r-grid", default_value = "0.1:0.9:0.1")]
        r_grid: String,
    },
    /// Random projections against the truncated unilateral shift.
    ShiftDemo {
        #[arg(long, default_value_t = 64)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long = "rank-max", default_value_t = 20)]
        rank_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Gradient search for projections with smaller commutators.
    Optimize {
        #[arg(long, value_enum, default_value = "shift")]
        model: Model,
        /// Taper length for the shift model.
        #[arg(long = "K", default_value_t = 25)]
        k: usize,
        /// Integer window for the shift model (default 4K).
        #[arg(long)]
        window: Option<usize>,
        #[arg(long = "N", default_value_t = 12)]
        n: usize,
        #[arg(long = "R", default_value_t = 1)]
        r: usize,
        #[arg(long, value_enum, default_value = "witness")]
        init: Init,
        /// Rank of a random start (default: the witness rank).
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-iterations", default_value_t = OptimizerConfig::default().max_iterations)]
        max_iterations: usize,
        #[arg(long, default_value_t = OptimizerConfig::default().temperature)]
        temperature: f64,
    },
    /// qd-witness over a grid of N, reported in increasing N.
    Sweep {
        /// `start:stop:step` (inclusive) or a comma list.
        #[arg(long = "N-grid")]
        n_grid: String,
        #[arg(long = "R", default_value_t = 1)]
        r: usize,
    },
}

/// Text to emit plus any violated checks.
struct Outcome {
    text: String,
    violations: Vec<String>,
}

fn record_violations(rec: &PvvRecord) -> Vec<String> {
    let mut v = Vec::new();
    let tag = format!("N={} R={}", rec.n, rec.r);
    for (name, x) in [("norm_comm_a", rec.norm_comm_a), ("norm_comm_b", rec.norm_comm_b)] {
        if !(x < 1.0) {
            v.push(format!("{tag}: {name} = {} is not < 1", format_float(x)));
        }
    }
    if !((rec.norm_comm_a - rec.norm_comm_b).abs() <= AGREEMENT_TOL) {
        v.push(format!("{tag}: norm_comm_a and norm_comm_b differ"));
    }
    if !(rec.path_discrepancy <= AGREEMENT_TOL) {
        v.push(format!("{tag}: computation paths differ by {}", format_float(rec.path_discrepancy)));
    }
    v
}

fn json<T: serde::Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    to_json(value).map_err(CliError::compute)
}

fn pvv_params(n: usize, r: usize) -> Result<PvvParams, CliError> {
    PvvParams::new(n, r).map_err(CliError::validation)
}

fn bounds_csv(rows: &[BoundRow]) -> String {
    to_csv(
        &["d", "p", "q", "qd_upper", "cb_upper"],
        rows.iter().map(|r| {
            vec![
                r.d.to_string(),
                exponent_cell(r.p),
                exponent_cell(r.q),
                format_float(r.qd_upper),
                format_float(r.cb_upper),
            ]
        }),
    )
}

fn exponent_cell(p: Exponent) -> String {
    match p {
        Exponent::Finite(x) => format_float(x),
        Exponent::Infinity => "inf".into(),
    }
}

fn bound_violations(rows: &[BoundRow]) -> Vec<String> {
    let mut v = Vec::new();
    for w in rows.windows(2) {
        if w[0].q == w[1].q && w[1].p > w[0].p && !(w[1].qd_upper < w[0].qd_upper) {
            v.push(format!("qd_upper not strictly decreasing at p = {}", w[1].p));
        }
    }
    for r in rows {
        if !(r.cb_upper >= 1.0) || !(r.qd_upper >= 0.0) {
            v.push(format!("bound out of range at p = {}, q = {}", r.p, r.q));
        }
    }
    v
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::QdWitness { n, r } => {
            let params = pvv_params(*n, *r)?;
            let rec = pvv_record::<f64>(&params).map_err(CliError::compute)?;
            Ok(Outcome {
                violations: record_violations(&rec),
                text: json(&rec)?,
            })
        }
        Command::TableAudit {
            n,
            r,
            tables,
            route,
            printed,
        } => {
            let params = pvv_params(*n, *r)?;
            check_params(&params).map_err(CliError::validation)?;
            let pair = match tables {
                Tables::Lambda => TablePair::Lambda,
                Tables::LambdaInverse => TablePair::LambdaInverse,
            };
            let route = match route {
                RouteArg::Direct => Route::Direct,
                RouteArg::Conjugation => Route::Conjugation,
            };
            let report = audit_via(&params, pair, route).map_err(CliError::compute)?;
            let discrepancy = if *printed {
                report.max_abs_discrepancy_printed
            } else {
                report.max_abs_discrepancy
            };
            let violations = if report.passes() && discrepancy <= SOUNDNESS_TOL {
                Vec::new()
            } else {
                vec![format!(
                    "audit failed: discrepancy {}, {} missing, {} gaps, {} overlaps",
                    format_float(discrepancy),
                    report.missing_nonzero.len(),
                    report.coverage_gaps.len(),
                    report.overlaps.len()
                )]
            };
            Ok(Outcome {
                text: json(&report)?,
                violations,
            })
        }
        Command::PsBounds { d, p_grid, q, format } => {
            let ps = grid::exponents(p_grid).map_err(CliError::Validation)?;
            let qs = grid::exponents(q).map_err(CliError::Validation)?;
            let rows = bound_table(*d, &ps, &qs).map_err(CliError::validation)?;
            let text = match format {
                Format::Csv => bounds_csv(&rows),
                Format::Json => json(&rows)?,
            };
            Ok(Outcome {
                violations: bound_violations(&rows),
                text,
            })
        }
        Command::HaagerupCheck { d, r, r_grid } => {
            let rs = grid::reals(r_grid).map_err(CliError::Validation)?;
            if let Some(bad) = rs.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
                return Err(CliError::Validation(format!("r must lie in (0, 1) (got {bad})")));
            }
            qdlab::FreeGroup::new(*d).map_err(CliError::validation)?;
            let rows = haagerup_check(&rs, *r, *d).map_err(CliError::compute)?;
            let violations = rows
                .iter()
                .filter(|c| !c.psd)
                .map(|c| format!("r = {}: min eigenvalue {}", c.r, format_float(c.min_eigenvalue)))
                .collect();
            Ok(Outcome {
                text: json(&rows)?,
                violations,
            })
        }
        Command::ShiftDemo {
            dim,
            trials,
            rank_max,
            seed,
        } => {
            if *rank_max == 0 || *dim < 3 * rank_max {
                return Err(CliError::Validation(format!(
                    "need rank-max ≥ 1 and dim ≥ 3·rank-max (got dim {dim}, rank-max {rank_max})"
                )));
            }
            let report = shift_obstruction_demo(*dim, *trials, *rank_max, *seed).map_err(CliError::compute)?;
            let mut violations = Vec::new();
            if !report.rank_identities_hold {
                violations.push("rank identities fail in some trial".to_string());
            }
            if !report.norm_bound_holds {
                violations.push(format!(
                    "min commutator norm {} is below 1",
                    format_float(report.min_commutator_norm)
                ));
            }
            Ok(Outcome {
                text: json(&report)?,
                violations,
            })
        }
        Command::Optimize {
            model,
            k,
            window,
            n,
            r,
            init,
            rank,
            seed,
            max_iterations,
            temperature,
        } => {
            let config = OptimizerConfig {
                max_iterations: *max_iterations,
                temperature: *temperature,
                ..OptimizerConfig::default()
            };
            if !(config.temperature > 0.0) {
                return Err(CliError::Validation("temperature must be positive".into()));
            }
            let (generators, witness): (Vec<Generator>, ProjectionCandidate<f64>) = match model {
                Model::Shift => {
                    let window = window.unwrap_or(4 * k);
                    let gens = vec![Generator::Shift(1)];
                    let start = match init {
                        Init::Witness => berg_taper_candidate(*k, window).map_err(CliError::validation)?,
                        Init::Random => random_candidate(
                            Ambient::Integers {
                                start: -((window / 2) as i64),
                                len: window,
                            },
                            &gens,
                            rank.unwrap_or(*k),
                            *seed,
                        )
                        .map_err(CliError::validation)?,
                    };
                    (gens, start)
                }
                Model::Free => {
                    let params = pvv_params(*n, *r)?;
                    let q = pvv_q_candidate(&params).map_err(CliError::compute)?;
                    let start = match init {
                        Init::Witness => q,
                        Init::Random => {
                            let rank = rank.unwrap_or(q.rank());
                            random_candidate(q.ambient, &free_generators(), rank, *seed)
                                .map_err(CliError::validation)?
                        }
                    };
                    (free_generators(), start)
                }
            };
            let outcome = optimize_projection(&generators, &witness, &config).map_err(CliError::compute)?;
            let seed = (*init == Init::Random).then_some(*seed);
            let report = OptimizerReport::new(&outcome, seed, &config);
            let violations = if report.value <= report.baseline_value + 1e-12 {
                Vec::new()
            } else {
                vec!["optimized value exceeds the starting value".to_string()]
            };
            Ok(Outcome {
                text: json(&report)?,
                violations,
            })
        }
        Command::Sweep { n_grid, r } => {
            let mut ns = grid::naturals(n_grid).map_err(CliError::Validation)?;
            ns.sort_unstable();
            ns.dedup();
            let grid = ns
                .into_iter()
                .map(|n| pvv_params(n, *r))
                .collect::<Result<Vec<_>, _>>()?;
            let records = pvv_sweep::<f64>(&grid).map_err(CliError::compute)?;
            Ok(Outcome {
                violations: records.iter().flat_map(record_violations).collect(),
                text: json(&records)?,
            })
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("QDLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|t| *t > 0)
        .ok_or_else(|| CliError::Validation(format!("QDLAB_THREADS must be a positive integer (got {value:?})")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(CliError::compute)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| {
        configure_threads()?;
        // Open the destination before computing so an unwritable path fails fast.
        let mut sink: Box<dyn Write> = match &cli.output {
            Some(path) => Box::new(
                File::create(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?,
            ),
            None => Box::new(io::stdout().lock()),
        };
        let outcome = run(&cli)?;
        sink.write_all(outcome.text.as_bytes())?;
        sink.flush()?;
        Ok::<_, CliError>(outcome.violations)
    })();
    match result {
        Ok(violations) => {
            for v in &violations {
                eprintln!("check violated: {v}");
            }
            if cli.strict && !violations.is_empty() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
