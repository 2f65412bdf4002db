//! Argument parsing and command dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{
    FileConfig, RankCount, RunConfig, DEFAULT_FIGURE2_COUNT, DEFAULT_FIGURE3_COUNT,
    DEFAULT_GRID_POINTS,
};
use crate::error::CliError;
use crate::experiments::{figure_records, lambda_sweep, mcmq_curve, with_threads};
use crate::format::read_channel;
use crate::output::{write_curve_csv, write_figure_csv, write_file, write_lambda_csv};
use crate::report::analyze;

const FIGURE_COLUMNS: &str = "\
CSV columns:
  index      sample number; sample i draws from random stream (seed, i)
  seed       base seed of the run
  rank       rank r of the damping matrix
  v_b        Bloch volume: full simplex when r^2 = N, largest r^2-point
             sub-simplex when r^2 < N, full volume (not a certificate) when r^2 > N
  purity     purity of the normalized Choi state, (1/N^2) sum |D_mn|^2
  q_a        quantumness of assistance, an upper bound (1 - e_a_lower / log2 N)
  e_a_lower  best entanglement of assistance found, in bits (a lower bound)
  converged  true when the two best optimizer restarts agree";

const CURVE_COLUMNS: &str = "\
CSV columns:
  alpha   cone angle of the maximal-quantumness channel, in [0, arccos(-1/3)]
  v_b     Bloch volume
  purity  purity of the normalized Choi state
  q_a     quantumness of assistance (upper bound)";

const LAMBDA_COLUMNS: &str = "\
CSV columns:
  lambda  mixing weight of (1 - lambda) D_tetra + lambda D_cd, in [0, 1]
  v_b     Bloch volume (full volume when r^2 > N)
  purity  purity of the normalized Choi state
  q_a     quantumness of assistance (upper bound)";

const ANALYZE_FIELDS: &str = "\
JSON fields: n, rank, v_b, v_b_kind (full | sub_matrix | informational),
subvolume_indices, purity, q_a, q_a_bound, e_a_lower, e_a_bound,
certified_non_ru, volume_tolerance, converged, restart_values,
decomposition_len.

Exit codes: 0 success, 1 I/O or configuration, 2 parse error,
3 invalid channel, 4 numerical failure.";

#[derive(Debug, Parser)]
#[command(
    name = "dephasing",
    version,
    about = "Bloch volume, extremality and quantumness of assistance for phase-damping channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report the metrics of one channel read from a JSON file.
    #[command(after_help = ANALYZE_FIELDS)]
    Analyze {
        /// Channel file: {"n": N, "d": [[[re, im], ...], ...]}.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long, value_name = "FILE")]
        json_out: Option<PathBuf>,
        /// Reject matrices with eigenvalues below -1e-12 instead of -1e-10.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        shared: SharedArgs,
    },
    /// Random rank-2 channels on N = 4, plus the reference curve.
    #[command(after_help = FIGURE_COLUMNS)]
    Figure2 {
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
        /// Reference curve file; defaults to <out stem>_mcmq.csv.
        #[arg(long, value_name = "CSV")]
        curve_out: Option<PathBuf>,
        /// Grid points of the reference curve.
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        shared: SharedArgs,
    },
    /// Random channels of rank 2, 3 and 4 on N = 4, plus the reference curve.
    #[command(after_help = FIGURE_COLUMNS)]
    Figure3 {
        #[arg(long)]
        count2: Option<usize>,
        #[arg(long)]
        count3: Option<usize>,
        #[arg(long)]
        count4: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
        /// Reference curve file; defaults to <out stem>_mcmq.csv.
        #[arg(long, value_name = "CSV")]
        curve_out: Option<PathBuf>,
        /// Grid points of the reference curve.
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        shared: SharedArgs,
    },
    /// The one-parameter family of maximal-quantumness channels.
    #[command(after_help = CURVE_COLUMNS)]
    McmqCurve {
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
        #[command(flatten)]
        shared: SharedArgs,
    },
    /// Mixtures of the tetrahedral and completely decohering channels.
    #[command(after_help = LAMBDA_COLUMNS)]
    LambdaSweep {
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
        #[command(flatten)]
        shared: SharedArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct SharedArgs {
    /// Optimizer restarts per channel [default: 20].
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Objective tolerance of the optimizer, in bits [default: 1e-7].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Length of the pure-state decompositions [default: min(rank^2, 16)].
    #[arg(long)]
    pub k: Option<usize>,
    /// Iteration cap per restart [default: 2000].
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Worker threads; 0 uses all cores [default: 0].
    #[arg(long)]
    pub threads: Option<usize>,
    /// Volume threshold of the extremality certificate [default: 1e-7].
    #[arg(long)]
    pub vol_tol: Option<f64>,
    /// TOML file with defaults for any of the numeric flags.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Write the resolved configuration as JSON; defaults to
    /// <output>.manifest.json.
    #[arg(long, value_name = "FILE", num_args = 0..=1)]
    pub manifest: Option<Option<PathBuf>>,
}

impl SharedArgs {
    fn file(&self) -> Result<FileConfig, CliError> {
        match &self.config {
            Some(path) => FileConfig::load(path),
            None => Ok(FileConfig::default()),
        }
    }

    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = self.restarts {
            cfg.restarts = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if self.k.is_some() {
            cfg.k = self.k;
        }
        if let Some(v) = self.max_iters {
            cfg.max_iters = v;
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
        if let Some(v) = self.vol_tol {
            cfg.vol_tol = v;
        }
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

/// Resolves flags, config file and defaults, and returns the configuration
/// with the requested manifest path.
pub fn resolve(command: &Command) -> Result<(RunConfig, Option<PathBuf>), CliError> {
    let shared = match command {
        Command::Analyze { shared, .. }
        | Command::Figure2 { shared, .. }
        | Command::Figure3 { shared, .. }
        | Command::McmqCurve { shared, .. }
        | Command::LambdaSweep { shared, .. } => shared,
    };
    let file = shared.file()?;
    let name = match command {
        Command::Analyze { .. } => "analyze",
        Command::Figure2 { .. } => "figure2",
        Command::Figure3 { .. } => "figure3",
        Command::McmqCurve { .. } => "mcmq-curve",
        Command::LambdaSweep { .. } => "lambda-sweep",
    };
    let mut cfg = RunConfig::new(name, &file);
    shared.apply(&mut cfg);
    let points = |p: &Option<usize>| Some(p.or(file.points).unwrap_or(DEFAULT_GRID_POINTS));
    match command {
        Command::Analyze {
            input,
            json_out,
            strict,
            ..
        } => {
            cfg.input = Some(input.clone());
            cfg.output = json_out.clone();
            cfg.strict = *strict;
        }
        Command::Figure2 {
            count,
            seed,
            out,
            curve_out,
            points: p,
            ..
        } => {
            let count = count.or(file.count).unwrap_or(DEFAULT_FIGURE2_COUNT);
            cfg.counts = vec![RankCount { rank: 2, count }];
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.output = Some(out.clone());
            cfg.curve_output = Some(
                curve_out
                    .clone()
                    .unwrap_or_else(|| sibling(out, "_mcmq.csv")),
            );
            cfg.points = points(p);
        }
        Command::Figure3 {
            count2,
            count3,
            count4,
            seed,
            out,
            curve_out,
            points: p,
            ..
        } => {
            let pick =
                |c: &Option<usize>, f: Option<usize>| c.or(f).unwrap_or(DEFAULT_FIGURE3_COUNT);
            cfg.counts = vec![
                RankCount {
                    rank: 2,
                    count: pick(count2, file.count2),
                },
                RankCount {
                    rank: 3,
                    count: pick(count3, file.count3),
                },
                RankCount {
                    rank: 4,
                    count: pick(count4, file.count4),
                },
            ];
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.output = Some(out.clone());
            cfg.curve_output = Some(
                curve_out
                    .clone()
                    .unwrap_or_else(|| sibling(out, "_mcmq.csv")),
            );
            cfg.points = points(p);
        }
        Command::McmqCurve {
            points: p,
            seed,
            out,
            ..
        }
        | Command::LambdaSweep {
            points: p,
            seed,
            out,
            ..
        } => {
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.output = Some(out.clone());
            cfg.points = points(p);
        }
    }
    cfg.validate()?;
    let manifest = match &shared.manifest {
        None => None,
        Some(Some(path)) => Some(path.clone()),
        Some(None) => match &cfg.output {
            Some(out) => Some(sibling(out, ".manifest.json")),
            None => {
                return Err(CliError::Config(
                    "--manifest needs a path when the report goes to stdout".into(),
                ))
            }
        },
    };
    Ok((cfg, manifest))
}

/// Executes a resolved configuration. Reports from `analyze` go to stdout
/// when no output path is set.
pub fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    let opt = cfg.optimizer();
    let missing = || CliError::Config("missing output path".into());
    let points = cfg.points.unwrap_or(DEFAULT_GRID_POINTS);
    match cfg.command.as_str() {
        "analyze" => {
            let input = cfg
                .input
                .as_deref()
                .ok_or_else(|| CliError::Config("missing --in".into()))?;
            let channel = read_channel(input, cfg.strict)?;
            let report = with_threads(cfg.threads, || analyze(&channel, &opt, cfg.vol_tol))??;
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            match &cfg.output {
                Some(path) => write_file(path, |w| {
                    use std::io::Write;
                    writeln!(w, "{json}")
                }),
                None => {
                    println!("{json}");
                    Ok(())
                }
            }
        }
        "figure2" | "figure3" => {
            let groups: Vec<_> = cfg.counts.iter().map(|c| (c.rank, c.count)).collect();
            let (records, curve) = with_threads(cfg.threads, || {
                Ok::<_, CliError>((
                    figure_records(&groups, cfg.seed, &opt)?,
                    mcmq_curve(points, cfg.seed, &opt)?,
                ))
            })??;
            write_file(cfg.output.as_deref().ok_or_else(missing)?, |w| {
                write_figure_csv(w, &records)
            })?;
            write_file(cfg.curve_output.as_deref().ok_or_else(missing)?, |w| {
                write_curve_csv(w, &curve)
            })
        }
        "mcmq-curve" => {
            let rows = with_threads(cfg.threads, || mcmq_curve(points, cfg.seed, &opt))??;
            write_file(cfg.output.as_deref().ok_or_else(missing)?, |w| {
                write_curve_csv(w, &rows)
            })
        }
        "lambda-sweep" => {
            let rows = with_threads(cfg.threads, || lambda_sweep(points, cfg.seed, &opt))??;
            write_file(cfg.output.as_deref().ok_or_else(missing)?, |w| {
                write_lambda_csv(w, &rows)
            })
        }
        other => Err(CliError::Config(format!("unknown command {other}"))),
    }
}

/// Resolves the configuration, writes the manifest if asked, and executes.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (cfg, manifest) = resolve(&cli.command)?;
    if let Some(path) = &manifest {
        let json = cfg.manifest_json();
        write_file(path, |w| {
            use std::io::Write;
            writeln!(w, "{json}")
        })?;
    }
    execute(&cfg)
}
