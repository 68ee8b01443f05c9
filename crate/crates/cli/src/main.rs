//! Command-line front end: layers config sources (defaults, then a config
//! file, then flags), expands at most one sweep axis against the variant
//! and seed dimensions, executes the batch, and writes `sweep.csv` plus
//! gnuplot-ready series files into the output directory.
//!
//! Exit codes: 0 on success, 1 when a run or an output write fails, 2 when
//! the configuration (file or flags) is invalid.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;
use manetsim_core::metrics::render_ni_rows;
use manetsim_core::sweep::{run_points, SweepAxis, SweepSpec};
use manetsim_core::{
    apply_config, emit_csv, emit_plot_data, parse_config, sim, SimConfig, Variant,
};

#[derive(Parser, Debug)]
#[command(
    name = "manetsim",
    version,
    about = "Ad-hoc network simulator: DSR routing with an optional reputation-and-punishment layer"
)]
struct Cli {
    /// Config file of `KEY VALUE` lines; flags override its keys.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Protocol variant(s): pdsr, mdsr, fgmdsr. A list compares variants.
    #[arg(long, value_delimiter = ',', value_name = "NAME,...")]
    variant: Vec<String>,

    /// Selfish-node percentage(s); a list sweeps the percentage axis.
    #[arg(long, value_delimiter = ',', value_name = "PCT,...")]
    selfish: Vec<f64>,

    /// Node count(s); a list sweeps network size. Terrain and flow count
    /// rescale to keep the base config's density and per-node load.
    #[arg(long, value_delimiter = ',', value_name = "N,...")]
    nodes: Vec<u32>,

    /// Seed(s); every sweep point runs once per seed.
    #[arg(long, value_delimiter = ',', value_name = "SEED,...")]
    seeds: Vec<u64>,

    /// Sweep any config-file key over a value list, e.g.
    /// GRADE-THRESHOLD=0.4,0.5,0.6.
    #[arg(long, value_name = "KEY=V1,V2,...")]
    sweep: Option<String>,

    /// Directory for sweep.csv and the plot data files.
    #[arg(long, value_name = "DIR", default_value = "results")]
    out: PathBuf,

    /// Also dump each run's final reputation tables (one file per run).
    #[arg(long)]
    debug_tables: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {:#}", failure.cause);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    cause: anyhow::Error,
}

/// Invalid configuration, whether from the file or the flags.
fn config_error(cause: anyhow::Error) -> Failure {
    Failure { code: 2, cause }
}

/// A simulation run or an output write went wrong.
fn run_error(cause: anyhow::Error) -> Failure {
    Failure { code: 1, cause }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let points = expand_points(cli).map_err(config_error)?;
    for (label, cfg) in &points {
        cfg.validate()
            .with_context(|| format!("point {label}"))
            .map_err(config_error)?;
    }

    let rows = if cli.debug_tables {
        run_with_table_dumps(cli, points).map_err(run_error)?
    } else {
        run_points(points).map_err(|e| run_error(anyhow!(e)))?
    };

    let csv = emit_csv(&rows).map_err(|e| run_error(anyhow!(e)))?;
    let series = emit_plot_data(&csv).map_err(|e| run_error(anyhow!(e)))?;

    std::fs::create_dir_all(&cli.out)
        .with_context(|| format!("creating {}", cli.out.display()))
        .map_err(run_error)?;
    let csv_path = cli.out.join("sweep.csv");
    std::fs::write(&csv_path, &csv)
        .with_context(|| format!("writing {}", csv_path.display()))
        .map_err(run_error)?;

    let mut summary = String::new();
    let _ = writeln!(summary, "{} runs -> {}", rows.len(), csv_path.display());
    for (name, body) in series {
        let path = cli.out.join(&name);
        std::fs::write(&path, body)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(run_error)?;
        let _ = writeln!(summary, "series -> {}", path.display());
    }
    Ok(summary)
}

/// Build the labelled per-run configs: defaults, file, flag overrides,
/// then the cartesian product of the one allowed axis x variants x seeds.
fn expand_points(cli: &Cli) -> Result<Vec<(String, SimConfig)>> {
    let mut base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => SimConfig::default(),
    };
    base.debug_tables = cli.debug_tables;

    let mut variants: Vec<Variant> = Vec::new();
    for name in &cli.variant {
        variants.push(
            name.parse()
                .map_err(|e: String| anyhow!(e))
                .with_context(|| format!("--variant {name}"))?,
        );
    }
    if variants.is_empty() {
        variants.push(base.variant);
    }
    let seeds = if cli.seeds.is_empty() {
        vec![base.seed]
    } else {
        cli.seeds.clone()
    };

    let mut axes_requested = 0;
    axes_requested += usize::from(!cli.selfish.is_empty());
    axes_requested += usize::from(!cli.nodes.is_empty());
    axes_requested += usize::from(cli.sweep.is_some());
    if axes_requested > 1 {
        bail!("--selfish, --nodes, and --sweep are mutually exclusive: a sweep has one axis");
    }

    if let Some(spec) = &cli.sweep {
        return expand_generic(&base, spec, &variants, &seeds);
    }

    let axis = if !cli.nodes.is_empty() {
        SweepAxis::NodeCount(cli.nodes.clone())
    } else if !cli.selfish.is_empty() {
        for &pct in &cli.selfish {
            if !(0.0..=100.0).contains(&pct) {
                bail!("--selfish {pct}: percentage must lie in [0, 100]");
            }
        }
        SweepAxis::SelfishFraction(cli.selfish.iter().map(|pct| pct / 100.0).collect())
    } else {
        SweepAxis::SelfishFraction(vec![base.selfish_fraction])
    };

    Ok(SweepSpec {
        base,
        axis,
        variants,
        seeds,
    }
    .expand())
}

/// Expand `--sweep KEY=v1,v2,...`: each value is applied as a config line
/// on top of the effective config. Values run in the order given.
fn expand_generic(
    base: &SimConfig,
    spec: &str,
    variants: &[Variant],
    seeds: &[u64],
) -> Result<Vec<(String, SimConfig)>> {
    let (key, values) = spec
        .split_once('=')
        .ok_or_else(|| anyhow!("--sweep wants KEY=V1,V2,..., got {spec:?}"))?;
    let key = key.trim();
    if key.is_empty() || values.is_empty() {
        bail!("--sweep wants KEY=V1,V2,..., got {spec:?}");
    }
    let mut points = Vec::new();
    for value in values.split(',') {
        let value = value.trim();
        let mut cfg = base.clone();
        apply_config(&mut cfg, &format!("{key} {value}"))
            .with_context(|| format!("--sweep {key}={value}"))?;
        let label = format!(
            "{}-{}",
            key.to_ascii_lowercase(),
            value.to_ascii_lowercase()
        );
        for &variant in variants {
            for &seed in seeds {
                let mut cfg = cfg.clone();
                cfg.variant = variant;
                cfg.seed = seed;
                points.push((label.clone(), cfg));
            }
        }
    }
    Ok(points)
}

/// Debug mode trades the thread pool for full run outputs: executes the
/// points one by one and writes each run's reputation tables next to the
/// CSV.
fn run_with_table_dumps(
    cli: &Cli,
    points: Vec<(String, SimConfig)>,
) -> Result<Vec<(String, manetsim_core::MetricsRecord)>> {
    std::fs::create_dir_all(&cli.out).with_context(|| format!("creating {}", cli.out.display()))?;
    let mut rows = Vec::with_capacity(points.len());
    for (label, cfg) in points {
        let out = sim::run(&cfg).with_context(|| format!("running {label}"))?;
        let name = format!("tables-{label}-{}-seed{}.txt", cfg.variant, cfg.seed);
        let path = cli.out.join(name.to_ascii_lowercase());
        std::fs::write(&path, render_ni_rows(&out.ni_rows))
            .with_context(|| format!("writing {}", path.display()))?;
        rows.push((label, out.metrics));
    }
    Ok(rows)
}
