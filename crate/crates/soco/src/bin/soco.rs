use clap::{Args, Parser, Subcommand};
use soco::model::{presets, DataCenterModel, InstanceKind, DEFAULT_PROFILE_SAMPLES};
use soco::online::{run_online, OnlineSpec};
use soco::problem::{evaluate_cost, EvalOptions, ProblemInstance, Schedule};
use soco::runtime::output::{read_schedule_csv, write_cost_csv, write_metrics_json, write_plot_csv, write_schedule_csv};
use soco::runtime::{
    compare, dynamic_optimum, ingest_trace, server, solve_offline, synthetic_diurnal, trace_inputs, trace_stats,
    write_trace, OfflineAlgorithm, PredictionNoise, StreamSession, Trace,
};
use soco::{Result, SocoError};
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "soco", version, about = "Offline and online right-sizing of data centers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance offline.
    SolveOffline {
        #[command(flatten)]
        input: InstanceArgs,
        /// brute, bcp, graph1d, graphmd, approx, static or fractional.
        #[arg(long)]
        alg: String,
        /// Approximation factor of `approx`.
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run an online algorithm over a trace.
    RunOnline {
        #[command(flatten)]
        input: InstanceArgs,
        /// Algorithm name, e.g. lcp, int_lcp, memoryless, probabilistic, rbg, lb-slo, ogd, rhc.
        #[arg(long)]
        alg: String,
        /// Prediction window.
        #[arg(long, default_value_t = 0)]
        w: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Main algorithm parameter (epsilon, theta, eta, beta, ...).
        #[arg(long)]
        param: Option<f64>,
        /// Stream the trace with sampled predictions of this relative noise instead of
        /// running on the fully known instance.
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_PROFILE_SAMPLES)]
        samples: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Serve streaming sessions over TCP.
    Serve {
        /// Bind address; defaults to $SOCO_BIND or 127.0.0.1:7878.
        #[arg(long)]
        bind: Option<String>,
    },
    /// Summary statistics of a trace.
    Stats {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 3600.0)]
        slot_length: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalized cost, cost reduction and static/dynamic ratio of schedules.
    Metrics {
        #[command(flatten)]
        input: InstanceArgs,
        /// `name=path` of a schedule CSV; repeatable.
        #[arg(long = "schedule", required = true)]
        schedules: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a bundled model configuration.
    Preset {
        /// fixed-energy, linear-energy or two-classes.
        #[arg(long)]
        name: String,
        /// Servers per type.
        #[arg(long, default_value_t = 10)]
        servers: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic diurnal trace.
    SynthTrace {
        #[arg(long, default_value_t = 7)]
        days: usize,
        #[arg(long, default_value_t = 3600.0)]
        slot_length: f64,
        #[arg(long, default_value_t = 100.0)]
        mean: f64,
        #[arg(long, default_value_t = 2.0)]
        pmr: f64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InstanceArgs {
    /// Data-center model JSON.
    #[arg(long)]
    model: PathBuf,
    /// Load trace CSV.
    #[arg(long)]
    trace: PathBuf,
    #[arg(long, value_enum, default_value = "ssco")]
    kind: Kind,
    /// Pad or truncate the trace to this many slots.
    #[arg(long)]
    horizon: Option<usize>,
    /// Restrict general instances to integral configurations.
    #[arg(long)]
    integral: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Kind {
    Ssco,
    Sblo,
    Slo,
}

impl From<Kind> for InstanceKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Ssco => InstanceKind::Ssco,
            Kind::Sblo => InstanceKind::Sblo,
            Kind::Slo => InstanceKind::Slo,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Schedule CSV; stdout when absent.
    #[arg(long)]
    out_schedule: Option<PathBuf>,
    #[arg(long)]
    out_cost: Option<PathBuf>,
    /// Load next to the schedule and the offline optima.
    #[arg(long)]
    out_plot: Option<PathBuf>,
}

struct Loaded {
    model: DataCenterModel,
    trace: Trace,
    kind: InstanceKind,
    instance: ProblemInstance,
}

impl InstanceArgs {
    fn load(&self) -> Result<Loaded> {
        let text = std::fs::read_to_string(&self.model).map_err(|e| io_error(&self.model, e))?;
        let model = DataCenterModel::from_json(&text)?;
        let trace = ingest_trace(&self.trace, model.slot_length_seconds, self.horizon)?;
        let kind = self.kind.into();
        let mut instance = model.generate_instance(kind, &trace.profiles(model.load_types())?)?;
        if let (true, ProblemInstance::Ssco(p)) = (self.integral, &mut instance) {
            p.integral = true;
        }
        Ok(Loaded { model, trace, kind, instance })
    }
}

fn io_error(path: &Path, e: std::io::Error) -> SocoError {
    SocoError::Io(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| io_error(path, e))
}

fn write_outputs(loaded: &Loaded, schedule: &Schedule, out: &OutputArgs) -> Result<()> {
    match &out.out_schedule {
        Some(p) => write_schedule_csv(schedule, create(p)?)?,
        None => write_schedule_csv(schedule, std::io::stdout().lock())?,
    }
    if let Some(p) = &out.out_cost {
        let full = if schedule.horizon() == 1 && loaded.trace.horizon() > 1 {
            Schedule(vec![schedule[0].clone(); loaded.trace.horizon()])
        } else {
            schedule.clone()
        };
        write_cost_csv(&evaluate_cost(&loaded.instance, &full, &EvalOptions::default())?, create(p)?)?;
    }
    if let Some(p) = &out.out_plot {
        let optimum = dynamic_optimum(&loaded.instance)?.schedule;
        let fixed = solve_offline(&loaded.instance, OfflineAlgorithm::Static)?.schedule;
        let series = [("schedule", schedule), ("optimum", &optimum), ("static", &fixed)];
        write_plot_csv(&loaded.trace.totals(), &series, create(p)?)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SolveOffline { input, alg, gamma, out } => {
            let loaded = input.load()?;
            let solution = solve_offline(&loaded.instance, OfflineAlgorithm::from_name(&alg, gamma)?)?;
            log::info!("offline cost {}", solution.cost);
            write_outputs(&loaded, &solution.schedule, &out)
        }
        Command::RunOnline { input, alg, w, seed, param, noise, samples, out } => {
            let loaded = input.load()?;
            let spec = OnlineSpec::from_name(&alg, w, seed, param)?;
            let schedule = match noise {
                None => run_online(spec.build()?.as_mut(), &loaded.instance)?,
                Some(noise) => {
                    let opts = PredictionNoise { window: w, samples, noise, seed };
                    let mut session = StreamSession::new(loaded.model.clone(), loaded.kind, spec, samples, seed)?;
                    session.replay(trace_inputs(&loaded.trace, opts)?)?;
                    session.schedule().clone()
                }
            };
            write_outputs(&loaded, &schedule, &out)
        }
        Command::Serve { bind } => server::serve(&server::bind_address(bind.as_deref())),
        Command::Stats { trace, slot_length, out } => {
            let stats = trace_stats(&ingest_trace(&trace, slot_length, None)?);
            let text = serde_json::to_string_pretty(&stats).map_err(|e| SocoError::Io(e.to_string()))?;
            match out {
                Some(p) => writeln!(create(&p)?, "{text}").map_err(|e| io_error(&p, e)),
                None => {
                    println!("{text}");
                    Ok(())
                }
            }
        }
        Command::Metrics { input, schedules, out } => {
            let loaded = input.load()?;
            let named = schedules
                .iter()
                .map(|arg| {
                    let (name, path) = arg
                        .split_once('=')
                        .ok_or_else(|| SocoError::InvalidArgument(format!("expected name=path, got {arg}")))?;
                    let path = PathBuf::from(path);
                    let file = File::open(&path).map_err(|e| io_error(&path, e))?;
                    Ok((name.to_string(), read_schedule_csv(file)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let rows = compare(&loaded.instance, &named)?;
            match out {
                Some(p) => write_metrics_json(&rows, create(&p)?),
                None => write_metrics_json(&rows, std::io::stdout().lock()),
            }
        }
        Command::Preset { name, servers, out } => {
            let model = match name.as_str() {
                "fixed-energy" => presets::fixed_energy(servers),
                "linear-energy" => presets::linear_energy(servers),
                "two-classes" => presets::two_server_classes(servers, servers),
                other => return Err(SocoError::InvalidArgument(format!("unknown preset {other}"))),
            };
            let text = model.to_json();
            match out {
                Some(p) => writeln!(create(&p)?, "{text}").map_err(|e| io_error(&p, e)),
                None => {
                    println!("{text}");
                    Ok(())
                }
            }
        }
        Command::SynthTrace { days, slot_length, mean, pmr, noise, seed, out } => {
            let trace = synthetic_diurnal(days, slot_length, mean, pmr, noise, seed);
            match out {
                Some(p) => write_trace(&trace, create(&p)?),
                None => write_trace(&trace, std::io::stdout().lock()),
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let frame = serde_json::json!({ "error": e.code(), "message": e.to_string() });
            eprintln!("{frame}");
            ExitCode::FAILURE
        }
    }
}
