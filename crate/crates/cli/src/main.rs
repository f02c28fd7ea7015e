mod run_config;

use anyhow::{bail, Context, Result};
use arena_lab::agents::{rank_sum_test, run_evaluation, AgentSpec, EvalOptions, EvalTask, HeuristicPolicyParams, RandomPolicyParams};
use arena_lab::config::{has_errors, load_config, parse_config, validate, ArenaConfigFile, Diagnostic};
use arena_lab::episode::{replay, Action, Episode};
use arena_lab::observations::{CameraSpec, ObservationSpec};
use arena_lab::procgen::{expand_template, write_battery, Mode};
use arena_lab::protocol::{Server, ServerOptions, SessionOptions};
use clap::{Parser, Subcommand};
use run_config::RunConfig;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "arena-lab", version, about = "Headless arena simulator for embodied RL experiments")]
struct Cli {
    /// TOML run configuration (seed, log directory, server, physics overrides).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the default run configuration and exit.
    #[arg(long)]
    dump_defaults: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Check configuration files; diagnostics go to stderr.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Serve the stepping protocol over TCP and WebSocket.
    Serve {
        /// Address to listen on, e.g. 127.0.0.1:7400.
        #[arg(long)]
        listen: Option<String>,
        /// Directory of static files for the browser play client.
        #[arg(long)]
        play: Option<PathBuf>,
        #[arg(long, env = "ARENA_LAB_SEED")]
        seed: Option<u64>,
    },
    /// Run a baseline agent for a number of episodes and write a report.
    Eval {
        /// Arena configuration file.
        arena: PathBuf,
        /// `random`, `heuristic`, `heuristic-wide`, or a TOML/JSON agent file.
        agent: String,
        #[arg(long, default_value_t = 100)]
        episodes: usize,
        #[arg(long, env = "ARENA_LAB_SEED")]
        seed: Option<u64>,
        /// Output directory; defaults to `<log_dir>/<arena>-<agent>-seed<seed>`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Stop untimed episodes after this many steps.
        #[arg(long, default_value_t = 100_000)]
        step_cap: u64,
        /// Skip per-episode trajectory files.
        #[arg(long)]
        no_trajectories: bool,
    },
    /// Expand a template into a battery of configuration files.
    Procgen {
        template: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Draw this many samples instead of the exhaustive product.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, env = "ARENA_LAB_SEED")]
        seed: Option<u64>,
    },
    /// Re-simulate a trajectory log and check it is reproduced exactly.
    Replay { arena: PathBuf, log: PathBuf },
    /// Render the agent's camera view to a PNG.
    RenderFrame {
        arena: PathBuf,
        #[arg(long, default_value = "frame.png")]
        out: PathBuf,
        #[arg(long, env = "ARENA_LAB_SEED")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        arena_index: usize,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        #[arg(long)]
        grayscale: bool,
        /// Steps to take before capturing.
        #[arg(long, default_value_t = 0)]
        steps: u64,
        /// Action repeated for `--steps` steps.
        #[arg(long, default_value = "NoAction")]
        action: Action,
    },
    /// Two-sided rank-sum test between the reward columns of two reports.
    Compare { a: PathBuf, b: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let rc = RunConfig::load(cli.config.as_deref())?;
    if cli.dump_defaults {
        print!("{}", RunConfig::default().to_toml());
        return Ok(ExitCode::SUCCESS);
    }
    let Some(command) = cli.command else { bail!("no subcommand given; see --help") };
    match command {
        Command::Validate { paths } => Ok(validate_files(&paths)),
        Command::Serve { listen, play, seed } => {
            let addr = listen.unwrap_or_else(|| rc.server.listen.clone());
            let static_dir = play.or_else(|| rc.server.play_dir.clone());
            if let Some(d) = &static_dir {
                if !d.is_dir() {
                    bail!("play directory {} does not exist", d.display());
                }
            }
            let options = ServerOptions { session: SessionOptions { params: rc.physics.clone(), default_seed: rc.resolve_seed(seed)? }, static_dir };
            let server = Server::bind(addr.as_str(), options)?;
            eprintln!("arena-lab {} listening on {}", arena_lab::VERSION, server.local_addr()?);
            server.run()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { arena, agent, episodes, seed, out, workers, step_cap, no_trajectories } => {
            eval(&rc, &arena, &agent, episodes, rc.resolve_seed(seed)?, out, workers, step_cap, !no_trajectories)
        }
        Command::Procgen { template, out, sample, seed } => {
            let text = read(&template)?;
            let mode = match sample {
                Some(count) => Mode::Sample { count, seed: rc.resolve_seed(seed)? },
                None => Mode::Exhaustive,
            };
            let expansions = expand_template(&text, mode).with_context(|| template.display().to_string())?;
            let stem = template.file_stem().and_then(|s| s.to_str()).unwrap_or("battery");
            let manifest = write_battery(stem, &expansions, &out)?;
            println!("wrote {} files and {}", expansions.len(), manifest.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay { arena, log } => {
            let config = load(&arena)?;
            let text = read(&log)?;
            let (verdict, _) = replay(&config, &text, &rc.physics).with_context(|| log.display().to_string())?;
            println!("{verdict}");
            Ok(if verdict == arena_lab::episode::Verdict::Exact { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::RenderFrame { arena, out, seed, arena_index, resolution, grayscale, steps, action } => {
            let config = load(&arena)?;
            let seed = rc.resolve_seed(seed)?;
            let spec = ObservationSpec { camera: Some(CameraSpec { resolution, grayscale }), ..Default::default() };
            let (mut ep, mut obs) = Episode::reset(&config, arena_index, seed, &rc.physics, spec)?;
            for _ in 0..steps {
                if ep.state.done {
                    break;
                }
                obs = ep.step(action)?.observation;
            }
            let frame = obs.camera.context("no camera frame")?;
            let file = fs::File::create(&out).with_context(|| out.display().to_string())?;
            let text = [
                ("arena-lab-version", arena_lab::VERSION.to_string()),
                ("seed", seed.to_string()),
                ("arena", arena.display().to_string()),
                ("step", ep.state.step.to_string()),
            ];
            frame.write_png(std::io::BufWriter::new(file), &text)?;
            println!("wrote {} ({resolution}x{resolution}, step {})", out.display(), ep.state.step);
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { a, b } => {
            let (xa, xb) = (report_rewards(&a)?, report_rewards(&b)?);
            let r = rank_sum_test(&xa, &xb)?;
            let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
            println!(
                "n = {} vs {}, mean {:.4} vs {:.4}, U = {}, z = {:.4}, p = {:.3e}{}",
                xa.len(),
                xb.len(),
                mean(&xa),
                mean(&xb),
                r.u,
                r.z,
                r.p_value,
                if r.exact { " (exact)" } else { "" }
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<ArenaConfigFile> {
    let text = read(path)?;
    match load_config(&text) {
        Ok((cfg, warnings)) => {
            for w in warnings {
                eprintln!("{}", w.render(&path.display().to_string()));
            }
            Ok(cfg)
        }
        Err(e) => {
            for d in &e.0 {
                eprintln!("{}", d.render(&path.display().to_string()));
            }
            bail!("{} is not a valid configuration", path.display())
        }
    }
}

fn validate_files(paths: &[PathBuf]) -> ExitCode {
    let mut failed = false;
    for path in paths {
        let name = path.display().to_string();
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("{name}: error: cannot read file: {e}");
                failed = true;
                continue;
            }
        };
        let diags: Vec<Diagnostic> = match parse_config(&text) {
            Ok((cfg, mut d)) => {
                d.extend(validate(&cfg));
                d
            }
            Err(e) => e.0,
        };
        let mut diags = diags;
        diags.sort_by_key(|d| (d.line, d.column));
        for d in &diags {
            eprintln!("{}", d.render(&name));
        }
        failed |= has_errors(&diags);
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn agent_spec(name: &str) -> Result<AgentSpec> {
    Ok(match name {
        "random" => AgentSpec::Random(RandomPolicyParams::default()),
        "heuristic" => AgentSpec::Heuristic(HeuristicPolicyParams::default()),
        "heuristic-wide" => AgentSpec::Heuristic(HeuristicPolicyParams::button()),
        file => {
            let path = Path::new(file);
            let text = read(path).context("agent must be random, heuristic, heuristic-wide or an agent file")?;
            let spec: AgentSpec = if path.extension().is_some_and(|e| e == "json") {
                serde_json::from_str(&text).with_context(|| file.to_string())?
            } else {
                toml::from_str(&text).with_context(|| file.to_string())?
            };
            spec
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn eval(
    rc: &RunConfig,
    arena: &Path,
    agent: &str,
    episodes: usize,
    seed: u64,
    out: Option<PathBuf>,
    workers: Option<usize>,
    step_cap: u64,
    trajectories: bool,
) -> Result<ExitCode> {
    if episodes == 0 {
        bail!("--episodes must be positive");
    }
    let spec = agent_spec(agent)?;
    spec.validate().map_err(anyhow::Error::msg)?;
    let config = load(arena)?;
    let stem = arena.file_stem().and_then(|s| s.to_str()).unwrap_or("arena").to_string();
    let label = arena.file_name().and_then(|s| s.to_str()).unwrap_or("arena").to_string();
    let out = out.unwrap_or_else(|| rc.log_dir.join(format!("{stem}-{}-seed{seed}", spec.name())));
    let options = EvalOptions { episodes, base_seed: seed, workers, params: rc.physics.clone(), step_cap, keep_trajectories: trajectories };
    let report = run_evaluation(&[EvalTask { label, config }], &spec, &options).map_err(anyhow::Error::msg)?;
    fs::create_dir_all(&out).with_context(|| out.display().to_string())?;
    fs::write(out.join("report.csv"), report.to_csv())?;
    if trajectories {
        let dir = out.join("trajectories");
        fs::create_dir_all(&dir)?;
        for (row, log) in report.rows.iter().zip(&report.trajectories) {
            fs::write(dir.join(format!("episode_{:04}_seed{}.csv", row.episode, row.seed)), log.to_csv())?;
        }
    }
    let summary = report.summary_line();
    fs::write(out.join("summary.txt"), format!("# version={}\n# base_seed={seed}\n{summary}\n", arena_lab::VERSION))?;
    println!("{summary}");
    println!("wrote {}", out.join("report.csv").display());
    let faults = report.rows.iter().filter(|r| r.done_reason == "fault").count();
    if faults > 0 {
        eprintln!("error: {faults} episode(s) faulted; see the report");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn report_rewards(path: &Path) -> Result<Vec<f64>> {
    let text = read(path)?;
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut rdr = body.lines();
    let header = rdr.next().context("empty report")?;
    let col = header.split(',').position(|c| c == "reward").context("report has no reward column")?;
    rdr.filter(|l| !l.is_empty()).map(|l| l.split(',').nth(col).and_then(|v| v.parse().ok()).with_context(|| format!("bad report row `{l}`"))).collect()
}
