use super::AgentSpec;
use crate::config::ArenaConfigFile;
use crate::episode::{Episode, TrajectoryLog};
use crate::physics::PhysicsParams;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const REPORT_HEADER: &str = "config,episode,seed,reward,passed,steps,done_reason";

/// A labelled configuration to evaluate on.
#[derive(Clone, Debug)]
pub struct EvalTask {
    pub label: String,
    pub config: ArenaConfigFile,
}

#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub episodes: usize,
    pub base_seed: u64,
    /// Worker threads; `None` uses rayon's default pool.
    pub workers: Option<usize>,
    pub params: PhysicsParams,
    /// Safety stop for untimed arenas.
    pub step_cap: u64,
    pub keep_trajectories: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { episodes: 100, base_seed: 0, workers: None, params: PhysicsParams::default(), step_cap: 100_000, keep_trajectories: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub config: String,
    pub episode: usize,
    pub seed: u64,
    pub reward: f64,
    pub passed: bool,
    pub steps: u64,
    /// A done reason, `step_cap`, or `fault` when the episode errored.
    pub done_reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvaluationReport {
    pub agent: String,
    pub base_seed: u64,
    pub rows: Vec<ReportRow>,
    /// Parallel to `rows` when trajectories were kept.
    pub trajectories: Vec<TrajectoryLog>,
}

impl EvaluationReport {
    pub fn rewards(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.reward).collect()
    }

    pub fn mean(&self) -> f64 {
        if self.rows.is_empty() {
            return f64::NAN;
        }
        self.rows.iter().map(|r| r.reward).sum::<f64>() / self.rows.len() as f64
    }

    pub fn median(&self) -> f64 {
        let mut r = self.rewards();
        if r.is_empty() {
            return f64::NAN;
        }
        r.sort_by(f64::total_cmp);
        let m = r.len() / 2;
        if r.len() % 2 == 1 {
            r[m]
        } else {
            (r[m - 1] + r[m]) / 2.0
        }
    }

    pub fn pass_rate(&self) -> f64 {
        if self.rows.is_empty() {
            return f64::NAN;
        }
        self.rows.iter().filter(|r| r.passed).count() as f64 / self.rows.len() as f64
    }

    pub fn summary_line(&self) -> String {
        format!("{}: {} episodes, mean reward {:.4}, median {:.4}, pass rate {:.3}", self.agent, self.rows.len(), self.mean(), self.median(), self.pass_rate())
    }

    /// CSV with `#` provenance lines before the header.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for r in &self.rows {
            let _ = w.write_record([
                r.config.clone(),
                r.episode.to_string(),
                r.seed.to_string(),
                r.reward.to_string(),
                r.passed.to_string(),
                r.steps.to_string(),
                r.done_reason.clone(),
            ]);
        }
        let body = String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default();
        format!("# version={}\n# agent={}\n# base_seed={}\n{REPORT_HEADER}\n{body}", crate::VERSION, self.agent, self.base_seed)
    }
}

/// Runs one episode to completion. Faults are reported in the row rather
/// than propagated.
pub fn run_episode(task: &EvalTask, index: usize, agent: &AgentSpec, options: &EvalOptions) -> (ReportRow, TrajectoryLog) {
    let seed = options.base_seed.wrapping_add(index as u64);
    let arena = if task.config.arenas.is_empty() { 0 } else { index % task.config.arenas.len() };
    let mut row = ReportRow { config: task.label.clone(), episode: index, seed, reward: 0.0, passed: false, steps: 0, done_reason: String::new() };
    let (mut episode, mut obs) = match Episode::reset(&task.config, arena, seed, &options.params, agent.obs_spec()) {
        Ok(x) => x,
        Err(e) => {
            log::error!("{} episode {index}: {e}", task.label);
            row.done_reason = "fault".into();
            return (row, TrajectoryLog::default());
        }
    };
    episode.trajectory.meta.config = task.label.clone();
    let mut policy = agent.policy(seed);
    while !episode.state.done && episode.state.step < options.step_cap {
        let step = policy.act(&obs).map_err(|e| e.to_string()).and_then(|a| episode.step(a).map_err(|e| e.to_string()));
        match step {
            Ok(result) => obs = result.observation,
            Err(e) => {
                log::error!("{} episode {index}: {e}", task.label);
                row.done_reason = "fault".into();
                break;
            }
        }
    }
    row.reward = episode.state.reward;
    row.steps = episode.state.step;
    row.passed = episode.state.done && episode.passed();
    if row.done_reason.is_empty() {
        row.done_reason = episode.state.done_reason.map_or_else(|| "step_cap".to_string(), |d| d.to_string());
    }
    (row, episode.trajectory)
}

/// Runs `options.episodes` episodes of each task with seeds
/// `base_seed + i`. Output order is by task, then episode index, whatever
/// the worker count.
pub fn run_evaluation(tasks: &[EvalTask], agent: &AgentSpec, options: &EvalOptions) -> Result<EvaluationReport, String> {
    agent.validate()?;
    let jobs: Vec<(usize, usize)> = (0..tasks.len()).flat_map(|t| (0..options.episodes).map(move |i| (t, i))).collect();
    let run = || jobs.par_iter().map(|&(t, i)| run_episode(&tasks[t], i, agent, options)).collect::<Vec<_>>();
    let results = match options.workers {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().map_err(|e| e.to_string())?.install(run),
        None => run(),
    };
    let mut report = EvaluationReport { agent: agent.name().to_string(), base_seed: options.base_seed, ..Default::default() };
    for (row, log) in results {
        report.rows.push(row);
        if options.keep_trajectories {
            report.trajectories.push(log);
        }
    }
    Ok(report)
}
