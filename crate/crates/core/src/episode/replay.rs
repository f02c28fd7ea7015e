//! Re-simulation of logged episodes.

use super::{row_line, Episode, TrajectoryError, TrajectoryLog, TRAJECTORY_HEADER};
use crate::config::ArenaConfigFile;
use crate::observations::ObservationSpec;
use crate::physics::PhysicsParams;
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error("log written by version {found}, this build is {expected}")]
    Version { expected: String, found: String },
    #[error("log is truncated: the last line is incomplete")]
    Truncated,
    #[error(transparent)]
    Log(#[from] TrajectoryError),
    #[error("cannot start the logged episode: {0}")]
    Reset(#[from] super::EpisodeError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Exact,
    /// First row whose regenerated text differs from the log.
    Mismatch {
        step: u64,
        column: String,
        logged: String,
        replayed: String,
    },
    /// The episode ended before the log did.
    EndedEarly {
        step: u64,
    },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Exact => f.write_str("exact"),
            Verdict::Mismatch { step, column, logged, replayed } => {
                write!(f, "mismatch at step {step}: {column} logged {logged}, replayed {replayed}")
            }
            Verdict::EndedEarly { step } => write!(f, "mismatch at step {step}: the replayed episode had already ended"),
        }
    }
}

fn first_difference(logged: &str, replayed: &str) -> (String, String, String) {
    let columns = TRAJECTORY_HEADER.split(',');
    for ((name, a), b) in columns.zip(logged.split(',')).zip(replayed.split(',')) {
        if a != b {
            return (name.to_string(), a.to_string(), b.to_string());
        }
    }
    ("row".into(), logged.to_string(), replayed.to_string())
}

/// Replays the actions of `log_text` from its seed and compares every row
/// byte for byte.
pub fn replay(config: &ArenaConfigFile, log_text: &str, params: &PhysicsParams) -> Result<(Verdict, TrajectoryLog), ReplayError> {
    if !log_text.is_empty() && !log_text.ends_with('\n') {
        return Err(ReplayError::Truncated);
    }
    let log = TrajectoryLog::parse(log_text)?;
    if log.meta.version != crate::VERSION {
        return Err(ReplayError::Version { expected: crate::VERSION.into(), found: log.meta.version.clone() });
    }
    let (mut ep, _) = Episode::reset(config, log.meta.arena, log.meta.seed, params, ObservationSpec::default())?;
    ep.trajectory.meta.config = log.meta.config.clone();
    for row in &log.rows {
        if ep.state.done {
            return Ok((Verdict::EndedEarly { step: row.step }, ep.trajectory));
        }
        if let Err(e) = ep.step(row.action) {
            log::warn!("replay stopped at step {}: {e}", row.step);
            return Ok((Verdict::EndedEarly { step: row.step }, ep.trajectory));
        }
        let replayed = row_line(ep.trajectory.rows.last().expect("a step logs a row"));
        let logged = row_line(row);
        if replayed != logged {
            let (column, logged, replayed) = first_difference(&logged, &replayed);
            return Ok((Verdict::Mismatch { step: row.step, column, logged, replayed }, ep.trajectory));
        }
    }
    Ok((Verdict::Exact, ep.trajectory))
}
