use super::Action;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const TRAJECTORY_HEADER: &str = "step,x,y,z,yaw,action,reward_delta,reward,health";

/// One logged step: the action taken at `step` and the state after it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub step: u64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub yaw: f64,
    pub action: Action,
    pub reward_delta: f64,
    pub reward: f64,
    pub health: f64,
}

/// Provenance recorded at the top of every log.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub version: String,
    pub seed: u64,
    pub arena: usize,
    /// Free-form config label, usually a file name.
    pub config: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLog {
    pub meta: TrajectoryMeta,
    pub rows: Vec<TrajectoryRow>,
}

#[derive(Debug, thiserror::Error)]
pub enum TrajectoryError {
    #[error("missing `# {0}=` metadata line")]
    MissingMeta(&'static str),
    #[error("bad metadata value for `{key}`: {value}")]
    BadMeta { key: String, value: String },
    #[error("unexpected header `{0}`")]
    Header(String),
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },
    #[error("rows are not contiguous: expected step {expected}, found {found}")]
    Gap { expected: u64, found: u64 },
}

impl TrajectoryLog {
    pub fn new(meta: TrajectoryMeta) -> Self {
        Self { meta, rows: Vec::new() }
    }

    pub fn actions(&self) -> Vec<Action> {
        self.rows.iter().map(|r| r.action).collect()
    }

    /// CSV text. Numbers use the shortest representation that parses back to
    /// the same `f64`, so equal logs have equal bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let m = &self.meta;
        let _ = writeln!(out, "# version={}", m.version);
        let _ = writeln!(out, "# seed={}", m.seed);
        let _ = writeln!(out, "# arena={}", m.arena);
        let _ = writeln!(out, "# config={}", m.config);
        out.push_str(TRAJECTORY_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&row_line(r));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, TrajectoryError> {
        let mut meta = TrajectoryMeta::default();
        let mut seen = [false; 4];
        let mut lines = text.lines().enumerate().peekable();
        while let Some((_, line)) = lines.peek() {
            let Some(rest) = line.strip_prefix('#') else { break };
            if let Some((k, v)) = rest.trim().split_once('=') {
                let bad = || TrajectoryError::BadMeta { key: k.to_string(), value: v.to_string() };
                match k {
                    "version" => (meta.version, seen[0]) = (v.to_string(), true),
                    "seed" => (meta.seed, seen[1]) = (v.parse().map_err(|_| bad())?, true),
                    "arena" => (meta.arena, seen[2]) = (v.parse().map_err(|_| bad())?, true),
                    "config" => (meta.config, seen[3]) = (v.to_string(), true),
                    _ => {}
                }
            }
            lines.next();
        }
        for (flag, key) in seen.iter().zip(["version", "seed", "arena", "config"]) {
            if !flag {
                return Err(TrajectoryError::MissingMeta(key));
            }
        }
        match lines.next() {
            Some((_, h)) if h == TRAJECTORY_HEADER => {}
            Some((_, h)) => return Err(TrajectoryError::Header(h.to_string())),
            None => return Err(TrajectoryError::Header(String::new())),
        }
        let mut rows = Vec::new();
        for (n, line) in lines {
            if line.is_empty() {
                continue;
            }
            let row = parse_row(line).map_err(|message| TrajectoryError::Row { line: n + 1, message })?;
            let expected = rows.len() as u64;
            if row.step != expected {
                return Err(TrajectoryError::Gap { expected, found: row.step });
            }
            rows.push(row);
        }
        Ok(Self { meta, rows })
    }
}

pub fn row_line(r: &TrajectoryRow) -> String {
    format!("{},{},{},{},{},{},{},{},{}", r.step, r.x, r.y, r.z, r.yaw, r.action, r.reward_delta, r.reward, r.health)
}

fn parse_row(line: &str) -> Result<TrajectoryRow, String> {
    let cells: Vec<&str> = line.split(',').collect();
    if cells.len() != 9 {
        return Err(format!("expected 9 fields, found {}", cells.len()));
    }
    let f = |i: usize| cells[i].parse::<f64>().map_err(|_| format!("bad number `{}`", cells[i]));
    Ok(TrajectoryRow {
        step: cells[0].parse().map_err(|_| format!("bad step `{}`", cells[0]))?,
        x: f(1)?,
        y: f(2)?,
        z: f(3)?,
        yaw: f(4)?,
        action: cells[5].parse().map_err(|e: super::action::UnknownAction| e.to_string())?,
        reward_delta: f(6)?,
        reward: f(7)?,
        health: f(8)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_exactly() {
        let mut log = TrajectoryLog::new(TrajectoryMeta { version: "0.1.0".into(), seed: 9, arena: 0, config: "a.yml".into() });
        log.rows.push(TrajectoryRow {
            step: 0,
            x: 0.1 + 0.2,
            y: 0.0,
            z: 1e-300,
            yaw: 354.0,
            action: Action::Left,
            reward_delta: -0.002,
            reward: -0.002,
            health: 99.8,
        });
        let text = log.to_csv();
        assert_eq!(TrajectoryLog::parse(&text).unwrap(), log);
        assert!(text.contains("\nstep,x,y,z,yaw,action,reward_delta,reward,health\n"));
    }
}
