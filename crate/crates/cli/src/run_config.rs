use arena_lab::physics::PhysicsParams;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const SEED_ENV: &str = "ARENA_LAB_SEED";

/// Settings shared by every subcommand, read from a TOML file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Default seed when neither `--seed` nor the environment gives one.
    pub seed: u64,
    /// Where `eval` writes when `--out` is not given.
    pub log_dir: PathBuf,
    pub server: ServerConfig,
    pub physics: PhysicsParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub listen: String,
    pub play_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { seed: 0, log_dir: PathBuf::from("runs"), server: ServerConfig::default(), physics: PhysicsParams::default() }
    }
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self { listen: "127.0.0.1:7400".into(), play_dir: None }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<RunConfig> {
        let Some(path) = path else { return Ok(RunConfig::default()) };
        let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        cfg.physics.validate().map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("run config serializes")
    }

    /// `--seed`, then `ARENA_LAB_SEED`, then the file.
    pub fn resolve_seed(&self, flag: Option<u64>) -> anyhow::Result<u64> {
        if let Some(s) = flag {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) if !v.trim().is_empty() => v.trim().parse().map_err(|_| anyhow::anyhow!("{SEED_ENV}={v} is not an unsigned integer")),
            _ => Ok(self.seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let d = RunConfig::default();
        assert_eq!(toml::from_str::<RunConfig>(&d.to_toml()).unwrap(), d);
    }

    #[test]
    fn partial_physics_override() {
        let cfg: RunConfig = toml::from_str("[physics]\ndrag = 0.8\n").unwrap();
        assert_eq!(cfg.physics.drag, 0.8);
        assert_eq!(cfg.physics.gravity, PhysicsParams::default().gravity);
        assert!(toml::from_str::<RunConfig>("[physics]\ndarg = 0.8\n").is_err());
    }
}
