//! One client's conversation with the simulator. Pure: text in, messages out.

use super::wire::{ColumnWire, EntityWire, EpisodeWire, InfoWire, ObservationWire, StateWire, ViewWire};
use super::{Envelope, ErrorCode, CAPABILITIES, MAX_STREAM_HZ, MAX_VIEW_COLUMNS, PROTOCOL_VERSION};
use crate::config::{load_config, ArenaConfigFile, Diagnostic};
use crate::episode::{Action, Episode, EpisodeError};
use crate::math::forward;
use crate::observations::camera::CAMERA_FOV;
use crate::observations::rays::eye;
use crate::observations::{sight_ray, Observation, ObservationSpec, SightScene};
use crate::physics::PhysicsParams;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::time::Duration;

/// Play-mode switches taken from the loaded file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permissions {
    pub can_reset_episode: bool,
    pub can_change_perspective: bool,
    pub show_notification: bool,
    pub default_perspective: String,
}

impl Permissions {
    fn of(cfg: &ArenaConfigFile) -> Self {
        Self {
            can_reset_episode: cfg.can_reset_episode,
            can_change_perspective: cfg.can_change_perspective,
            show_notification: cfg.show_notification,
            default_perspective: cfg.default_perspective.name().to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SessionOptions {
    pub params: PhysicsParams,
    /// Seed used by `reset` requests that do not name one.
    pub default_seed: u64,
}

impl Default for SessionOptions {
    fn default() -> Self {
        Self { params: PhysicsParams::default(), default_seed: 0 }
    }
}

struct Loaded {
    config: ArenaConfigFile,
    name: String,
    permissions: Permissions,
}

struct Stream {
    seq: Option<u64>,
    hz: u32,
    frames: u64,
}

pub struct Session {
    pub id: u64,
    options: SessionOptions,
    greeted: bool,
    loaded: Option<Loaded>,
    episode: Option<Episode>,
    last_reward: f64,
    stream: Option<Stream>,
}

type Reply = Result<(&'static str, Value), (ErrorCode, String)>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Hello {
    version: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LoadConfig {
    text: String,
    #[serde(default)]
    name: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Reset {
    #[serde(default)]
    arena_index: usize,
    seed: Option<u64>,
    #[serde(default)]
    obs_spec: ObservationSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Step {
    action: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ViewRequest {
    columns: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StreamState {
    hz: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

fn payload<T: DeserializeOwned>(v: Value) -> Result<T, (ErrorCode, String)> {
    let v = if v.is_null() { json!({}) } else { v };
    serde_json::from_value(v).map_err(|e| (ErrorCode::BadPayload, e.to_string()))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("wire types always serialize")
}

impl Session {
    pub fn new(id: u64, options: SessionOptions) -> Self {
        Self { id, options, greeted: false, loaded: None, episode: None, last_reward: 0.0, stream: None }
    }

    pub fn episode(&self) -> Option<&Episode> {
        self.episode.as_ref()
    }

    pub fn permissions(&self) -> Option<Permissions> {
        self.loaded.as_ref().map(|l| l.permissions.clone())
    }

    /// Answers one frame with exactly one message.
    pub fn handle(&mut self, frame: &str) -> Envelope {
        let value: Value = match serde_json::from_str(frame) {
            Ok(v) => v,
            Err(e) => return Envelope::error(None, ErrorCode::BadFrame, format!("not JSON: {e}")),
        };
        let seq = value.get("seq").and_then(Value::as_u64);
        let Some(obj) = value.as_object().filter(|_| seq.is_some()) else {
            return Envelope::error(None, ErrorCode::BadFrame, "expected an object with an unsigned `seq`");
        };
        let Some(kind) = obj.get("type").and_then(Value::as_str) else {
            return Envelope::error(seq, ErrorCode::BadFrame, "missing `type`");
        };
        let body = obj.get("payload").cloned().unwrap_or(Value::Null);
        match self.dispatch(seq, kind, body) {
            Ok((kind, payload)) => Envelope::new(seq, kind, payload),
            Err((code, message)) => Envelope::error(seq, code, message),
        }
    }

    fn dispatch(&mut self, seq: Option<u64>, kind: &str, body: Value) -> Reply {
        if kind == "hello" {
            return self.hello(payload(body)?);
        }
        if !self.greeted {
            let known = matches!(
                kind,
                "load_config" | "reset" | "step" | "view_request" | "state_request" | "skip_episode" | "stream_state" | "stop_stream" | "trajectory_request"
            );
            return Err(if known {
                (ErrorCode::HelloRequired, "the first message must be `hello`".into())
            } else {
                (ErrorCode::UnknownType, format!("unknown message type `{kind}`"))
            });
        }
        match kind {
            "load_config" => self.load_config(payload(body)?),
            "reset" => self.reset(payload(body)?),
            "step" => self.step(payload(body)?),
            "view_request" => self.view(payload(body)?),
            "state_request" => payload::<Empty>(body).and_then(|_| self.state()).map(|s| ("state", to_value(&s))),
            "skip_episode" => payload::<Empty>(body).and_then(|_| self.skip()),
            "stream_state" => self.stream_state(seq, payload(body)?),
            "stop_stream" => payload::<Empty>(body).map(|_| {
                let was = self.stream.take().is_some();
                ("stream_stopped", json!({ "was_streaming": was }))
            }),
            "trajectory_request" => payload::<Empty>(body).and_then(|_| self.trajectory()),
            other => Err((ErrorCode::UnknownType, format!("unknown message type `{other}`"))),
        }
    }

    fn hello(&mut self, p: Hello) -> Reply {
        if p.version != PROTOCOL_VERSION {
            return Err((ErrorCode::VersionMismatch, format!("server speaks {PROTOCOL_VERSION}, client asked for {}", p.version)));
        }
        self.greeted = true;
        Ok(("hello", json!({ "version": PROTOCOL_VERSION, "capabilities": CAPABILITIES, "session": self.id, "build": crate::VERSION })))
    }

    fn load_config(&mut self, p: LoadConfig) -> Reply {
        let (config, warnings) = load_config(&p.text).map_err(|e| (ErrorCode::BadConfig, e.to_string()))?;
        let permissions = Permissions::of(&config);
        let arenas = config.arenas.len();
        let warnings: Vec<Value> = warnings.iter().map(|d: &Diagnostic| to_value(d)).collect();
        let reply = json!({ "arenas": arenas, "permissions": permissions, "warnings": warnings });
        self.loaded = Some(Loaded { config, name: p.name, permissions });
        self.end_episode();
        Ok(("config_loaded", reply))
    }

    fn end_episode(&mut self) {
        if let Some(ep) = self.episode.take() {
            self.last_reward = ep.state.reward;
        }
        self.stream = None;
    }

    fn reset(&mut self, p: Reset) -> Reply {
        let loaded = self.loaded.as_ref().ok_or((ErrorCode::NoConfig, "no configuration loaded".to_string()))?;
        let seed = p.seed.unwrap_or(self.options.default_seed);
        let (mut ep, obs) = Episode::reset(&loaded.config, p.arena_index, seed, &self.options.params, p.obs_spec).map_err(|e| {
            let code = match e {
                EpisodeError::NoArena { .. } => ErrorCode::BadArena,
                EpisodeError::Observation(_) => ErrorCode::BadObsSpec,
                EpisodeError::Instantiation(_) | EpisodeError::Blackouts(_) => ErrorCode::Instantiation,
                _ => ErrorCode::Fault,
            };
            (code, e.to_string())
        })?;
        ep.trajectory.meta.config = loaded.name.clone();
        self.end_episode();
        ep.state.prev_episode_reward = self.last_reward;
        let info = InfoWire::new(&ep.info(false), None);
        self.episode = Some(ep);
        Ok(("reset_result", json!({ "seed": seed, "arena_index": p.arena_index, "obs": ObservationWire::from(&obs), "info": info })))
    }

    fn live(&self) -> Result<&Episode, (ErrorCode, String)> {
        self.episode.as_ref().ok_or((ErrorCode::NoEpisode, "no episode; send `reset` first".to_string()))
    }

    fn step(&mut self, p: Step) -> Reply {
        self.live()?;
        let action = p
            .action
            .as_u64()
            .and_then(|i| usize::try_from(i).ok())
            .and_then(Action::from_index)
            .ok_or((ErrorCode::BadAction, format!("action must be an integer in 0..=8, got {}", p.action)))?;
        let notify = self.loaded.as_ref().is_some_and(|l| l.permissions.show_notification);
        let ep = self.episode.as_mut().expect("checked above");
        if ep.state.done {
            return Err((ErrorCode::EpisodeDone, "the episode is over; send `reset`".into()));
        }
        let r = ep.step(action).map_err(|e| (ErrorCode::Fault, e.to_string()))?;
        let passed = (r.done && notify).then(|| ep.passed());
        Ok((
            "step_result",
            json!({ "obs": ObservationWire::from(&r.observation), "reward_delta": r.reward_delta, "done": r.done, "info": InfoWire::new(&r.info, passed) }),
        ))
    }

    fn view(&self, p: ViewRequest) -> Reply {
        let ep = self.live()?;
        if !(1..=MAX_VIEW_COLUMNS).contains(&p.columns) {
            return Err((ErrorCode::BadPayload, format!("columns must be in 1..={MAX_VIEW_COLUMNS}")));
        }
        let lights_on = ep.state.lights_on;
        let columns = if lights_on {
            let scene = SightScene::new(&ep.world);
            let origin = eye(&ep.world);
            let yaw = ep.world.agent().body.pose.yaw;
            let half = (CAMERA_FOV / 2.0).to_radians().tan();
            (0..p.columns)
                .map(|c| {
                    let x = (2.0 * (c as f64 + 0.5) / p.columns as f64 - 1.0) * half;
                    ColumnWire::from(sight_ray(&scene, origin, forward(yaw + x.atan().to_degrees())))
                })
                .collect()
        } else {
            (0..p.columns).map(|_| ColumnWire::from(None)).collect()
        };
        let view = ViewWire { fov: CAMERA_FOV, lights_on, columns, episode: EpisodeWire::from(&ep.state) };
        Ok(("view", to_value(&view)))
    }

    /// Snapshot of every live entity. Never advances time.
    pub fn state(&self) -> Result<StateWire, (ErrorCode, String)> {
        let ep = self.live()?;
        let entities = ep.world.entities.iter().map(|e| EntityWire::new(e, &ep.labels)).collect();
        Ok(StateWire { episode: EpisodeWire::from(&ep.state), entities })
    }

    fn skip(&mut self) -> Reply {
        let permitted = self.loaded.as_ref().is_some_and(|l| l.permissions.can_reset_episode);
        self.live()?;
        if !permitted {
            return Err((ErrorCode::NotPermitted, "this configuration does not allow skipping episodes".into()));
        }
        let ep = self.episode.as_mut().expect("checked above");
        ep.skip().map_err(|_| (ErrorCode::EpisodeDone, "the episode is already over".to_string()))?;
        Ok(("episode_skipped", json!({ "reward": ep.state.reward, "passed": ep.passed(), "steps": ep.state.step, "done_reason": "user_skip" })))
    }

    fn stream_state(&mut self, seq: Option<u64>, p: StreamState) -> Reply {
        if !(1..=MAX_STREAM_HZ).contains(&p.hz) {
            return Err((ErrorCode::BadRate, format!("hz must be in 1..={MAX_STREAM_HZ}, got {}", p.hz)));
        }
        self.live()?;
        self.stream = Some(Stream { seq, hz: p.hz, frames: 0 });
        Ok(("stream_started", json!({ "hz": p.hz })))
    }

    fn trajectory(&self) -> Reply {
        let ep = self.live()?;
        Ok(("trajectory", json!({ "csv": ep.trajectory.to_csv(), "rows": ep.trajectory.rows.len() })))
    }

    /// Time between pushed state frames, when streaming.
    pub fn stream_interval(&self) -> Option<Duration> {
        self.stream.as_ref().map(|s| Duration::from_secs_f64(1.0 / s.hz as f64))
    }

    /// Next pushed frame of an active stream.
    pub fn state_frame(&mut self) -> Option<Envelope> {
        let state = self.state().ok()?;
        let stream = self.stream.as_mut()?;
        let frame = stream.frames;
        stream.frames += 1;
        let mut payload = to_value(&state);
        payload["frame"] = json!(frame);
        Some(Envelope::new(stream.seq, "state_frame", payload))
    }

    /// Observation of the live episode, for in-process users.
    pub fn observe(&self) -> Option<Observation> {
        self.episode.as_ref().and_then(|e| e.observe().ok())
    }
}
