//! The stepping protocol: newline-delimited JSON messages over TCP, or the
//! same objects in WebSocket text frames. See `docs/protocol.md`.

mod client;
mod server;
mod session;
mod wire;

pub use client::{Client, ClientError};
pub use server::{serve, Server, ServerError, ServerOptions};
pub use session::{Permissions, Session, SessionOptions};
pub use wire::{CameraWire, ColumnWire, EntityWire, EpisodeWire, InfoWire, ObservationWire, RaycastWire, StateWire, ViewWire, WireError};

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const PROTOCOL_VERSION: &str = "arena-lab/1";
/// Observation channels and read-only views a server offers.
pub const CAPABILITIES: [&str; 5] = ["raycast", "camera", "vector", "state", "view"];
pub const MAX_STREAM_HZ: u32 = 60;
pub const MAX_VIEW_COLUMNS: usize = 4096;

/// Every message, in both directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    /// Requests carry a client-chosen number; responses and stream frames
    /// repeat the number of the request they answer. `null` only on errors
    /// for frames whose number could not be read.
    pub seq: Option<u64>,
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default)]
    pub payload: Value,
}

impl Envelope {
    pub fn new(seq: Option<u64>, kind: impl Into<String>, payload: Value) -> Self {
        Self { seq, kind: kind.into(), payload }
    }

    pub fn error(seq: Option<u64>, code: ErrorCode, message: impl Into<String>) -> Self {
        Self::new(seq, "error", serde_json::json!({ "code": code.name(), "message": message.into() }))
    }

    pub fn is_error(&self) -> bool {
        self.kind == "error"
    }

    /// The `code` of an error message.
    pub fn error_code(&self) -> Option<&str> {
        self.is_error().then(|| self.payload.get("code").and_then(Value::as_str)).flatten()
    }

    /// One line of JSON without the trailing newline.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("envelopes always serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorCode {
    /// Not JSON, or not an object with `seq` and `type`.
    BadFrame,
    UnknownType,
    BadPayload,
    HelloRequired,
    VersionMismatch,
    NoConfig,
    BadConfig,
    BadArena,
    BadObsSpec,
    Instantiation,
    NoEpisode,
    EpisodeDone,
    BadAction,
    BadRate,
    NotPermitted,
    Fault,
}

impl ErrorCode {
    pub fn name(self) -> &'static str {
        match self {
            ErrorCode::BadFrame => "bad_frame",
            ErrorCode::UnknownType => "unknown_type",
            ErrorCode::BadPayload => "bad_payload",
            ErrorCode::HelloRequired => "hello_required",
            ErrorCode::VersionMismatch => "version_mismatch",
            ErrorCode::NoConfig => "no_config",
            ErrorCode::BadConfig => "bad_config",
            ErrorCode::BadArena => "bad_arena",
            ErrorCode::BadObsSpec => "bad_obs_spec",
            ErrorCode::Instantiation => "instantiation",
            ErrorCode::NoEpisode => "no_episode",
            ErrorCode::EpisodeDone => "episode_done",
            ErrorCode::BadAction => "bad_action",
            ErrorCode::BadRate => "bad_rate",
            ErrorCode::NotPermitted => "not_permitted",
            ErrorCode::Fault => "fault",
        }
    }
}
