use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The nine discrete actions, in wire order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    #[default]
    NoAction,
    Forwards,
    Left,
    Right,
    ForwardsLeft,
    ForwardsRight,
    Backwards,
    BackwardsLeft,
    BackwardsRight,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown action `{0}`")]
pub struct UnknownAction(pub String);

impl Action {
    pub const ALL: [Action; 9] = [
        Action::NoAction,
        Action::Forwards,
        Action::Left,
        Action::Right,
        Action::ForwardsLeft,
        Action::ForwardsRight,
        Action::Backwards,
        Action::BackwardsLeft,
        Action::BackwardsRight,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Action> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::NoAction => "NoAction",
            Action::Forwards => "Forwards",
            Action::Left => "Left",
            Action::Right => "Right",
            Action::ForwardsLeft => "ForwardsLeft",
            Action::ForwardsRight => "ForwardsRight",
            Action::Backwards => "Backwards",
            Action::BackwardsLeft => "BackwardsLeft",
            Action::BackwardsRight => "BackwardsRight",
        }
    }

    /// -1 turns left (anticlockwise from above), +1 right.
    pub fn turn(self) -> f64 {
        match self {
            Action::Left | Action::ForwardsLeft | Action::BackwardsLeft => -1.0,
            Action::Right | Action::ForwardsRight | Action::BackwardsRight => 1.0,
            _ => 0.0,
        }
    }

    /// +1 drives forwards, -1 backwards.
    pub fn drive(self) -> f64 {
        match self {
            Action::Forwards | Action::ForwardsLeft | Action::ForwardsRight => 1.0,
            Action::Backwards | Action::BackwardsLeft | Action::BackwardsRight => -1.0,
            _ => 0.0,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Action {
    type Err = UnknownAction;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| UnknownAction(s.to_string()))
    }
}
