use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

macro_rules! entity_kinds {
    ($($variant:ident),* $(,)?) => {
        /// Every object the arena can hold, named as in configuration files.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum EntityKind {
            $($variant),*
        }

        impl EntityKind {
            pub const ALL: &'static [EntityKind] = &[$(EntityKind::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(EntityKind::$variant => stringify!($variant)),*
                }
            }
        }

        impl FromStr for EntityKind {
            type Err = UnknownKind;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $(stringify!($variant) => Ok(EntityKind::$variant),)*
                    _ => Err(UnknownKind(s.to_string())),
                }
            }
        }
    };
}

entity_kinds!(
    Agent,
    Wall,
    WallTransparent,
    Ramp,
    CylinderTunnel,
    CylinderTunnelTransparent,
    LightBlock,
    HeavyBlock,
    UBlock,
    LBlock,
    JBlock,
    GoodGoal,
    GoodGoalMulti,
    BadGoal,
    GoodGoalBounce,
    GoodGoalMultiBounce,
    BadGoalBounce,
    DecayGoal,
    RipenGoal,
    GrowGoal,
    ShrinkGoal,
    HotZone,
    DeathZone,
    SpawnerTree,
    SpawnerDispenserTall,
    SpawnerDispenserShort,
    SpawnerButton,
    SignBoard,
);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("unknown object name `{0}`")]
pub struct UnknownKind(pub String);

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The eight rows of the raycast observation, in row order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayCategory {
    ArenaBoundary = 0,
    Immovable = 1,
    Movable = 2,
    GoodGoal = 3,
    GoodGoalMulti = 4,
    Negative = 5,
    Dispenser = 6,
    Button = 7,
}

impl RayCategory {
    pub const COUNT: usize = 8;

    pub fn row(self) -> usize {
        self as usize
    }
}

impl EntityKind {
    pub fn ray_category(self) -> RayCategory {
        use EntityKind::*;
        match self {
            Wall | WallTransparent | Ramp | CylinderTunnel | CylinderTunnelTransparent | SignBoard => RayCategory::Immovable,
            Agent | LightBlock | HeavyBlock | UBlock | LBlock | JBlock => RayCategory::Movable,
            GoodGoal | GoodGoalBounce => RayCategory::GoodGoal,
            GoodGoalMulti | GoodGoalMultiBounce | DecayGoal | RipenGoal | GrowGoal | ShrinkGoal => RayCategory::GoodGoalMulti,
            BadGoal | BadGoalBounce | HotZone | DeathZone => RayCategory::Negative,
            SpawnerTree | SpawnerDispenserTall | SpawnerDispenserShort => RayCategory::Dispenser,
            SpawnerButton => RayCategory::Button,
        }
    }

    pub fn is_goal(self) -> bool {
        use EntityKind::*;
        matches!(
            self,
            GoodGoal | GoodGoalMulti | BadGoal | GoodGoalBounce | GoodGoalMultiBounce | BadGoalBounce | DecayGoal | RipenGoal | GrowGoal | ShrinkGoal
        )
    }

    pub fn is_bounce(self) -> bool {
        matches!(self, EntityKind::GoodGoalBounce | EntityKind::GoodGoalMultiBounce | EntityKind::BadGoalBounce)
    }

    pub fn is_zone(self) -> bool {
        matches!(self, EntityKind::HotZone | EntityKind::DeathZone)
    }

    pub fn is_movable_block(self) -> bool {
        use EntityKind::*;
        matches!(self, LightBlock | HeavyBlock | UBlock | LBlock | JBlock)
    }

    pub fn is_dispenser(self) -> bool {
        matches!(self, EntityKind::SpawnerTree | EntityKind::SpawnerDispenserTall | EntityKind::SpawnerDispenserShort)
    }

    /// Goals whose valence follows a schedule.
    pub fn is_scheduled(self) -> bool {
        use EntityKind::*;
        matches!(self, DecayGoal | RipenGoal | GrowGoal | ShrinkGoal)
    }

    /// Kinds that can be seen through.
    pub fn is_transparent(self) -> bool {
        use EntityKind::*;
        matches!(self, WallTransparent | CylinderTunnelTransparent | HotZone | DeathZone)
    }

    /// Whether `colors` may be set in a configuration file.
    pub fn color_configurable(self) -> bool {
        use EntityKind::*;
        matches!(self, Wall | Ramp | CylinderTunnel | SpawnerDispenserTall | SpawnerDispenserShort | SignBoard)
    }

    /// Whether `sizes` may be set in a configuration file.
    pub fn size_configurable(self) -> bool {
        use EntityKind::*;
        !matches!(self, Agent | SpawnerTree | SpawnerDispenserTall | SpawnerDispenserShort | SpawnerButton | SignBoard)
    }

    /// Whether a kind-specific configuration attribute applies to this kind.
    /// Unknown attribute names return false.
    pub fn accepts_attribute(self, attribute: &str) -> bool {
        use EntityKind::*;
        match attribute {
            "name" | "positions" | "rotations" => true,
            "sizes" => self.size_configurable(),
            "colors" => self.color_configurable(),
            "skins" | "frozenAgentDelays" => self == Agent,
            "initialValues" | "finalValues" | "delays" | "changeRates" => self.is_scheduled(),
            "symbolNames" => self == SignBoard,
            "spawnCount" | "timeBetweenSpawns" => self.is_dispenser(),
            "spawnSize" => self.is_dispenser() || self == SpawnerButton,
            "spawnProbability" | "rewardWeights" | "rewardSpawnPos" | "resetDuration" => self == SpawnerButton,
            _ => false,
        }
    }

    /// Movable blocks, goals and the agent respond to forces.
    pub fn is_dynamic(self) -> bool {
        self == EntityKind::Agent || self.is_movable_block() || self.is_goal()
    }
}
