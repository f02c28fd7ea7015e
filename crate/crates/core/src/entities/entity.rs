use super::kind::EntityKind;
use crate::math::{forward, Vec3};
use crate::physics::{Body, BoxPart, Collider, PhysicsParams, Pose, Shape};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntityId(pub u32);

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }

    pub fn lerp(self, other: Rgb, t: f64) -> Rgb {
        let t = t.clamp(0.0, 1.0);
        let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * t).round() as u8;
        Rgb::new(mix(self.r, other.r), mix(self.g, other.g), mix(self.b, other.b))
    }
}

/// Fixed geometry and colours for kinds whose appearance is not configurable.
pub mod constants {
    use super::Rgb;
    use crate::math::Vec3;

    pub const AGENT_SIZE: Vec3 = Vec3::new(1.0, 1.0, 1.0);
    pub const DEFAULT_SIZE: Vec3 = Vec3::new(1.0, 1.0, 1.0);
    pub const DEFAULT_TUNNEL_SIZE: Vec3 = Vec3::new(2.5, 2.5, 4.0);
    /// Range for randomised (`-1`) size components.
    pub const RANDOM_SIZE_RANGE: (f64, f64) = (0.5, 5.0);
    /// Smallest diameter a growing or shrinking goal is drawn with.
    pub const MIN_GOAL_SIZE: f64 = 0.1;

    pub const TREE_TRUNK_SIZE: Vec3 = Vec3::new(0.6, 3.0, 0.6);
    pub const TREE_BRANCH_RADIUS: f64 = 2.0;
    pub const TREE_BRANCH_HEIGHT: f64 = 4.0;
    pub const DISPENSER_TALL_SIZE: Vec3 = Vec3::new(1.5, 3.0, 1.5);
    pub const DISPENSER_SHORT_SIZE: Vec3 = Vec3::new(1.5, 1.5, 1.5);
    pub const DISPENSER_TALL_HATCH: f64 = 1.0;
    pub const DISPENSER_SHORT_HATCH: f64 = 0.3;
    pub const BUTTON_SIZE: Vec3 = Vec3::new(1.0, 1.5, 1.0);
    pub const SIGN_BOARD_SIZE: Vec3 = Vec3::new(2.0, 2.0, 0.2);
    /// Cosine threshold between the contact normal and the button face normal.
    pub const BUTTON_FACE_COS: f64 = 0.7;

    pub const GOOD_GOAL: Rgb = Rgb::new(0, 200, 0);
    pub const GOOD_GOAL_MULTI: Rgb = Rgb::new(240, 190, 0);
    pub const BAD_GOAL: Rgb = Rgb::new(200, 0, 0);
    pub const SCHEDULE_FULL: Rgb = Rgb::new(128, 0, 160);
    pub const SCHEDULE_EMPTY: Rgb = Rgb::new(128, 128, 128);
    pub const HOT_ZONE: Rgb = Rgb::new(255, 140, 0);
    pub const DEATH_ZONE: Rgb = Rgb::new(255, 0, 0);
    pub const BLOCK: Rgb = Rgb::new(150, 150, 150);
    pub const TREE: Rgb = Rgb::new(110, 70, 30);
    pub const BUTTON: Rgb = Rgb::new(220, 200, 160);
    pub const BUTTON_FACE: Rgb = Rgb::new(0, 0, 255);
    pub const WALL: Rgb = Rgb::new(153, 153, 153);
    pub const WALL_TRANSPARENT: Rgb = Rgb::new(200, 220, 255);
    pub const RAMP: Rgb = Rgb::new(220, 120, 160);
    pub const DISPENSER: Rgb = Rgb::new(200, 200, 200);
    pub const SIGN_SYMBOL: Rgb = Rgb::new(0, 0, 0);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Skin {
    Hedgehog,
    Panda,
    Pig,
}

impl Skin {
    pub fn name(self) -> &'static str {
        match self {
            Skin::Hedgehog => "hedgehog",
            Skin::Panda => "panda",
            Skin::Pig => "pig",
        }
    }

    pub fn color(self) -> Rgb {
        match self {
            Skin::Hedgehog => Rgb::new(120, 80, 40),
            Skin::Panda => Rgb::new(235, 235, 235),
            Skin::Pig => Rgb::new(255, 170, 180),
        }
    }
}

impl FromStr for Skin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hedgehog" => Ok(Skin::Hedgehog),
            "panda" => Ok(Skin::Panda),
            "pig" => Ok(Skin::Pig),
            other => Err(format!("unknown skin `{other}` (expected hedgehog, panda or pig)")),
        }
    }
}

pub const SIGN_SYMBOLS: &[&str] = &[
    "left-arrow",
    "right-arrow",
    "up-arrow",
    "down-arrow",
    "u-turn-arrow",
    "letter-a",
    "letter-b",
    "letter-c",
    "square",
    "triangle",
    "circle",
    "star",
    "tick",
    "cross",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "rgb", rename_all = "snake_case")]
pub enum SignCell {
    Color(Rgb),
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignContent {
    Preset { symbol: String, color: Rgb },
    Grid { width: usize, height: usize, cells: Vec<SignCell> },
}

impl SignContent {
    /// Parses a symbol name or a pixel-grid pattern such as `"010/1*1/010"`
    /// (`1` = symbol colour, `0` = white, `*` = random).
    pub fn parse(text: &str, color: Rgb) -> Result<Self, String> {
        if SIGN_SYMBOLS.contains(&text) {
            return Ok(SignContent::Preset { symbol: text.to_string(), color });
        }
        let rows: Vec<&str> = text.split('/').collect();
        let width = rows[0].chars().count();
        if width == 0 || rows.iter().any(|r| r.chars().count() != width) {
            return Err(format!("`{text}` is neither a preset symbol nor a rectangular pixel grid"));
        }
        let mut cells = Vec::with_capacity(width * rows.len());
        for row in &rows {
            for ch in row.chars() {
                cells.push(match ch {
                    '1' => SignCell::Color(color),
                    '0' => SignCell::Color(Rgb::new(255, 255, 255)),
                    '*' => SignCell::Random,
                    other => return Err(format!("invalid pixel `{other}` in grid `{text}`")),
                });
            }
        }
        Ok(SignContent::Grid { width, height: rows.len(), cells })
    }

    fn resolve_random<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        if let SignContent::Grid { cells, .. } = self {
            for cell in cells.iter_mut() {
                if *cell == SignCell::Random {
                    *cell = SignCell::Color(Rgb::new(rng.random(), rng.random(), rng.random()));
                }
            }
        }
    }
}

/// Valence that moves from `initial` towards `final_value` after `delay` steps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValenceSchedule {
    pub initial: f64,
    pub final_value: f64,
    pub delay: u64,
    /// Magnitude of the per-step change; the sign in configuration files is ignored.
    pub change_rate: f64,
    pub size_tracks_valence: bool,
    /// Steps since spawn.
    pub age: u64,
    /// Steps in which the value actually moved.
    pub active_steps: u64,
}

impl ValenceSchedule {
    pub fn new(initial: f64, final_value: f64, delay: u64, change_rate: f64, size_tracks_valence: bool) -> Self {
        Self { initial, final_value, delay, change_rate: change_rate.abs(), size_tracks_valence, age: 0, active_steps: 0 }
    }

    pub fn value_after(&self, active_steps: u64) -> f64 {
        let span = (self.final_value - self.initial).abs();
        let moved = (self.change_rate * active_steps as f64).min(span);
        if self.final_value >= self.initial {
            self.initial + moved
        } else {
            self.initial - moved
        }
    }

    pub fn current(&self) -> f64 {
        self.value_after(self.active_steps)
    }

    /// Fraction of the way from the lower to the higher endpoint.
    pub fn fullness(&self) -> f64 {
        let lo = self.initial.min(self.final_value);
        let hi = self.initial.max(self.final_value);
        if hi - lo <= 0.0 {
            1.0
        } else {
            (self.current() - lo) / (hi - lo)
        }
    }

    pub fn is_finished(&self) -> bool {
        self.current() == self.final_value
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ButtonState {
    pub spawn_probability: f64,
    /// Weights for GoodGoal, GoodGoalMulti and BadGoal.
    pub reward_weights: [f64; 3],
    pub reward_spawn_position: Vec3,
    pub reset_duration: u64,
    pub cooldown_remaining: u64,
}

impl ButtonState {
    pub const REWARD_KINDS: [EntityKind; 3] = [EntityKind::GoodGoal, EntityKind::GoodGoalMulti, EntityKind::BadGoal];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispenserState {
    /// `None` dispenses forever.
    pub remaining_spawn_count: Option<u32>,
    /// 0 disables timed dispensing (buttons).
    pub time_between_spawns: u64,
    pub countdown: u64,
    pub spawned_goal_size: f64,
    pub button: Option<ButtonState>,
}

/// Fully resolved per-instance description of an entity to build.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct EntitySpec {
    pub kind: Option<EntityKind>,
    pub color: Option<Rgb>,
    pub skin: Option<Skin>,
    pub frozen_agent_delay: Option<u64>,
    pub initial_value: Option<f64>,
    pub final_value: Option<f64>,
    pub delay: Option<u64>,
    pub change_rate: Option<f64>,
    pub symbol: Option<String>,
    pub spawn_count: Option<i64>,
    pub time_between_spawns: Option<u64>,
    pub spawn_size: Option<f64>,
    pub spawn_probability: Option<f64>,
    pub reward_weights: Option<[f64; 3]>,
    pub reward_spawn_position: Option<Vec3>,
    pub reset_duration: Option<u64>,
}

impl EntitySpec {
    pub fn of(kind: EntityKind) -> Self {
        Self { kind: Some(kind), ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EntityError {
    #[error("entity spec has no kind")]
    MissingKind,
    #[error("attribute `{attribute}` not applicable to {kind}")]
    NotApplicable { attribute: &'static str, kind: EntityKind },
    #[error("invalid {attribute} for {kind}: {reason}")]
    Invalid { attribute: &'static str, kind: EntityKind, reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    pub kind: EntityKind,
    pub body: Body,
    pub collider: Collider,
    pub color: Rgb,
    pub size: Vec3,
    pub schedule: Option<ValenceSchedule>,
    pub dispenser: Option<DispenserState>,
    pub sign: Option<SignContent>,
    pub skin: Option<Skin>,
    /// Initial frozen period (agent only).
    pub frozen_delay: u64,
}

impl Entity {
    /// Current valence magnitude for goals; zero for everything else.
    pub fn value(&self) -> f64 {
        match &self.schedule {
            Some(s) => s.current(),
            None if self.kind.is_goal() => self.size.x,
            None => 0.0,
        }
    }

    /// Colour as currently displayed (schedule goals fade between two colours).
    pub fn display_color(&self) -> Rgb {
        match (&self.schedule, self.kind) {
            (Some(s), EntityKind::DecayGoal | EntityKind::RipenGoal) => constants::SCHEDULE_EMPTY.lerp(constants::SCHEDULE_FULL, s.fullness()),
            _ => self.color,
        }
    }

    /// World-space outward normal of a button's pressable face.
    pub fn button_face_normal(&self) -> Vec3 {
        -forward(self.body.pose.yaw)
    }
}

fn check(kind: EntityKind, attribute: &'static str, present: bool) -> Result<(), EntityError> {
    if present && !kind.accepts_attribute(attribute) {
        Err(EntityError::NotApplicable { attribute, kind })
    } else {
        Ok(())
    }
}

fn goal_sphere(diameter: f64) -> Collider {
    Collider::solid(Shape::Sphere { radius: diameter.max(constants::MIN_GOAL_SIZE) / 2.0 })
}

fn box_collider(size: Vec3) -> Collider {
    Collider::solid(Shape::Box { half: size / 2.0 })
}

/// Hemi-cylindrical tunnel along local `z`: two side walls below an arch of
/// six angled segments. `size` is (width, height, length).
pub fn tunnel_collider(size: Vec3) -> Collider {
    let radius = size.x / 2.0;
    let thickness = (0.08 * size.x).max(0.1).min(radius * 0.5);
    let spring = (size.y - radius).max(0.0);
    let mut parts = Vec::with_capacity(8);
    if spring > 0.01 {
        for side in [-1.0, 1.0] {
            parts.push(BoxPart {
                offset: Vec3::new(side * (radius - thickness / 2.0), spring / 2.0, 0.0),
                half: Vec3::new(thickness / 2.0, spring / 2.0, size.z / 2.0),
                roll: 0.0,
            });
        }
    }
    let mid = radius - thickness / 2.0;
    let chord = 2.0 * radius * 15f64.to_radians().sin() * 1.05;
    for i in 0..6 {
        let theta = 15.0 + 30.0 * i as f64;
        let (s, c) = theta.to_radians().sin_cos();
        parts.push(BoxPart { offset: Vec3::new(mid * c, spring + mid * s, 0.0), half: Vec3::new(thickness / 2.0, chord / 2.0, size.z / 2.0), roll: theta });
    }
    Collider::solid(Shape::Compound(parts))
}

/// U/L/J blocks as compounds. `size` is the bounding box.
fn shaped_block(kind: EntityKind, size: Vec3) -> Collider {
    let t = 0.25 * size.x.min(size.z);
    let h = size.y / 2.0;
    let foot = BoxPart { offset: Vec3::new(0.0, h, -size.z / 2.0 + t / 2.0), half: Vec3::new(size.x / 2.0, h, t / 2.0), roll: 0.0 };
    let arm = |side: f64| BoxPart { offset: Vec3::new(side * (size.x / 2.0 - t / 2.0), h, 0.0), half: Vec3::new(t / 2.0, h, size.z / 2.0), roll: 0.0 };
    let parts = match kind {
        EntityKind::UBlock => vec![foot, arm(-1.0), arm(1.0)],
        EntityKind::LBlock => vec![foot, arm(-1.0)],
        _ => vec![foot, arm(1.0)],
    };
    Collider::solid(Shape::Compound(parts))
}

/// Geometry actually used for a kind, given the configured (or default) size.
pub fn effective_size(kind: EntityKind, configured: Option<Vec3>) -> Vec3 {
    use constants::*;
    match kind {
        EntityKind::Agent => AGENT_SIZE,
        EntityKind::SpawnerTree => TREE_TRUNK_SIZE,
        EntityKind::SpawnerDispenserTall => DISPENSER_TALL_SIZE,
        EntityKind::SpawnerDispenserShort => DISPENSER_SHORT_SIZE,
        EntityKind::SpawnerButton => BUTTON_SIZE,
        EntityKind::SignBoard => SIGN_BOARD_SIZE,
        EntityKind::CylinderTunnel | EntityKind::CylinderTunnelTransparent => configured.unwrap_or(DEFAULT_TUNNEL_SIZE),
        _ => configured.unwrap_or(DEFAULT_SIZE),
    }
}

/// Collider for a kind at a given size (goal diameter is `size.x`).
pub fn collider_for(kind: EntityKind, size: Vec3) -> Collider {
    use EntityKind::*;
    match kind {
        Agent => Collider::solid(Shape::Sphere { radius: 0.5 }),
        Ramp => Collider::solid(Shape::Ramp { half: size / 2.0 }),
        CylinderTunnel | CylinderTunnelTransparent => tunnel_collider(size),
        UBlock | LBlock | JBlock => shaped_block(kind, size),
        HotZone | DeathZone => Collider::zone(size / 2.0),
        k if k.is_goal() => goal_sphere(size.x),
        _ => box_collider(size),
    }
}

fn default_color(kind: EntityKind) -> Rgb {
    use constants::*;
    use EntityKind::*;
    match kind {
        Agent => Skin::Hedgehog.color(),
        Wall | CylinderTunnel | CylinderTunnelTransparent => WALL,
        WallTransparent => WALL_TRANSPARENT,
        Ramp => RAMP,
        LightBlock | HeavyBlock | UBlock | LBlock | JBlock => BLOCK,
        GoodGoal | GoodGoalBounce => GOOD_GOAL,
        GoodGoalMulti | GoodGoalMultiBounce | GrowGoal | ShrinkGoal => GOOD_GOAL_MULTI,
        BadGoal | BadGoalBounce => BAD_GOAL,
        DecayGoal => SCHEDULE_FULL,
        RipenGoal => SCHEDULE_EMPTY,
        HotZone => HOT_ZONE,
        DeathZone => DEATH_ZONE,
        SpawnerTree => TREE,
        SpawnerDispenserTall | SpawnerDispenserShort => DISPENSER,
        SpawnerButton => BUTTON,
        SignBoard => Rgb::new(255, 255, 255),
    }
}

fn mass(kind: EntityKind) -> f64 {
    use EntityKind::*;
    match kind {
        HeavyBlock => 2.0,
        UBlock | LBlock | JBlock => 1.5,
        _ => 1.0,
    }
}

/// Builds an entity from a resolved spec. `pose` is the final bottom-centre
/// placement and `size` the resolved size (ignored for fixed-size kinds).
pub fn build_entity<R: Rng + ?Sized>(
    id: EntityId,
    spec: &EntitySpec,
    pose: Pose,
    size: Option<Vec3>,
    params: &PhysicsParams,
    rng: &mut R,
) -> Result<Entity, EntityError> {
    use EntityKind::*;
    let kind = spec.kind.ok_or(EntityError::MissingKind)?;
    let scheduled = kind.is_scheduled();
    let dispenser = kind.is_dispenser();
    let button = kind == SpawnerButton;
    check(kind, "skins", spec.skin.is_some())?;
    check(kind, "frozenAgentDelays", spec.frozen_agent_delay.is_some())?;
    check(kind, "colors", spec.color.is_some())?;
    check(kind, "sizes", size.is_some())?;
    check(kind, "initialValues", spec.initial_value.is_some())?;
    check(kind, "finalValues", spec.final_value.is_some())?;
    check(kind, "delays", spec.delay.is_some())?;
    check(kind, "changeRates", spec.change_rate.is_some())?;
    check(kind, "symbolNames", spec.symbol.is_some())?;
    check(kind, "spawnCount", spec.spawn_count.is_some())?;
    check(kind, "timeBetweenSpawns", spec.time_between_spawns.is_some())?;
    check(kind, "spawnSize", spec.spawn_size.is_some())?;
    check(kind, "spawnProbability", spec.spawn_probability.is_some())?;
    check(kind, "rewardWeights", spec.reward_weights.is_some())?;
    check(kind, "rewardSpawnPos", spec.reward_spawn_position.is_some())?;
    check(kind, "resetDuration", spec.reset_duration.is_some())?;

    let mut size = effective_size(kind, size);
    let schedule = scheduled.then(|| {
        let (initial, final_default) = match kind {
            DecayGoal | ShrinkGoal => (size.x, 0.0),
            _ => (0.0, size.x),
        };
        ValenceSchedule::new(
            spec.initial_value.unwrap_or(initial),
            spec.final_value.unwrap_or(final_default),
            spec.delay.unwrap_or(0),
            spec.change_rate.unwrap_or(0.005),
            matches!(kind, GrowGoal | ShrinkGoal),
        )
    });
    if let Some(s) = &schedule {
        if !(s.initial.is_finite() && s.final_value.is_finite() && s.change_rate.is_finite()) {
            return Err(EntityError::Invalid { attribute: "initialValues", kind, reason: "non-finite schedule".into() });
        }
        if s.size_tracks_valence {
            let d = s.current().max(constants::MIN_GOAL_SIZE);
            size = Vec3::splat(d);
        }
    }

    let collider = collider_for(kind, size);
    let mut body = if kind.is_dynamic() { Body::dynamic(pose, mass(kind)) } else { Body::fixed(pose) };
    if kind.is_goal() {
        body.sliding = false;
    }
    if kind.is_bounce() {
        body.velocity = forward(pose.yaw) * params.bounce_speed;
    }

    let spawn_size = spec.spawn_size.unwrap_or(1.0);
    if !(spawn_size > 0.0 && spawn_size.is_finite()) {
        return Err(EntityError::Invalid { attribute: "spawnSize", kind, reason: format!("{spawn_size} is not positive") });
    }
    let dispenser_state = if dispenser {
        let interval = spec.time_between_spawns.unwrap_or(25);
        let remaining = match spec.spawn_count.unwrap_or(-1) {
            n if n < 0 => None,
            n => Some(n as u32),
        };
        Some(DispenserState {
            remaining_spawn_count: remaining,
            time_between_spawns: interval,
            countdown: interval,
            spawned_goal_size: spawn_size,
            button: None,
        })
    } else if button {
        let weights = spec.reward_weights.unwrap_or([1.0, 1.0, 1.0]);
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) || weights.iter().sum::<f64>() <= 0.0 {
            return Err(EntityError::Invalid { attribute: "rewardWeights", kind, reason: "weights must be non-negative and not all zero".into() });
        }
        let probability = spec.spawn_probability.unwrap_or(1.0);
        if !(0.0..=1.0).contains(&probability) {
            return Err(EntityError::Invalid { attribute: "spawnProbability", kind, reason: format!("{probability} outside [0, 1]") });
        }
        let default_spawn = pose.position + (-forward(pose.yaw)) * 3.0;
        Some(DispenserState {
            remaining_spawn_count: None,
            time_between_spawns: 0,
            countdown: 0,
            spawned_goal_size: spawn_size,
            button: Some(ButtonState {
                spawn_probability: probability,
                reward_weights: weights,
                reward_spawn_position: spec.reward_spawn_position.unwrap_or(default_spawn),
                reset_duration: spec.reset_duration.unwrap_or(10),
                cooldown_remaining: 0,
            }),
        })
    } else {
        None
    };

    let base_color = spec.color.unwrap_or_else(|| match (kind, spec.skin) {
        (Agent, Some(skin)) => skin.color(),
        (SignBoard, _) => constants::SIGN_SYMBOL,
        _ => default_color(kind),
    });
    let mut sign = None;
    if kind == SignBoard {
        let text = spec.symbol.as_deref().unwrap_or("square");
        let mut content = SignContent::parse(text, base_color).map_err(|reason| EntityError::Invalid { attribute: "symbolNames", kind, reason })?;
        content.resolve_random(rng);
        sign = Some(content);
    }
    let color = if kind == SignBoard { Rgb::new(255, 255, 255) } else { base_color };

    Ok(Entity {
        id,
        kind,
        body,
        collider,
        color,
        size,
        schedule,
        dispenser: dispenser_state,
        sign,
        skin: if kind == Agent { Some(spec.skin.unwrap_or(Skin::Hedgehog)) } else { None },
        frozen_delay: spec.frozen_agent_delay.unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn build(spec: EntitySpec, size: Option<Vec3>) -> Result<Entity, EntityError> {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        build_entity(EntityId(1), &spec, Pose::new(Vec3::new(20.0, 0.0, 20.0), 0.0), size, &PhysicsParams::default(), &mut rng)
    }

    #[test]
    fn heavy_block_box_and_mass() {
        let e = build(EntitySpec::of(EntityKind::HeavyBlock), Some(Vec3::new(2.0, 1.0, 1.0))).unwrap();
        assert_eq!(e.collider.shape, Shape::Box { half: Vec3::new(1.0, 0.5, 0.5) });
        assert_eq!(e.body.mass, 2.0);
        assert!(!e.body.immovable);
    }

    #[test]
    fn shaped_blocks_weigh_one_and_a_half() {
        for kind in [EntityKind::UBlock, EntityKind::LBlock, EntityKind::JBlock] {
            let e = build(EntitySpec::of(kind), None).unwrap();
            assert_eq!(e.body.mass, 1.5);
            assert!(e.collider.is_valid());
        }
    }

    #[test]
    fn good_goal_valence_equals_size() {
        let e = build(EntitySpec::of(EntityKind::GoodGoal), Some(Vec3::splat(2.0))).unwrap();
        assert_eq!(e.collider.shape, Shape::Sphere { radius: 1.0 });
        assert_eq!(e.value(), 2.0);
    }

    #[test]
    fn decay_schedule_is_housed_verbatim() {
        let spec = EntitySpec {
            initial_value: Some(2.5),
            final_value: Some(0.0),
            delay: Some(100),
            change_rate: Some(-0.003),
            ..EntitySpec::of(EntityKind::DecayGoal)
        };
        let e = build(spec, None).unwrap();
        let s = e.schedule.unwrap();
        assert_eq!((s.initial, s.final_value, s.delay, s.change_rate), (2.5, 0.0, 100, 0.003));
        assert!(!s.size_tracks_valence);
    }

    #[test]
    fn skins_on_a_wall_is_rejected() {
        let spec = EntitySpec { skin: Some(Skin::Pig), ..EntitySpec::of(EntityKind::Wall) };
        assert_eq!(build(spec, None).unwrap_err(), EntityError::NotApplicable { attribute: "skins", kind: EntityKind::Wall });
    }

    #[test]
    fn bounce_goal_launches_along_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = build_entity(
            EntityId(3),
            &EntitySpec::of(EntityKind::GoodGoalBounce),
            Pose::new(Vec3::new(10.0, 0.0, 10.0), 90.0),
            None,
            &PhysicsParams::default(),
            &mut rng,
        )
        .unwrap();
        assert!((e.body.velocity - Vec3::new(1.0, 0.0, 0.0)).length() < 1e-12);
    }

    #[test]
    fn sign_grid_patterns() {
        let s = SignContent::parse("01/*1", Rgb::new(1, 2, 3)).unwrap();
        match s {
            SignContent::Grid { width, height, cells } => {
                assert_eq!((width, height), (2, 2));
                assert_eq!(cells[2], SignCell::Random);
                assert_eq!(cells[1], SignCell::Color(Rgb::new(1, 2, 3)));
            }
            _ => panic!("expected grid"),
        }
        assert!(SignContent::parse("01/1", Rgb::default()).is_err());
        assert!(matches!(SignContent::parse("star", Rgb::default()).unwrap(), SignContent::Preset { .. }));
    }

    #[test]
    fn tunnel_is_navigable_by_the_agent() {
        let c = tunnel_collider(constants::DEFAULT_TUNNEL_SIZE);
        let pose = Pose::new(Vec3::new(20.0, 0.0, 20.0), 0.0);
        // agent-sized sphere centred in the opening does not touch the walls
        let agent = Collider::solid(Shape::Sphere { radius: 0.5 });
        assert!(crate::physics::collider_contact(&agent, &pose, &c, &pose).is_none());
        assert!(c.contains_point(&pose, Vec3::new(20.0 + 1.2, 0.5, 20.0)));
    }
}
