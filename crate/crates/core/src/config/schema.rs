//! Typed view of arena configuration files and the conversion to and from
//! YAML node trees.

use super::diagnostics::{has_errors, ConfigError, Diagnostic};
use super::yaml::{self, Key, Node, Span, Value};
use crate::entities::{EntityKind, Skin};
use crate::math::Vec3;
use serde::Serialize;
use std::collections::BTreeMap;

/// A value with the position it was read from. Equality ignores the position.
#[derive(Clone, Debug, Serialize)]
pub struct Located<T> {
    pub value: T,
    #[serde(skip)]
    pub span: Span,
}

impl<T: PartialEq> PartialEq for Located<T> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<T> Located<T> {
    pub fn new(value: T, span: Span) -> Self {
        Self { value, span }
    }

    pub fn bare(value: T) -> Self {
        Self { value, span: Span::default() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Perspective {
    #[default]
    FirstPerson,
    ThirdPerson,
    BirdsEye,
}

impl Perspective {
    pub fn name(self) -> &'static str {
        match self {
            Perspective::FirstPerson => "first_person",
            Perspective::ThirdPerson => "third_person",
            Perspective::BirdsEye => "birds_eye",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "first_person" => Some(Perspective::FirstPerson),
            "third_person" => Some(Perspective::ThirdPerson),
            "birds_eye" => Some(Perspective::BirdsEye),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArenaConfigFile {
    pub show_notification: bool,
    pub can_reset_episode: bool,
    pub can_change_perspective: bool,
    pub default_perspective: Perspective,
    pub arenas: Vec<ArenaSpec>,
}

impl Default for ArenaConfigFile {
    fn default() -> Self {
        Self {
            show_notification: false,
            can_reset_episode: true,
            can_change_perspective: true,
            default_perspective: Perspective::FirstPerson,
            arenas: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArenaSpec {
    pub pass_mark: f64,
    /// Episode length in steps; 0 means untimed.
    pub t: u64,
    /// Raw `blackouts` list; see [`ArenaSpec::blackout_schedule`].
    pub blackouts: Vec<Located<i64>>,
    pub items: Vec<ItemSpec>,
    #[serde(skip)]
    pub span: Span,
}

impl Default for ArenaSpec {
    fn default() -> Self {
        Self { pass_mark: 0.0, t: 0, blackouts: Vec::new(), items: Vec::new(), span: Span::default() }
    }
}

/// Lights-out schedule.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Blackouts {
    #[default]
    Never,
    /// Boundaries `[a, b, c, d, ...]`: dark during `[a, b)`, `[c, d)`; an odd
    /// trailing boundary stays dark from there on.
    Intervals(Vec<u64>),
    /// Lit for `n` steps, dark for `n`, repeating.
    Alternating(u64),
}

impl ArenaSpec {
    pub fn blackout_schedule(&self) -> Result<Blackouts, String> {
        let raw: Vec<i64> = self.blackouts.iter().map(|b| b.value).collect();
        match raw.as_slice() {
            [] => Ok(Blackouts::Never),
            [n] if *n < 0 => Ok(Blackouts::Alternating(n.unsigned_abs())),
            _ => {
                if raw.iter().any(|b| *b < 0) {
                    return Err("a negative blackout entry must be the only entry".into());
                }
                if raw.windows(2).any(|w| w[0] >= w[1]) {
                    return Err("blackout boundaries must be strictly increasing".into());
                }
                Ok(Blackouts::Intervals(raw.iter().map(|b| *b as u64).collect()))
            }
        }
    }
}

/// Scalar per-instance attributes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NumAttr {
    FrozenAgentDelays,
    InitialValues,
    FinalValues,
    Delays,
    ChangeRates,
    SpawnCount,
    TimeBetweenSpawns,
    SpawnSize,
    SpawnProbability,
    ResetDuration,
}

impl NumAttr {
    pub const ALL: [NumAttr; 10] = [
        NumAttr::FrozenAgentDelays,
        NumAttr::InitialValues,
        NumAttr::FinalValues,
        NumAttr::Delays,
        NumAttr::ChangeRates,
        NumAttr::SpawnCount,
        NumAttr::TimeBetweenSpawns,
        NumAttr::SpawnSize,
        NumAttr::SpawnProbability,
        NumAttr::ResetDuration,
    ];

    pub fn key(self) -> &'static str {
        match self {
            NumAttr::FrozenAgentDelays => "frozenAgentDelays",
            NumAttr::InitialValues => "initialValues",
            NumAttr::FinalValues => "finalValues",
            NumAttr::Delays => "delays",
            NumAttr::ChangeRates => "changeRates",
            NumAttr::SpawnCount => "spawnCount",
            NumAttr::TimeBetweenSpawns => "timeBetweenSpawns",
            NumAttr::SpawnSize => "spawnSize",
            NumAttr::SpawnProbability => "spawnProbability",
            NumAttr::ResetDuration => "resetDuration",
        }
    }

    fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.key() == key)
    }

    /// Whether values must be whole numbers.
    pub fn integral(self) -> bool {
        matches!(self, NumAttr::FrozenAgentDelays | NumAttr::Delays | NumAttr::SpawnCount | NumAttr::TimeBetweenSpawns | NumAttr::ResetDuration)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemSpec {
    pub name: Located<EntityKind>,
    /// Components equal to -1 are randomised.
    pub positions: Vec<Located<Vec3>>,
    /// -1 is randomised.
    pub rotations: Vec<Located<f64>>,
    /// Components equal to -1 are randomised.
    pub sizes: Vec<Located<Vec3>>,
    /// Channels equal to -1 are randomised.
    pub colors: Vec<Located<[f64; 3]>>,
    pub skins: Vec<Located<Skin>>,
    pub symbol_names: Vec<Located<String>>,
    pub reward_weights: Vec<Located<[f64; 3]>>,
    pub reward_spawn_pos: Vec<Located<Vec3>>,
    pub numbers: BTreeMap<NumAttr, Vec<Located<f64>>>,
    /// Position of each attribute key, for diagnostics.
    #[serde(skip)]
    pub attribute_spans: BTreeMap<String, Span>,
}

impl ItemSpec {
    pub fn new(kind: EntityKind) -> Self {
        Self {
            name: Located::bare(kind),
            positions: Vec::new(),
            rotations: Vec::new(),
            sizes: Vec::new(),
            colors: Vec::new(),
            skins: Vec::new(),
            symbol_names: Vec::new(),
            reward_weights: Vec::new(),
            reward_spawn_pos: Vec::new(),
            numbers: BTreeMap::new(),
            attribute_spans: BTreeMap::new(),
        }
    }

    pub fn kind(&self) -> EntityKind {
        self.name.value
    }

    pub fn number(&self, attr: NumAttr) -> &[Located<f64>] {
        self.numbers.get(&attr).map_or(&[], |v| v.as_slice())
    }

    /// `(attribute name, list length)` for every present per-instance attribute.
    pub fn attribute_lengths(&self) -> Vec<(&'static str, usize)> {
        let mut out = vec![
            ("positions", self.positions.len()),
            ("rotations", self.rotations.len()),
            ("sizes", self.sizes.len()),
            ("colors", self.colors.len()),
            ("skins", self.skins.len()),
            ("symbolNames", self.symbol_names.len()),
            ("rewardWeights", self.reward_weights.len()),
            ("rewardSpawnPos", self.reward_spawn_pos.len()),
        ];
        out.extend(NumAttr::ALL.iter().map(|a| (a.key(), self.number(*a).len())));
        out.retain(|(_, n)| *n > 0);
        out
    }

    /// Number of instances this item describes: one per position, or as many
    /// as the longest attribute list when no positions are given.
    pub fn instance_count(&self) -> usize {
        if !self.positions.is_empty() {
            return self.positions.len();
        }
        self.attribute_lengths().iter().map(|(_, n)| *n).max().unwrap_or(1)
    }

    pub fn span_of(&self, attribute: &str) -> Span {
        self.attribute_spans.get(attribute).copied().unwrap_or(self.name.span)
    }
}

/// Broadcast lookup: length-1 lists apply to every instance.
pub fn pick<T>(list: &[T], i: usize) -> Option<&T> {
    match list.len() {
        0 => None,
        1 => list.first(),
        _ => list.get(i),
    }
}

// ---------------------------------------------------------------- reading

struct Reader {
    diagnostics: Vec<Diagnostic>,
}

impl Reader {
    fn error(&mut self, span: Span, path: &str, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::error(span, path, message));
    }

    fn warning(&mut self, span: Span, path: &str, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::warning(span, path, message));
    }

    fn check_tag(&mut self, node: &Node, expected: &str, path: &str) {
        match &node.tag {
            Some(t) if t == expected => {}
            Some(t) => self.error(node.span, path, format!("expected tag `!{expected}`, found `!{t}`")),
            None => self.warning(node.span, path, format!("missing tag `!{expected}`")),
        }
    }

    fn map<'n>(&mut self, node: &'n Node, path: &str) -> Option<&'n [(Key, Node)]> {
        match &node.value {
            Value::Map(m) => Some(m),
            Value::Null => Some(&[]),
            _ => {
                self.error(node.span, path, format!("expected a mapping, found a {}", node.kind_name()));
                None
            }
        }
    }

    /// Sequence elements; a lone non-sequence value counts as a one-element list.
    fn list<'n>(&mut self, node: &'n Node, path: &str) -> Vec<&'n Node> {
        match &node.value {
            Value::Seq(items) => items.iter().collect(),
            Value::Null => Vec::new(),
            Value::Scalar(_) | Value::Map(_) => {
                let _ = path;
                vec![node]
            }
        }
    }

    fn number(&mut self, node: &Node, path: &str) -> Option<f64> {
        match &node.value {
            Value::Scalar(s) if !s.quoted => match s.text.parse::<f64>() {
                Ok(v) if v.is_finite() => Some(v),
                _ => {
                    self.error(node.span, path, format!("expected a number, found `{}`", s.text));
                    None
                }
            },
            _ => {
                self.error(node.span, path, format!("expected a number, found a {}", describe(node)));
                None
            }
        }
    }

    fn integer(&mut self, node: &Node, path: &str) -> Option<i64> {
        let v = self.number(node, path)?;
        if v.fract() != 0.0 || v.abs() > 9.0e15 {
            self.error(node.span, path, format!("expected a whole number, found {v}"));
            return None;
        }
        Some(v as i64)
    }

    fn boolean(&mut self, node: &Node, path: &str) -> Option<bool> {
        if let Value::Scalar(s) = &node.value {
            if !s.quoted {
                match s.text.to_ascii_lowercase().as_str() {
                    "true" | "yes" | "on" => return Some(true),
                    "false" | "no" | "off" => return Some(false),
                    _ => {}
                }
            }
        }
        self.error(node.span, path, format!("expected true or false, found {}", describe(node)));
        None
    }

    fn string(&mut self, node: &Node, path: &str) -> Option<String> {
        match &node.value {
            Value::Scalar(s) => Some(s.text.clone()),
            _ => {
                self.error(node.span, path, format!("expected a string, found a {}", node.kind_name()));
                None
            }
        }
    }

    fn triple(&mut self, node: &Node, path: &str, tag: &str, keys: [&str; 3]) -> Option<[f64; 3]> {
        if let Some(t) = &node.tag {
            if t != tag {
                self.error(node.span, path, format!("expected tag `!{tag}`, found `!{t}`"));
                return None;
            }
        }
        let entries = match &node.value {
            Value::Map(m) => m,
            _ => {
                self.error(node.span, path, format!("expected `!{tag} {{{}: .., {}: .., {}: ..}}`", keys[0], keys[1], keys[2]));
                return None;
            }
        };
        let mut out = [0.0; 3];
        let mut seen = [false; 3];
        let mut ok = true;
        for (k, v) in entries {
            match keys.iter().position(|key| *key == k.text) {
                Some(i) => {
                    let p = format!("{path}.{}", k.text);
                    match self.number(v, &p) {
                        Some(x) => {
                            out[i] = x;
                            seen[i] = true;
                        }
                        None => ok = false,
                    }
                }
                None => {
                    self.error(k.span, path, format!("unknown key `{}` in `!{tag}`", k.text));
                    ok = false;
                }
            }
        }
        for (i, key) in keys.iter().enumerate() {
            if !seen[i] && ok {
                self.error(node.span, path, format!("`!{tag}` is missing `{key}`"));
                ok = false;
            }
        }
        ok.then_some(out)
    }

    fn vector(&mut self, node: &Node, path: &str) -> Option<Vec3> {
        self.triple(node, path, "Vector3", ["x", "y", "z"]).map(|[x, y, z]| Vec3::new(x, y, z))
    }

    fn file(&mut self, root: &Node) -> ArenaConfigFile {
        let mut cfg = ArenaConfigFile::default();
        if root.value == Value::Null {
            self.error(root.span, "", "empty configuration file");
            return cfg;
        }
        self.check_tag(root, "ArenaConfig", "");
        let Some(entries) = self.map(root, "") else { return cfg };
        let mut saw_arenas = false;
        for (k, v) in entries {
            let path = k.text.as_str();
            match path {
                "showNotification" => cfg.show_notification = self.boolean(v, path).unwrap_or(cfg.show_notification),
                "canResetEpisode" => cfg.can_reset_episode = self.boolean(v, path).unwrap_or(cfg.can_reset_episode),
                "canChangePerspective" => cfg.can_change_perspective = self.boolean(v, path).unwrap_or(cfg.can_change_perspective),
                "defaultPerspective" => {
                    if let Some(s) = self.string(v, path) {
                        match Perspective::parse(&s) {
                            Some(p) => cfg.default_perspective = p,
                            None => self.error(v.span, path, format!("unknown perspective `{s}` (expected first_person, third_person or birds_eye)")),
                        }
                    }
                }
                "arenas" => {
                    saw_arenas = true;
                    cfg.arenas = self.arenas(v);
                }
                other => self.warning(k.span, other, format!("unknown attribute `{other}` ignored")),
            }
        }
        if !saw_arenas {
            self.error(root.span, "arenas", "missing `arenas`");
        }
        cfg
    }

    fn arenas(&mut self, node: &Node) -> Vec<ArenaSpec> {
        let mut indexed: Vec<(i64, Span, ArenaSpec)> = Vec::new();
        let Some(entries) = self.map(node, "arenas") else { return Vec::new() };
        for (k, v) in entries {
            let path = format!("arenas.{}", k.text);
            let Ok(index) = k.text.parse::<i64>() else {
                self.error(k.span, &path, format!("arena index must be an integer, found `{}`", k.text));
                continue;
            };
            let arena = self.arena(v, &path);
            indexed.push((index, k.span, arena));
        }
        indexed.sort_by_key(|(i, _, _)| *i);
        for (expected, (index, span, _)) in indexed.iter().enumerate() {
            if *index != expected as i64 {
                self.error(*span, "arenas", format!("arena indices must run 0, 1, 2, ... without gaps; found {index} where {expected} was expected"));
                break;
            }
        }
        indexed.into_iter().map(|(_, _, a)| a).collect()
    }

    fn arena(&mut self, node: &Node, path: &str) -> ArenaSpec {
        let mut arena = ArenaSpec { span: node.span, ..ArenaSpec::default() };
        self.check_tag(node, "Arena", path);
        let Some(entries) = self.map(node, path) else { return arena };
        for (k, v) in entries {
            let p = format!("{path}.{}", k.text);
            match k.text.as_str() {
                "pass_mark" => arena.pass_mark = self.number(v, &p).unwrap_or(0.0),
                "t" => {
                    if let Some(t) = self.integer(v, &p) {
                        if t < 0 {
                            self.error(v.span, &p, format!("t must be non-negative, found {t}"));
                        } else {
                            arena.t = t as u64;
                        }
                    }
                }
                "blackouts" => {
                    for (i, b) in self.list(v, &p).into_iter().enumerate() {
                        if let Some(x) = self.integer(b, &format!("{p}[{i}]")) {
                            arena.blackouts.push(Located::new(x, b.span));
                        }
                    }
                }
                "items" => {
                    for (i, item) in self.list(v, &p).into_iter().enumerate() {
                        if let Some(spec) = self.item(item, &format!("{p}[{i}]")) {
                            arena.items.push(spec);
                        }
                    }
                }
                other => self.warning(k.span, &p, format!("unknown arena attribute `{other}` ignored")),
            }
        }
        arena
    }

    fn item(&mut self, node: &Node, path: &str) -> Option<ItemSpec> {
        self.check_tag(node, "Item", path);
        let entries = self.map(node, path)?;
        let Some((name_key, name_node)) = entries.iter().find(|(k, _)| k.text == "name") else {
            self.error(node.span, path, "item has no `name`");
            return None;
        };
        let name = self.string(name_node, &format!("{path}.name"))?;
        let kind = match name.parse::<EntityKind>() {
            Ok(k) => k,
            Err(e) => {
                self.error(name_node.span, &format!("{path}.name"), e.to_string());
                return None;
            }
        };
        let mut item = ItemSpec::new(kind);
        item.name.span = name_key.span;
        for (k, v) in entries {
            let key = k.text.as_str();
            let p = format!("{path}.{key}");
            if key == "name" {
                continue;
            }
            item.attribute_spans.insert(key.to_string(), k.span);
            let elems = self.list(v, &p);
            let at = |i: usize| format!("{p}[{i}]");
            match key {
                "positions" => item.positions = located(&elems, |i, n| self.vector(n, &at(i))),
                "sizes" => item.sizes = located(&elems, |i, n| self.vector(n, &at(i))),
                "rewardSpawnPos" => item.reward_spawn_pos = located(&elems, |i, n| self.vector(n, &at(i))),
                "rotations" => item.rotations = located(&elems, |i, n| self.number(n, &at(i))),
                "colors" => item.colors = located(&elems, |i, n| self.triple(n, &at(i), "RGB", ["r", "g", "b"])),
                "skins" => {
                    item.skins = located(&elems, |i, n| {
                        let s = self.string(n, &at(i))?;
                        match s.parse::<Skin>() {
                            Ok(skin) => Some(skin),
                            Err(e) => {
                                self.error(n.span, &at(i), e);
                                None
                            }
                        }
                    })
                }
                "symbolNames" => item.symbol_names = located(&elems, |i, n| self.string(n, &at(i))),
                "rewardWeights" => {
                    // a flat list of three numbers is one weight triple
                    let flat = elems.len() == 3 && elems.iter().all(|n| matches!(n.value, Value::Scalar(_)));
                    if flat {
                        let w: Vec<Option<f64>> = elems.iter().enumerate().map(|(i, n)| self.number(n, &at(i))).collect();
                        if let [Some(a), Some(b), Some(c)] = w[..] {
                            item.reward_weights = vec![Located::new([a, b, c], v.span)];
                        }
                    } else {
                        item.reward_weights = located(&elems, |i, n| {
                            let inner = n.as_seq().filter(|s| s.len() == 3);
                            match inner {
                                Some(s) => {
                                    let w: Vec<Option<f64>> = s.iter().enumerate().map(|(j, x)| self.number(x, &format!("{}[{j}]", at(i)))).collect();
                                    match w[..] {
                                        [Some(a), Some(b), Some(c)] => Some([a, b, c]),
                                        _ => None,
                                    }
                                }
                                None => {
                                    self.error(n.span, &at(i), "expected a list of three weights");
                                    None
                                }
                            }
                        });
                    }
                }
                _ => match NumAttr::from_key(key) {
                    Some(attr) => {
                        let values = located(&elems, |i, n| self.number(n, &at(i)));
                        item.numbers.insert(attr, values);
                    }
                    None => {
                        item.attribute_spans.remove(key);
                        self.warning(k.span, &p, format!("unknown attribute `{key}` ignored"));
                    }
                },
            }
        }
        Some(item)
    }
}

fn located<T>(nodes: &[&Node], mut f: impl FnMut(usize, &Node) -> Option<T>) -> Vec<Located<T>> {
    nodes.iter().enumerate().filter_map(|(i, n)| f(i, n).map(|v| Located::new(v, n.span))).collect()
}

fn describe(node: &Node) -> String {
    match &node.value {
        Value::Scalar(s) if s.quoted => format!("string \"{}\"", s.text),
        Value::Scalar(s) => format!("`{}`", s.text),
        _ => format!("a {}", node.kind_name()),
    }
}

/// Syntax check plus typed conversion. Warnings come back alongside the
/// result; any error fails the whole file.
pub fn parse_config(text: &str) -> Result<(ArenaConfigFile, Vec<Diagnostic>), ConfigError> {
    let root = yaml::parse(text).map_err(|e| ConfigError(vec![Diagnostic::error(e.span, "", e.message)]))?;
    config_from_node(&root)
}

pub fn config_from_node(root: &Node) -> Result<(ArenaConfigFile, Vec<Diagnostic>), ConfigError> {
    let mut reader = Reader { diagnostics: Vec::new() };
    let cfg = reader.file(root);
    if has_errors(&reader.diagnostics) {
        Err(ConfigError(reader.diagnostics))
    } else {
        Ok((cfg, reader.diagnostics))
    }
}

// ---------------------------------------------------------------- writing

fn num(v: f64) -> Node {
    Node::scalar(format!("{v}"))
}

fn triple_node(tag: &str, keys: [&str; 3], v: [f64; 3]) -> Node {
    let entries = keys.iter().zip(v).map(|(k, x)| (Key { text: k.to_string(), span: Span::default() }, num(x))).collect();
    Node::new(Value::Map(entries)).tagged(tag)
}

fn vector_node(v: Vec3) -> Node {
    triple_node("Vector3", ["x", "y", "z"], [v.x, v.y, v.z])
}

fn entry(key: &str, value: Node) -> (Key, Node) {
    (Key { text: key.to_string(), span: Span::default() }, value)
}

fn seq(items: Vec<Node>) -> Node {
    Node::new(Value::Seq(items))
}

pub fn item_to_node(item: &ItemSpec) -> Node {
    let mut e = vec![entry("name", Node::scalar(item.kind().name()))];
    if !item.positions.is_empty() {
        e.push(entry("positions", seq(item.positions.iter().map(|p| vector_node(p.value)).collect())));
    }
    if !item.rotations.is_empty() {
        e.push(entry("rotations", seq(item.rotations.iter().map(|r| num(r.value)).collect())));
    }
    if !item.sizes.is_empty() {
        e.push(entry("sizes", seq(item.sizes.iter().map(|s| vector_node(s.value)).collect())));
    }
    if !item.colors.is_empty() {
        e.push(entry("colors", seq(item.colors.iter().map(|c| triple_node("RGB", ["r", "g", "b"], c.value)).collect())));
    }
    if !item.skins.is_empty() {
        e.push(entry("skins", seq(item.skins.iter().map(|s| Node::string(s.value.name())).collect())));
    }
    if !item.symbol_names.is_empty() {
        e.push(entry("symbolNames", seq(item.symbol_names.iter().map(|s| Node::string(s.value.clone())).collect())));
    }
    for (attr, values) in &item.numbers {
        if !values.is_empty() {
            e.push(entry(attr.key(), seq(values.iter().map(|v| num(v.value)).collect())));
        }
    }
    match item.reward_weights.as_slice() {
        [] => {}
        [one] => e.push(entry("rewardWeights", seq(one.value.iter().map(|w| num(*w)).collect()))),
        many => e.push(entry("rewardWeights", seq(many.iter().map(|w| seq(w.value.iter().map(|x| num(*x)).collect())).collect()))),
    }
    if !item.reward_spawn_pos.is_empty() {
        e.push(entry("rewardSpawnPos", seq(item.reward_spawn_pos.iter().map(|p| vector_node(p.value)).collect())));
    }
    Node::new(Value::Map(e)).tagged("Item")
}

pub fn config_to_node(cfg: &ArenaConfigFile) -> Node {
    let arenas = cfg
        .arenas
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut e = vec![entry("pass_mark", num(a.pass_mark)), entry("t", Node::scalar(a.t.to_string()))];
            if !a.blackouts.is_empty() {
                e.push(entry("blackouts", seq(a.blackouts.iter().map(|b| Node::scalar(b.value.to_string())).collect())));
            }
            e.push(entry("items", seq(a.items.iter().map(item_to_node).collect())));
            entry(&i.to_string(), Node::new(Value::Map(e)).tagged("Arena"))
        })
        .collect();
    let bool_node = |b: bool| Node::scalar(if b { "true" } else { "false" });
    Node::new(Value::Map(vec![
        entry("showNotification", bool_node(cfg.show_notification)),
        entry("canResetEpisode", bool_node(cfg.can_reset_episode)),
        entry("canChangePerspective", bool_node(cfg.can_change_perspective)),
        entry("defaultPerspective", Node::scalar(cfg.default_perspective.name())),
        entry("arenas", Node::new(Value::Map(arenas))),
    ]))
    .tagged("ArenaConfig")
}

/// Canonical text form of a configuration.
pub fn serialize_config(cfg: &ArenaConfigFile) -> String {
    yaml::emit(&config_to_node(cfg))
}
