use super::diagnostics::Diagnostic;
use super::schema::{ArenaConfigFile, ArenaSpec, ItemSpec, NumAttr};
use crate::entities::{EntityKind, Rgb, SignContent};
use crate::physics::ARENA_SIZE;

/// Semantic checks on a parsed file. Errors block instantiation; warnings do not.
pub fn validate(config: &ArenaConfigFile) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if config.arenas.is_empty() {
        out.push(Diagnostic::error(Default::default(), "arenas", "no arenas defined"));
    }
    for (i, arena) in config.arenas.iter().enumerate() {
        validate_arena(arena, &format!("arenas.{i}"), &mut out);
    }
    out
}

pub fn validate_arena(arena: &ArenaSpec, path: &str, out: &mut Vec<Diagnostic>) {
    if !arena.pass_mark.is_finite() {
        out.push(Diagnostic::error(arena.span, format!("{path}.pass_mark"), "pass_mark must be finite"));
    }
    if let Err(e) = arena.blackout_schedule() {
        let span = arena.blackouts.first().map_or(arena.span, |b| b.span);
        out.push(Diagnostic::error(span, format!("{path}.blackouts"), e));
    }
    if arena.items.is_empty() {
        out.push(Diagnostic::warning(arena.span, format!("{path}.items"), "arena has no items; the agent will be placed at random"));
    }
    let agents: Vec<&ItemSpec> = arena.items.iter().filter(|i| i.kind() == EntityKind::Agent).collect();
    match agents.as_slice() {
        [] if !arena.items.is_empty() => {
            out.push(Diagnostic::warning(arena.span, format!("{path}.items"), "no Agent item; the agent will be placed at random"))
        }
        [_, second, ..] => out.push(Diagnostic::error(second.name.span, format!("{path}.items"), "more than one Agent item")),
        [only] if only.instance_count() > 1 => {
            out.push(Diagnostic::error(only.name.span, format!("{path}.items"), "the Agent item describes more than one agent"))
        }
        _ => {}
    }
    for (i, item) in arena.items.iter().enumerate() {
        validate_item(item, &format!("{path}.items[{i}]"), out);
    }
}

fn validate_item(item: &ItemSpec, path: &str, out: &mut Vec<Diagnostic>) {
    let kind = item.kind();
    let mut err = |span, p: String, msg: String| out.push(Diagnostic::error(span, p, msg));

    for (attr, _) in item.attribute_lengths() {
        if !kind.accepts_attribute(attr) {
            err(item.span_of(attr), format!("{path}.{attr}"), format!("attribute `{attr}` not applicable to {kind}"));
        }
    }

    let n = item.instance_count();
    for (attr, len) in item.attribute_lengths() {
        if len != 1 && len != n {
            err(item.span_of(attr), format!("{path}.{attr}"), format!("length mismatch: `{attr}` has {len} entries but the item has {n} instances"));
        }
    }

    let in_bounds = |v: f64| v == -1.0 || (0.0..=ARENA_SIZE).contains(&v);
    for (i, p) in item.positions.iter().enumerate() {
        for (axis, v) in [("x", p.value.x), ("y", p.value.y), ("z", p.value.z)] {
            if !in_bounds(v) {
                err(p.span, format!("{path}.positions[{i}].{axis}"), format!("position {axis} = {v} is out of arena bounds [0, {ARENA_SIZE}]"));
            }
        }
    }
    for (i, p) in item.reward_spawn_pos.iter().enumerate() {
        for (axis, v) in [("x", p.value.x), ("y", p.value.y), ("z", p.value.z)] {
            if !(0.0..=ARENA_SIZE).contains(&v) {
                err(p.span, format!("{path}.rewardSpawnPos[{i}].{axis}"), format!("spawn position {axis} = {v} is out of arena bounds [0, {ARENA_SIZE}]"));
            }
        }
    }
    for (i, s) in item.sizes.iter().enumerate() {
        for (axis, v) in [("x", s.value.x), ("y", s.value.y), ("z", s.value.z)] {
            if v != -1.0 && !(v > 0.0 && v <= ARENA_SIZE) {
                err(s.span, format!("{path}.sizes[{i}].{axis}"), format!("size {axis} = {v} must be in (0, {ARENA_SIZE}] or -1"));
            }
        }
    }
    for (i, c) in item.colors.iter().enumerate() {
        for (ch, v) in ["r", "g", "b"].iter().zip(c.value) {
            if v != -1.0 && !(v.fract() == 0.0 && (0.0..=255.0).contains(&v)) {
                err(c.span, format!("{path}.colors[{i}].{ch}"), format!("color channel {ch} = {v} must be an integer in [0, 255] or -1"));
            }
        }
    }
    for (i, r) in item.rotations.iter().enumerate() {
        if r.value != -1.0 && !(0.0..=360.0).contains(&r.value) {
            err(r.span, format!("{path}.rotations[{i}]"), format!("rotation {} must be in [0, 360] or -1", r.value));
        }
    }
    for (i, s) in item.symbol_names.iter().enumerate() {
        if let Err(e) = SignContent::parse(&s.value, Rgb::default()) {
            err(s.span, format!("{path}.symbolNames[{i}]"), e);
        }
    }
    for (i, w) in item.reward_weights.iter().enumerate() {
        if w.value.iter().any(|x| *x < 0.0) || w.value.iter().sum::<f64>() <= 0.0 {
            err(w.span, format!("{path}.rewardWeights[{i}]"), "reward weights must be non-negative and not all zero".into());
        }
    }
    for attr in NumAttr::ALL {
        for (i, v) in item.number(attr).iter().enumerate() {
            let p = format!("{path}.{}[{i}]", attr.key());
            let x = v.value;
            if attr.integral() && x.fract() != 0.0 {
                err(v.span, p.clone(), format!("`{}` must be a whole number, found {x}", attr.key()));
            }
            let problem = match attr {
                NumAttr::Delays | NumAttr::FrozenAgentDelays | NumAttr::TimeBetweenSpawns | NumAttr::ResetDuration if x < 0.0 => Some("must be non-negative"),
                NumAttr::SpawnCount if x < -1.0 => Some("must be -1 (unlimited) or non-negative"),
                NumAttr::SpawnProbability if !(0.0..=1.0).contains(&x) => Some("must be a probability in [0, 1]"),
                NumAttr::SpawnSize if x <= 0.0 => Some("must be positive"),
                _ => None,
            };
            if let Some(problem) = problem {
                err(v.span, p, format!("`{}` = {x} {problem}", attr.key()));
            }
        }
    }
}
