//! Software renderer for the pixel channel: one primary ray per pixel, flat
//! Lambert shading, a checkered floor, a low fence and a constant sky.

use super::rays::{eye, FENCE_COLOR};
use super::sight::SightScene;
use super::ObservationError;
use crate::entities::Rgb;
use crate::math::{forward, Vec3};
use crate::physics::ARENA_SIZE;
use crate::world::World;
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const MIN_RESOLUTION: usize = 4;
pub const MAX_RESOLUTION: usize = 512;
/// Horizontal (and vertical) field of view in degrees.
pub const CAMERA_FOV: f64 = 60.0;
pub const FENCE_HEIGHT: f64 = 2.0;
pub const TRANSPARENT_ALPHA: f64 = 0.3;
pub const SKY: Rgb = Rgb::new(150, 190, 230);
pub const FLOOR: Rgb = Rgb::new(180, 160, 130);
const AMBIENT: f64 = 0.35;
const FAR: f64 = 200.0;

fn light_dir() -> Vec3 {
    Vec3::new(-0.4, 1.0, -0.3).normalize_or(Vec3::UP)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CameraSpec {
    pub resolution: usize,
    #[serde(default)]
    pub grayscale: bool,
}

impl CameraSpec {
    pub fn validate(&self) -> Result<(), ObservationError> {
        if (MIN_RESOLUTION..=MAX_RESOLUTION).contains(&self.resolution) {
            Ok(())
        } else {
            Err(ObservationError::Resolution(self.resolution))
        }
    }
}

/// Row-major pixels, top row first; RGB interleaved or a single luminance channel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CameraObservation {
    pub resolution: usize,
    pub channels: usize,
    pub data: Vec<u8>,
}

impl CameraObservation {
    pub fn pixel(&self, row: usize, col: usize) -> &[u8] {
        let i = (row * self.resolution + col) * self.channels;
        &self.data[i..i + self.channels]
    }

    /// PNG export; `text` becomes tEXt chunks (e.g. version and seed).
    pub fn write_png<W: Write>(&self, out: W, text: &[(&str, String)]) -> Result<(), png::EncodingError> {
        let size = self.resolution as u32;
        let mut encoder = png::Encoder::new(out, size, size);
        encoder.set_color(if self.channels == 1 { png::ColorType::Grayscale } else { png::ColorType::Rgb });
        encoder.set_depth(png::BitDepth::Eight);
        for (k, v) in text {
            encoder.add_text_chunk(k.to_string(), v.clone())?;
        }
        let mut writer = encoder.write_header()?;
        writer.write_image_data(&self.data)?;
        writer.finish()
    }
}

/// ITU-R BT.601 luma, rounded.
pub fn luminance(c: Rgb) -> u8 {
    (0.299 * c.r as f64 + 0.587 * c.g as f64 + 0.114 * c.b as f64).round().clamp(0.0, 255.0) as u8
}

fn shade(c: Rgb, normal: Vec3) -> [f64; 3] {
    let k = AMBIENT + (1.0 - AMBIENT) * normal.dot(light_dir()).max(0.0);
    [c.r as f64 * k, c.g as f64 * k, c.b as f64 * k]
}

/// Where a ray leaves the fenced square, with the fence's inward normal.
fn fence_exit(o: Vec3, d: Vec3) -> (f64, Vec3) {
    let mut best = (FAR, Vec3::UP);
    let mut take = |t: f64, n: Vec3| {
        if t > 0.0 && t < best.0 {
            best = (t, n);
        }
    };
    if d.x > 0.0 {
        take((ARENA_SIZE - o.x) / d.x, Vec3::new(-1.0, 0.0, 0.0));
    } else if d.x < 0.0 {
        take(-o.x / d.x, Vec3::new(1.0, 0.0, 0.0));
    }
    if d.z > 0.0 {
        take((ARENA_SIZE - o.z) / d.z, Vec3::new(0.0, 0.0, -1.0));
    } else if d.z < 0.0 {
        take(-o.z / d.z, Vec3::new(0.0, 0.0, 1.0));
    }
    best
}

/// Colour and distance of the nearest opaque surface.
fn opaque(scene: &SightScene, near: &[usize], o: Vec3, d: Vec3) -> (f64, [f64; 3]) {
    let (mut t, mut color) = (FAR, [SKY.r as f64, SKY.g as f64, SKY.b as f64]);
    let (tf, nf) = fence_exit(o, d);
    if (o + d * tf).y <= FENCE_HEIGHT {
        t = tf;
        color = shade(FENCE_COLOR, nf);
    }
    if d.y < 0.0 {
        let tg = -o.y / d.y;
        if tg < t {
            let p = o + d * tg;
            let dark = (p.x.floor() as i64 + p.z.floor() as i64).rem_euclid(2) == 1;
            let c = shade(FLOOR, Vec3::UP);
            let k = if dark { 0.88 } else { 1.0 };
            t = tg;
            color = [c[0] * k, c[1] * k, c[2] * k];
        }
    }
    if let Some(h) = scene.cast_among(near.iter().copied(), o, d, t, |e| !e.transparent) {
        t = h.distance;
        color = shade(scene.entries[h.entry].color, h.normal);
    }
    (t, color)
}

fn render_ray(scene: &SightScene, near: &[usize], o: Vec3, d: Vec3) -> [f64; 3] {
    let (t, mut color) = opaque(scene, near, o, d);
    if let Some(h) = scene.cast_among(near.iter().copied(), o, d, t, |e| e.transparent) {
        let front = shade(scene.entries[h.entry].color, h.normal);
        for (c, f) in color.iter_mut().zip(front) {
            *c = TRANSPARENT_ALPHA * f + (1.0 - TRANSPARENT_ALPHA) * *c;
        }
    }
    color
}

/// First-person view from the agent's eye. With the lights off the frame is black.
pub fn camera_observation(world: &World, spec: &CameraSpec, lights_on: bool) -> Result<CameraObservation, ObservationError> {
    render(world, spec, lights_on, true)
}

/// `cull` restricts each column to the entries its footprint ray crosses;
/// the image is the same either way.
fn render(world: &World, spec: &CameraSpec, lights_on: bool, cull: bool) -> Result<CameraObservation, ObservationError> {
    spec.validate()?;
    let k = spec.resolution;
    let channels = if spec.grayscale { 1 } else { 3 };
    let mut data = vec![0u8; k * k * channels];
    if !lights_on {
        return Ok(CameraObservation { resolution: k, channels, data });
    }
    let scene = SightScene::new(world);
    let origin = eye(world);
    let yaw = world.agent().body.pose.yaw;
    let fwd = forward(yaw);
    let right = forward(yaw + 90.0);
    let half = (CAMERA_FOV / 2.0).to_radians().tan();
    let columns: Vec<(f64, Vec<usize>)> = (0..k)
        .map(|col| {
            let u = (2.0 * (col as f64 + 0.5) / k as f64 - 1.0) * half;
            let near = if cull { scene.column_candidates(origin, fwd + right * u) } else { (0..scene.entries.len()).collect() };
            (u, near)
        })
        .collect();
    let mut i = 0;
    for row in 0..k {
        let v = (1.0 - 2.0 * (row as f64 + 0.5) / k as f64) * half;
        for (u, near) in &columns {
            let dir = (fwd + right * *u + Vec3::UP * v).normalize_or(fwd);
            let [r, g, b] = render_ray(&scene, near, origin, dir);
            let px = Rgb::new(r.round().clamp(0.0, 255.0) as u8, g.round().clamp(0.0, 255.0) as u8, b.round().clamp(0.0, 255.0) as u8);
            if channels == 1 {
                data[i] = luminance(px);
            } else {
                data[i..i + 3].copy_from_slice(&[px.r, px.g, px.b]);
            }
            i += channels;
        }
    }
    Ok(CameraObservation { resolution: k, channels, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{instantiate_arena, load_config};
    use crate::physics::PhysicsParams;

    #[test]
    fn column_culling_does_not_change_the_image() {
        let (cfg, _) = load_config(include_str!("../../../../configs/radial_arm_maze.yml")).unwrap();
        let spec = CameraSpec { resolution: 48, grayscale: false };
        for seed in 0..4 {
            let mut world = instantiate_arena(&cfg.arenas[0], &PhysicsParams::default(), seed).unwrap().world;
            for yaw in [0.0, 45.0, 137.0, 270.0] {
                world.agent_mut().body.pose.yaw = yaw;
                assert_eq!(render(&world, &spec, true, true).unwrap(), render(&world, &spec, true, false).unwrap());
            }
        }
    }

    #[test]
    fn lights_out_is_black() {
        let (cfg, _) = load_config(include_str!("../../../../configs/radial_arm_maze.yml")).unwrap();
        let world = instantiate_arena(&cfg.arenas[0], &PhysicsParams::default(), 0).unwrap().world;
        let frame = camera_observation(&world, &CameraSpec { resolution: 8, grayscale: true }, false).unwrap();
        assert!(frame.data.iter().all(|p| *p == 0));
        assert_eq!(frame.data.len(), 64);
    }
}
