//! Deterministic synthetic trajectories.
//!
//! Points start on a unit grid and move by overdamped pairwise spring
//! dynamics: a short-range repulsion keeps them apart and a color-dependent
//! attraction pulls neighbours together, so unequal adhesion weights sort the
//! colors. All randomness flows from one [`SplitMix64`] seed.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::builder::{Trajectory, TrajectorySet};
use crate::error::{Error, Result};
use crate::geometry;
use crate::rng::SplitMix64;
use crate::time::{Rational, TimeGrid};

pub const RED: u32 = 1;
pub const BLUE: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dynamics {
    Segregation,
    MonoControl,
    Static,
    RandomWalk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorRule {
    FairCoin,
    AllOne,
    /// Move as one population, then split the colors by a coin flip.
    SplitExisting,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdhesionWeights {
    pub red_red: f64,
    pub red_blue: f64,
    pub blue_blue: f64,
}

impl Default for AdhesionWeights {
    fn default() -> Self {
        Self { red_red: 1.0, red_blue: 0.1, blue_blue: 0.5 }
    }
}

impl AdhesionWeights {
    fn between(&self, a: u32, b: u32) -> f64 {
        match (a == RED, b == RED) {
            (true, true) => self.red_red,
            (false, false) => self.blue_blue,
            _ => self.red_blue,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub seed: u64,
    pub dimension: usize,
    pub grid_side: usize,
    pub frames: usize,
    pub dynamics: Dynamics,
    pub colors: ColorRule,
    pub weights: AdhesionWeights,
    /// Standard deviation of the per-step displacement noise.
    pub noise: f64,
    pub steps_per_frame: usize,
    /// Integration step of the overdamped dynamics.
    pub dt: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            dimension: 2,
            grid_side: 4,
            frames: 10,
            dynamics: Dynamics::Segregation,
            colors: ColorRule::FairCoin,
            weights: AdhesionWeights::default(),
            noise: 0.02,
            steps_per_frame: 10,
            dt: 0.05,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::ConfigInvalid(m.to_string()));
        if !(2..=3).contains(&self.dimension) {
            return Err(Error::UnsupportedDimension(self.dimension));
        }
        if self.grid_side == 0 {
            return bad("grid_side must be at least 1");
        }
        if self.frames < 2 {
            return bad("frames must be at least 2");
        }
        let w = self.weights;
        if ![w.red_red, w.red_blue, w.blue_blue, self.noise, self.dt].iter().all(|x| x.is_finite()) {
            return bad("weights, noise and dt must be finite");
        }
        if self.noise < 0.0 || self.dt <= 0.0 {
            return bad("noise must be non-negative and dt positive");
        }
        Ok(())
    }
}

/// Rest length of the springs (the grid spacing).
const REST: f64 = 1.0;
/// Attraction acts up to this distance.
const CUTOFF: f64 = 1.8;
const REPULSION: f64 = 4.0;

fn step(pos: &mut [[f64; 3]], colors: &[u32], cfg: &SynthConfig, uniform: Option<f64>, rng: &mut SplitMix64) {
    let n = pos.len();
    let d = cfg.dimension;
    let mut force = vec![[0.0f64; 3]; n];
    if cfg.dynamics != Dynamics::RandomWalk {
        for i in 0..n {
            for j in i + 1..n {
                let mut delta = [0.0; 3];
                for t in 0..d {
                    delta[t] = pos[j][t] - pos[i][t];
                }
                let r = delta.iter().map(|x| x * x).sum::<f64>().sqrt();
                if r == 0.0 || r > CUTOFF {
                    continue;
                }
                let w = uniform.unwrap_or_else(|| cfg.weights.between(colors[i], colors[j]));
                let mag = if r < REST { -REPULSION * (REST - r) } else { w * (r - REST) };
                for t in 0..d {
                    let f = mag * delta[t] / r;
                    force[i][t] += f;
                    force[j][t] -= f;
                }
            }
        }
    }
    let amp = cfg.noise * cfg.dt.sqrt();
    for i in 0..n {
        for t in 0..d {
            pos[i][t] += cfg.dt * force[i][t] + amp * rng.normal();
        }
    }
}

fn quantized(p: &[f64; 3], d: usize) -> [i64; 3] {
    let mut q = [0i64; 3];
    for t in 0..d {
        q[t] = geometry::quantize(p[t]).expect("synthetic position out of range");
    }
    q
}

/// Quantizes a frame, nudging points until all positions are distinct.
fn distinct_frame(pos: &mut [[f64; 3]], d: usize, rng: &mut SplitMix64) -> Vec<[i64; 3]> {
    loop {
        let mut seen = HashSet::new();
        let mut clash = None;
        let q: Vec<[i64; 3]> = pos.iter().map(|p| quantized(p, d)).collect();
        for (i, p) in q.iter().enumerate() {
            if !seen.insert(*p) {
                clash = Some(i);
                break;
            }
        }
        match clash {
            None => return q,
            Some(i) => {
                for x in pos[i].iter_mut().take(d) {
                    *x += 1e-4 * rng.normal();
                }
            }
        }
    }
}

pub fn generate(cfg: &SynthConfig) -> Result<TrajectorySet> {
    cfg.validate()?;
    let d = cfg.dimension;
    let n = cfg.grid_side.pow(d as u32);
    let mut rng = SplitMix64::new(cfg.seed);
    let mut pos: Vec<[f64; 3]> = (0..n)
        .map(|i| {
            let mut p = [0.0; 3];
            let mut rest = i;
            for t in (0..d).rev() {
                p[t] = (rest % cfg.grid_side) as f64 * REST;
                rest /= cfg.grid_side;
            }
            p
        })
        .collect();
    let mut colors: Vec<u32> = match cfg.colors {
        ColorRule::FairCoin => (0..n).map(|_| if rng.coin() { RED } else { BLUE }).collect(),
        ColorRule::AllOne | ColorRule::SplitExisting => vec![RED; n],
    };
    let uniform = match (cfg.dynamics, cfg.colors) {
        (Dynamics::MonoControl, _) | (_, ColorRule::SplitExisting) => {
            let w = cfg.weights;
            Some((w.red_red + w.red_blue + w.blue_blue) / 3.0)
        }
        _ => None,
    };
    let mut frames: Vec<Vec<[i64; 3]>> = Vec::with_capacity(cfg.frames);
    frames.push(distinct_frame(&mut pos, d, &mut rng));
    for _ in 1..cfg.frames {
        if cfg.dynamics != Dynamics::Static {
            for _ in 0..cfg.steps_per_frame {
                step(&mut pos, &colors, cfg, uniform, &mut rng);
            }
        }
        frames.push(distinct_frame(&mut pos, d, &mut rng));
    }
    if cfg.colors == ColorRule::SplitExisting {
        colors = (0..n).map(|_| if rng.coin() { RED } else { BLUE }).collect();
    }
    let trajectories = (0..n)
        .map(|i| Trajectory {
            id: i as u32,
            color: colors[i],
            start: 0,
            positions: frames.iter().map(|f| f[i]).collect(),
        })
        .collect();
    let grid = TimeGrid::from_raw((0..cfg.frames).map(|f| Rational::from_integer(f as i128)).collect())?;
    TrajectorySet::new(d, grid, trajectories)
}

/// Recolors every trajectory red or blue by a seeded fair coin.
pub fn split_colors(ts: &TrajectorySet, seed: u64) -> TrajectorySet {
    let mut rng = SplitMix64::new(seed);
    let mut out = ts.clone();
    for t in &mut out.trajectories {
        t.color = if rng.coin() { RED } else { BLUE };
    }
    out
}

/// Mean over points of the fraction of Delaunay neighbours sharing the
/// point's color.
pub fn same_color_neighbor_fraction(ts: &TrajectorySet, frame: usize) -> f64 {
    let pts = ts.frame_points(frame);
    let Ok(tops) = geometry::delaunay_tops(&pts, ts.dim) else {
        return 0.0;
    };
    let color = |id: u32| pts.iter().find(|p| p.id == id).map(|p| p.color);
    let mut edges = HashSet::new();
    for t in &tops {
        for a in 0..t.len() {
            for b in a + 1..t.len() {
                edges.insert((t[a], t[b]));
            }
        }
    }
    let mut same = vec![0usize; pts.len()];
    let mut total = vec![0usize; pts.len()];
    let idx = |id: u32| pts.iter().position(|p| p.id == id).unwrap();
    for &(a, b) in &edges {
        let s = color(a) == color(b);
        for v in [a, b] {
            total[idx(v)] += 1;
            same[idx(v)] += s as usize;
        }
    }
    let fr: Vec<f64> = (0..pts.len())
        .filter(|&i| total[i] > 0)
        .map(|i| same[i] as f64 / total[i] as f64)
        .collect();
    if fr.is_empty() {
        0.0
    } else {
        fr.iter().sum::<f64>() / fr.len() as f64
    }
}

/// A small random instance for property tests: points wander in a box, some
/// appear late or vanish early, two colors by coin flip. Trajectory 0 spans
/// every frame so no frame is empty.
pub fn random_instance(seed: u64, dim: usize, max_points: usize, max_frames: usize) -> TrajectorySet {
    let mut rng = SplitMix64::new(seed);
    let n = 1 + rng.below(max_points.max(1) as u64) as usize;
    let m = 2 + rng.below(max_frames.saturating_sub(1).max(1) as u64) as usize;
    let mut trajectories = Vec::with_capacity(n);
    for id in 0..n {
        let (start, end) = if id == 0 || rng.next_f64() < 0.6 {
            (0, m - 1)
        } else {
            let a = rng.below(m as u64) as usize;
            let b = a + rng.below((m - a) as u64) as usize;
            (a, b)
        };
        let mut p = [0.0; 3];
        for x in p.iter_mut().take(dim) {
            *x = rng.range_f64(0.0, 4.0);
        }
        let mut positions = Vec::new();
        for _ in start..=end {
            positions.push(p);
            for x in p.iter_mut().take(dim) {
                *x += 0.4 * rng.normal();
            }
        }
        let color = if rng.coin() { RED } else { BLUE };
        trajectories.push((id as u32, color, start, positions));
    }
    // resolve (astronomically unlikely) collisions frame by frame
    let mut out: Vec<Trajectory> = trajectories
        .into_iter()
        .map(|(id, color, start, positions)| Trajectory {
            id,
            color,
            start,
            positions: positions.iter().map(|p| quantized(p, dim)).collect(),
        })
        .collect();
    for f in 0..m {
        let mut seen = HashSet::new();
        for t in out.iter_mut() {
            if let Some(k) = f.checked_sub(t.start).filter(|&k| k < t.positions.len()) {
                while !seen.insert(t.positions[k]) {
                    t.positions[k][0] += 1;
                }
            }
        }
    }
    TrajectorySet::new(dim, TimeGrid::uniform(m), out).expect("random instance is valid")
}
