//! Small hand-made trajectory sets with known topology.

use crate::builder::{Trajectory, TrajectorySet};
use crate::geometry::quantize;
use crate::time::TimeGrid;

fn stationary(id: u32, color: u32, frames: usize, x: f64, y: f64) -> Trajectory {
    let q = [quantize(x).unwrap(), quantize(y).unwrap(), 0];
    Trajectory { id, color, start: 0, positions: vec![q; frames] }
}

fn moving(id: u32, color: u32, path: &[(f64, f64)]) -> Trajectory {
    Trajectory {
        id,
        color,
        start: 0,
        positions: path.iter().map(|&(x, y)| [quantize(x).unwrap(), quantize(y).unwrap(), 0]).collect(),
    }
}

/// Four planar points over two frames; the Delaunay diagonal switches from
/// 1-3 to 0-2.
pub fn flip_gadget() -> TrajectorySet {
    TrajectorySet::new(
        2,
        TimeGrid::uniform(2),
        vec![
            moving(0, 1, &[(0.0, 0.0), (0.0, 0.0)]),
            moving(1, 1, &[(2.0, -1.0), (2.0, -3.0)]),
            moving(2, 1, &[(4.0, 0.0), (4.0, 0.0)]),
            moving(3, 1, &[(2.0, 1.0), (2.0, 3.0)]),
        ],
    )
    .expect("valid fixture")
}

fn hexagon_points(side: f64) -> Vec<(f64, f64)> {
    (0..6)
        .map(|k| {
            let a = std::f64::consts::PI / 3.0 * k as f64;
            (side * a.cos(), side * a.sin())
        })
        .collect()
}

/// Six stationary points on a regular hexagon of the given side (which is
/// also its circumradius), all of color `color`, over two frames.
pub fn hexagon_ring(side: f64, color: u32) -> TrajectorySet {
    let trajs = hexagon_points(side)
        .into_iter()
        .enumerate()
        .map(|(i, (x, y))| stationary(i as u32, color, 2, x, y))
        .collect();
    TrajectorySet::new(2, TimeGrid::uniform(2), trajs).expect("valid fixture")
}

/// The hexagon ring in color 2 plus one point of color 1 at its center
/// (id 6).
pub fn hexagon_with_center(side: f64) -> TrajectorySet {
    let mut trajs: Vec<Trajectory> = hexagon_points(side)
        .into_iter()
        .enumerate()
        .map(|(i, (x, y))| stationary(i as u32, 2, 2, x, y))
        .collect();
    trajs.push(stationary(6, 1, 2, 0.0, 0.0));
    TrajectorySet::new(2, TimeGrid::uniform(2), trajs).expect("valid fixture")
}

/// One stationary point over `frames` frames.
pub fn single_point(frames: usize) -> TrajectorySet {
    TrajectorySet::new(2, TimeGrid::uniform(frames), vec![stationary(0, 1, frames, 0.0, 0.0)])
        .expect("valid fixture")
}
