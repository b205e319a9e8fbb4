//! Assembly of frame-resolution medusas from trajectory frames.
//!
//! Each frame is triangulated independently. Every maximal run of frames in
//! which an abstract simplex is present becomes one prism cell, and every
//! Delaunay flip between consecutive frames is closed off by a filler cell of
//! one dimension higher whose facets are the simplices before and after.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{Cell, CellId, CellKind, ColorScope, InclusionMap, Medusa};
use crate::error::{Error, Result};
use crate::geometry::{self, BigRational, SitePoint, SliceComplex};
use crate::time::TimeGrid;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub id: u32,
    pub color: u32,
    /// Index of the first supported frame.
    pub start: usize,
    /// Quantized positions at frames `start..start + positions.len()`.
    pub positions: Vec<[i64; 3]>,
}

impl Trajectory {
    pub fn end(&self) -> usize {
        self.start + self.positions.len() - 1
    }

    pub fn supports(&self, frame: usize) -> bool {
        frame >= self.start && frame <= self.end()
    }

    pub fn position(&self, frame: usize) -> Option<[i64; 3]> {
        frame.checked_sub(self.start).and_then(|k| self.positions.get(k)).copied()
    }
}

/// Colored trajectories sampled on a shared frame grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrajectorySet {
    pub dim: usize,
    pub grid: TimeGrid,
    /// Sorted by id.
    pub trajectories: Vec<Trajectory>,
}

impl TrajectorySet {
    pub fn new(dim: usize, grid: TimeGrid, mut trajectories: Vec<Trajectory>) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        trajectories.sort_by_key(|t| t.id);
        let m = grid.len();
        for w in trajectories.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::InconsistentSupport(format!("trajectory {} listed twice", w[0].id)));
            }
        }
        for t in &trajectories {
            if t.positions.is_empty() || t.end() >= m {
                return Err(Error::InconsistentSupport(format!(
                    "trajectory {} is not supported on the frame grid",
                    t.id
                )));
            }
            if t.color == 0 {
                return Err(Error::InconsistentSupport(format!("trajectory {} has color 0", t.id)));
            }
            let bound = geometry::MAX_QUANTA;
            if t.positions.iter().flatten().any(|c| c.abs() > bound)
                || t.positions.iter().any(|p| p[dim..].iter().any(|&c| c != 0))
            {
                return Err(Error::InconsistentSupport(format!(
                    "trajectory {} has coordinates out of range",
                    t.id
                )));
            }
        }
        let ts = Self { dim, grid, trajectories };
        for frame in 0..m {
            let mut seen: HashMap<[i64; 3], u32> = HashMap::new();
            let mut any = false;
            for t in &ts.trajectories {
                if let Some(p) = t.position(frame) {
                    any = true;
                    if let Some(&a) = seen.get(&p) {
                        return Err(Error::PositionCollision { frame, a, b: t.id });
                    }
                    seen.insert(p, t.id);
                }
            }
            if !any {
                return Err(Error::EmptyFrame(frame));
            }
        }
        Ok(ts)
    }

    pub fn frames(&self) -> usize {
        self.grid.len()
    }

    pub fn frame_points(&self, frame: usize) -> Vec<SitePoint> {
        self.trajectories
            .iter()
            .filter_map(|t| {
                t.position(frame).map(|coords| SitePoint { id: t.id, coords, color: t.color })
            })
            .collect()
    }

    pub fn colors(&self) -> BTreeSet<u32> {
        self.trajectories.iter().map(|t| t.color).collect()
    }

    fn supports(&self, id: u32, frame: usize) -> bool {
        self.trajectories
            .binary_search_by_key(&id, |t| t.id)
            .map(|i| self.trajectories[i].supports(frame))
            .unwrap_or(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    Alpha,
    Delaunay,
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplexKind::Alpha => "alpha",
            ComplexKind::Delaunay => "delaunay",
        })
    }
}

impl FromStr for ComplexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(ComplexKind::Alpha),
            "delaunay" => Ok(ComplexKind::Delaunay),
            _ => Err(Error::ConfigInvalid(format!("unknown complex kind `{s}`"))),
        }
    }
}

/// Which medusa to build: complex kind plus color scope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TargetSpec {
    pub kind: ComplexKind,
    pub scope: ColorScope,
}

impl TargetSpec {
    pub fn new(kind: ComplexKind, scope: ColorScope) -> Self {
        Self { kind, scope }
    }

    /// File-name friendly label, e.g. `alpha-mono2`.
    pub fn name(&self) -> String {
        format!("{}-{}", self.kind, self.scope)
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.scope)
    }
}

impl FromStr for TargetSpec {
    type Err = Error;

    /// Accepts `alpha:multi`, `delaunay:mono:2` or the file label
    /// `alpha-mono2`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, scope) = s
            .split_once([':', '-'])
            .ok_or_else(|| Error::ConfigInvalid(format!("bad target `{s}`")))?;
        let scope = scope
            .parse()
            .map_err(|_| Error::ConfigInvalid(format!("bad color scope in `{s}`")))?;
        Ok(Self { kind: kind.parse()?, scope })
    }
}

impl Serialize for TargetSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TargetSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Transition statistics for one pair of consecutive frames.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDiagnostics {
    pub frame: usize,
    pub symmetric_difference: usize,
    pub fillers: usize,
    /// Candidate flips with a facet missing from both frames.
    pub unresolved: usize,
    /// Candidates involving a point that appears or disappears.
    pub insertion_deletion_candidates: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildDiagnostics {
    pub target: String,
    pub pairs: Vec<PairDiagnostics>,
}

impl BuildDiagnostics {
    pub fn fillers(&self) -> usize {
        self.pairs.iter().map(|p| p.fillers).sum()
    }

    pub fn unresolved(&self) -> usize {
        self.pairs.iter().map(|p| p.unresolved).sum()
    }
}

/// Per-frame triangulations with alpha values, shared by all targets built
/// from one trajectory set.
#[derive(Clone, Debug)]
pub struct FrameSlices {
    pub slices: Vec<SliceComplex>,
}

impl FrameSlices {
    /// `alpha0` is the alpha radius in input units.
    pub fn compute(ts: &TrajectorySet, alpha0: &BigRational) -> Result<Self> {
        let slices = (0..ts.frames())
            .into_par_iter()
            .map(|f| {
                let mut s = geometry::delaunay(&ts.frame_points(f), ts.dim)?;
                geometry::alpha_values(&mut s, alpha0);
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { slices })
    }

    pub fn build(&self, ts: &TrajectorySet, target: TargetSpec) -> Result<(Medusa, BuildDiagnostics)> {
        if let ColorScope::Mono(c) = target.scope {
            if !ts.colors().contains(&c) {
                return Err(Error::UnknownColor(c));
            }
        }
        let present: Vec<BTreeSet<Vec<u32>>> = self
            .slices
            .iter()
            .map(|s| s.filtered(target.kind == ComplexKind::Alpha, target.scope).into_iter().collect())
            .collect();
        Ok(stitch(ts, &present, target))
    }
}

fn facets(key: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
    (0..key.len()).map(move |omit| {
        let mut f = key.to_vec();
        f.remove(omit);
        f
    })
}

/// Turns per-frame simplex sets into a filtered cell complex.
fn stitch(ts: &TrajectorySet, present: &[BTreeSet<Vec<u32>>], target: TargetSpec) -> (Medusa, BuildDiagnostics) {
    let d = ts.dim;
    let m = present.len();

    // maximal runs of presence per abstract simplex
    let mut runs: BTreeMap<Vec<u32>, Vec<(u32, u32)>> = BTreeMap::new();
    for (f, set) in present.iter().enumerate() {
        for key in set {
            let list = runs.entry(key.clone()).or_default();
            match list.last_mut() {
                Some(last) if last.1 + 1 == f as u32 => last.1 = f as u32,
                _ => list.push((f as u32, f as u32)),
            }
        }
    }

    // flip fillers per frame pair
    let mut fillers: Vec<(u32, Vec<u32>)> = Vec::new();
    let mut pairs = Vec::with_capacity(m.saturating_sub(1));
    for i in 0..m.saturating_sub(1) {
        let (a, b) = (&present[i], &present[i + 1]);
        let sym: Vec<&Vec<u32>> = a.symmetric_difference(b).collect();
        let tops: Vec<&Vec<u32>> = sym.iter().copied().filter(|k| k.len() == d + 1).collect();
        let mut candidates: BTreeSet<Vec<u32>> = BTreeSet::new();
        for (x, s) in tops.iter().enumerate() {
            for t in &tops[x + 1..] {
                let mut u: Vec<u32> = s.iter().chain(t.iter()).copied().collect();
                u.sort_unstable();
                u.dedup();
                if u.len() == d + 2 {
                    candidates.insert(u);
                }
            }
        }
        let mut diag = PairDiagnostics { frame: i, symmetric_difference: sym.len(), ..Default::default() };
        for u in candidates {
            if !u.iter().all(|&v| ts.supports(v, i) && ts.supports(v, i + 1)) {
                diag.insertion_deletion_candidates += 1;
                continue;
            }
            if facets(&u).all(|f| a.contains(&f) || b.contains(&f)) {
                diag.fillers += 1;
                fillers.push((i as u32, u));
            } else {
                diag.unresolved += 1;
            }
        }
        pairs.push(diag);
    }

    // cell ids: prisms by (dim, vertices, start), then fillers by (pair, vertices)
    let mut prisms: Vec<(usize, &Vec<u32>, u32, u32, u32)> = Vec::new();
    for (key, list) in &runs {
        for (r, &(s, e)) in list.iter().enumerate() {
            prisms.push((key.len() - 1, key, s, e, r as u32));
        }
    }
    prisms.sort();
    let mut run_id: HashMap<(&[u32], u32), CellId> = HashMap::new();
    let mut cells: Vec<Cell> = Vec::with_capacity(prisms.len() + fillers.len());
    for &(dim, key, s, e, r) in &prisms {
        run_id.insert((key.as_slice(), s), CellId(cells.len() as u32));
        cells.push(Cell {
            vertices: key.clone(),
            run: r,
            dim,
            f_min: s,
            f_max: e,
            kind: CellKind::Prism,
            boundary: Vec::new(),
            presence: (s, e),
        });
    }
    // the run of `key` covering `frame`
    let run_at = |key: &[u32], frame: u32| -> CellId {
        let list = &runs[key];
        let idx = list.partition_point(|&(_, e)| e < frame);
        let (s, e) = list[idx];
        debug_assert!(s <= frame && frame <= e);
        run_id[&(key, s)]
    };
    for cell in cells.iter_mut().filter(|c| c.dim > 0) {
        let frame = cell.presence.0;
        cell.boundary = facets(&cell.vertices).map(|f| run_at(&f, frame)).collect();
    }

    fillers.sort();
    let mut filler_runs: HashMap<Vec<u32>, u32> = HashMap::new();
    for (i, u) in &fillers {
        let (a, _) = (&present[*i as usize], &present[*i as usize + 1]);
        let boundary: Vec<CellId> = facets(u)
            .map(|f| run_at(&f, if a.contains(&f) { *i } else { *i + 1 }))
            .collect();
        // facets are stretched over the whole transition so the filler's
        // faces exist whenever it does
        for &fc in &boundary {
            let cell = &mut cells[fc.index()];
            cell.f_min = cell.f_min.min(*i);
            cell.f_max = cell.f_max.max(*i + 1);
        }
        let r = filler_runs.entry(u.clone()).or_insert(0);
        cells.push(Cell {
            vertices: u.clone(),
            run: *r,
            dim: d + 1,
            f_min: *i,
            f_max: *i + 1,
            kind: CellKind::Filler,
            boundary,
            presence: (*i, *i + 1),
        });
        *r += 1;
    }

    // close intervals downward so every face spans its cofaces
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(cells[c].dim));
    for c in order {
        let (lo, hi) = (cells[c].f_min, cells[c].f_max);
        for k in 0..cells[c].boundary.len() {
            let f = cells[c].boundary[k].index();
            cells[f].f_min = cells[f].f_min.min(lo);
            cells[f].f_max = cells[f].f_max.max(hi);
        }
    }

    let medusa = Medusa { cells, ambient_dim: d, scope: target.scope, grid: ts.grid.clone() };
    (medusa, BuildDiagnostics { target: target.name(), pairs })
}

/// Builds one medusa; see [`FrameSlices`] to share slices across targets.
pub fn build_medusa(
    ts: &TrajectorySet,
    alpha0: &BigRational,
    kind: ComplexKind,
    scope: ColorScope,
) -> Result<(Medusa, BuildDiagnostics)> {
    FrameSlices::compute(ts, alpha0)?.build(ts, TargetSpec::new(kind, scope))
}

pub fn inclusion_supported(sub: TargetSpec, ambient: TargetSpec) -> bool {
    use ComplexKind::*;
    if sub == ambient {
        return true;
    }
    match (sub.kind, sub.scope, ambient.kind, ambient.scope) {
        (Alpha, ColorScope::Mono(a), Delaunay, ColorScope::Mono(b)) => a == b,
        (Alpha, ColorScope::Mono(_), Alpha, ColorScope::Multi) => true,
        (Alpha, ColorScope::Multi, Delaunay, ColorScope::Multi) => true,
        _ => false,
    }
}

/// Maps every cell of `sub` to the ambient cell with the same vertex set
/// whose presence covers it. Both medusas must come from the same input.
pub fn build_inclusion<'a>(
    sub: &'a Medusa,
    sub_spec: TargetSpec,
    ambient: &'a Medusa,
    ambient_spec: TargetSpec,
) -> Result<InclusionMap<'a>> {
    if !inclusion_supported(sub_spec, ambient_spec) {
        return Err(Error::UnsupportedInclusion(format!("{sub_spec} in {ambient_spec}")));
    }
    if sub.grid != ambient.grid || sub.ambient_dim != ambient.ambient_dim {
        return Err(Error::IncompatibleInclusion("medusas built on different inputs".into()));
    }
    let mut index: HashMap<(&[u32], CellKind), Vec<CellId>> = HashMap::new();
    for id in ambient.ids() {
        let c = ambient.cell(id);
        index.entry((c.vertices.as_slice(), c.kind)).or_default().push(id);
    }
    let mut cell_map = Vec::with_capacity(sub.len());
    for id in sub.ids() {
        let c = sub.cell(id);
        let candidates = index.get(&(c.vertices.as_slice(), c.kind)).map(Vec::as_slice).unwrap_or(&[]);
        let hit = candidates.iter().copied().find(|&a| {
            let p = ambient.cell(a).presence;
            match c.kind {
                CellKind::Prism => p.0 <= c.presence.0 && c.presence.1 <= p.1,
                CellKind::Filler => p == c.presence,
            }
        });
        match hit {
            Some(a) => cell_map.push(a),
            None => {
                return Err(Error::UnmappableCell {
                    id,
                    reason: format!(
                        "no ambient {} cell on {:?} covering frames {}..={}",
                        c.kind, c.vertices, c.presence.0, c.presence.1
                    ),
                })
            }
        }
    }
    let map = InclusionMap { sub, ambient, cell_map };
    map.check()?;
    Ok(map)
}
