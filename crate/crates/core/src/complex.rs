//! Filtered complexes of cells: the contracted prisms and flip fillers of a
//! medusa. Cells are not required to form a simplicial complex; two cells may
//! share a vertex set when their runs differ.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::time::{fmt_exact, fmt_fixed6, parse_exact, Rational, TimeGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId(pub u32);

impl CellId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellKind {
    /// A simplex swept over a maximal run of frames, contracted in time.
    Prism,
    /// The (d+1)-cell gluing the triangulations before and after a flip.
    Filler,
}

impl CellKind {
    fn token(self) -> &'static str {
        match self {
            CellKind::Prism => "prism",
            CellKind::Filler => "flip",
        }
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColorScope {
    Multi,
    Mono(u32),
}

impl ColorScope {
    pub fn admits(self, color: u32) -> bool {
        match self {
            ColorScope::Multi => true,
            ColorScope::Mono(c) => c == color,
        }
    }
}

impl fmt::Display for ColorScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorScope::Multi => write!(f, "multi"),
            ColorScope::Mono(c) => write!(f, "mono{c}"),
        }
    }
}

impl FromStr for ColorScope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s == "multi" {
            return Ok(ColorScope::Multi);
        }
        let rest = s
            .strip_prefix("mono:")
            .or_else(|| s.strip_prefix("mono"))
            .ok_or_else(|| format!("unknown color scope `{s}`"))?;
        rest.parse()
            .map(ColorScope::Mono)
            .map_err(|_| format!("bad color in scope `{s}`"))
    }
}

impl Serialize for ColorScope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ColorScope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// Sorted trajectory ids.
    pub vertices: Vec<u32>,
    /// Distinguishes repeated lifetimes of the same vertex set.
    pub run: u32,
    pub dim: usize,
    /// Grid index of the first time the cell exists.
    pub f_min: u32,
    /// Grid index of the last time the cell exists.
    pub f_max: u32,
    pub kind: CellKind,
    /// Facets, each listed once (mod-2 boundary).
    pub boundary: Vec<CellId>,
    /// Frames where the simplex is actually present (fillers: the frame
    /// pair). Used to match runs across medusas of the same input.
    pub presence: (u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Medusa {
    pub cells: Vec<Cell>,
    pub ambient_dim: usize,
    pub scope: ColorScope,
    pub grid: TimeGrid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DanglingFace { cell: CellId, face: CellId },
    FaceDimension { cell: CellId, face: CellId },
    VertexWithBoundary { cell: CellId },
    BoundaryOfBoundary { cell: CellId },
    Monotonicity { cell: CellId, face: CellId },
    Interval { cell: CellId },
    OffGrid { cell: CellId },
    DuplicateRun { cell: CellId, other: CellId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingFace { cell, face } => {
                write!(f, "cell {cell}: boundary lists missing cell {face}")
            }
            Violation::FaceDimension { cell, face } => {
                write!(f, "cell {cell}: face {face} has the wrong dimension")
            }
            Violation::VertexWithBoundary { cell } => write!(f, "vertex {cell} has a boundary"),
            Violation::BoundaryOfBoundary { cell } => {
                write!(f, "cell {cell}: boundary of boundary is not zero")
            }
            Violation::Monotonicity { cell, face } => {
                write!(f, "cell {cell}: face {face} violates f_min/f_max nesting")
            }
            Violation::Interval { cell } => write!(f, "cell {cell}: f_min > f_max"),
            Violation::OffGrid { cell } => write!(f, "cell {cell}: time outside the grid"),
            Violation::DuplicateRun { cell, other } => {
                write!(f, "cells {cell} and {other} share vertex set and run index")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Medusa {
    pub fn empty(ambient_dim: usize, scope: ColorScope, grid: TimeGrid) -> Self {
        Self { cells: Vec::new(), ambient_dim, scope, grid }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len() as u32).map(CellId)
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.cells.len();
        let m = self.grid.len() as u32;
        let mut seen: HashMap<(&[u32], u32), CellId> = HashMap::new();
        for (i, cell) in self.cells.iter().enumerate() {
            let id = CellId(i as u32);
            if cell.f_min > cell.f_max {
                violations.push(Violation::Interval { cell: id });
            }
            if cell.f_max >= m {
                violations.push(Violation::OffGrid { cell: id });
            }
            if let Some(other) = seen.insert((&cell.vertices, cell.run), id) {
                violations.push(Violation::DuplicateRun { cell: id, other });
            }
            if cell.dim == 0 && !cell.boundary.is_empty() {
                violations.push(Violation::VertexWithBoundary { cell: id });
            }
            let mut dangling = false;
            for &face in &cell.boundary {
                let Some(f) = self.cells.get(face.index()).filter(|_| face.index() < n) else {
                    violations.push(Violation::DanglingFace { cell: id, face });
                    dangling = true;
                    continue;
                };
                if f.dim + 1 != cell.dim {
                    violations.push(Violation::FaceDimension { cell: id, face });
                }
                if f.f_min > cell.f_min || f.f_max < cell.f_max {
                    violations.push(Violation::Monotonicity { cell: id, face });
                }
            }
            if !dangling && cell.dim > 0 {
                let mut parity: HashMap<CellId, bool> = HashMap::new();
                for &face in &cell.boundary {
                    for &ff in &self.cells[face.index()].boundary {
                        *parity.entry(ff).or_default() ^= true;
                    }
                }
                if parity.values().any(|&odd| odd) {
                    violations.push(Violation::BoundaryOfBoundary { cell: id });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Euler characteristic of the sublevel complex at time `t`.
    pub fn euler_characteristic_at(&self, t: Rational) -> i64 {
        self.sublevel_cells(t)
            .iter()
            .map(|&id| if self.cell(id).dim.is_multiple_of(2) { 1 } else { -1 })
            .sum()
    }

    /// Cells with `f_min <= t`.
    pub fn sublevel_cells(&self, t: Rational) -> Vec<CellId> {
        self.ids()
            .filter(|&id| self.grid.time(self.cell(id).f_min as usize) <= t)
            .collect()
    }

    /// Cells with `f_max >= t`.
    pub fn superlevel_cells(&self, t: Rational) -> Vec<CellId> {
        self.ids()
            .filter(|&id| self.grid.time(self.cell(id).f_max as usize) >= t)
            .collect()
    }

    /// Line-oriented text form: a `#` header carrying the grid and scope,
    /// then `id dim kind f_min f_max vertices=.. boundary=..` per cell.
    pub fn to_text(&self) -> String {
        let grid: Vec<String> = self.grid.raw().iter().map(fmt_exact).collect();
        let mut out = format!(
            "# medusa ambient_dim={} scope={} frames={}\n",
            self.ambient_dim,
            self.scope,
            grid.join(",")
        );
        for (i, c) in self.cells.iter().enumerate() {
            let verts: Vec<String> = c.vertices.iter().map(u32::to_string).collect();
            let bd: Vec<String> = c.boundary.iter().map(|b| b.0.to_string()).collect();
            out.push_str(&format!(
                "{} {} {} {} {} vertices={} boundary={}\n",
                i,
                c.dim,
                c.kind.token(),
                fmt_fixed6(&self.grid.time(c.f_min as usize)),
                fmt_fixed6(&self.grid.time(c.f_max as usize)),
                verts.join(","),
                bd.join(",")
            ));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or(Error::Parse { line: 1, msg: "empty medusa file".into() })?;
        let perr = |line: usize, msg: String| Error::Parse { line: line + 1, msg };
        let fields: BTreeMap<&str, &str> = header
            .trim_start_matches('#')
            .split_whitespace()
            .filter_map(|kv| kv.split_once('='))
            .collect();
        let ambient_dim: usize = fields
            .get("ambient_dim")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| perr(0, "header lacks ambient_dim".into()))?;
        let scope: ColorScope = fields
            .get("scope")
            .ok_or_else(|| perr(0, "header lacks scope".into()))?
            .parse()
            .map_err(|e: String| perr(0, e))?;
        let raw = fields
            .get("frames")
            .ok_or_else(|| perr(0, "header lacks frames".into()))?
            .split(',')
            .map(|s| parse_exact(s).ok_or_else(|| perr(0, format!("bad frame time `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        let grid = TimeGrid::from_raw(raw).map_err(|e| perr(0, e.to_string()))?;
        let mut cells = Vec::new();
        let mut runs: HashMap<Vec<u32>, u32> = HashMap::new();
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 7 {
                return Err(perr(ln, format!("expected 7 fields, found {}", toks.len())));
            }
            let id: usize = toks[0].parse().map_err(|_| perr(ln, "bad id".into()))?;
            if id != cells.len() {
                return Err(perr(ln, format!("ids must be dense and ordered, got {id}")));
            }
            let dim: usize = toks[1].parse().map_err(|_| perr(ln, "bad dim".into()))?;
            let kind = match toks[2] {
                "prism" => CellKind::Prism,
                "flip" => CellKind::Filler,
                k => return Err(perr(ln, format!("unknown kind `{k}`"))),
            };
            let time = |s: &str| -> Result<u32> {
                let v: f64 = s.parse().map_err(|_| perr(ln, format!("bad time `{s}`")))?;
                let i = grid.nearest_index(v);
                if (grid.time_f64(i) - v).abs() > 1e-6 {
                    return Err(perr(ln, format!("time {s} is not on the frame grid")));
                }
                Ok(i as u32)
            };
            let f_min = time(toks[3])?;
            let f_max = time(toks[4])?;
            let list = |tok: &str, key: &str| -> Result<Vec<u32>> {
                let body = tok
                    .strip_prefix(key)
                    .ok_or_else(|| perr(ln, format!("expected `{key}`")))?;
                body.split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().map_err(|_| perr(ln, format!("bad integer `{s}`"))))
                    .collect()
            };
            let vertices = list(toks[5], "vertices=")?;
            let boundary = list(toks[6], "boundary=")?.into_iter().map(CellId).collect();
            let run = runs.entry(vertices.clone()).or_insert(0);
            cells.push(Cell {
                vertices,
                run: *run,
                dim,
                f_min,
                f_max,
                kind,
                boundary,
                presence: (f_min, f_max),
            });
            *run += 1;
        }
        Ok(Self { cells, ambient_dim, scope, grid })
    }
}

/// A cellular chain map from a sub-medusa into an ambient medusa built on
/// the same frames. Usually injective; several runs of a simplex in the
/// sub-medusa may share one longer ambient run.
#[derive(Clone, Debug)]
pub struct InclusionMap<'a> {
    pub sub: &'a Medusa,
    pub ambient: &'a Medusa,
    pub cell_map: Vec<CellId>,
}

impl<'a> InclusionMap<'a> {
    pub fn identity(m: &'a Medusa) -> Self {
        Self { sub: m, ambient: m, cell_map: m.ids().collect() }
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.ambient.len()];
        self.cell_map.iter().all(|c| !std::mem::replace(&mut hit[c.index()], true))
    }

    /// Checks vertex/dimension preservation, boundary
    /// commutation and nesting of sublevel sets. Returns the first problem.
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::IncompatibleInclusion(msg));
        if self.sub.grid != self.ambient.grid {
            return bad("medusas use different frame grids".into());
        }
        if self.cell_map.len() != self.sub.len() {
            return bad("cell map is not total".into());
        }
        for (i, &img) in self.cell_map.iter().enumerate() {
            let Some(a) = self.ambient.cells.get(img.index()) else {
                return bad(format!("cell {i} maps outside the ambient medusa"));
            };
            let s = &self.sub.cells[i];
            if s.dim != a.dim || s.vertices != a.vertices {
                return bad(format!("cell {i} changes dimension or vertices"));
            }
            if s.f_min < a.f_min || s.f_max > a.f_max {
                return bad(format!("cell {i} lives outside its image's interval"));
            }
            let mut mapped: Vec<CellId> =
                s.boundary.iter().map(|b| self.cell_map[b.index()]).collect();
            let mut amb = a.boundary.clone();
            mapped.sort();
            amb.sort();
            if mapped != amb {
                return bad(format!("cell {i}: map does not commute with the boundary"));
            }
        }
        Ok(())
    }
}
