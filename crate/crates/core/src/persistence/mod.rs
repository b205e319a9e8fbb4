//! Extended and image persistence of the time function on a medusa.

mod filtration;
mod reduce;

pub use filtration::{Column, ConeFiltration};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complex::{Cell, CellId, CellKind, InclusionMap, Medusa};
use crate::error::{Error, Result};
use crate::time::{fmt_fixed6, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subdiagram {
    /// Born and dead while sweeping sublevel sets.
    Ord,
    /// Born in the sublevel sweep, dead in the superlevel sweep, birth <= death.
    Hor,
    /// As `Hor` with birth > death.
    Ver,
    /// Born and dead while sweeping superlevel sets.
    Rel,
}

impl Subdiagram {
    pub const ALL: [Subdiagram; 4] = [Subdiagram::Ord, Subdiagram::Hor, Subdiagram::Ver, Subdiagram::Rel];

    pub fn as_str(self) -> &'static str {
        match self {
            Subdiagram::Ord => "Ord",
            Subdiagram::Hor => "Hor",
            Subdiagram::Ver => "Ver",
            Subdiagram::Rel => "Rel",
        }
    }
}

impl fmt::Display for Subdiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Subdiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subdiagram::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown subdiagram `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dot {
    pub dim: usize,
    pub subdiagram: Subdiagram,
    pub birth: Rational,
    pub death: Rational,
    pub creator: CellId,
    /// For image diagrams this refers to the ambient medusa.
    pub destroyer: CellId,
}

impl Dot {
    pub fn persistence(&self) -> Rational {
        if self.birth > self.death {
            self.birth - self.death
        } else {
            self.death - self.birth
        }
    }

    /// Zero-length pair within one sweep: a point of the diagonal produced by
    /// simultaneous events, kept only to witness the pairing.
    pub fn is_trivial(&self) -> bool {
        self.birth == self.death && matches!(self.subdiagram, Subdiagram::Ord | Subdiagram::Rel)
    }

    /// Identity of the dot as a point of the diagram.
    pub fn key(&self) -> (usize, Subdiagram, Rational, Rational) {
        (self.dim, self.subdiagram, self.birth, self.death)
    }

    fn order(&self, other: &Self) -> Ordering {
        (self.dim, self.subdiagram, self.birth, self.death, self.creator, self.destroyer).cmp(&(
            other.dim,
            other.subdiagram,
            other.birth,
            other.death,
            other.creator,
            other.destroyer,
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Extended,
    Image,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceDiagram {
    /// Sorted by (dim, subdiagram, birth, death, creator).
    pub dots: Vec<Dot>,
    pub flavor: Flavor,
    pub ambient_dim: usize,
    /// Free-form description of the medusa or inclusion measured.
    pub source: String,
}

impl PersistenceDiagram {
    pub fn new(mut dots: Vec<Dot>, flavor: Flavor, ambient_dim: usize, source: String) -> Self {
        dots.sort_by(Dot::order);
        Self { dots, flavor, ambient_dim, source }
    }

    pub fn len(&self) -> usize {
        self.dots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dots.is_empty()
    }

    /// Sorted multiset of dot keys, optionally without trivial dots.
    pub fn keys(&self, keep_trivial: bool) -> Vec<(usize, Subdiagram, Rational, Rational)> {
        let mut k: Vec<_> = self
            .dots
            .iter()
            .filter(|d| keep_trivial || !d.is_trivial())
            .map(Dot::key)
            .collect();
        k.sort();
        k
    }

    /// Non-trivial dots with persistence at least `min_persistence`.
    pub fn visible(&self, min_persistence: Rational) -> impl Iterator<Item = &Dot> {
        self.dots.iter().filter(move |d| !d.is_trivial() && d.persistence() >= min_persistence)
    }

    /// Dots of dimension `dim` alive in the sublevel set at time `t`.
    pub fn alive_at(&self, dim: usize, t: Rational) -> usize {
        self.dots
            .iter()
            .filter(|d| d.dim == dim && d.birth <= t)
            .filter(|d| match d.subdiagram {
                Subdiagram::Ord => t < d.death,
                Subdiagram::Hor | Subdiagram::Ver => true,
                Subdiagram::Rel => false,
            })
            .count()
    }

    /// CSV table `dim,subdiagram,birth,death,persistence,hole_type,creator,destroyer`
    /// with six-decimal times, dropping trivial dots and dots below
    /// `min_persistence`.
    pub fn to_csv(&self, min_persistence: Rational) -> String {
        let mut out = String::from("dim,subdiagram,birth,death,persistence,hole_type,creator,destroyer\n");
        for d in self.visible(min_persistence) {
            let hole = crate::summary::hole_type(d, self.ambient_dim);
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                d.dim,
                d.subdiagram,
                fmt_fixed6(&d.birth),
                fmt_fixed6(&d.death),
                fmt_fixed6(&d.persistence()),
                hole.map_or("artifact", |h| h.as_str()),
                d.creator,
                d.destroyer
            ));
        }
        out
    }
}

/// Turns a persistence pair of cone columns into a dot. `c_*` describe the
/// creator, `d_*` the destroyer: phase flag and time.
fn classify(creator_coned: bool, c_time: Rational, destroyer_coned: bool, d_time: Rational) -> (Subdiagram, Rational, Rational) {
    match (creator_coned, destroyer_coned) {
        (false, false) => (Subdiagram::Ord, c_time, d_time),
        (false, true) => {
            let sub = if c_time <= d_time { Subdiagram::Hor } else { Subdiagram::Ver };
            (sub, c_time, d_time)
        }
        (true, true) => (Subdiagram::Rel, d_time, c_time),
        (true, false) => unreachable!("a phase-two column cannot create a class killed in phase one"),
    }
}

fn source_of(m: &Medusa) -> String {
    format!("scope={} ambient_dim={} cells={}", m.scope, m.ambient_dim, m.len())
}

/// Extended persistence diagram of the time function.
pub fn extended_persistence(m: &Medusa) -> Result<PersistenceDiagram> {
    if !m.validate().is_valid() {
        return Err(Error::InvalidMedusa(format!("{} violations", m.validate().violations.len())));
    }
    let f = ConeFiltration::new(m);
    let mut cols: Vec<Vec<u32>> = (0..f.len()).map(|p| f.boundary_positions(m, p)).collect();
    let pairs = reduce::reduce(&mut cols, f.len());
    if 2 * pairs.len() != f.len() {
        return Err(Error::InvalidMedusa("pairing is not perfect".into()));
    }
    let dots = pairs
        .into_iter()
        .map(|(r, j)| {
            let (cr, cj) = (f.columns[r], f.columns[j]);
            let (subdiagram, birth, death) = classify(cr.coned, f.time(m, r), cj.coned, f.time(m, j));
            Dot { dim: f.dim(m, r), subdiagram, birth, death, creator: cr.cell, destroyer: cj.cell }
        })
        .collect();
    Ok(PersistenceDiagram::new(dots, Flavor::Extended, m.ambient_dim, source_of(m)))
}

/// Image pairs for an inclusion whose sub filtration is the restriction of
/// the ambient one: `(sub column position,
/// ambient column position)` in the respective cone filtrations.
fn image_pairs(
    fs: &ConeFiltration,
    amb: &Medusa,
    fa: &ConeFiltration,
    map: &[CellId],
) -> Vec<(usize, usize)> {
    // rows: sub columns in sub order, then the remaining ambient columns
    let ls = fs.len();
    let mut row_of = vec![u32::MAX; fa.len()];
    for (s, &a) in map.iter().enumerate() {
        row_of[fa.plain[a.index()] as usize] = fs.plain[s];
        row_of[fa.cone[a.index()] as usize] = fs.cone[s];
    }
    let mut next = ls as u32;
    for r in row_of.iter_mut() {
        if *r == u32::MAX {
            *r = next;
            next += 1;
        }
    }
    let mut cols: Vec<Vec<u32>> = (0..fa.len())
        .map(|p| {
            let mut b: Vec<u32> =
                fa.boundary_positions(amb, p).into_iter().map(|q| row_of[q as usize]).collect();
            b.sort_unstable();
            b
        })
        .collect();
    reduce::reduce(&mut cols, fa.len())
        .into_iter()
        .filter(|&(low, _)| low < ls)
        .collect()
}

/// The mapping cylinder of a chain map that is not a filtered subcomplex: sub cells, ambient
/// cells, then one cell `c x [0,1]` per sub cell. The sub-medusa sits in it
/// as its first cells and the cylinder retracts onto the ambient medusa at
/// every filtration level.
fn mapping_cylinder(inc: &InclusionMap) -> (Medusa, Vec<CellId>) {
    let (sub, amb) = (inc.sub, inc.ambient);
    let ns = sub.len() as u32;
    let na = amb.len() as u32;
    let mut cells: Vec<Cell> = sub.cells.clone();
    let mut back: Vec<CellId> = inc.cell_map.clone();
    for (i, c) in amb.cells.iter().enumerate() {
        let mut c = c.clone();
        c.boundary = c.boundary.iter().map(|b| CellId(b.0 + ns)).collect();
        cells.push(c);
        back.push(CellId(i as u32));
    }
    for (i, c) in sub.cells.iter().enumerate() {
        let mut boundary = vec![CellId(i as u32), CellId(inc.cell_map[i].0 + ns)];
        boundary.extend(c.boundary.iter().map(|b| CellId(b.0 + ns + na)));
        cells.push(Cell {
            vertices: c.vertices.clone(),
            run: c.run,
            dim: c.dim + 1,
            f_min: c.f_min,
            f_max: c.f_max,
            kind: CellKind::Prism,
            boundary,
            presence: c.presence,
        });
        back.push(inc.cell_map[i]);
    }
    let cyl = Medusa { cells, ambient_dim: amb.ambient_dim, scope: amb.scope, grid: amb.grid.clone() };
    (cyl, back)
}

fn preserves_times(inc: &InclusionMap) -> bool {
    inc.sub.cells.iter().zip(&inc.cell_map).all(|(c, &a)| {
        let g = inc.ambient.cell(a);
        (c.f_min, c.f_max) == (g.f_min, g.f_max)
    })
}

/// Extended persistence of the images of the maps induced by an inclusion.
pub fn image_persistence(inc: &InclusionMap) -> Result<PersistenceDiagram> {
    inc.check()?;
    let sub = inc.sub;
    let source = format!("image of [{}] in [{}]", source_of(sub), source_of(inc.ambient));
    let fs = ConeFiltration::new(sub);
    let cylinder;
    // Ambient filtration, cell map into it, and the ambient cell behind each column.
    let (amb, map, back): (&Medusa, Vec<CellId>, Vec<CellId>) =
        if inc.is_injective() && preserves_times(inc) {
            (inc.ambient, inc.cell_map.clone(), inc.ambient.ids().collect())
        } else {
            let (cyl, back) = mapping_cylinder(inc);
            cylinder = cyl;
            (&cylinder, sub.ids().collect(), back)
        };
    let fa = ConeFiltration::new(amb);
    let pairs = image_pairs(&fs, amb, &fa, &map);
    let dots = pairs
        .into_iter()
        .map(|(r, j)| {
            let (cr, cj) = (fs.columns[r], fa.columns[j]);
            let (subdiagram, birth, death) =
                classify(cr.coned, fs.time(sub, r), cj.coned, fa.time(amb, j));
            Dot {
                dim: fs.dim(sub, r),
                subdiagram,
                birth,
                death,
                creator: cr.cell,
                destroyer: back[cj.cell.index()],
            }
        })
        .collect();
    Ok(PersistenceDiagram::new(dots, Flavor::Image, sub.ambient_dim, source))
}

/// `β_p` of the sublevel set at every grid time, read off the diagram.
pub fn betti_curve(m: &Medusa, p: usize) -> Result<Vec<(Rational, usize)>> {
    let dgm = extended_persistence(m)?;
    Ok(m.grid.times().iter().map(|&t| (t, dgm.alive_at(p, t))).collect())
}

#[cfg(test)]
mod tests;
