//! Slow, independent verifiers.
//!
//! Persistent ranks are computed from scratch with dense GF(2) linear algebra
//! on explicit cycle and boundary spaces; the diagram follows by
//! inclusion-exclusion. Lemma-A style checks compare alpha-complex Betti
//! numbers with a rasterized union of restricted Voronoi cells.

pub mod gf2;
mod raster;

pub use raster::{is_generic, lemma_a, rasterized_betti, simplicial_betti, LemmaAReport};

use std::collections::BTreeMap;

use gf2::{Bits, Echelon};

use crate::complex::{CellId, InclusionMap, Medusa};
use crate::error::{Error, Result};
use crate::persistence::Subdiagram;
use crate::time::Rational;

/// Instances above this many cells (sub plus ambient) are refused.
pub const MAX_CELLS: usize = 1500;

/// A position of the extended module: the sublevel set at a grid time, or
/// the pair (medusa, superlevel set) at a grid time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub relative: bool,
    pub time: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    /// Positions `1..=N` in module order (stored 0-based).
    pub positions: Vec<Position>,
    /// `ranks[p][i][j]` for 0-based `i <= j`.
    ranks: Vec<Vec<Vec<usize>>>,
}

impl RankTable {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }

    /// Rank of the map from position `i` to position `j` (1-based), with the
    /// conventions `β(0, ·) = 0` and `β(·, N + 1) = 0`.
    pub fn beta(&self, p: usize, i: usize, j: usize) -> usize {
        if i == 0 || j > self.len() || p >= self.ranks.len() {
            return 0;
        }
        assert!(i <= j, "rank queried backwards");
        self.ranks[p][i - 1][j - 1]
    }

    /// Monotonicity and boundedness of the ranks; returns a description of
    /// the first violation.
    pub fn sanity(&self) -> std::result::Result<(), String> {
        let n = self.len();
        for p in 0..self.ranks.len() {
            for i in 1..=n {
                for j in i..=n {
                    let b = self.beta(p, i, j);
                    if b > self.beta(p, i, i).min(self.beta(p, j, j)) {
                        return Err(format!("rank({i},{j}) exceeds a diagonal rank in dim {p}"));
                    }
                    if j > i && b > self.beta(p, i, j - 1) {
                        return Err(format!("rank({i},{j}) grows with j in dim {p}"));
                    }
                    if i > 1 && i <= j && self.beta(p, i - 1, j) > b {
                        return Err(format!("rank({},{j}) exceeds rank({i},{j}) in dim {p}", i - 1));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Cells carried by each position: sublevel cells in the first half, cells
/// outside the superlevel set (the quotient support) in the second half.
fn supports(m: &Medusa) -> (Vec<Position>, Vec<Bits>) {
    let times = m.grid.times();
    let k = times.len();
    let mut positions = Vec::with_capacity(2 * k);
    let mut masks = Vec::with_capacity(2 * k);
    for (idx, &t) in times.iter().enumerate() {
        positions.push(Position { relative: false, time: t });
        let mut b = Bits::zeros(m.len());
        for (c, cell) in m.cells.iter().enumerate() {
            if cell.f_min as usize <= idx {
                b.set(c);
            }
        }
        masks.push(b);
    }
    for idx in (0..k).rev() {
        positions.push(Position { relative: true, time: times[idx] });
        let mut b = Bits::zeros(m.len());
        for (c, cell) in m.cells.iter().enumerate() {
            if (cell.f_max as usize) < idx {
                b.set(c);
            }
        }
        masks.push(b);
    }
    (positions, masks)
}

/// Boundary of a cell projected onto a support.
fn boundary(m: &Medusa, c: usize, support: &Bits) -> Bits {
    let mut b = Bits::zeros(m.len());
    for f in &m.cells[c].boundary {
        if support.get(f.index()) {
            b.toggle(f.index());
        }
    }
    b
}

fn cycles(m: &Medusa, p: usize, support: &Bits) -> Vec<Bits> {
    let cells: Vec<usize> = support.ones().filter(|&c| m.cells[c].dim == p).collect();
    let images: Vec<Bits> = cells.iter().map(|&c| boundary(m, c, support)).collect();
    gf2::kernel(&cells, &images, m.len())
}

fn boundaries(m: &Medusa, p: usize, support: &Bits) -> Echelon {
    let mut e = Echelon::default();
    for c in support.ones().filter(|&c| m.cells[c].dim == p + 1) {
        e.insert(boundary(m, c, support));
    }
    e
}

fn check_size(cells: usize) -> Result<()> {
    if cells > MAX_CELLS {
        return Err(Error::TooLarge { cells, limit: MAX_CELLS });
    }
    Ok(())
}

/// Ranks of the maps `im(H(sub_i) -> H(amb_i)) -> im(H(sub_j) -> H(amb_j))`
/// for a cellular chain map given cell by cell.
fn rank_table(sub: &Medusa, amb: &Medusa, map: &[CellId]) -> Result<RankTable> {
    check_size(sub.len() + amb.len())?;
    if sub.grid != amb.grid {
        return Err(Error::IncompatibleInclusion("different frame grids".into()));
    }
    let (positions, sub_masks) = supports(sub);
    let (_, amb_masks) = supports(amb);
    let n = positions.len();
    let top = amb.max_dim().unwrap_or(0).max(sub.max_dim().unwrap_or(0));
    let mut ranks = Vec::with_capacity(top + 1);
    for p in 0..=top {
        let z: Vec<Vec<Bits>> = sub_masks.iter().map(|s| cycles(sub, p, s)).collect();
        let mut table = vec![vec![0usize; n]; n];
        for j in 0..n {
            let b = boundaries(amb, p, &amb_masks[j]);
            for (i, zi) in z.iter().enumerate().take(j + 1) {
                let mut e = b.clone();
                for cycle in zi {
                    let mut img = Bits::zeros(amb.len());
                    for c in cycle.ones() {
                        img.toggle(map[c].index());
                    }
                    img.and(&amb_masks[j]);
                    e.insert(img);
                }
                table[i][j] = e.rank() - b.rank();
            }
        }
        ranks.push(table);
    }
    Ok(RankTable { positions, ranks })
}

pub fn rank_table_extended(m: &Medusa) -> Result<RankTable> {
    let identity: Vec<CellId> = m.ids().collect();
    rank_table(m, m, &identity)
}

pub fn rank_table_image(inc: &InclusionMap) -> Result<RankTable> {
    inc.check()?;
    rank_table(inc.sub, inc.ambient, &inc.cell_map)
}

/// A dot reconstructed from ranks, in the engine's coordinate conventions.
pub type DotKey = (usize, Subdiagram, Rational, Rational);

/// Multiplicities `μ(i,j) = β(i,j−1) − β(i,j) − β(i−1,j−1) + β(i−1,j)`.
pub fn diagram_from_ranks(rt: &RankTable) -> Result<Vec<DotKey>> {
    let n = rt.len();
    let mut dots = Vec::new();
    for p in 0..=rt.max_dim() {
        if rt.ranks.is_empty() {
            break;
        }
        for i in 1..=n {
            for j in i + 1..=n + 1 {
                let mu = rt.beta(p, i, j - 1) as i64 - rt.beta(p, i, j) as i64
                    - rt.beta(p, i - 1, j - 1) as i64
                    + rt.beta(p, i - 1, j) as i64;
                if mu < 0 {
                    return Err(Error::NegativeMultiplicity { dim: p, birth: i, death: j, value: mu });
                }
                if mu == 0 {
                    continue;
                }
                if j == n + 1 {
                    return Err(Error::InvalidMedusa(format!("class of dim {p} born at {i} never dies")));
                }
                let (a, b) = (rt.positions[i - 1], rt.positions[j - 1]);
                let key = match (a.relative, b.relative) {
                    (false, false) => (p, Subdiagram::Ord, a.time, b.time),
                    (false, true) => {
                        let sub = if a.time <= b.time { Subdiagram::Hor } else { Subdiagram::Ver };
                        (p, sub, a.time, b.time)
                    }
                    (true, true) => (p, Subdiagram::Rel, b.time, a.time),
                    (true, false) => unreachable!("positions are ordered"),
                };
                for _ in 0..mu {
                    dots.push(key);
                }
            }
        }
    }
    dots.sort();
    Ok(dots)
}

/// Multiset difference in both directions, rendered one line per surplus dot.
pub fn diagram_diff(engine: &[DotKey], oracle: &[DotKey]) -> Vec<String> {
    let mut count: BTreeMap<DotKey, i64> = BTreeMap::new();
    for k in engine {
        *count.entry(*k).or_default() += 1;
    }
    for k in oracle {
        *count.entry(*k).or_default() -= 1;
    }
    let mut out = Vec::new();
    for ((p, sub, b, d), c) in count {
        if c != 0 {
            let side = if c > 0 { "engine only" } else { "oracle only" };
            out.push(format!("{side} x{}: dim {p} {sub} ({b}, {d})", c.abs()));
        }
    }
    out
}

#[cfg(test)]
mod tests;
