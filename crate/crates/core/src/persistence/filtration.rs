//! The coned filtration behind extended persistence.
//!
//! Phase one adds cells by ascending `f_min`. Phase two adds the cone over
//! each cell by descending `f_max`, which realizes the relative groups of the
//! superlevel sets. The apex itself is left out so the module starts and ends
//! at zero; the cone over a vertex then has the vertex alone as boundary.

use crate::complex::{CellId, Medusa};
use crate::time::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Column {
    pub cell: CellId,
    pub coned: bool,
}

pub struct ConeFiltration {
    pub columns: Vec<Column>,
    /// Position of the plain and the coned copy of every cell.
    pub plain: Vec<u32>,
    pub cone: Vec<u32>,
}

impl ConeFiltration {
    pub fn new(m: &Medusa) -> Self {
        let n = m.len();
        let mut first: Vec<CellId> = m.ids().collect();
        first.sort_by_key(|&c| {
            let cell = m.cell(c);
            (cell.f_min, cell.dim, c)
        });
        let mut second = first.clone();
        second.sort_by_key(|&c| {
            let cell = m.cell(c);
            (std::cmp::Reverse(cell.f_max), cell.dim, c)
        });
        let mut columns = Vec::with_capacity(2 * n);
        let mut plain = vec![0u32; n];
        let mut cone = vec![0u32; n];
        for c in first {
            plain[c.index()] = columns.len() as u32;
            columns.push(Column { cell: c, coned: false });
        }
        for c in second {
            cone[c.index()] = columns.len() as u32;
            columns.push(Column { cell: c, coned: true });
        }
        Self { columns, plain, cone }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn position(&self, col: Column) -> u32 {
        if col.coned {
            self.cone[col.cell.index()]
        } else {
            self.plain[col.cell.index()]
        }
    }

    /// Cells of the column's boundary, as columns.
    pub fn boundary(&self, m: &Medusa, col: Column) -> Vec<Column> {
        let cell = m.cell(col.cell);
        let mut out: Vec<Column> =
            cell.boundary.iter().map(|&f| Column { cell: f, coned: col.coned }).collect();
        if col.coned {
            out.push(Column { cell: col.cell, coned: false });
        }
        out
    }

    /// Boundary as sorted positions.
    pub fn boundary_positions(&self, m: &Medusa, pos: usize) -> Vec<u32> {
        let mut b: Vec<u32> =
            self.boundary(m, self.columns[pos]).into_iter().map(|c| self.position(c)).collect();
        b.sort_unstable();
        b
    }

    /// Homological dimension of the column.
    pub fn dim(&self, m: &Medusa, pos: usize) -> usize {
        let c = self.columns[pos];
        m.cell(c.cell).dim + c.coned as usize
    }

    /// Filtration time of a column: `f_min` in phase one, `f_max` of the base
    /// in phase two.
    pub fn time(&self, m: &Medusa, pos: usize) -> Rational {
        let c = self.columns[pos];
        let cell = m.cell(c.cell);
        m.grid.time(if c.coned { cell.f_max } else { cell.f_min } as usize)
    }
}
