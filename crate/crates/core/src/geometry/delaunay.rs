//! Incremental Bowyer-Watson triangulation with an infinite vertex.
//!
//! Degeneracies are broken by a symbolic perturbation of the lifting map in
//! which lower point ids move further, so the output is a function of the
//! labelled point set alone. Point sets of lower affine dimension than the
//! ambient space are triangulated within their affine hull.

use std::collections::{BTreeMap, HashMap};

use super::exact::det_sign;
use super::{SimplexData, SitePoint, SliceComplex};
use crate::error::{Error, Result};

const INF: usize = usize::MAX;

struct Kernel<'a> {
    pts: &'a [SitePoint],
    d: usize,
    /// Plane normal when a planar point set lives in space.
    normal: Option<[i128; 3]>,
}

impl Kernel<'_> {
    fn row(&self, i: usize) -> Vec<i128> {
        self.pts[i].coords[..self.d].iter().map(|&c| c as i128).collect()
    }

    fn norm_sq(&self, i: usize) -> i128 {
        self.pts[i].coords[..self.d].iter().map(|&c| (c as i128) * (c as i128)).sum()
    }

    fn orient_rows(&self, mut rows: Vec<Vec<i128>>) -> i8 {
        if let Some(n) = self.normal {
            let mut r = n.to_vec();
            r.push(0);
            rows.push(r);
        }
        det_sign(&rows)
    }

    /// Orientation of a full simplex of the hull.
    fn orient(&self, idx: &[usize]) -> i8 {
        let rows = idx
            .iter()
            .map(|&i| {
                let mut r = self.row(i);
                r.push(1);
                r
            })
            .collect();
        self.orient_rows(rows)
    }

    /// Orientation of `facet` followed by the centroid of `simplex`.
    fn orient_against_centroid(&self, facet: &[usize], simplex: &[usize]) -> i8 {
        let mut rows: Vec<Vec<i128>> = facet
            .iter()
            .map(|&i| {
                let mut r = self.row(i);
                r.push(1);
                r
            })
            .collect();
        let mut c = vec![0i128; self.d + 1];
        for &i in simplex {
            for (a, b) in c.iter_mut().zip(self.row(i)) {
                *a += b;
            }
        }
        c[self.d] = simplex.len() as i128;
        rows.push(c);
        self.orient_rows(rows)
    }

    fn lift(&self, idx: &[usize]) -> i8 {
        let mut rows: Vec<Vec<i128>> = idx
            .iter()
            .map(|&i| {
                let mut r = self.row(i);
                r.push(self.norm_sq(i));
                r.push(1);
                r
            })
            .collect();
        if let Some(n) = self.normal {
            let mut r = n.to_vec();
            r.extend([0, 0]);
            rows.push(r);
        }
        det_sign(&rows)
    }

    /// Whether `q` lies inside the circumsphere of `simplex` under the
    /// perturbed lifting.
    fn in_sphere(&self, simplex: &[usize], q: usize) -> bool {
        let o = self.orient(simplex);
        debug_assert!(o != 0);
        let mut all: Vec<usize> = simplex.to_vec();
        all.push(q);
        let mut l = self.lift(&all);
        if l == 0 {
            // lifted heights z_i + eps^(1 + rank(id)): the lowest id dominates
            let zc = self.d;
            let mut order: Vec<usize> = (0..all.len()).collect();
            order.sort_by_key(|&j| self.pts[all[j]].id);
            for j in order {
                let rest: Vec<usize> =
                    all.iter().enumerate().filter(|&(t, _)| t != j).map(|(_, &v)| v).collect();
                let minor = self.orient(&rest);
                if minor != 0 {
                    l = if (j + zc).is_multiple_of(2) { minor } else { -minor };
                    break;
                }
            }
        }
        let c: i8 = if self.normal.is_some() { -1 } else { 1 };
        l * o * c > 0
    }

    /// Collinear `q` strictly between `a` and `b`.
    fn strictly_between(&self, a: usize, b: usize, q: usize) -> bool {
        let (pa, pb, pq) = (self.row(a), self.row(b), self.row(q));
        let dot = |u: &[i128], v: &[i128], w: &[i128]| -> i128 {
            (0..self.d).map(|t| (u[t] - v[t]) * (w[t] - v[t])).sum()
        };
        dot(&pq, &pa, &pb) > 0 && dot(&pq, &pb, &pa) > 0
    }
}

#[derive(Clone, Debug)]
struct BwCell {
    /// Finite cells: k+1 vertices. Infinite cells: k finite vertices then INF.
    v: Vec<usize>,
    /// Orientation (finite) or the sign of the outside half-space (infinite).
    sign: i8,
    alive: bool,
}

fn cross(u: [i128; 3], v: [i128; 3]) -> [i128; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn diff(a: &SitePoint, b: &SitePoint) -> [i128; 3] {
    [0, 1, 2].map(|t| a.coords[t] as i128 - b.coords[t] as i128)
}

/// Maximal simplices of the Delaunay triangulation as sorted id lists.
pub fn delaunay_tops(points: &[SitePoint], d: usize) -> Result<Vec<Vec<u32>>> {
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut pts = points.to_vec();
    pts.sort_by_key(|p| p.id);
    for w in pts.windows(2) {
        if w[0].id == w[1].id {
            return Err(Error::InconsistentSupport(format!("point id {} repeated", w[0].id)));
        }
    }
    {
        let mut by_pos: HashMap<[i64; 3], u32> = HashMap::new();
        for p in &pts {
            if let Some(&other) = by_pos.get(&p.coords) {
                return Err(Error::DuplicatePosition(other, p.id));
            }
            by_pos.insert(p.coords, p.id);
        }
    }
    let n = pts.len();
    let ids = |s: &[usize]| -> Vec<u32> {
        let mut v: Vec<u32> = s.iter().map(|&i| pts[i].id).collect();
        v.sort_unstable();
        v
    };
    if n <= 1 {
        return Ok((0..n).map(|i| vec![pts[i].id]).collect());
    }

    // greedy affine basis in id order
    let zero3 = [0i128; 3];
    let mut basis = vec![0usize, 1usize];
    let e1 = diff(&pts[1], &pts[0]);
    let mut normal = zero3;
    if let Some(j) = (2..n).find(|&j| cross(e1, diff(&pts[j], &pts[0])) != zero3) {
        basis.push(j);
        normal = cross(e1, diff(&pts[j], &pts[0]));
        if d == 3 {
            let e2 = diff(&pts[j], &pts[0]);
            let third = (2..n).find(|&t| {
                let e3 = diff(&pts[t], &pts[0]);
                det_sign(&[e1.to_vec(), e2.to_vec(), e3.to_vec()]) != 0
            });
            if let Some(t) = third {
                basis.push(t);
            }
        }
    }
    let k = basis.len() - 1;
    if k == 1 {
        let mut order: Vec<usize> = (0..n).collect();
        let key = |i: usize| -> i128 {
            let u = diff(&pts[i], &pts[0]);
            (0..3).map(|t| u[t] * e1[t]).sum()
        };
        order.sort_by_key(|&i| key(i));
        let mut tops: Vec<Vec<u32>> = order.windows(2).map(&ids).collect();
        tops.sort();
        return Ok(tops);
    }

    let kernel = Kernel {
        pts: &pts,
        d,
        normal: (k < d).then(|| {
            // normalize by gcd so later determinants stay small
            let g = normal.iter().fold(0i128, |g, &x| gcd(g, x.abs()));
            normal.map(|x| x / g)
        }),
    };

    // the centroid of the initial simplex stays strictly inside the hull, so
    // it orients every hull facet created later
    let mut cells: Vec<BwCell> = Vec::new();
    let o = kernel.orient(&basis);
    cells.push(BwCell { v: basis.clone(), sign: o, alive: true });
    for omit in 0..=k {
        let facet: Vec<usize> =
            basis.iter().enumerate().filter(|&(t, _)| t != omit).map(|(_, &v)| v).collect();
        let out = -kernel.orient_against_centroid(&facet, &basis);
        let mut v = facet;
        v.push(INF);
        cells.push(BwCell { v, sign: out, alive: true });
    }

    let mut in_basis = vec![false; n];
    for &b in &basis {
        in_basis[b] = true;
    }
    for q in (0..n).filter(|&i| !in_basis[i]) {
        let conflicts: Vec<usize> = (0..cells.len())
            .filter(|&c| cells[c].alive && in_conflict(&kernel, &cells[c], q))
            .collect();
        debug_assert!(!conflicts.is_empty());
        let mut facets: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for &c in &conflicts {
            cells[c].alive = false;
            let v = &cells[c].v;
            for omit in 0..v.len() {
                let mut f: Vec<usize> =
                    v.iter().enumerate().filter(|&(t, _)| t != omit).map(|(_, &x)| x).collect();
                f.sort_unstable();
                *facets.entry(f).or_insert(0) += 1;
            }
        }
        for (f, count) in facets {
            if count != 1 {
                continue;
            }
            if f.last() == Some(&INF) {
                let mut g: Vec<usize> = f[..f.len() - 1].to_vec();
                g.push(q);
                let out = -kernel.orient_against_centroid(&g, &basis);
                g.push(INF);
                cells.push(BwCell { v: g, sign: out, alive: true });
            } else {
                let mut v = f;
                v.push(q);
                let s = kernel.orient(&v);
                debug_assert!(s != 0, "flat cell in triangulation");
                cells.push(BwCell { v, sign: s, alive: true });
            }
        }
    }

    let mut tops: Vec<Vec<u32>> =
        cells.iter().filter(|c| c.alive && !c.v.contains(&INF)).map(|c| ids(&c.v)).collect();
    tops.sort();
    Ok(tops)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

fn in_conflict(kernel: &Kernel, cell: &BwCell, q: usize) -> bool {
    if cell.v.last() != Some(&INF) {
        return kernel.in_sphere(&cell.v, q);
    }
    let f = &cell.v[..cell.v.len() - 1];
    let mut with_q = f.to_vec();
    with_q.push(q);
    let s = kernel.orient(&with_q);
    if s != 0 {
        return s == cell.sign;
    }
    match f.len() {
        2 => kernel.strictly_between(f[0], f[1], q),
        3 => {
            // coplanar with a hull triangle in space: test the circumcircle
            // within the facet's own plane
            let a = diff(&kernel.pts[f[1]], &kernel.pts[f[0]]);
            let b = diff(&kernel.pts[f[2]], &kernel.pts[f[0]]);
            let n = cross(a, b);
            let g = n.iter().fold(0i128, |g, &x| gcd(g, x.abs()));
            let sub = Kernel { pts: kernel.pts, d: kernel.d, normal: Some(n.map(|x| x / g)) };
            sub.in_sphere(f, q)
        }
        _ => false,
    }
}

/// The full Delaunay complex (all faces of the maximal simplices).
pub fn delaunay(points: &[SitePoint], d: usize) -> Result<SliceComplex> {
    let tops = delaunay_tops(points, d)?;
    let mut simplices = BTreeMap::new();
    for top in &tops {
        let m = top.len();
        for mask in 1u32..(1 << m) {
            let face: Vec<u32> =
                (0..m).filter(|&t| mask & (1 << t) != 0).map(|t| top[t]).collect();
            simplices
                .entry(face)
                .or_insert(SimplexData { in_delaunay: true, in_alpha: false, rho_sq: None });
        }
    }
    let mut sorted = points.to_vec();
    sorted.sort_by_key(|p| p.id);
    Ok(SliceComplex { dim: d, points: sorted, simplices })
}
