//! Betti numbers of unions of restricted Voronoi cells on a pixel grid, and
//! of simplicial complexes by rank computation.

use std::collections::{BTreeMap, VecDeque};

use super::gf2::{Bits, Echelon};
use crate::complex::ColorScope;
use crate::geometry::{restricted_voronoi_membership, SitePoint, SliceComplex};

/// `(β₀, β₁)` of the union of in-scope restricted Voronoi cells, sampled at
/// pixel centers of a `resolution x resolution` grid over the bounding box
/// of the sites inflated by `alpha0`. Components use 4-connectivity; the
/// Euler number is the matching bit-quad count.
pub fn rasterized_betti(points: &[SitePoint], scope: ColorScope, alpha0: f64, resolution: usize) -> (usize, usize) {
    if points.is_empty() || resolution == 0 {
        return (0, 0);
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        let x = p.position();
        for t in 0..2 {
            lo[t] = lo[t].min(x[t] - alpha0);
            hi[t] = hi[t].max(x[t] + alpha0);
        }
    }
    let side = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let h = side / resolution as f64;
    let n = resolution;
    // padded by one empty pixel on each side
    let w = n + 2;
    let mut img = vec![false; w * w];
    for r in 0..n {
        for c in 0..n {
            let x = [lo[0] + (c as f64 + 0.5) * h, lo[1] + (r as f64 + 0.5) * h];
            img[(r + 1) * w + c + 1] = restricted_voronoi_membership(&x, points, scope, alpha0);
        }
    }
    let b0 = components4(&img, w);
    // bit-quad counts over all 2x2 windows
    let (mut q1, mut q3, mut qd) = (0i64, 0i64, 0i64);
    for r in 0..w - 1 {
        for c in 0..w - 1 {
            let a = img[r * w + c];
            let b = img[r * w + c + 1];
            let d = img[(r + 1) * w + c];
            let e = img[(r + 1) * w + c + 1];
            match a as u8 + b as u8 + d as u8 + e as u8 {
                1 => q1 += 1,
                3 => q3 += 1,
                2 if a == e => qd += 1,
                _ => {}
            }
        }
    }
    let euler = (q1 - q3 + 2 * qd) / 4;
    let b1 = b0 as i64 - euler;
    (b0, b1.max(0) as usize)
}

fn components4(img: &[bool], w: usize) -> usize {
    let mut seen = vec![false; img.len()];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..img.len() {
        if !img[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for j in [i - 1, i + 1, i - w, i + w] {
                if img[j] && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    count
}

/// GF(2) Betti numbers of a simplicial complex given by all its simplices
/// (sorted vertex lists).
pub fn simplicial_betti(simplices: &[Vec<u32>]) -> Vec<usize> {
    let top = simplices.iter().map(|s| s.len()).max().unwrap_or(0);
    if top == 0 {
        return vec![];
    }
    let mut by_dim: Vec<Vec<&Vec<u32>>> = vec![Vec::new(); top];
    for s in simplices {
        by_dim[s.len() - 1].push(s);
    }
    let index: Vec<BTreeMap<&Vec<u32>, usize>> =
        by_dim.iter().map(|l| l.iter().enumerate().map(|(i, s)| (*s, i)).collect()).collect();
    // rank of the boundary map from dimension k to k-1
    let mut rank = vec![0usize; top + 1];
    for k in 1..top {
        let mut e = Echelon::default();
        for s in &by_dim[k] {
            let mut b = Bits::zeros(by_dim[k - 1].len());
            for omit in 0..s.len() {
                let mut f = (*s).clone();
                f.remove(omit);
                b.toggle(index[k - 1][&f]);
            }
            e.insert(b);
        }
        rank[k] = e.rank();
    }
    (0..top).map(|k| by_dim[k].len() - rank[k] - rank[k + 1]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaAReport {
    pub alpha: (usize, usize),
    pub raster: (usize, usize),
    /// Resolution of the last raster computed.
    pub resolution: usize,
}

impl LemmaAReport {
    pub fn agrees(&self) -> bool {
        self.alpha == self.raster
    }
}

/// Compares `(β₀, β₁)` of the alpha subcomplex in `scope` with the raster,
/// doubling the resolution from 256 up to three times on disagreement.
pub fn lemma_a(slice: &SliceComplex, scope: ColorScope, alpha0: f64) -> LemmaAReport {
    let betti = simplicial_betti(&slice.filtered(true, scope));
    let alpha = (betti.first().copied().unwrap_or(0), betti.get(1).copied().unwrap_or(0));
    let mut resolution = 256;
    loop {
        let raster = rasterized_betti(&slice.points, scope, alpha0, resolution);
        if raster == alpha || resolution >= 2048 {
            return LemmaAReport { alpha, raster, resolution };
        }
        resolution *= 2;
    }
}

/// True when no alpha value of the slice lies within `margin` (relative) of
/// `alpha0`, so rasterization is not fooled by near-tangencies.
pub fn is_generic(slice: &SliceComplex, alpha0: f64, margin: f64) -> bool {
    slice.simplices.values().filter_map(|d| d.rho()).all(|r| (r - alpha0).abs() > margin * alpha0)
}

