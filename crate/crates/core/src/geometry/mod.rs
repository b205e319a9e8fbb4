//! Per-frame geometry on quantized coordinates: Delaunay triangulations in
//! the plane and in space, alpha values, restricted Voronoi membership.

mod alpha;
mod delaunay;
pub mod exact;

pub use alpha::{alpha_value_sq, alpha_values, radius_sq_in_quanta, smallest_circumball};
pub use delaunay::{delaunay, delaunay_tops};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::complex::ColorScope;

/// Coordinates are integer multiples of `2^-20` input units.
pub const QUANTUM_BITS: u32 = 20;
pub const QUANTA_PER_UNIT: f64 = (1u64 << QUANTUM_BITS) as f64;
/// Largest accepted |coordinate| in quanta (about 10^6 input units).
pub const MAX_QUANTA: i64 = 1 << 40;

pub type BigRational = Ratio<BigInt>;

pub fn quantize(x: f64) -> Option<i64> {
    let q = (x * QUANTA_PER_UNIT).round();
    (q.is_finite() && q.abs() <= MAX_QUANTA as f64).then_some(q as i64)
}

pub fn dequantize(q: i64) -> f64 {
    q as f64 / QUANTA_PER_UNIT
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SitePoint {
    pub id: u32,
    /// Quantized coordinates; entries past the ambient dimension are zero.
    pub coords: [i64; 3],
    pub color: u32,
}

impl SitePoint {
    pub fn new(id: u32, xyz: &[f64], color: u32) -> Self {
        let mut coords = [0i64; 3];
        for (c, &x) in coords.iter_mut().zip(xyz) {
            *c = quantize(x).expect("coordinate out of range");
        }
        Self { id, coords, color }
    }

    pub fn position(&self) -> [f64; 3] {
        self.coords.map(dequantize)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexData {
    pub in_delaunay: bool,
    pub in_alpha: bool,
    /// Squared alpha value in squared quanta; set by [`alpha_values`].
    pub rho_sq: Option<BigRational>,
}

impl SimplexData {
    /// Alpha value in input units.
    pub fn rho(&self) -> Option<f64> {
        self.rho_sq
            .as_ref()
            .and_then(|r| r.to_f64())
            .map(|r| r.sqrt() / QUANTA_PER_UNIT)
    }
}

/// The Delaunay triangulation of one frame, keyed by sorted point ids.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceComplex {
    pub dim: usize,
    pub points: Vec<SitePoint>,
    pub simplices: BTreeMap<Vec<u32>, SimplexData>,
}

impl SliceComplex {
    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim + 1];
        for k in self.simplices.keys() {
            counts[k.len() - 1] += 1;
        }
        counts
    }

    /// Simplices of the alpha complex (or the full triangulation when
    /// `alpha_only` is false) restricted to the color scope.
    pub fn filtered(&self, alpha_only: bool, scope: ColorScope) -> Vec<Vec<u32>> {
        let colors: BTreeMap<u32, u32> = self.points.iter().map(|p| (p.id, p.color)).collect();
        self.simplices
            .iter()
            .filter(|(_, d)| d.in_delaunay && (!alpha_only || d.in_alpha))
            .filter(|(k, _)| k.iter().all(|v| scope.admits(colors[v])))
            .map(|(k, _)| k.clone())
            .collect()
    }
}

/// True iff the nearest site to `x` (ties to the lower id) is within `alpha0`
/// and has a color in scope.
pub fn restricted_voronoi_membership(
    x: &[f64],
    points: &[SitePoint],
    scope: ColorScope,
    alpha0: f64,
) -> bool {
    let mut best: Option<(f64, u32, u32)> = None;
    for p in points {
        let pos = p.position();
        let d2: f64 = x.iter().zip(pos).map(|(a, b)| (a - b) * (a - b)).sum();
        let better = match best {
            None => true,
            Some((bd, bid, _)) => d2 < bd || (d2 == bd && p.id < bid),
        };
        if better {
            best = Some((d2, p.id, p.color));
        }
    }
    match best {
        Some((d2, _, color)) => d2 <= alpha0 * alpha0 && scope.admits(color),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(list: &[(f64, f64, u32)]) -> Vec<SitePoint> {
        list.iter()
            .enumerate()
            .map(|(i, &(x, y, c))| SitePoint::new(i as u32, &[x, y], c))
            .collect()
    }

    #[test]
    fn membership_at_a_site() {
        let p = pts(&[(0.0, 0.0, 1), (3.0, 0.0, 2)]);
        assert!(restricted_voronoi_membership(&[0.0, 0.0], &p, ColorScope::Mono(1), 0.0));
    }

    #[test]
    fn membership_far_away() {
        let p = pts(&[(0.0, 0.0, 1)]);
        assert!(!restricted_voronoi_membership(&[5.0, 0.0], &p, ColorScope::Multi, 1.0));
    }

    #[test]
    fn membership_is_by_nearest_site_overall() {
        let p = pts(&[(0.0, 0.0, 1), (1.0, 0.0, 2)]);
        // x = 0.8 is within 1.0 of the color-1 site but nearer the color-2 one
        assert!(!restricted_voronoi_membership(&[0.8, 0.0], &p, ColorScope::Mono(1), 1.0));
        assert!(restricted_voronoi_membership(&[0.8, 0.0], &p, ColorScope::Mono(2), 1.0));
    }

    #[test]
    fn quantization_grid() {
        assert_eq!(quantize(1.0), Some(1 << 20));
        assert_eq!(dequantize(quantize(0.375).unwrap()), 0.375);
        assert_eq!(quantize(1e9), None);
    }
}
