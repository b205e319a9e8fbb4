//! Alpha values of Delaunay simplices from exact smallest circumballs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{BigRational, SitePoint, SliceComplex, QUANTUM_BITS};

/// Center and squared radius (in squared quanta) of the smallest ball whose
/// boundary passes through every given point.
pub fn smallest_circumball(pts: &[&SitePoint], d: usize) -> (Vec<BigRational>, BigRational) {
    let p0: Vec<BigInt> = pts[0].coords[..d].iter().map(|&c| BigInt::from(c)).collect();
    if pts.len() == 1 {
        return (p0.into_iter().map(BigRational::from_integer).collect(), BigRational::zero());
    }
    let vs: Vec<Vec<BigInt>> = pts[1..]
        .iter()
        .map(|p| p.coords[..d].iter().zip(&p0).map(|(&c, o)| BigInt::from(c) - o).collect())
        .collect();
    let m = vs.len();
    let dot = |a: &[BigInt], b: &[BigInt]| -> BigInt { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    // augmented Gram system G lambda = |v|^2 / 2
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> =
                (0..m).map(|j| BigRational::from_integer(dot(&vs[i], &vs[j]))).collect();
            row.push(BigRational::new(dot(&vs[i], &vs[i]), BigInt::from(2)));
            row
        })
        .collect();
    for col in 0..m {
        let piv = (col..m).find(|&r| !a[r][col].is_zero()).expect("degenerate simplex");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot).skip(col) {
                    *x -= p * &f;
                }
            }
        }
    }
    let lambda: Vec<BigRational> = a.into_iter().map(|row| row[m].clone()).collect();
    let offset: Vec<BigRational> = (0..d)
        .map(|t| {
            lambda
                .iter()
                .zip(&vs)
                .map(|(l, v)| l * BigRational::from_integer(v[t].clone()))
                .fold(BigRational::zero(), |s, x| s + x)
        })
        .collect();
    let r2 = offset.iter().fold(BigRational::zero(), |s, x| s + x * x);
    let center = offset
        .into_iter()
        .zip(p0)
        .map(|(o, c)| o + BigRational::from_integer(c))
        .collect();
    (center, r2)
}

/// Squared alpha value of a single simplex taken in isolation (its smallest
/// circumball radius squared), in squared input units.
pub fn alpha_value_sq(pts: &[&SitePoint], d: usize) -> f64 {
    let (_, r2) = smallest_circumball(pts, d);
    r2.to_f64().unwrap_or(f64::INFINITY) / (1u64 << (2 * QUANTUM_BITS)) as f64
}

/// Squared radius in squared quanta for a radius given in input units.
pub fn radius_sq_in_quanta(alpha0: &BigRational) -> BigRational {
    let scale = BigRational::from_integer(BigInt::one() << QUANTUM_BITS);
    let r = alpha0 * scale;
    &r * &r
}

/// Strictly inside the ball, with a floating-point shortcut away from the
/// boundary.
fn strictly_inside(p: &SitePoint, d: usize, center: &[BigRational], cf: &[f64], r2: &BigRational, r2f: f64) -> bool {
    let d2f: f64 = (0..d).map(|t| (p.coords[t] as f64 - cf[t]).powi(2)).sum();
    let slack = 1e-9 * r2f.max(1.0);
    if d2f < r2f - slack {
        return true;
    }
    if d2f > r2f + slack {
        return false;
    }
    let d2 = (0..d).fold(BigRational::zero(), |s, t| {
        let x = BigRational::from_integer(BigInt::from(p.coords[t])) - &center[t];
        s + &x * &x
    });
    d2 < *r2
}

/// Fill in alpha values and alpha-complex membership for every simplex of
/// the slice. `alpha0` is the radius in input units.
pub fn alpha_values(slice: &mut SliceComplex, alpha0: &BigRational) {
    let d = slice.dim;
    let limit = radius_sq_in_quanta(alpha0);
    let by_id: BTreeMap<u32, &SitePoint> = slice.points.iter().map(|p| (p.id, p)).collect();
    let keys: Vec<Vec<u32>> = slice.simplices.keys().cloned().collect();
    let max_dim = keys.iter().map(|k| k.len() - 1).max().unwrap_or(0);

    let mut rho: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    let mut coface_min: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    for dim in (0..=max_dim).rev() {
        for key in keys.iter().filter(|k| k.len() == dim + 1) {
            let value = match coface_min.remove(key) {
                None => smallest_circumball(&key.iter().map(|v| by_id[v]).collect::<Vec<_>>(), d).1,
                Some(m) => {
                    let (center, r2) =
                        smallest_circumball(&key.iter().map(|v| by_id[v]).collect::<Vec<_>>(), d);
                    let cf: Vec<f64> = center.iter().map(|c| c.to_f64().unwrap_or(0.0)).collect();
                    let r2f = r2.to_f64().unwrap_or(f64::INFINITY);
                    let gabriel = !r2.is_positive()
                        || !slice.points.iter().any(|p| {
                            !key.contains(&p.id) && strictly_inside(p, d, &center, &cf, &r2, r2f)
                        });
                    if gabriel {
                        r2
                    } else {
                        m
                    }
                }
            };
            if dim > 0 {
                for omit in 0..key.len() {
                    let mut f = key.clone();
                    f.remove(omit);
                    match coface_min.get_mut(&f) {
                        Some(cur) if *cur <= value => {}
                        Some(cur) => *cur = value.clone(),
                        None => {
                            coface_min.insert(f, value.clone());
                        }
                    }
                }
            }
            rho.insert(key.clone(), value);
        }
    }
    for (key, data) in slice.simplices.iter_mut() {
        let r = rho.remove(key).expect("every simplex valued");
        data.in_alpha = r <= limit;
        data.rho_sq = Some(r);
    }
}
