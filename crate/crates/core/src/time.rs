//! Normalized frame times.

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Exact time value. Frame stamps are decimal, so normalized times are
/// rationals with a shared denominator.
pub type Rational = Ratio<i128>;

/// Parses a decimal literal (`-12.5`, `3`, `0.125`) into an exact rational.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if s.contains(['e', 'E']) {
        let v: f64 = s.parse().ok()?;
        return Ratio::from_float(v).and_then(|r: Ratio<num_bigint::BigInt>| {
            Some(Ratio::new(r.numer().to_i128()?, r.denom().to_i128()?))
        });
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 30 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let den = 10i128.checked_pow(frac.len() as u32)?;
    let r = Ratio::new(num, den);
    Some(if neg { -r } else { r })
}

/// Sorted normalized frame times `0 = t_0 < ... < t_{m-1} = 1`, together with
/// the raw stamps they were derived from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeGrid {
    times: Vec<Rational>,
    raw: Vec<Rational>,
}

impl TimeGrid {
    /// Normalizes raw stamps by the affine map `t -> (t - first) / (last - first)`.
    pub fn from_raw(raw: Vec<Rational>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::InconsistentSupport(
                "at least two frames are required".into(),
            ));
        }
        if raw.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InconsistentSupport(
                "frame times must be strictly increasing".into(),
            ));
        }
        let first = raw[0];
        let span = raw[raw.len() - 1] - first;
        let times = raw.iter().map(|t| (t - first) / span).collect();
        Ok(Self { times, raw })
    }

    /// `m` evenly spaced frames, raw stamps `0..m`.
    pub fn uniform(m: usize) -> Self {
        let raw = (0..m as i128).map(Rational::from_integer).collect();
        Self::from_raw(raw).expect("uniform grid needs m >= 2")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn time(&self, idx: usize) -> Rational {
        self.times[idx]
    }

    pub fn time_f64(&self, idx: usize) -> f64 {
        to_f64(&self.times[idx])
    }

    pub fn times(&self) -> &[Rational] {
        &self.times
    }

    pub fn raw(&self) -> &[Rational] {
        &self.raw
    }

    /// Index of the grid value equal to `t`, if any.
    pub fn index_of(&self, t: Rational) -> Option<usize> {
        self.times.binary_search(&t).ok()
    }

    /// Largest index whose time is `<= t`.
    pub fn floor_index(&self, t: Rational) -> Option<usize> {
        match self.times.binary_search(&t) {
            Ok(i) => Some(i),
            Err(0) => None,
            Err(i) => Some(i - 1),
        }
    }

    /// Index of the grid value closest to `t`.
    pub fn nearest_index(&self, t: f64) -> usize {
        (0..self.len())
            .min_by(|&a, &b| {
                let da = (self.time_f64(a) - t).abs();
                let db = (self.time_f64(b) - t).abs();
                da.total_cmp(&db)
            })
            .unwrap_or(0)
    }

    /// Affine map `(scale, offset)` with `normalized = (raw - offset) / scale`.
    pub fn affine_map(&self) -> (Rational, Rational) {
        (self.raw[self.raw.len() - 1] - self.raw[0], self.raw[0])
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Fixed-point rendering with `digits` decimals, rounding half away from zero.
pub fn fmt_fixed(r: &Rational, digits: u32) -> String {
    let scale = 10i128.pow(digits);
    let rounded = (r * Rational::from_integer(scale)).round().to_integer();
    let sign = if rounded < 0 { "-" } else { "" };
    let a = rounded.abs();
    if digits == 0 {
        return format!("{sign}{a}");
    }
    format!("{sign}{}.{:0width$}", a / scale, a % scale, width = digits as usize)
}

pub fn fmt_fixed6(r: &Rational) -> String {
    fmt_fixed(r, 6)
}

/// Exact decimal rendering when the denominator divides a power of ten,
/// otherwise `num/den`.
pub fn fmt_decimal(r: &Rational) -> String {
    let mut den = *r.denom();
    let mut digits = 0u32;
    while den % 10 == 0 || den % 2 == 0 || den % 5 == 0 {
        if den == 1 {
            break;
        }
        den = if den % 10 == 0 { den / 10 } else if den % 2 == 0 { den / 2 } else { den / 5 };
        digits += 1;
    }
    if den != 1 {
        return fmt_exact(r);
    }
    if digits == 0 {
        return r.numer().to_string();
    }
    let scale = 10i128.pow(digits);
    let n = (r * Rational::from_integer(scale)).to_integer();
    let neg = n < 0;
    let a = n.abs();
    let frac = format!("{:0width$}", a % scale, width = digits as usize);
    let frac = frac.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{}", a / scale)
    } else {
        format!("{sign}{}.{frac}", a / scale)
    }
}

pub fn fmt_exact(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_exact(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i128 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Ratio::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.trim().parse().ok()?)),
    }
}
