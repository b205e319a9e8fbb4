//! Dense GF(2) vectors and incremental echelon bases.

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(n: usize) -> Self {
        Self { words: vec![0; n.div_ceil(64)] }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn toggle(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the highest set bit.
    pub fn highest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b)
        })
    }
}

/// Row-echelon basis of a subspace, keyed by pivot (highest bit).
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, Bits>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the remainder.
    pub fn reduce(&self, mut v: Bits) -> Bits {
        while let Some(p) = v.highest() {
            match self.rows.get(&p) {
                Some(r) => v.xor(r),
                None => break,
            }
        }
        v
    }

    /// Adds `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: Bits) -> bool {
        let v = self.reduce(v);
        match v.highest() {
            Some(p) => {
                self.rows.insert(p, v);
                true
            }
            None => false,
        }
    }
}

/// Basis of the kernel of the linear map sending basis vector `sources[k]`
/// to `images[k]`. Kernel vectors are returned over the source indices.
pub fn kernel(sources: &[usize], images: &[Bits], n: usize) -> Vec<Bits> {
    let mut table: BTreeMap<usize, (Bits, Bits)> = BTreeMap::new();
    let mut out = Vec::new();
    for (&s, img) in sources.iter().zip(images) {
        let mut v = img.clone();
        let mut comb = Bits::zeros(n);
        comb.set(s);
        while let Some(p) = v.highest() {
            match table.get(&p) {
                Some((tv, tc)) => {
                    v.xor(tv);
                    comb.xor(tc);
                }
                None => break,
            }
        }
        match v.highest() {
            Some(p) => {
                table.insert(p, (v, comb));
            }
            None => out.push(comb),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(n: usize, ones: &[usize]) -> Bits {
        let mut b = Bits::zeros(n);
        for &i in ones {
            b.set(i);
        }
        b
    }

    #[test]
    fn echelon_rank() {
        let mut e = Echelon::default();
        assert!(e.insert(bits(70, &[0, 65])));
        assert!(e.insert(bits(70, &[1, 65])));
        assert!(!e.insert(bits(70, &[0, 1])));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn triangle_cycle_kernel() {
        // edges 3,4,5 of a triangle on vertices 0,1,2
        let imgs = [bits(6, &[0, 1]), bits(6, &[1, 2]), bits(6, &[0, 2])];
        let k = kernel(&[3, 4, 5], &imgs, 6);
        assert_eq!(k, vec![bits(6, &[3, 4, 5])]);
    }

    #[test]
    fn bit_queries() {
        let b = bits(130, &[3, 64, 129]);
        assert_eq!(b.highest(), Some(129));
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![3, 64, 129]);
        assert!(b.get(64) && !b.get(65));
    }
}
