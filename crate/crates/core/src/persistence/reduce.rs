//! Left-to-right column reduction over GF(2) on sparse sorted columns.

/// Symmetric difference of two sorted index lists.
pub(crate) fn add_into(target: &mut Vec<u32>, other: &[u32]) {
    let mut out = Vec::with_capacity(target.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                out.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&target[i..]);
    out.extend_from_slice(&other[j..]);
    *target = out;
}

/// Reduces `columns` in place (each a sorted list of row indices) and
/// returns the pairs `(low row, column)`. `rows` bounds the row indices.
pub(crate) fn reduce(columns: &mut [Vec<u32>], rows: usize) -> Vec<(usize, usize)> {
    let mut owner: Vec<Option<usize>> = vec![None; rows];
    let mut pairs = Vec::new();
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match owner[low as usize] {
                Some(k) => {
                    let (head, tail) = columns.split_at_mut(j);
                    add_into(&mut tail[0], &head[k]);
                }
                None => {
                    owner[low as usize] = Some(j);
                    pairs.push((low as usize, j));
                    break;
                }
            }
        }
    }
    pairs
}
