//! Dense linear algebra over `Z/d` for prime `d`.
//!
//! Pivoting is deterministic: each row reduction takes the first column with a
//! nonzero entry at or below the current row, and the first such row.

pub fn inv_mod(a: u32, d: u32) -> Option<u32> {
    let a = a % d;
    if a == 0 {
        return None;
    }
    let mut acc: u64 = 1;
    let mut base = a as u64;
    let mut e = d - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % d as u64;
        }
        base = base * base % d as u64;
        e >>= 1;
    }
    Some(acc as u32)
}

pub fn reduce(v: i64, d: u32) -> u32 {
    v.rem_euclid(d as i64) as u32
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    /// Reduced row echelon form.
    pub rows: Vec<Vec<u32>>,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form of `m` (rows of equal length) over `Z/d`.
pub fn rref(m: &[Vec<u32>], d: u32) -> Echelon {
    let mut a: Vec<Vec<u32>> = m.iter().map(|r| r.iter().map(|x| x % d).collect()).collect();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, p);
        let inv = inv_mod(a[row][col], d).unwrap();
        for x in a[row].iter_mut() {
            *x = (*x as u64 * inv as u64 % d as u64) as u32;
        }
        for r in 0..a.len() {
            if r != row && a[r][col] != 0 {
                let f = a[r][col] as u64;
                for c in 0..ncols {
                    let sub = f * a[row][c] as u64 % d as u64;
                    a[r][c] = ((a[r][c] as u64 + d as u64 - sub) % d as u64) as u32;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    a.truncate(row);
    Echelon { rows: a, pivots }
}

pub fn rank(m: &[Vec<u32>], d: u32) -> usize {
    rref(m, d).pivots.len()
}

/// Basis of the right kernel `{x : m x = 0}`; `ncols` is needed when `m` has no rows.
pub fn kernel(m: &[Vec<u32>], ncols: usize, d: u32) -> Vec<Vec<u32>> {
    let e = rref(m, d);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u32; ncols];
            v[f] = 1;
            for (r, &pc) in e.pivots.iter().enumerate() {
                v[pc] = (d - e.rows[r][f] % d) % d;
            }
            v
        })
        .collect()
}

pub fn transpose(m: &[Vec<u32>], nrows_if_empty: usize) -> Vec<Vec<u32>> {
    if m.is_empty() {
        return vec![Vec::new(); nrows_if_empty];
    }
    let n = m[0].len();
    (0..n).map(|c| m.iter().map(|r| r[c]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_prime() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(0, 5), None);
        assert_eq!(inv_mod(1, 2), Some(1));
    }

    #[test]
    fn rank_and_kernel() {
        let m = vec![vec![1, 2, 0], vec![2, 4, 0]];
        assert_eq!(rank(&m, 5), 1);
        let k = kernel(&m, 3, 5);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                let s: u32 = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert_eq!(s % 5, 0);
            }
        }
    }

    #[test]
    fn pivots_are_first_nonzero_columns() {
        let m = vec![vec![0, 1, 1], vec![0, 0, 1]];
        assert_eq!(rref(&m, 3).pivots, vec![1, 2]);
        assert_eq!(kernel(&[], 2, 3).len(), 2);
    }
}
