//! Dense GF(2) linear algebra on matrices of at most 32 columns.
//!
//! A matrix is a slice of rows, each row a `u32` bitmask over the columns.
//! The convention throughout: applying the matrix to a vector `x` yields
//! `y[i] = parity(rows[i] & x)`.

/// Basis of the right nullspace {x : M x = 0}.
pub fn nullspace(rows: &[u32], ncols: usize) -> Vec<u32> {
    let (m, pivots) = reduced_echelon(rows, ncols);
    let pivot_set: u32 = pivots.iter().map(|&c| 1u32 << c).sum();
    let mut basis = Vec::new();
    for c in 0..ncols {
        if pivot_set >> c & 1 == 1 {
            continue;
        }
        let mut v = 1u32 << c;
        for (i, &p) in pivots.iter().enumerate() {
            if m[i] >> c & 1 == 1 {
                v |= 1 << p;
            }
        }
        basis.push(v);
    }
    basis
}

/// One solution of M x = b, if any.
pub fn solve(rows: &[u32], ncols: usize, b: u32) -> Option<u32> {
    assert!(ncols < 32, "augmented column must fit in the row word");
    let aug: Vec<u32> = rows
        .iter()
        .enumerate()
        .map(|(i, &r)| r | (b >> i & 1) << ncols)
        .collect();
    let (m, pivots) = reduced_echelon(&aug, ncols);
    let mut x = 0u32;
    for (i, &p) in pivots.iter().enumerate() {
        x |= (m[i] >> ncols & 1) << p;
    }
    // Inconsistent rows reduce to 0 = 1.
    for (i, &r) in m.iter().enumerate() {
        if i >= pivots.len() && r >> ncols & 1 == 1 {
            return None;
        }
    }
    Some(x)
}

/// Reduced row echelon form restricted to the first `ncols` columns;
/// returns the reduced rows and the pivot column of each leading row.
fn reduced_echelon(rows: &[u32], ncols: usize) -> (Vec<u32>, Vec<usize>) {
    let mut m = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..m.len()).find(|&i| m[i] >> c & 1 == 1) else {
            continue;
        };
        m.swap(r, i);
        let row = m[r];
        for (j, mj) in m.iter_mut().enumerate() {
            if j != r && *mj >> c & 1 == 1 {
                *mj ^= row;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(rows: &[u32], x: u32) -> u32 {
        rows.iter()
            .enumerate()
            .map(|(i, &r)| ((r & x).count_ones() & 1) << i)
            .sum()
    }

    fn rank(rows: &[u32], ncols: usize) -> usize {
        reduced_echelon(rows, ncols).1.len()
    }

    #[test]
    fn nullspace_vectors_are_in_the_kernel() {
        let rows = [0b1010, 0b0110, 0b1100];
        let ns = nullspace(&rows, 4);
        assert_eq!(rank(&rows, 4) + ns.len(), 4);
        for v in ns {
            assert_eq!(apply(&rows, v), 0);
        }
    }

    #[test]
    fn solve_roundtrip() {
        let rows = [0b101, 0b011, 0b110];
        for b in 0..8u32 {
            if let Some(x) = solve(&rows, 3, b) {
                assert_eq!(apply(&rows, x), b);
            }
        }
        // Singular system with an inconsistent target.
        let rows = [0b11, 0b11];
        assert!(solve(&rows, 2, 0b01).is_none());
        assert_eq!(apply(&rows, solve(&rows, 2, 0b11).unwrap()), 0b11);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let rows: Vec<u32> = (0..8).map(|i| 1 << i).collect();
        assert!(nullspace(&rows, 8).is_empty());
        assert_eq!(rank(&rows, 8), 8);
    }
}
