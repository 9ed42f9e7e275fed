//! Gaussian elimination over `F_q` on dense row-major matrices.

use crate::gf::{FieldElement, FieldSpec};

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// column of each nonzero row. Zero rows are moved to the bottom.
pub fn rref(k: &FieldSpec, rows: &mut [Vec<FieldElement>]) -> Vec<usize> {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = k.inv_nz(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = k.sub(*x, k.mul(f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the row vectors. Rows may be shorter than others; missing entries
/// count as zero.
pub fn rank(k: &FieldSpec, rows: &[Vec<FieldElement>]) -> usize {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut m: Vec<Vec<FieldElement>> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(ncols, FieldElement::ZERO);
            r
        })
        .collect();
    forward_rank(k, &mut m)
}

/// Row echelon rank without back substitution; destroys `m`.
pub(crate) fn forward_rank(k: &FieldSpec, m: &mut [Vec<FieldElement>]) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = k.inv_nz(m[r][c]);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot = &head[r];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = k.mul(row[c], inv);
            for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x = k.sub(*x, k.mul(f, y));
            }
        }
        r += 1;
    }
    r
}

/// Basis of `{v : A v = 0}` for the `ncols`-column matrix `A` given by `rows`.
///
/// One basis vector per free column in increasing column order; the vector
/// for free column `c` has a 1 at `c` and zeros at the other free columns.
pub fn kernel(k: &FieldSpec, rows: &[Vec<FieldElement>], ncols: usize) -> Vec<Vec<FieldElement>> {
    let mut m: Vec<Vec<FieldElement>> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(ncols, FieldElement::ZERO);
            r
        })
        .collect();
    let pivots = rref(k, &mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![FieldElement::ZERO; ncols];
        v[free] = k.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = k.neg(m[r][free]);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::prime_field;

    fn mat(k: &FieldSpec, rows: &[&[i64]]) -> Vec<Vec<FieldElement>> {
        rows.iter().map(|r| r.iter().map(|&x| k.from_int(x)).collect()).collect()
    }

    #[test]
    fn rank_basics() {
        let k = prime_field(3).unwrap();
        assert_eq!(rank(&k, &[]), 0);
        assert_eq!(rank(&k, &mat(&k, &[&[0, 0]])), 0);
        assert_eq!(rank(&k, &mat(&k, &[&[1, 2], &[2, 1]])), 1);
        assert_eq!(rank(&k, &mat(&k, &[&[1, 2], &[2, 2]])), 2);
        assert_eq!(rank(&k, &mat(&k, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]])), 2);
    }

    #[test]
    fn kernel_is_annihilated() {
        let k = prime_field(5).unwrap();
        let a = mat(&k, &[&[1, 2, 3, 4], &[2, 4, 1, 1]]);
        let ker = kernel(&k, &a, 4);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for row in &a {
                let dot = row.iter().zip(v).fold(k.zero(), |acc, (&x, &y)| k.add(acc, k.mul(x, y)));
                assert!(dot.is_zero());
            }
        }
        assert_eq!(rank(&k, &ker), 2);
    }

    #[test]
    fn kernel_of_empty_system_is_standard_basis() {
        let k = prime_field(2).unwrap();
        let ker = kernel(&k, &[], 3);
        assert_eq!(ker, mat(&k, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    }
}
