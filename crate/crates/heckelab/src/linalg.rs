//! Dense exact linear algebra over a residue field.
//!
//! Matrices are `Vec<Vec<K>>` in row-major order; every routine takes the
//! ambient `ResidueField` explicitly, matching the ring-as-context style of
//! the rest of the crate. Everything here is plain Gauss-Jordan; the fields
//! are exact so there are no stability concerns, only size ones.

use crate::spots::{K, ResidueField};

pub type Mat = Vec<Vec<K>>;

pub fn zeros(fld: &ResidueField, rows: usize, cols: usize) -> Mat {
    vec![vec![fld.zero(); cols]; rows]
}

pub fn identity(fld: &ResidueField, n: usize) -> Mat {
    let mut m = zeros(fld, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = fld.one();
    }
    m
}

pub fn mat_mul(fld: &ResidueField, a: &Mat, b: &Mat) -> Mat {
    let (ra, ca) = (a.len(), a.first().map_or(0, |r| r.len()));
    let cb = b.first().map_or(0, |r| r.len());
    assert!(ca == b.len(), "dimension mismatch in mat_mul");
    let mut out = zeros(fld, ra, cb);
    for i in 0..ra {
        for (k, aik) in a[i].iter().enumerate() {
            if fld.is_zero(aik) {
                continue;
            }
            for j in 0..cb {
                let prod = fld.mul(aik, &b[k][j]);
                out[i][j] = fld.add(&out[i][j], &prod);
            }
        }
    }
    out
}

pub fn mat_vec(fld: &ResidueField, a: &Mat, v: &[K]) -> Vec<K> {
    a.iter()
        .map(|row| {
            let mut acc = fld.zero();
            for (x, y) in row.iter().zip(v) {
                acc = fld.add(&acc, &fld.mul(x, y));
            }
            acc
        })
        .collect()
}

pub fn transpose(fld: &ResidueField, a: &Mat) -> Mat {
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = zeros(fld, cols, a.len());
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out[j][i] = x.clone();
        }
    }
    out
}

/// Reduced row-echelon form in place; returns the pivot column of each
/// nonzero row, in order.
pub fn rref(fld: &ResidueField, m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !fld.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, pr);
        let inv = fld.inv(&m[r][c]).expect("pivot nonzero");
        for j in c..cols {
            m[r][j] = fld.mul(&m[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && !fld.is_zero(&m[i][c]) {
                let f = m[i][c].clone();
                for j in c..cols {
                    let sub = fld.mul(&f, &m[r][j]);
                    m[i][j] = fld.sub(&m[i][j], &sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(fld: &ResidueField, m: &Mat) -> usize {
    let mut w = m.clone();
    rref(fld, &mut w).len()
}

/// Basis of the right null space of `m` (solutions of m x = 0).
pub fn kernel(fld: &ResidueField, m: &Mat) -> Vec<Vec<K>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut w = m.clone();
    let pivots = rref(fld, &mut w);
    let piv_set: std::collections::HashSet<usize> = pivots.iter().cloned().collect();
    let mut basis = vec![];
    for free in 0..cols {
        if piv_set.contains(&free) {
            continue;
        }
        let mut v = vec![fld.zero(); cols];
        v[free] = fld.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = fld.neg(&w[r][free]);
        }
        basis.push(v);
    }
    basis
}

/// A particular solution of `m x = b`, if one exists.
pub fn solve(fld: &ResidueField, m: &Mat, b: &[K]) -> Option<Vec<K>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    assert_eq!(rows, b.len());
    let mut aug: Mat = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(fld, &mut aug);
    if pivots.last() == Some(&cols) {
        return None; // pivot in augmented column: inconsistent
    }
    let mut x = vec![fld.zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix; `None` if singular.
pub fn inverse(fld: &ResidueField, m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut aug: Mat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { fld.one() } else { fld.zero() });
            }
            r
        })
        .collect();
    let pivots = rref(fld, &mut aug);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Row-space basis in reduced echelon form (canonical for subspace equality).
pub fn row_basis(fld: &ResidueField, m: &Mat) -> Mat {
    let mut w = m.clone();
    let pivots = rref(fld, &mut w);
    w.truncate(pivots.len());
    w
}

/// Whether vector `v` lies in the row space of `basis`.
pub fn in_row_space(fld: &ResidueField, basis: &Mat, v: &[K]) -> bool {
    let before = rank(fld, basis);
    let mut stack = basis.clone();
    stack.push(v.to_vec());
    rank(fld, &stack) == before
}

/// Basis of the intersection of two row spaces (Zassenhaus-style).
pub fn intersect_row_spaces(fld: &ResidueField, a: &Mat, b: &Mat) -> Mat {
    let cols = a
        .first()
        .or_else(|| b.first())
        .map_or(0, |r| r.len());
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    // Block matrix [[A, A], [B, 0]]; echelonize; rows with zero left half
    // carry intersection vectors in the right half.
    let mut block: Mat = vec![];
    for row in a {
        let mut r = row.clone();
        r.extend(row.iter().cloned());
        block.push(r);
    }
    for row in b {
        let mut r = row.clone();
        r.extend(std::iter::repeat(fld.zero()).take(cols));
        block.push(r);
    }
    let mut w = block;
    rref(fld, &mut w);
    let mut out = vec![];
    for row in &w {
        let left_zero = row[..cols].iter().all(|x| fld.is_zero(x));
        let right = row[cols..].to_vec();
        if left_zero && right.iter().any(|x| !fld.is_zero(x)) {
            out.push(right);
        }
    }
    row_basis(fld, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spots::{parse_spot, PrimeSpot, ResidueField};

    fn f7() -> ResidueField {
        ResidueField::new(parse_spot("max=7,t+1").unwrap()).unwrap()
    }

    fn m(fld: &ResidueField, data: &[&[i64]]) -> Mat {
        data.iter()
            .map(|row| row.iter().map(|&x| fld.from_int(x)).collect())
            .collect()
    }

    #[test]
    fn solve_and_inverse_round_trip() {
        let fld = f7();
        let a = m(&fld, &[&[1, 2, 0], &[0, 1, 3], &[2, 0, 1]]);
        let inv = inverse(&fld, &a).unwrap();
        assert_eq!(mat_mul(&fld, &a, &inv), identity(&fld, 3));
        let b: Vec<K> = vec![fld.from_int(1), fld.from_int(5), fld.from_int(2)];
        let x = solve(&fld, &a, &b).unwrap();
        assert_eq!(mat_vec(&fld, &a, &x), b);
    }

    #[test]
    fn kernel_is_annihilated() {
        let fld = f7();
        let a = m(&fld, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&fld, &a), 1);
        let ker = kernel(&fld, &a);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let img = mat_vec(&fld, &a, v);
            assert!(img.iter().all(|x| fld.is_zero(x)));
        }
    }

    #[test]
    fn intersection_of_planes_in_3_space() {
        let fld = f7();
        // span{e1, e2} intersect span{e2, e3} = span{e2}
        let a = m(&fld, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = m(&fld, &[&[0, 1, 0], &[0, 0, 1]]);
        let i = intersect_row_spaces(&fld, &a, &b);
        assert_eq!(i.len(), 1);
        assert_eq!(i[0], vec![fld.zero(), fld.one(), fld.zero()]);
    }

    #[test]
    fn works_over_function_fields_too() {
        let fld = ResidueField::new(PrimeSpot::Generic).unwrap();
        let t = fld.t_power(1);
        let a: Mat = vec![
            vec![t.clone(), fld.one()],
            vec![fld.one(), fld.t_power(-1)],
        ];
        // det = t * t^-1 - 1 = 0, so rank 1.
        assert_eq!(rank(&fld, &a), 1);
        assert_eq!(kernel(&fld, &a).len(), 1);
    }
}
