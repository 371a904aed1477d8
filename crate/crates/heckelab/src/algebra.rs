//! Finite-dimensional algebras over a residue field, given by structure
//! constants: the representation-theoretic workhorse shared by the
//! endomorphism-algebra and verification layers. Elements are coefficient
//! vectors over a fixed basis; products of basis elements are stored sparsely.

use crate::linalg::{self, Mat};
use crate::spots::{K, ResidueField};
use std::collections::BTreeMap;

pub type SparseVec = BTreeMap<usize, K>;

#[derive(Debug, Clone)]
pub struct FieldAlgebra {
    pub dim: usize,
    /// `mult[i][j]` = sparse coefficient vector of `b_i * b_j`.
    pub mult: Vec<Vec<SparseVec>>,
    /// Coefficient vector of the unit element.
    pub unit: Vec<K>,
}

impl FieldAlgebra {
    pub fn zero_vec(&self, fld: &ResidueField) -> Vec<K> {
        vec![fld.zero(); self.dim]
    }

    pub fn basis_vec(&self, fld: &ResidueField, i: usize) -> Vec<K> {
        let mut v = self.zero_vec(fld);
        v[i] = fld.one();
        v
    }

    pub fn is_zero_vec(&self, fld: &ResidueField, v: &[K]) -> bool {
        v.iter().all(|x| fld.is_zero(x))
    }

    pub fn add_vec(&self, fld: &ResidueField, a: &[K], b: &[K]) -> Vec<K> {
        a.iter().zip(b).map(|(x, y)| fld.add(x, y)).collect()
    }

    pub fn sub_vec(&self, fld: &ResidueField, a: &[K], b: &[K]) -> Vec<K> {
        a.iter().zip(b).map(|(x, y)| fld.sub(x, y)).collect()
    }

    pub fn scale_vec(&self, fld: &ResidueField, a: &[K], c: &K) -> Vec<K> {
        a.iter().map(|x| fld.mul(x, c)).collect()
    }

    /// Product of two elements.
    pub fn mul_vec(&self, fld: &ResidueField, a: &[K], b: &[K]) -> Vec<K> {
        let mut out = self.zero_vec(fld);
        for (i, ai) in a.iter().enumerate() {
            if fld.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if fld.is_zero(bj) {
                    continue;
                }
                let c = fld.mul(ai, bj);
                for (&k, m) in &self.mult[i][j] {
                    let add = fld.mul(&c, m);
                    out[k] = fld.add(&out[k], &add);
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `a` on the algebra.
    pub fn left_regular(&self, fld: &ResidueField, a: &[K]) -> Mat {
        let mut m = linalg::zeros(fld, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul_vec(fld, a, &self.basis_vec(fld, j));
            for (i, x) in col.into_iter().enumerate() {
                m[i][j] = x;
            }
        }
        m
    }

    /// Matrix of right multiplication by `a`.
    pub fn right_regular(&self, fld: &ResidueField, a: &[K]) -> Mat {
        let mut m = linalg::zeros(fld, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul_vec(fld, &self.basis_vec(fld, j), a);
            for (i, x) in col.into_iter().enumerate() {
                m[i][j] = x;
            }
        }
        m
    }

    /// Power of an element.
    pub fn pow_vec(&self, fld: &ResidueField, a: &[K], e: u64) -> Vec<K> {
        let mut out = self.unit.clone();
        let mut base = a.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul_vec(fld, &out, &base);
            }
            base = self.mul_vec(fld, &base, &base);
            e >>= 1;
        }
        out
    }

    pub fn is_idempotent(&self, fld: &ResidueField, e: &[K]) -> bool {
        self.mul_vec(fld, e, e) == e.to_vec()
    }

    /// Checks associativity on all basis triples and the unit law.
    pub fn verify(&self, fld: &ResidueField) -> Result<(), String> {
        for i in 0..self.dim {
            let bi = self.basis_vec(fld, i);
            if self.mul_vec(fld, &self.unit, &bi) != bi
                || self.mul_vec(fld, &bi, &self.unit) != bi
            {
                return Err(format!("unit law fails at basis element {i}"));
            }
        }
        for i in 0..self.dim {
            let bi = self.basis_vec(fld, i);
            for j in 0..self.dim {
                let bj = self.basis_vec(fld, j);
                let ij = self.mul_vec(fld, &bi, &bj);
                for k in 0..self.dim {
                    let bk = self.basis_vec(fld, k);
                    let jk = self.mul_vec(fld, &bj, &bk);
                    if self.mul_vec(fld, &ij, &bk) != self.mul_vec(fld, &bi, &jk) {
                        return Err(format!("associativity fails at ({i},{j},{k})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Basis (in reduced echelon form) of the span of pairwise products
    /// `u_i * v_j`.
    pub fn span_products(&self, fld: &ResidueField, u: &[Vec<K>], v: &[Vec<K>]) -> Vec<Vec<K>> {
        let mut rows = vec![];
        for a in u {
            for b in v {
                let p = self.mul_vec(fld, a, b);
                if !self.is_zero_vec(fld, &p) {
                    rows.push(p);
                }
            }
        }
        linalg::row_basis(fld, &rows)
    }

    /// Basis of the two-sided ideal generated by the given elements.
    pub fn ideal_closure(&self, fld: &ResidueField, gens: &[Vec<K>]) -> Vec<Vec<K>> {
        let mut basis: Vec<Vec<K>> = vec![];
        let mut frontier: Vec<Vec<K>> = vec![];
        for g in gens {
            if !linalg::in_row_space(fld, &basis, g) {
                basis.push(g.clone());
                frontier.push(g.clone());
            }
        }
        while let Some(x) = frontier.pop() {
            for i in 0..self.dim {
                let bi = self.basis_vec(fld, i);
                for p in [self.mul_vec(fld, &bi, &x), self.mul_vec(fld, &x, &bi)] {
                    if !self.is_zero_vec(fld, &p) && !linalg::in_row_space(fld, &basis, &p) {
                        basis.push(p.clone());
                        frontier.push(p);
                    }
                }
            }
        }
        linalg::row_basis(fld, &basis)
    }

    /// Basis of the center.
    pub fn center(&self, fld: &ResidueField) -> Vec<Vec<K>> {
        // z central iff L_z = R_z; conditions linear in z.
        let mut system: Mat = vec![];
        for i in 0..self.dim {
            // row block: [b_j, b_i] coefficients as functions of z = sum z_j b_j:
            // (z b_i - b_i z) = sum_j z_j (b_j b_i - b_i b_j)
            for k in 0..self.dim {
                let mut row = vec![fld.zero(); self.dim];
                for j in 0..self.dim {
                    let lz = self.mult[j][i].get(&k).cloned().unwrap_or_else(|| fld.zero());
                    let rz = self.mult[i][j].get(&k).cloned().unwrap_or_else(|| fld.zero());
                    row[j] = fld.sub(&lz, &rz);
                }
                system.push(row);
            }
        }
        linalg::kernel(fld, &system)
    }

    /// The quotient algebra A / I together with the projection matrix from
    /// A-coordinates to quotient coordinates. `ideal` must be an echelonized
    /// basis of a two-sided ideal.
    pub fn quotient(&self, fld: &ResidueField, ideal: &[Vec<K>]) -> (FieldAlgebra, Mat) {
        // Choose complement coordinates: non-pivot columns of the ideal basis.
        let mut w = ideal.to_vec();
        let pivots = linalg::rref(fld, &mut w);
        let piv: std::collections::BTreeSet<usize> = pivots.iter().cloned().collect();
        let free: Vec<usize> = (0..self.dim).filter(|c| !piv.contains(c)).collect();
        let qdim = free.len();
        // Reduction map: subtract ideal rows to clear pivot coordinates, then
        // read off the free coordinates.
        let reduce = |v: &[K]| -> Vec<K> {
            let mut r = v.to_vec();
            for (row, &pc) in w.iter().zip(&pivots) {
                let c = r[pc].clone();
                if fld.is_zero(&c) {
                    continue;
                }
                for (idx, x) in row.iter().enumerate() {
                    let s = fld.mul(&c, x);
                    r[idx] = fld.sub(&r[idx], &s);
                }
            }
            free.iter().map(|&c| r[c].clone()).collect()
        };
        let mut proj = linalg::zeros(fld, qdim, self.dim);
        for j in 0..self.dim {
            let col = reduce(&self.basis_vec(fld, j));
            for (i, x) in col.into_iter().enumerate() {
                proj[i][j] = x;
            }
        }
        let mut mult = vec![vec![SparseVec::new(); qdim]; qdim];
        for (a, &fa) in free.iter().enumerate() {
            for (b, &fb) in free.iter().enumerate() {
                let p = self.mul_vec(fld, &self.basis_vec(fld, fa), &self.basis_vec(fld, fb));
                let red = reduce(&p);
                let mut sv = SparseVec::new();
                for (k, x) in red.into_iter().enumerate() {
                    if !fld.is_zero(&x) {
                        sv.insert(k, x);
                    }
                }
                mult[a][b] = sv;
            }
        }
        let unit = reduce(&self.unit);
        (
            FieldAlgebra {
                dim: qdim,
                mult,
                unit,
            },
            proj,
        )
    }

    /// The corner algebra eAe for an idempotent e, with the inclusion matrix
    /// (columns = corner basis in A-coordinates).
    pub fn corner(&self, fld: &ResidueField, e: &[K]) -> (FieldAlgebra, Vec<Vec<K>>) {
        assert!(self.is_idempotent(fld, e), "corner requires an idempotent");
        let rows: Vec<Vec<K>> = (0..self.dim)
            .map(|i| {
                let bi = self.basis_vec(fld, i);
                self.mul_vec(fld, &self.mul_vec(fld, e, &bi), e)
            })
            .collect();
        let basis = linalg::row_basis(fld, &rows);
        let d = basis.len();
        // coordinates of a vector in the corner basis
        let coords = |v: &[K]| -> Vec<K> {
            let mut aug: Mat = (0..self.dim)
                .map(|c| {
                    let mut row: Vec<K> =
                        basis.iter().map(|b| b[c].clone()).collect();
                    row.push(v[c].clone());
                    row
                })
                .collect();
            let pivots = linalg::rref(fld, &mut aug);
            let mut x = vec![fld.zero(); d];
            for (r, &pc) in pivots.iter().enumerate() {
                assert!(pc < d, "vector not in corner span");
                x[pc] = aug[r][d].clone();
            }
            x
        };
        let mut mult = vec![vec![SparseVec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let p = self.mul_vec(fld, &basis[i], &basis[j]);
                let c = coords(&p);
                let mut sv = SparseVec::new();
                for (k, x) in c.into_iter().enumerate() {
                    if !fld.is_zero(&x) {
                        sv.insert(k, x);
                    }
                }
                mult[i][j] = sv;
            }
        }
        let unit = coords(e);
        (FieldAlgebra { dim: d, mult, unit }, basis)
    }
}

/// Builds a FieldAlgebra from dense multiplication data.
pub fn from_dense_mult(fld: &ResidueField, table: Vec<Vec<Vec<K>>>, unit: Vec<K>) -> FieldAlgebra {
    let dim = table.len();
    let mult = table
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| {
                    let mut sv = SparseVec::new();
                    for (k, x) in v.into_iter().enumerate() {
                        if !fld.is_zero(&x) {
                            sv.insert(k, x);
                        }
                    }
                    sv
                })
                .collect()
        })
        .collect();
    FieldAlgebra { dim, mult, unit }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spots::{parse_spot, PrimeSpot};

    /// 2x2 matrix algebra over the field, basis e11, e12, e21, e22.
    fn mat2(fld: &ResidueField) -> FieldAlgebra {
        let idx = |i: usize, j: usize| i * 2 + j;
        let mut table = vec![vec![vec![fld.zero(); 4]; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        if j == k {
                            table[idx(i, j)][idx(k, l)][idx(i, l)] = fld.one();
                        }
                    }
                }
            }
        }
        let mut unit = vec![fld.zero(); 4];
        unit[idx(0, 0)] = fld.one();
        unit[idx(1, 1)] = fld.one();
        from_dense_mult(fld, table, unit)
    }

    #[test]
    fn matrix_algebra_sanity() {
        let fld = ResidueField::new(PrimeSpot::Generic).unwrap();
        let a = mat2(&fld);
        a.verify(&fld).unwrap();
        // center is one-dimensional (scalars)
        assert_eq!(a.center(&fld).len(), 1);
        // e11 is idempotent; corner e11 A e11 is 1-dimensional
        let e = a.basis_vec(&fld, 0);
        assert!(a.is_idempotent(&fld, &e));
        let (corner, _) = a.corner(&fld, &e);
        assert_eq!(corner.dim, 1);
        corner.verify(&fld).unwrap();
        // the two-sided ideal generated by e12 is everything
        let ideal = a.ideal_closure(&fld, &[a.basis_vec(&fld, 1)]);
        assert_eq!(ideal.len(), 4);
    }

    #[test]
    fn quotient_by_nilpotent_ideal() {
        // Upper triangular 2x2: basis e11, e12, e22; ideal (e12); quotient k x k.
        let fld = ResidueField::new(parse_spot("p=5").unwrap()).unwrap();
        let mut table = vec![vec![vec![fld.zero(); 3]; 3]; 3];
        // indices: 0 = e11, 1 = e12, 2 = e22
        table[0][0][0] = fld.one();
        table[0][1][1] = fld.one();
        table[1][2][1] = fld.one();
        table[2][2][2] = fld.one();
        let unit = vec![fld.one(), fld.zero(), fld.one()];
        let a = from_dense_mult(&fld, table, unit);
        a.verify(&fld).unwrap();
        let ideal = a.ideal_closure(&fld, &[a.basis_vec(&fld, 1)]);
        assert_eq!(ideal.len(), 1);
        let (q, proj) = a.quotient(&fld, &ideal);
        assert_eq!(q.dim, 2);
        q.verify(&fld).unwrap();
        // projection is an algebra map on a sample pair
        let x = a.basis_vec(&fld, 0);
        let y = a.basis_vec(&fld, 1);
        let px = linalg::mat_vec(&fld, &proj, &x);
        let py = linalg::mat_vec(&fld, &proj, &y);
        let pxy = linalg::mat_vec(&fld, &proj, &a.mul_vec(&fld, &x, &y));
        assert_eq!(q.mul_vec(&fld, &px, &py), pxy);
    }
}
