//! The Jacobson radical of a finite-dimensional unital algebra over a residue
//! field, computed exactly in every characteristic.
//!
//! In characteristic zero the radical is the kernel of the regular trace
//! form. In characteristic p the trace form degenerates (its kernel can be
//! strictly larger than the radical, or the whole algebra), so a descending
//! chain of subspaces is used instead: starting from the full algebra, each
//! stage keeps the elements x with vanishing p^i-th characteristic-polynomial
//! coefficient c_{p^i}(L_{xy}) against every y of the previous stage. That
//! condition is p^i-semilinear in x, so each stage is a linear solve followed
//! by an i-fold Frobenius preimage; the chain stabilizes to the radical once
//! p^i exceeds the dimension.

use crate::algebra::FieldAlgebra;
use crate::fppoly::{self, FpPoly};
use crate::kpoly;
use crate::linalg::{self, Mat};
use crate::spots::{K, ResidueField};

/// Trace of the left regular representation of `x`.
pub fn reg_trace(fld: &ResidueField, alg: &FieldAlgebra, x: &[K]) -> K {
    let m = alg.left_regular(fld, x);
    let mut acc = fld.zero();
    for (i, row) in m.iter().enumerate() {
        acc = fld.add(&acc, &row[i]);
    }
    acc
}

/// Gram matrix of the regular trace form: G[i][j] = tr(L_{b_i b_j}).
pub fn trace_form(fld: &ResidueField, alg: &FieldAlgebra) -> Mat {
    let n = alg.dim;
    let mut g = vec![vec![fld.zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let prod = alg.mul_vec(fld, &alg.basis_vec(fld, i), &alg.basis_vec(fld, j));
            let t = reg_trace(fld, alg, &prod);
            g[i][j] = t.clone();
            g[j][i] = t;
        }
    }
    g
}

/// Basis (reduced row echelon) of the Jacobson radical as coordinate vectors.
pub fn radical(fld: &ResidueField, alg: &FieldAlgebra) -> Vec<Vec<K>> {
    let p = fld.characteristic();
    if p == 0 {
        let g = trace_form(fld, alg);
        return linalg::row_basis(fld, &linalg::kernel(fld, &g));
    }
    radical_char_p(fld, alg, p)
}

fn radical_char_p(fld: &ResidueField, alg: &FieldAlgebra, p: u64) -> Vec<Vec<K>> {
    let n = alg.dim;
    // current stage, as a row basis of a subspace of the algebra
    let mut stage: Mat = linalg::identity(fld, n);
    let mut q: u64 = 1; // p^i
    let mut i: u32 = 0;
    while q <= n as u64 && !stage.is_empty() {
        // constraint matrix over K in the unknown u_j = a_j^{p^i}, where the
        // candidate element is sum_j a_j r_j over the stage basis r_j:
        //   sum_j u_j * c_q(L_{r_j y_m}) = 0   for every stage basis vector y_m
        let r = stage.len();
        let mut constraints: Mat = vec![];
        for y in &stage {
            let mut row = Vec::with_capacity(r);
            for rj in &stage {
                let prod = alg.mul_vec(fld, rj, y);
                let l = alg.left_regular(fld, &prod);
                let cp = kpoly::char_poly(fld, &l);
                // coefficient of lambda^{n-q}, the q-th elementary symmetric
                // function of the eigenvalues up to sign
                row.push(cp[n - q as usize].clone());
            }
            constraints.push(row);
        }
        let u_space = linalg::kernel(fld, &constraints);
        // coordinates a with (a_j^{p^i}) in u_space
        let a_space = frobenius_preimage(fld, u_space, i);
        // next stage = { sum_j a_j r_j : a in a_space }
        let mut next: Mat = vec![];
        for a in &a_space {
            let mut v = vec![fld.zero(); n];
            for (j, c) in a.iter().enumerate() {
                for (k, x) in stage[j].iter().enumerate() {
                    let s = fld.mul(c, x);
                    v[k] = fld.add(&v[k], &s);
                }
            }
            next.push(v);
        }
        stage = linalg::row_basis(fld, &next);
        i += 1;
        q *= p;
    }
    stage
}

/// The subspace { a : (a_j^{p^i}) in span(u_basis) }, over the char-p field.
fn frobenius_preimage(fld: &ResidueField, u_basis: Mat, i: u32) -> Mat {
    let mut w = u_basis;
    for _ in 0..i {
        w = match fld.finite_degree() {
            // perfect field: the inverse Frobenius is an automorphism, so it
            // maps a basis to a basis
            Some(_) => w
                .iter()
                .map(|row| row.iter().map(|c| fld.pth_root(c).unwrap()).collect())
                .collect(),
            None => preimage_step_function_field(fld, &w),
        };
        w = linalg::row_basis(fld, &w);
    }
    w
}

/// One Frobenius-preimage step over F_p(t): given a subspace W of K^r,
/// returns phi^{-1}(W intersect (K^p)^r) where phi is the entrywise p-th
/// power map.
///
/// W is spanned over K^p = F_p(t^p) by { t^a w_m : 0 <= a < p }. An element
/// sum c_{m,a} t^a w_m with c_{m,a} in K^p has all entries in K^p exactly
/// when, in the decomposition f = sum_b t^b f_b(t^p) of every entry, the
/// components with b != 0 vanish. Those components are K^p-linear in the
/// c_{m,a}, giving a linear system over the field F_p(u) (u = t^p), which has
/// the same arithmetic as F_p(t).
fn preimage_step_function_field(fld: &ResidueField, w: &Mat) -> Mat {
    let p = fld.characteristic();
    if w.is_empty() {
        return vec![];
    }
    let r = w[0].len();
    // generators over K^p and, per generator, the component table of each
    // coordinate: comps[g][j][b] in F_p(u)
    let mut gens: Vec<Vec<K>> = vec![];
    for wm in w {
        for a in 0..p {
            let ta = fld.t_power(a as i64);
            gens.push(wm.iter().map(|x| fld.mul(x, &ta)).collect());
        }
    }
    let mut constraints: Mat = vec![]; // rows: (j, b != 0); cols: generators
    let mut comp0: Vec<Vec<K>> = vec![]; // comp0[g][j], for reconstruction
    let mut comp_rows: Vec<Vec<Vec<K>>> = vec![]; // [g][j][b]
    for g in &gens {
        let table: Vec<Vec<K>> = g.iter().map(|x| fprat_components(fld, x)).collect();
        comp0.push(table.iter().map(|t| t[0].clone()).collect());
        comp_rows.push(table);
    }
    for j in 0..r {
        for b in 1..p as usize {
            let row: Vec<K> = comp_rows.iter().map(|t| t[j][b].clone()).collect();
            if row.iter().all(|c| fld.is_zero(c)) {
                continue;
            }
            constraints.push(row);
        }
    }
    let sols = if constraints.is_empty() {
        linalg::identity(fld, gens.len())
    } else {
        linalg::kernel(fld, &constraints)
    };
    // each solution c gives the p-th root directly: the j-th entry of the
    // intersection element is sum_g c_g(u) * comp0[g][j](u) evaluated at
    // u = t^p, whose p-th root is the same expression at u = t
    let mut out: Mat = vec![];
    for c in &sols {
        let mut root = vec![fld.zero(); r];
        for (g, cg) in c.iter().enumerate() {
            if fld.is_zero(cg) {
                continue;
            }
            for j in 0..r {
                let s = fld.mul(cg, &comp0[g][j]);
                root[j] = fld.add(&root[j], &s);
            }
        }
        out.push(root);
    }
    out
}

/// Decomposition f = sum_{b=0}^{p-1} t^b f_b(t^p) of an F_p(t) element; the
/// returned components f_b are elements of F_p(u) written in the same field
/// (u playing the role of t).
fn fprat_components(fld: &ResidueField, x: &K) -> Vec<K> {
    let p = fld.characteristic();
    let K::FpRat(n, d) = x else { unreachable!() };
    if n.is_empty() {
        return vec![fld.zero(); p as usize];
    }
    // f = n/d = (n d^{p-1}) / d^p, and d(t)^p = d(t^p)
    let mut num = n.clone();
    for _ in 0..p - 1 {
        num = fppoly::mul(&num, d, p);
    }
    let mut comps = vec![];
    for b in 0..p as usize {
        let mut nb: FpPoly = vec![];
        let mut e = b;
        while e < num.len() {
            nb.push(num[e]);
            e += p as usize;
        }
        let nb = fppoly::normalize(nb);
        let comp = fld
            .div(&fp_lift(fld, &nb), &fp_lift(fld, d))
            .expect("denominator is nonzero");
        comps.push(comp);
    }
    comps
}

/// Lifts an F_p[t] polynomial into the field.
fn fp_lift(fld: &ResidueField, f: &FpPoly) -> K {
    let mut acc = fld.zero();
    for (i, &c) in f.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = fld.mul(&fld.from_int(c as i64), &fld.t_power(i as i64));
        acc = fld.add(&acc, &term);
    }
    acc
}

/// Certifies that the span of `rad` is a two-sided nilpotent ideal of the
/// algebra; together with a dimension count against an independent
/// semisimplicity test of the quotient, this validates a radical candidate.
pub fn verify_nilpotent_ideal(fld: &ResidueField, alg: &FieldAlgebra, rad: &Mat) -> bool {
    let closure = alg.ideal_closure(fld, rad);
    if linalg::rank(fld, &closure) != linalg::rank(fld, rad) {
        return false;
    }
    let mut power: Mat = rad.to_vec();
    for _ in 0..alg.dim {
        if power.is_empty() {
            return true;
        }
        power = linalg::row_basis(fld, &alg.span_products(fld, &power, rad));
    }
    power.is_empty()
}

/// Whether the algebra is semisimple; always decided exactly.
pub fn is_semisimple(fld: &ResidueField, alg: &FieldAlgebra) -> bool {
    radical(fld, alg).is_empty()
}

/// Whether the quotient by the radical of a commutative algebra splits over
/// the field: every basis element's minimal polynomial must factor into
/// linear pieces. `None` when root finding cannot certify completeness.
pub fn commutative_split_check(fld: &ResidueField, alg: &FieldAlgebra) -> Option<bool> {
    for i in 0..alg.dim {
        let l = alg.left_regular(fld, &alg.basis_vec(fld, i));
        let mp = kpoly::min_poly(fld, &l);
        match kpoly::splits_into_linears(fld, &mp) {
            Some(true) => {}
            Some(false) => return Some(false),
            None => return None,
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::from_dense_mult;
    use crate::spots::{PrimeSpot, parse_spot};

    /// Full matrix algebra M_k over the field, as a FieldAlgebra.
    fn matrix_algebra(fld: &ResidueField, k: usize) -> FieldAlgebra {
        let n = k * k;
        let idx = |r: usize, c: usize| r * k + c;
        let mut table = vec![vec![vec![fld.zero(); n]; n]; n];
        for r in 0..k {
            for c in 0..k {
                for r2 in 0..k {
                    for c2 in 0..k {
                        if c == r2 {
                            table[idx(r, c)][idx(r2, c2)][idx(r, c2)] = fld.one();
                        }
                    }
                }
            }
        }
        let mut unit = vec![fld.zero(); n];
        for r in 0..k {
            unit[idx(r, r)] = fld.one();
        }
        from_dense_mult(fld, table, unit)
    }

    /// Group algebra of the cyclic group of order m.
    fn cyclic_group_algebra(fld: &ResidueField, m: usize) -> FieldAlgebra {
        let mut table = vec![vec![vec![fld.zero(); m]; m]; m];
        for a in 0..m {
            for b in 0..m {
                table[a][b][(a + b) % m] = fld.one();
            }
        }
        let mut unit = vec![fld.zero(); m];
        unit[0] = fld.one();
        from_dense_mult(fld, table, unit)
    }

    #[test]
    fn matrix_algebra_over_f2_is_semisimple() {
        // the regular trace form of M_2(F_2) is identically zero, so the
        // characteristic-coefficient chain is what decides this case
        let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
        let alg = matrix_algebra(&fld, 2);
        alg.verify(&fld).unwrap();
        let g = trace_form(&fld, &alg);
        assert!(
            g.iter().all(|row| row.iter().all(|c| fld.is_zero(c))),
            "test premise: degenerate trace form"
        );
        assert!(radical(&fld, &alg).is_empty());
    }

    #[test]
    fn modular_group_algebra_radical() {
        // F_2[C_2]: radical spanned by 1 + g
        let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
        let alg = cyclic_group_algebra(&fld, 2);
        let rad = radical(&fld, &alg);
        assert_eq!(rad.len(), 1);
        assert!(verify_nilpotent_ideal(&fld, &alg, &rad));
        let v = &rad[0];
        assert!(fld.eq(&v[0], &v[1]) && !fld.is_zero(&v[0]));

        // F_3[C_3]: radical of dimension 2 (augmentation ideal)
        let fld3 = ResidueField::new(parse_spot("max=3,t+1").unwrap()).unwrap();
        let alg3 = cyclic_group_algebra(&fld3, 3);
        let rad3 = radical(&fld3, &alg3);
        assert_eq!(rad3.len(), 2);
        assert!(verify_nilpotent_ideal(&fld3, &alg3, &rad3));

        // F_5[C_3] is semisimple (3 invertible)
        let fld5 = ResidueField::new(parse_spot("max=5,t+1").unwrap()).unwrap();
        assert!(is_semisimple(&fld5, &cyclic_group_algebra(&fld5, 3)));
    }

    #[test]
    fn inseparable_field_extension_is_semisimple() {
        // F_2(t)[x]/(x^2 - t) is a field, hence semisimple, but its trace
        // form is identically zero; the Frobenius-preimage step over the
        // rational function field must detect that only 0 survives
        let fld = ResidueField::new(parse_spot("p=2").unwrap()).unwrap();
        let t = fld.t_power(1);
        let z = fld.zero();
        let o = fld.one();
        // basis { 1, x }, x^2 = t
        let table = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![t.clone(), z.clone()]],
        ];
        let alg = from_dense_mult(&fld, table, vec![o.clone(), z.clone()]);
        alg.verify(&fld).unwrap();
        let g = trace_form(&fld, &alg);
        assert!(
            g.iter().all(|row| row.iter().all(|c| fld.is_zero(c))),
            "test premise: degenerate trace form"
        );
        assert!(radical(&fld, &alg).is_empty());
    }

    #[test]
    fn upper_triangular_radical_over_function_field() {
        // upper triangular 2x2 matrices over F_2(t): radical = strict part
        let fld = ResidueField::new(parse_spot("p=2").unwrap()).unwrap();
        let z = fld.zero();
        let o = fld.one();
        // basis e11, e12, e22
        let mut table = vec![vec![vec![z.clone(); 3]; 3]; 3];
        table[0][0][0] = o.clone(); // e11 e11 = e11
        table[0][1][1] = o.clone(); // e11 e12 = e12
        table[1][2][1] = o.clone(); // e12 e22 = e12
        table[2][2][2] = o.clone(); // e22 e22 = e22
        let alg = from_dense_mult(&fld, table, vec![o.clone(), z.clone(), o.clone()]);
        alg.verify(&fld).unwrap();
        let rad = radical(&fld, &alg);
        assert_eq!(rad.len(), 1);
        assert!(!fld.is_zero(&rad[0][1]));
        assert!(fld.is_zero(&rad[0][0]) && fld.is_zero(&rad[0][2]));
        assert!(verify_nilpotent_ideal(&fld, &alg, &rad));
    }

    #[test]
    fn characteristic_zero_radical_is_trace_kernel() {
        // upper triangular 2x2 over Q(t)
        let fld = ResidueField::new(PrimeSpot::Generic).unwrap();
        let z = fld.zero();
        let o = fld.one();
        let mut table = vec![vec![vec![z.clone(); 3]; 3]; 3];
        table[0][0][0] = o.clone();
        table[0][1][1] = o.clone();
        table[1][2][1] = o.clone();
        table[2][2][2] = o.clone();
        let alg = from_dense_mult(&fld, table, vec![o.clone(), z.clone(), o.clone()]);
        let rad = radical(&fld, &alg);
        assert_eq!(rad.len(), 1);
        assert!(verify_nilpotent_ideal(&fld, &alg, &rad));
        assert!(is_semisimple(&fld, &matrix_algebra(&fld, 2)));
    }

    #[test]
    fn split_check_on_commutative_quotients() {
        // Q(t)[x]/(x^2 - t^2) splits: x has eigenvalues +-t
        let fld = ResidueField::new(PrimeSpot::Generic).unwrap();
        let t2 = fld.t_power(2);
        let z = fld.zero();
        let o = fld.one();
        let table = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![t2.clone(), z.clone()]],
        ];
        let alg = from_dense_mult(&fld, table, vec![o.clone(), z.clone()]);
        assert_eq!(commutative_split_check(&fld, &alg), Some(true));

        // Q(t)[x]/(x^2 - t) does not split
        let t1 = fld.t_power(1);
        let table2 = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![t1.clone(), z.clone()]],
        ];
        let alg2 = from_dense_mult(&fld, table2, vec![o.clone(), z.clone()]);
        assert_eq!(commutative_split_check(&fld, &alg2), Some(false));
    }
}
