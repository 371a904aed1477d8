//! Finite-dimensional left modules over a `FieldAlgebra`: submodules and
//! quotients, homomorphism spaces, radical series, an exact projectivity test
//! via splitting of a free presentation, first extension groups, splitting of
//! semisimple modules over finite fields, and lifting of primitive
//! idempotents through the radical.
//!
//! Vectors are columns; a subspace is handed around as a matrix whose rows
//! are a basis. The action of the algebra element with coordinates `a` on a
//! vector `v` is `sum_i a_i action[i] v`.

use crate::algebra::FieldAlgebra;
use crate::kpoly;
use crate::linalg::{self, Mat};
use crate::radical;
use crate::schur::Verdict;
use crate::spots::{K, PrimeSpot, ResidueField};

#[derive(Debug, Clone, PartialEq)]
pub enum ModError {
    NotInvariant,
    NotSemisimple,
    SplitInconclusive,
    TooLarge(usize),
}

impl std::fmt::Display for ModError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModError::NotInvariant => write!(f, "subspace is not a submodule"),
            ModError::NotSemisimple => write!(f, "module failed the semisimplicity premise"),
            ModError::SplitInconclusive => {
                write!(f, "randomized splitting exhausted its attempt budget")
            }
            ModError::TooLarge(n) => write!(f, "linear system too large ({n} unknowns)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AlgMod {
    pub dim: usize,
    /// One square matrix per algebra basis element.
    pub action: Vec<Mat>,
}

impl AlgMod {
    /// The left regular module.
    pub fn regular(fld: &ResidueField, alg: &FieldAlgebra) -> AlgMod {
        let action = (0..alg.dim)
            .map(|i| alg.left_regular(fld, &alg.basis_vec(fld, i)))
            .collect();
        AlgMod {
            dim: alg.dim,
            action,
        }
    }

    /// Free module of the given rank, acting blockwise.
    pub fn free(fld: &ResidueField, alg: &FieldAlgebra, rank: usize) -> AlgMod {
        let reg = AlgMod::regular(fld, alg);
        let mut m = reg.clone();
        for _ in 1..rank {
            m = direct_sum(fld, &m, &reg);
        }
        if rank == 0 {
            return AlgMod {
                dim: 0,
                action: vec![vec![]; alg.dim],
            };
        }
        m
    }

    /// Action of the algebra element with coordinates `a`.
    pub fn act(&self, fld: &ResidueField, a: &[K], v: &[K]) -> Vec<K> {
        let mut out = vec![fld.zero(); self.dim];
        for (i, c) in a.iter().enumerate() {
            if fld.is_zero(c) {
                continue;
            }
            let av = linalg::mat_vec(fld, &self.action[i], v);
            for (k, x) in av.into_iter().enumerate() {
                let s = fld.mul(c, &x);
                out[k] = fld.add(&out[k], &s);
            }
        }
        out
    }

    /// Checks the defining relations against the structure constants.
    pub fn verify(&self, fld: &ResidueField, alg: &FieldAlgebra) -> Result<(), String> {
        let unit_mat = self.act_matrix(fld, &alg.unit);
        if unit_mat != linalg::identity(fld, self.dim) {
            return Err("unit does not act as the identity".into());
        }
        for i in 0..alg.dim {
            for j in 0..alg.dim {
                let lhs = linalg::mat_mul(fld, &self.action[i], &self.action[j]);
                let mut rhs = linalg::zeros(fld, self.dim, self.dim);
                for (&k, c) in &alg.mult[i][j] {
                    for r in 0..self.dim {
                        for s in 0..self.dim {
                            let add = fld.mul(c, &self.action[k][r][s]);
                            rhs[r][s] = fld.add(&rhs[r][s], &add);
                        }
                    }
                }
                if lhs != rhs {
                    return Err(format!("action violates structure constants at ({i},{j})"));
                }
            }
        }
        Ok(())
    }

    /// Matrix of the action of a general element.
    pub fn act_matrix(&self, fld: &ResidueField, a: &[K]) -> Mat {
        let mut out = linalg::zeros(fld, self.dim, self.dim);
        for (i, c) in a.iter().enumerate() {
            if fld.is_zero(c) {
                continue;
            }
            for r in 0..self.dim {
                for s in 0..self.dim {
                    let add = fld.mul(c, &self.action[i][r][s]);
                    out[r][s] = fld.add(&out[r][s], &add);
                }
            }
        }
        out
    }
}

/// Direct sum with block-diagonal action.
pub fn direct_sum(fld: &ResidueField, a: &AlgMod, b: &AlgMod) -> AlgMod {
    let dim = a.dim + b.dim;
    let action = a
        .action
        .iter()
        .zip(&b.action)
        .map(|(ma, mb)| {
            let mut m = linalg::zeros(fld, dim, dim);
            for r in 0..a.dim {
                for c in 0..a.dim {
                    m[r][c] = ma[r][c].clone();
                }
            }
            for r in 0..b.dim {
                for c in 0..b.dim {
                    m[a.dim + r][a.dim + c] = mb[r][c].clone();
                }
            }
            m
        })
        .collect();
    AlgMod { dim, action }
}

/// Row basis of the submodule generated by the given vectors.
pub fn spin(fld: &ResidueField, m: &AlgMod, gens: &[Vec<K>]) -> Mat {
    let mut basis = linalg::row_basis(fld, &gens.to_vec());
    loop {
        let mut grew = false;
        let snapshot = basis.clone();
        for v in &snapshot {
            for act in &m.action {
                let w = linalg::mat_vec(fld, act, v);
                if !linalg::in_row_space(fld, &basis, &w) {
                    basis.push(w);
                    basis = linalg::row_basis(fld, &basis);
                    grew = true;
                }
            }
        }
        if !grew {
            return basis;
        }
    }
}

/// Coordinates of `v` in the row basis, if it lies in the span.
pub fn coords_in_rows(fld: &ResidueField, rows: &Mat, v: &[K]) -> Option<Vec<K>> {
    let cols: Mat = linalg::transpose(fld, rows);
    linalg::solve(fld, &cols, v)
}

/// The module structure induced on an invariant subspace, with the inclusion
/// given by the row basis itself.
pub fn submodule(fld: &ResidueField, m: &AlgMod, rows: &Mat) -> Result<AlgMod, ModError> {
    let k = rows.len();
    let mut action = vec![];
    for a in &m.action {
        let mut sub = linalg::zeros(fld, k, k);
        for (j, v) in rows.iter().enumerate() {
            let w = linalg::mat_vec(fld, a, v);
            let c = coords_in_rows(fld, rows, &w).ok_or(ModError::NotInvariant)?;
            for (i, x) in c.into_iter().enumerate() {
                sub[i][j] = x;
            }
        }
        action.push(sub);
    }
    Ok(AlgMod { dim: k, action })
}

/// The quotient module by an invariant subspace, with its projection matrix.
pub fn quotient_module(
    fld: &ResidueField,
    m: &AlgMod,
    rows: &Mat,
) -> Result<(AlgMod, Mat), ModError> {
    // choose complement coordinates: echelonize, free coordinates survive
    let mut w = rows.clone();
    let pivots = linalg::rref(fld, &mut w);
    w.truncate(pivots.len());
    let piv_set: std::collections::HashSet<usize> = pivots.iter().cloned().collect();
    let free: Vec<usize> = (0..m.dim).filter(|c| !piv_set.contains(c)).collect();
    let k = free.len();
    // projection: subtract the subspace part, read free coordinates
    let project = |v: &[K]| -> Vec<K> {
        let mut r = v.to_vec();
        for (row, &pc) in w.iter().zip(&pivots) {
            let c = r[pc].clone();
            if fld.is_zero(&c) {
                continue;
            }
            for (j, x) in row.iter().enumerate() {
                let s = fld.mul(&c, x);
                r[j] = fld.sub(&r[j], &s);
            }
        }
        free.iter().map(|&j| r[j].clone()).collect()
    };
    let mut proj = linalg::zeros(fld, k, m.dim);
    for j in 0..m.dim {
        let mut e = vec![fld.zero(); m.dim];
        e[j] = fld.one();
        for (i, x) in project(&e).into_iter().enumerate() {
            proj[i][j] = x;
        }
    }
    let mut action = vec![];
    for a in &m.action {
        let mut q = linalg::zeros(fld, k, k);
        for (jq, &jc) in free.iter().enumerate() {
            let mut e = vec![fld.zero(); m.dim];
            e[jc] = fld.one();
            let img = project(&linalg::mat_vec(fld, a, &e));
            for (i, x) in img.into_iter().enumerate() {
                q[i][jq] = x;
            }
        }
        // well-definedness: the subspace must map into itself
        for v in rows {
            let img = project(&linalg::mat_vec(fld, a, v));
            if img.iter().any(|c| !fld.is_zero(c)) {
                return Err(ModError::NotInvariant);
            }
        }
        action.push(q);
    }
    Ok((AlgMod { dim: k, action }, proj))
}

/// Basis of the space of module homomorphisms `m -> n`, as matrices.
pub fn hom_space(fld: &ResidueField, m: &AlgMod, n: &AlgMod) -> Vec<Mat> {
    let (dm, dn) = (m.dim, n.dim);
    if dm == 0 || dn == 0 {
        return vec![];
    }
    // unknowns F[r][c], flattened; constraints F A_i = B_i F
    let unknowns = dm * dn;
    let mut rows: Mat = vec![];
    for (a, b) in m.action.iter().zip(&n.action) {
        for r in 0..dn {
            for c in 0..dm {
                let mut row = vec![fld.zero(); unknowns];
                // (F a)[r][c] = sum_k F[r][k] a[k][c]
                for k in 0..dm {
                    row[r * dm + k] = fld.add(&row[r * dm + k], &a[k][c]);
                }
                // -(b F)[r][c] = -sum_k b[r][k] F[k][c]
                for k in 0..dn {
                    let s = fld.neg(&b[r][k]);
                    row[k * dm + c] = fld.add(&row[k * dm + c], &s);
                }
                rows.push(row);
            }
        }
    }
    linalg::kernel(fld, &rows)
        .into_iter()
        .map(|flat| {
            (0..dn)
                .map(|r| (0..dm).map(|c| flat[r * dm + c].clone()).collect())
                .collect()
        })
        .collect()
}

pub fn hom_dim(fld: &ResidueField, m: &AlgMod, n: &AlgMod) -> usize {
    hom_space(fld, m, n).len()
}

/// Row basis of rad(A)·M inside M.
pub fn radical_submodule(fld: &ResidueField, m: &AlgMod, alg_rad: &Mat) -> Mat {
    let mut gens: Mat = vec![];
    for r in alg_rad {
        let a = m.act_matrix(fld, r);
        for j in 0..m.dim {
            let mut e = vec![fld.zero(); m.dim];
            e[j] = fld.one();
            gens.push(linalg::mat_vec(fld, &a, &e));
        }
    }
    linalg::row_basis(fld, &gens)
}

/// Descending radical series M ⊃ rad·M ⊃ rad²·M ⊃ ... ⊃ 0, as row bases,
/// starting with the full space and ending with the empty basis.
pub fn radical_series(fld: &ResidueField, m: &AlgMod, alg_rad: &Mat) -> Vec<Mat> {
    let mut series = vec![linalg::identity(fld, m.dim)];
    loop {
        let cur = series.last().unwrap();
        if cur.is_empty() {
            return series;
        }
        // rad * (current layer): act on the current basis
        let mut gens: Mat = vec![];
        for r in alg_rad {
            let a = m.act_matrix(fld, r);
            for v in cur.iter() {
                gens.push(linalg::mat_vec(fld, &a, v));
            }
        }
        let next = linalg::row_basis(fld, &gens);
        if next.len() == cur.len() {
            // radical series of a module over a finite-dimensional algebra
            // must strictly descend to zero
            assert!(next.is_empty(), "radical series stalled");
        }
        series.push(next);
    }
}

/// Generators of M lifting a basis of M / rad·M.
pub fn minimal_generators(fld: &ResidueField, m: &AlgMod, alg_rad: &Mat) -> Mat {
    let radm = radical_submodule(fld, m, alg_rad);
    let mut stack = radm.clone();
    let mut gens = vec![];
    for j in 0..m.dim {
        let mut e = vec![fld.zero(); m.dim];
        e[j] = fld.one();
        if !linalg::in_row_space(fld, &stack, &e) {
            stack.push(e.clone());
            stack = linalg::row_basis(fld, &stack);
            gens.push(e);
        }
    }
    gens
}

/// A free presentation F = A^s -> M -> 0 on a minimal generating set: the
/// free module, the matrix of the surjection, and a row basis of its kernel.
pub fn free_presentation(
    fld: &ResidueField,
    alg: &FieldAlgebra,
    m: &AlgMod,
    alg_rad: &Mat,
) -> (AlgMod, Mat, Mat) {
    let gens = minimal_generators(fld, m, alg_rad);
    let s = gens.len();
    let free = AlgMod::free(fld, alg, s);
    // pi maps (copy k, algebra basis i) to b_i . g_k
    let mut pi = linalg::zeros(fld, m.dim, free.dim);
    for (k, g) in gens.iter().enumerate() {
        for i in 0..alg.dim {
            let col = m.act(fld, &alg.basis_vec(fld, i), g);
            for (r, x) in col.into_iter().enumerate() {
                pi[r][k * alg.dim + i] = x;
            }
        }
    }
    assert_eq!(linalg::rank(fld, &pi), m.dim, "generators must generate");
    let omega = linalg::row_basis(fld, &linalg::kernel(fld, &pi));
    (free, pi, omega)
}

/// Exact projectivity test: M is projective iff its free presentation
/// splits, which is an affine-linear solvability question. `Unknown` only
/// when the system exceeds the size guard.
pub fn is_projective(
    fld: &ResidueField,
    alg: &FieldAlgebra,
    m: &AlgMod,
    alg_rad: &Mat,
) -> Verdict {
    if m.dim == 0 {
        return Verdict::True;
    }
    if alg_rad.is_empty() {
        return Verdict::True; // semisimple algebra
    }
    let gens = minimal_generators(fld, m, alg_rad);
    let s = gens.len();
    let unknowns = s * alg.dim * m.dim;
    if unknowns > 20_000 {
        return Verdict::Unknown;
    }
    let (free, pi, _) = free_presentation(fld, alg, m, alg_rad);
    // unknown section S: M -> F with S a module map and pi S = id
    let (dm, df) = (m.dim, free.dim);
    let n_unknowns = dm * df; // S[r][c], r < df, c < dm
    let mut rows: Mat = vec![];
    let mut rhs: Vec<K> = vec![];
    for (a, b) in m.action.iter().zip(&free.action) {
        for r in 0..df {
            for c in 0..dm {
                let mut row = vec![fld.zero(); n_unknowns];
                for k in 0..dm {
                    row[r * dm + k] = fld.add(&row[r * dm + k], &a[k][c]);
                }
                for k in 0..df {
                    let s = fld.neg(&b[r][k]);
                    row[k * dm + c] = fld.add(&row[k * dm + c], &s);
                }
                rows.push(row);
                rhs.push(fld.zero());
            }
        }
    }
    for r in 0..dm {
        for c in 0..dm {
            let mut row = vec![fld.zero(); n_unknowns];
            for k in 0..df {
                row[k * dm + c] = pi[r][k].clone();
            }
            rows.push(row);
            rhs.push(if r == c { fld.one() } else { fld.zero() });
        }
    }
    match linalg::solve(fld, &rows, &rhs) {
        Some(_) => Verdict::True,
        None => Verdict::False,
    }
}

/// dim Ext^1(M, N), from a free presentation of M:
/// dim Hom(Omega, N) - s·dim N + dim Hom(M, N).
pub fn ext1_dim(
    fld: &ResidueField,
    alg: &FieldAlgebra,
    m: &AlgMod,
    n: &AlgMod,
    alg_rad: &Mat,
) -> usize {
    if m.dim == 0 || n.dim == 0 {
        return 0;
    }
    let (free, _, omega_rows) = free_presentation(fld, alg, m, alg_rad);
    let s = free.dim / alg.dim;
    let omega = submodule(fld, &free, &omega_rows).expect("kernel is a submodule");
    let h_omega = hom_dim(fld, &omega, n);
    let h_m = hom_dim(fld, m, n);
    h_omega + h_m - s * n.dim
}

// ---------------------------------------------------------------------------
// Splitting semisimple modules over finite fields
// ---------------------------------------------------------------------------

struct SplitRng(u64);
impl SplitRng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

fn random_field_elt(fld: &ResidueField, rng: &mut SplitRng) -> K {
    let p = fld.characteristic();
    let e = fld.finite_degree().unwrap_or(1);
    let mut acc = fld.zero();
    for i in 0..e {
        let c = (rng.next() % p) as i64;
        let term = fld.mul(&fld.from_int(c), &fld.t_power(i as i64));
        acc = fld.add(&acc, &term);
    }
    acc
}

/// Splits a module known to be semisimple over a finite field into simple
/// submodules; returns their row bases (in ambient coordinates), whose direct
/// sum is the whole module. Deterministic for a fixed seed.
pub fn split_semisimple(
    fld: &ResidueField,
    m: &AlgMod,
    seed: u64,
) -> Result<Vec<Mat>, ModError> {
    assert!(
        matches!(fld.spot, PrimeSpot::Maximal(_, _)),
        "splitting requires a finite field"
    );
    let mut rng = SplitRng(seed | 1);
    split_rec(fld, m, &linalg::identity(fld, m.dim), &mut rng)
}

fn split_rec(
    fld: &ResidueField,
    ambient: &AlgMod,
    rows: &Mat,
    rng: &mut SplitRng,
) -> Result<Vec<Mat>, ModError> {
    if rows.is_empty() {
        return Ok(vec![]);
    }
    let m = submodule(fld, ambient, rows).map_err(|e| e)?;
    let endo = hom_space(fld, &m, &m);
    if endo.len() == 1 {
        return Ok(vec![rows.clone()]);
    }
    // gather candidate endomorphisms: the basis, then random combinations
    let mut candidates: Vec<Mat> = endo.clone();
    for _ in 0..40 {
        let mut acc = linalg::zeros(fld, m.dim, m.dim);
        for h in &endo {
            let c = random_field_elt(fld, rng);
            for r in 0..m.dim {
                for s in 0..m.dim {
                    let add = fld.mul(&c, &h[r][s]);
                    acc[r][s] = fld.add(&acc[r][s], &add);
                }
            }
        }
        candidates.push(acc);
    }
    let mut fseed = rng.next();
    for phi in &candidates {
        let mp = kpoly::min_poly(fld, phi);
        if kpoly::kdeg(&mp) == Some(1) {
            continue; // scalar
        }
        let factor = kpoly::nontrivial_factor_fin(fld, &mp, &mut fseed)
            .map_err(|_| ModError::SplitInconclusive)?;
        let Some(f) = factor else { continue };
        // kernel of f(phi) is a nonzero proper submodule of m
        let fphi = eval_on_matrix(fld, &f, phi);
        let ker = linalg::row_basis(fld, &linalg::kernel(fld, &fphi));
        assert!(!ker.is_empty() && ker.len() < m.dim);
        return split_at(fld, ambient, rows, &m, &ker, rng);
    }
    // last resort: enumerate the endomorphism ring when it is small enough;
    // a nonzero singular endomorphism splits, none existing certifies that
    // End is a division ring, hence (m semisimple) m is simple
    let p = fld.characteristic();
    let e = fld.finite_degree().unwrap() as u32;
    let q = (p as f64).powi(e as i32);
    if q.powi(endo.len() as i32) <= 65536.0 {
        if let Some(phi) = find_singular_combination(fld, &endo, m.dim) {
            let ker = linalg::row_basis(fld, &linalg::kernel(fld, &phi));
            assert!(!ker.is_empty() && ker.len() < m.dim);
            return split_at(fld, ambient, rows, &m, &ker, rng);
        }
        return Ok(vec![rows.clone()]);
    }
    Err(ModError::SplitInconclusive)
}

/// Splits `rows` (carrying module structure `m`) along the invariant
/// subspace `ker` (in m-coordinates) and recurses on both halves.
fn split_at(
    fld: &ResidueField,
    ambient: &AlgMod,
    rows: &Mat,
    m: &AlgMod,
    ker: &Mat,
    rng: &mut SplitRng,
) -> Result<Vec<Mat>, ModError> {
    // complement: a module projection pi: m -> ker with pi restricted to ker
    // the identity exists because m is semisimple; its kernel is a complement
    let pi = splitting_projection(fld, m, ker).ok_or(ModError::NotSemisimple)?;
    let comp = linalg::row_basis(fld, &linalg::kernel(fld, &pi));
    assert_eq!(ker.len() + comp.len(), m.dim);
    // map both back to ambient coordinates
    let to_ambient = |sub: &Mat| -> Mat {
        sub.iter()
            .map(|v| {
                let mut w = vec![fld.zero(); ambient.dim];
                for (j, c) in v.iter().enumerate() {
                    for (k, x) in rows[j].iter().enumerate() {
                        let s = fld.mul(c, x);
                        w[k] = fld.add(&w[k], &s);
                    }
                }
                w
            })
            .collect()
    };
    let mut out = split_rec(fld, ambient, &to_ambient(ker), rng)?;
    out.extend(split_rec(fld, ambient, &to_ambient(&comp), rng)?);
    Ok(out)
}

/// A module map pi: m -> m with image in span(ker-rows) restricting to the
/// identity there, if one exists.
fn splitting_projection(fld: &ResidueField, m: &AlgMod, sub: &Mat) -> Option<Mat> {
    // unknown pi (dim x dim) with: pi a module map; pi v = v on sub;
    // rows of pi constrained to land in sub: pi = inclusion . small, solve
    // for small: sub.len() x dim matrix P with P A_i = B_i P (B_i = action on
    // sub) and P restricted to sub = identity coordinates
    let subm = submodule(fld, m, sub).ok()?;
    let k = sub.len();
    let unknowns = k * m.dim;
    let mut rows: Mat = vec![];
    let mut rhs: Vec<K> = vec![];
    for (a, b) in m.action.iter().zip(&subm.action) {
        for r in 0..k {
            for c in 0..m.dim {
                let mut row = vec![fld.zero(); unknowns];
                for j in 0..m.dim {
                    row[r * m.dim + j] = fld.add(&row[r * m.dim + j], &a[j][c]);
                }
                for j in 0..k {
                    let s = fld.neg(&b[r][j]);
                    row[j * m.dim + c] = fld.add(&row[j * m.dim + c], &s);
                }
                rows.push(row);
                rhs.push(fld.zero());
            }
        }
    }
    // P * (j-th sub basis vector, as ambient column) = e_j
    for (j, v) in sub.iter().enumerate() {
        for r in 0..k {
            let mut row = vec![fld.zero(); unknowns];
            for c in 0..m.dim {
                row[r * m.dim + c] = v[c].clone();
            }
            rows.push(row);
            rhs.push(if r == j { fld.one() } else { fld.zero() });
        }
    }
    let p = linalg::solve(fld, &rows, &rhs)?;
    // pi = inclusion . P : dim x dim
    let inc = linalg::transpose(fld, sub);
    let pmat: Mat = (0..k)
        .map(|r| (0..m.dim).map(|c| p[r * m.dim + c].clone()).collect())
        .collect();
    Some(linalg::mat_mul(fld, &inc, &pmat))
}

fn eval_on_matrix(fld: &ResidueField, f: &kpoly::KPoly, a: &Mat) -> Mat {
    let n = a.len();
    let mut acc = linalg::zeros(fld, n, n);
    for c in f.iter().rev() {
        acc = linalg::mat_mul(fld, &acc, a);
        for i in 0..n {
            acc[i][i] = fld.add(&acc[i][i], c);
        }
    }
    acc
}

/// Enumerates all combinations of the given endomorphisms over a finite
/// field; returns a nonzero singular one if any exists.
fn find_singular_combination(fld: &ResidueField, endo: &[Mat], dim: usize) -> Option<Mat> {
    let p = fld.characteristic();
    let e = fld.finite_degree().unwrap();
    // field elements as residue polynomials, counted in base p
    let mut elts = vec![fld.zero()];
    {
        let mut rep = vec![0u64; e];
        loop {
            let mut i = 0;
            loop {
                if i == e {
                    break;
                }
                rep[i] += 1;
                if rep[i] < p {
                    break;
                }
                rep[i] = 0;
                i += 1;
            }
            if i == e {
                break;
            }
            let mut acc = fld.zero();
            for (k, &c) in rep.iter().enumerate() {
                let term = fld.mul(&fld.from_int(c as i64), &fld.t_power(k as i64));
                acc = fld.add(&acc, &term);
            }
            elts.push(acc);
        }
    }
    let mut counters = vec![0usize; endo.len()];
    loop {
        // advance the odometer (skipping the all-zero combination)
        let mut i = 0;
        loop {
            if i == endo.len() {
                return None;
            }
            counters[i] += 1;
            if counters[i] < elts.len() {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
        let mut acc = linalg::zeros(fld, dim, dim);
        for (h, &ci) in endo.iter().zip(&counters) {
            if ci == 0 {
                continue;
            }
            for r in 0..dim {
                for s in 0..dim {
                    let add = fld.mul(&elts[ci], &h[r][s]);
                    acc[r][s] = fld.add(&acc[r][s], &add);
                }
            }
        }
        if acc.iter().all(|row| row.iter().all(|c| fld.is_zero(c))) {
            continue;
        }
        if linalg::rank(fld, &acc) < dim {
            return Some(acc);
        }
    }
}

// ---------------------------------------------------------------------------
// Idempotent lifting
// ---------------------------------------------------------------------------

/// A complete set of orthogonal primitive idempotents of a finite-field
/// algebra, obtained by splitting the semisimple quotient and lifting through
/// the radical with the universal Newton step e -> 3e^2 - 2e^3.
pub fn primitive_idempotents(
    fld: &ResidueField,
    alg: &FieldAlgebra,
    seed: u64,
) -> Result<Vec<Vec<K>>, ModError> {
    let rad = radical::radical(fld, alg);
    let (bar, proj) = alg.quotient(fld, &rad);
    let reg = AlgMod::regular(fld, &bar);
    let parts = split_semisimple(fld, &reg, seed)?;
    // orthogonal idempotents of bar: write 1 = sum of components
    let mut cols: Mat = vec![];
    let mut offsets = vec![0usize];
    for part in &parts {
        for v in part {
            cols.push(v.clone());
        }
        offsets.push(cols.len());
    }
    let colmat = linalg::transpose(fld, &cols);
    let unit_coords =
        linalg::solve(fld, &colmat, &bar.unit).expect("parts span the algebra");
    let mut bar_idems: Vec<Vec<K>> = vec![];
    for w in 0..parts.len() {
        let mut e = vec![fld.zero(); bar.dim];
        for idx in offsets[w]..offsets[w + 1] {
            for (j, x) in cols[idx].iter().enumerate() {
                let s = fld.mul(&unit_coords[idx], x);
                e[j] = fld.add(&e[j], &s);
            }
        }
        assert!(bar.is_idempotent(fld, &e), "component is an idempotent");
        bar_idems.push(e);
    }
    // lift along the projection, orthogonalizing sequentially
    let proj_t = proj.clone();
    let lift = |x: &[K]| -> Vec<K> {
        linalg::solve(fld, &proj_t, x).expect("projection is surjective")
    };
    let mut out: Vec<Vec<K>> = vec![];
    let mut fsum = vec![fld.zero(); alg.dim];
    for ebar in &bar_idems {
        let mut g = lift(ebar);
        // move into the corner complementary to what is already lifted
        let one_minus = alg.sub_vec(fld, &alg.unit, &fsum);
        g = alg.mul_vec(fld, &one_minus, &alg.mul_vec(fld, &g, &one_minus));
        // Newton iteration: quadratic convergence in the radical filtration
        for _ in 0..(usize::BITS - alg.dim.leading_zeros()) + 2 {
            if alg.is_idempotent(fld, &g) {
                break;
            }
            let g2 = alg.mul_vec(fld, &g, &g);
            let g3 = alg.mul_vec(fld, &g2, &g);
            let three_g2 = alg.scale_vec(fld, &g2, &fld.from_int(3));
            let two_g3 = alg.scale_vec(fld, &g3, &fld.from_int(2));
            g = alg.sub_vec(fld, &three_g2, &two_g3);
        }
        assert!(alg.is_idempotent(fld, &g), "Newton lifting converged");
        fsum = alg.add_vec(fld, &fsum, &g);
        out.push(g);
    }
    assert_eq!(fsum, alg.unit, "lifted idempotents sum to the unit");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::from_dense_mult;
    use crate::spots::parse_spot;

    /// F_q[x]/(x^2): local algebra with a one-dimensional radical.
    fn dual_numbers(fld: &ResidueField) -> FieldAlgebra {
        let z = fld.zero();
        let o = fld.one();
        let table = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
        ];
        from_dense_mult(fld, table, vec![o.clone(), z.clone()])
    }

    /// Group algebra of S_2 over the given field: basis {1, s}, s^2 = 1.
    fn s2_group_algebra(fld: &ResidueField) -> FieldAlgebra {
        let z = fld.zero();
        let o = fld.one();
        let table = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]],
        ];
        from_dense_mult(fld, table, vec![o.clone(), z.clone()])
    }

    #[test]
    fn regular_module_relations_and_homs() {
        let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
        let alg = s2_group_algebra(&fld);
        let reg = AlgMod::regular(&fld, &alg);
        reg.verify(&fld, &alg).unwrap();
        // End of the regular module is the opposite algebra: dimension 2
        assert_eq!(hom_dim(&fld, &reg, &reg), 2);
        // F_2[S_2] is local: the regular module is indecomposable projective
        let rad = radical::radical(&fld, &alg);
        assert_eq!(rad.len(), 1);
        assert_eq!(is_projective(&fld, &alg, &reg, &rad), Verdict::True);
        // the trivial module (1-dim quotient) is not projective
        let radm = radical_submodule(&fld, &reg, &rad);
        let (triv, _) = quotient_module(&fld, &reg, &radm).unwrap();
        assert_eq!(triv.dim, 1);
        assert_eq!(is_projective(&fld, &alg, &triv, &rad), Verdict::False);
        // self-extensions of the trivial module: dim Ext^1 = 1 here
        assert_eq!(ext1_dim(&fld, &alg, &triv, &triv, &rad), 1);
    }

    #[test]
    fn radical_series_of_dual_numbers() {
        let fld = ResidueField::new(parse_spot("max=3,t+1").unwrap()).unwrap();
        let alg = dual_numbers(&fld);
        let rad = radical::radical(&fld, &alg);
        let reg = AlgMod::regular(&fld, &alg);
        let series = radical_series(&fld, &reg, &rad);
        assert_eq!(
            series.iter().map(|s| s.len()).collect::<Vec<_>>(),
            vec![2, 1, 0]
        );
    }

    #[test]
    fn split_semisimple_group_algebra() {
        // F_3[S_2] is semisimple: regular module = two 1-dim simples
        let fld = ResidueField::new(parse_spot("max=3,t+1").unwrap()).unwrap();
        let alg = s2_group_algebra(&fld);
        let reg = AlgMod::regular(&fld, &alg);
        let parts = split_semisimple(&fld, &reg, 7).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.len() == 1));
        // idempotents: (1+s)/2 and (1-s)/2
        let idems = primitive_idempotents(&fld, &alg, 7).unwrap();
        assert_eq!(idems.len(), 2);
        let sum = alg.add_vec(&fld, &idems[0], &idems[1]);
        assert_eq!(sum, alg.unit);
        assert!(alg.is_zero_vec(&fld, &alg.mul_vec(&fld, &idems[0], &idems[1])));
    }

    #[test]
    fn idempotent_lifting_through_radical() {
        // 2x2 upper triangular over F_2: two primitive idempotents e11, e22
        let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
        let z = fld.zero();
        let o = fld.one();
        let mut table = vec![vec![vec![z.clone(); 3]; 3]; 3];
        table[0][0][0] = o.clone();
        table[0][1][1] = o.clone();
        table[1][2][1] = o.clone();
        table[2][2][2] = o.clone();
        let alg = from_dense_mult(&fld, table, vec![o.clone(), z.clone(), o.clone()]);
        let idems = primitive_idempotents(&fld, &alg, 11).unwrap();
        assert_eq!(idems.len(), 2);
        for (i, e) in idems.iter().enumerate() {
            assert!(alg.is_idempotent(&fld, e));
            for (j, f) in idems.iter().enumerate() {
                if i != j {
                    assert!(alg.is_zero_vec(&fld, &alg.mul_vec(&fld, e, f)));
                }
            }
        }
        // and F_2[S_2], which is local: a single primitive idempotent 1
        let s2 = s2_group_algebra(&fld);
        let idems2 = primitive_idempotents(&fld, &s2, 11).unwrap();
        assert_eq!(idems2.len(), 1);
        assert_eq!(idems2[0], s2.unit);
    }

    #[test]
    fn matrix_algebra_regular_module_splits_into_columns() {
        let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
        // M_2(F_2) via structure constants
        let z = fld.zero();
        let o = fld.one();
        let idx = |r: usize, c: usize| r * 2 + c;
        let mut table = vec![vec![vec![z.clone(); 4]; 4]; 4];
        for r in 0..2 {
            for c in 0..2 {
                for c2 in 0..2 {
                    table[idx(r, c)][idx(c, c2)][idx(r, c2)] = o.clone();
                }
            }
        }
        let mut unit = vec![z.clone(); 4];
        unit[idx(0, 0)] = o.clone();
        unit[idx(1, 1)] = o.clone();
        let alg = from_dense_mult(&fld, table, unit);
        alg.verify(&fld).unwrap();
        let reg = AlgMod::regular(&fld, &alg);
        let parts = split_semisimple(&fld, &reg, 3).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.len() == 2));
        // pairwise isomorphic simples: nonzero hom between restricted modules
        let m0 = submodule(&fld, &reg, &parts[0]).unwrap();
        let m1 = submodule(&fld, &reg, &parts[1]).unwrap();
        assert_eq!(hom_dim(&fld, &m0, &m1), 1);
    }
}
