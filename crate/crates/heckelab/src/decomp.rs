//! Simple modules over finite residue fields, standard objects cut from the
//! ideal-chain sections of the endomorphism algebra, decomposition matrices,
//! and the triangularity reports for both the endomorphism-algebra side and
//! the two-sided-cell (block) side.

use crate::algebra::{self, FieldAlgebra};
use crate::cells::CellDecomposition;
use crate::hecke::{Hecke, KLData};
use crate::hmodules::{self, Side};
use crate::kpoly;
use crate::linalg::{self, Mat};
use crate::modrep::{self, AlgMod, ModError};
use crate::radical;
use crate::schur::{self, IntegralEndo};
use crate::spots::{K, PrimeSpot, ResidueField};
use crate::zlinalg::{self, ZMat, ZOutcome};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

#[derive(Debug)]
pub enum DecompError {
    Module(ModError),
    /// A section endomorphism ring refused to split into matrix blocks, or a
    /// splitting computed generically does not survive at the chosen spot.
    SectionNotSplit(&'static str),
    Unknown(&'static str),
    FiniteFieldRequired,
    /// The spot lies on the excluded locus (t^2 + 1 vanishes) and the caller
    /// did not opt in.
    BadLocus,
}

impl std::fmt::Display for DecompError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecompError::Module(e) => write!(f, "module computation failed: {e}"),
            DecompError::SectionNotSplit(s) => write!(f, "section does not split: {s}"),
            DecompError::Unknown(s) => write!(f, "inconclusive: {s}"),
            DecompError::FiniteFieldRequired => write!(f, "a finite residue field is required"),
            DecompError::BadLocus => write!(f, "spot lies on the excluded locus (t^2+1)"),
        }
    }
}

impl From<ModError> for DecompError {
    fn from(e: ModError) -> Self {
        DecompError::Module(e)
    }
}

// ---------------------------------------------------------------------------
// Matrix helpers
// ---------------------------------------------------------------------------

fn mat_add(fld: &ResidueField, a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| fld.add(x, y)).collect())
        .collect()
}

fn mat_sub(fld: &ResidueField, a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| fld.sub(x, y)).collect())
        .collect()
}

fn mat_scale(fld: &ResidueField, a: &Mat, c: &K) -> Mat {
    a.iter()
        .map(|r| r.iter().map(|x| fld.mul(x, c)).collect())
        .collect()
}

fn flatten(m: &Mat) -> Vec<K> {
    m.iter().flat_map(|r| r.iter().cloned()).collect()
}

fn mat_is_zero(fld: &ResidueField, m: &Mat) -> bool {
    m.iter().all(|r| r.iter().all(|x| fld.is_zero(x)))
}

/// Row basis of the column space of `m`.
fn image_rows(fld: &ResidueField, m: &Mat) -> Mat {
    linalg::row_basis(fld, &linalg::transpose(fld, m))
}

/// Matrix of the restriction of `u` to the invariant subspace spanned by
/// `rows` (coordinates in the given basis). Panics if not invariant.
fn restrict_to_rows(fld: &ResidueField, u: &Mat, rows: &Mat) -> Mat {
    let k = rows.len();
    let mut out = linalg::zeros(fld, k, k);
    for (j, v) in rows.iter().enumerate() {
        let w = linalg::mat_vec(fld, u, v);
        let c = modrep::coords_in_rows(fld, rows, &w).expect("subspace is invariant");
        for (i, x) in c.into_iter().enumerate() {
            out[i][j] = x;
        }
    }
    out
}

/// Evaluates `p(u)` where the constant term multiplies `unit` instead of the
/// ambient identity (so the result stays in the corner with unit `unit`).
fn eval_with_unit(fld: &ResidueField, p: &kpoly::KPoly, u: &Mat, unit: &Mat) -> Mat {
    let n = u.len();
    let mut acc = linalg::zeros(fld, n, n);
    for c in p.iter().rev() {
        acc = linalg::mat_mul(fld, &acc, u);
        acc = mat_add(fld, &acc, &mat_scale(fld, unit, c));
    }
    acc
}

/// Basis of `{F : F A = A F for all A}` computed by folding one commutation
/// constraint at a time into the running solution space.
pub fn commutant_space(fld: &ResidueField, mats: &[Mat]) -> Vec<Mat> {
    let n = mats.first().map_or(0, |m| m.len());
    if n == 0 {
        return vec![];
    }
    // current basis of candidate matrices, starting from all of M_n
    let mut basis: Vec<Mat> = (0..n * n)
        .map(|k| {
            let mut m = linalg::zeros(fld, n, n);
            m[k / n][k % n] = fld.one();
            m
        })
        .collect();
    // drop dependent constraint matrices first
    let mut indep: Vec<&Mat> = vec![];
    let mut span: Mat = vec![];
    for m in mats {
        let fl = flatten(m);
        if !linalg::in_row_space(fld, &span, &fl) {
            span.push(fl);
            span = linalg::row_basis(fld, &span);
            indep.push(m);
        }
    }
    for a in indep {
        if basis.is_empty() {
            break;
        }
        // system rows: entries of F_b A - A F_b, columns over current basis
        let cols = basis.len();
        let comms: Vec<Vec<K>> = basis
            .iter()
            .map(|f| {
                let c = mat_sub(
                    fld,
                    &linalg::mat_mul(fld, f, a),
                    &linalg::mat_mul(fld, a, f),
                );
                flatten(&c)
            })
            .collect();
        let mut system: Mat = vec![];
        for e in 0..n * n {
            let row: Vec<K> = (0..cols).map(|b| comms[b][e].clone()).collect();
            if row.iter().any(|x| !fld.is_zero(x)) {
                system.push(row);
            }
        }
        if system.is_empty() {
            continue;
        }
        let ker = linalg::kernel(fld, &system);
        basis = ker
            .iter()
            .map(|coef| {
                let mut m = linalg::zeros(fld, n, n);
                for (b, c) in coef.iter().enumerate() {
                    if !fld.is_zero(c) {
                        m = mat_add(fld, &m, &mat_scale(fld, &basis[b], c));
                    }
                }
                m
            })
            .collect();
    }
    basis
}

// ---------------------------------------------------------------------------
// Idempotent splitting by spectral projections
// ---------------------------------------------------------------------------

/// Tries to split the idempotent `f` inside the span of `{f h f : h in ends}`
/// using a splitting element's spectral idempotents. `Ok(None)` means `f` is
/// primitive there (corner of dimension one); an error means the corner has
/// dimension > 1 but no candidate's minimal polynomial split into linears.
fn try_split_once(
    fld: &ResidueField,
    ends: &[Mat],
    f: &Mat,
) -> Result<Option<(Mat, Mat)>, DecompError> {
    let mut corner: Vec<Mat> = vec![];
    let mut span: Mat = vec![];
    for h in ends {
        let u = linalg::mat_mul(fld, f, &linalg::mat_mul(fld, h, f));
        let fl = flatten(&u);
        if !linalg::in_row_space(fld, &span, &fl) {
            span.push(fl);
            span = linalg::row_basis(fld, &span);
            corner.push(u);
        }
    }
    if corner.len() <= 1 {
        return Ok(None);
    }
    let img = image_rows(fld, f);
    let mut candidates: Vec<Mat> = corner.clone();
    for i in 0..corner.len() {
        for j in i + 1..corner.len() {
            candidates.push(mat_add(fld, &corner[i], &corner[j]));
        }
    }
    for u in &candidates {
        let r = restrict_to_rows(fld, u, &img);
        let mp = kpoly::min_poly(fld, &r);
        let deg = kpoly::kdeg(&mp).unwrap_or(0);
        if deg < 2 {
            continue;
        }
        let Some(roots) = kpoly::linear_roots(fld, &mp) else {
            continue;
        };
        let total: usize = roots.iter().map(|(_, m)| m).sum();
        if total != deg || roots.len() < 2 {
            continue;
        }
        // spectral idempotent onto the generalized eigenspace of the first
        // root: e = t*b with 1 = s*a + t*b, a = (x - r0)^m0, b = mp / a
        let (r0, m0) = &roots[0];
        let mut a: kpoly::KPoly = vec![fld.one()];
        let lin = vec![fld.neg(r0), fld.one()];
        for _ in 0..*m0 {
            a = kpoly::kmul(fld, &a, &lin);
        }
        let (b, rem) = kpoly::kdivrem(fld, &mp, &a);
        assert!(rem.is_empty(), "factor of the minimal polynomial");
        let (g, _s, t) = kpoly::kxgcd(fld, &a, &b);
        assert_eq!(kpoly::kdeg(&g), Some(0), "coprime spectral factors");
        let ep = kpoly::kmul(fld, &t, &b);
        let e1 = eval_with_unit(fld, &ep, u, f);
        let e2 = mat_sub(fld, f, &e1);
        assert_eq!(
            linalg::mat_mul(fld, &e1, &e1),
            e1,
            "spectral projection is idempotent"
        );
        assert!(!mat_is_zero(fld, &e1) && !mat_is_zero(fld, &e2));
        return Ok(Some((e1, e2)));
    }
    Err(DecompError::SectionNotSplit(
        "no splitting element with a fully split minimal polynomial",
    ))
}

/// Splits `f0` into primitive idempotents inside the span of `{f h f}`.
fn split_all_idempotents(
    fld: &ResidueField,
    ends: &[Mat],
    f0: Mat,
) -> Result<Vec<Mat>, DecompError> {
    let mut done = vec![];
    let mut todo = vec![f0];
    while let Some(f) = todo.pop() {
        match try_split_once(fld, ends, &f)? {
            None => done.push(f),
            Some((e1, e2)) => {
                todo.push(e1);
                todo.push(e2);
            }
        }
    }
    Ok(done)
}

/// One primitive idempotent below `f0` (follows a single branch).
fn primitive_below(fld: &ResidueField, ends: &[Mat], f0: Mat) -> Result<Mat, DecompError> {
    let mut f = f0;
    loop {
        match try_split_once(fld, ends, &f)? {
            None => return Ok(f),
            Some((e1, _)) => f = e1,
        }
    }
}

/// Central primitive idempotents of an algebra whose center splits over the
/// field (certified root finding on minimal polynomials).
pub fn central_primitive_idempotents(
    fld: &ResidueField,
    alg: &FieldAlgebra,
) -> Result<Vec<Vec<K>>, DecompError> {
    let cen = alg.center(fld);
    let mats: Vec<Mat> = cen.iter().map(|z| alg.left_regular(fld, z)).collect();
    let fs = split_all_idempotents(fld, &mats, linalg::identity(fld, alg.dim))?;
    // recover elements: an idempotent matrix here is left-multiplication by
    // its value on the unit
    let mut out = vec![];
    let mut sum = alg.zero_vec(fld);
    for f in fs {
        let e: Vec<K> = linalg::mat_vec(fld, &f, &alg.unit);
        assert!(alg.is_idempotent(fld, &e), "central idempotent");
        sum = alg.add_vec(fld, &sum, &e);
        out.push(e);
    }
    assert_eq!(sum, alg.unit, "central idempotents resolve the unit");
    Ok(out)
}

// ---------------------------------------------------------------------------
// Simple modules over finite fields
// ---------------------------------------------------------------------------

/// The pairwise non-isomorphic simple modules of a finite-dimensional algebra
/// over a finite residue field, with their projective covers.
pub struct SimpleSet {
    pub simples: Vec<AlgMod>,
    pub covers: Vec<AlgMod>,
    /// dim of the endomorphism field of each simple.
    pub end_dims: Vec<usize>,
    /// How many principal indecomposables landed in each class.
    pub cover_mults: Vec<usize>,
}

pub fn simples_finite_field(
    fld: &ResidueField,
    alg: &FieldAlgebra,
    seed: u64,
) -> Result<SimpleSet, DecompError> {
    if !matches!(fld.spot, PrimeSpot::Maximal(_, _)) {
        return Err(DecompError::FiniteFieldRequired);
    }
    let idems = modrep::primitive_idempotents(fld, alg, seed)?;
    let rad = radical::radical(fld, alg);
    let reg = AlgMod::regular(fld, alg);
    let mut simples: Vec<AlgMod> = vec![];
    let mut covers: Vec<AlgMod> = vec![];
    let mut end_dims: Vec<usize> = vec![];
    let mut cover_mults: Vec<usize> = vec![];
    let mut total = 0usize;
    for e in &idems {
        let cols = alg.right_regular(fld, e);
        let rows = image_rows(fld, &cols);
        let p = modrep::submodule(fld, &reg, &rows)?;
        total += p.dim;
        let radp = modrep::radical_submodule(fld, &p, &rad);
        let (top, _) = modrep::quotient_module(fld, &p, &radp)?;
        if let Some(k) = simples
            .iter()
            .position(|d| modrep::hom_dim(fld, &top, d) > 0)
        {
            assert_eq!(simples[k].dim, top.dim, "isomorphic simples share dims");
            cover_mults[k] += 1;
        } else {
            end_dims.push(modrep::hom_dim(fld, &top, &top));
            simples.push(top);
            covers.push(p);
            cover_mults.push(1);
        }
    }
    assert_eq!(total, alg.dim, "principal covers exhaust the algebra");
    // Wedderburn bookkeeping on the semisimple quotient: each class
    // contributes a full matrix ring over its endomorphism field.
    let ss_dim = alg.dim - rad.len();
    let mut acc = 0usize;
    for (i, d) in simples.iter().enumerate() {
        assert_eq!(d.dim % end_dims[i], 0);
        assert_eq!(
            cover_mults[i] * end_dims[i],
            d.dim,
            "multiplicity of a principal cover equals dim D / dim End(D)"
        );
        acc += d.dim * d.dim / end_dims[i];
    }
    assert_eq!(acc, ss_dim, "Wedderburn dimension bookkeeping");
    Ok(SimpleSet {
        simples,
        covers,
        end_dims,
        cover_mults,
    })
}

/// Exact composition multiplicity `[M : D_i]` via Hom from the projective
/// cover of `D_i`.
pub fn composition_multiplicity(
    fld: &ResidueField,
    set: &SimpleSet,
    i: usize,
    m: &AlgMod,
) -> usize {
    let h = modrep::hom_dim(fld, &set.covers[i], m);
    assert_eq!(h % set.end_dims[i], 0, "Hom space is an End(D)-module");
    h / set.end_dims[i]
}

pub fn composition_vector(fld: &ResidueField, set: &SimpleSet, m: &AlgMod) -> Vec<usize> {
    (0..set.simples.len())
        .map(|i| composition_multiplicity(fld, set, i, m))
        .collect()
}

/// Brute-force oracle: composition multiplicities read off a radical series
/// whose semisimple layers are split into simple summands.
pub fn series_multiplicities(
    fld: &ResidueField,
    set: &SimpleSet,
    m: &AlgMod,
    alg_rad: &Mat,
    seed: u64,
) -> Result<Vec<usize>, DecompError> {
    let series = modrep::radical_series(fld, m, alg_rad);
    let mut out = vec![0usize; set.simples.len()];
    for w in series.windows(2) {
        let sub = modrep::submodule(fld, m, &w[0])?;
        let mut lower: Mat = vec![];
        for v in &w[1] {
            lower.push(
                modrep::coords_in_rows(fld, &w[0], v)
                    .ok_or(DecompError::Unknown("radical series nesting"))?,
            );
        }
        let (layer, _) = modrep::quotient_module(fld, &sub, &lower)?;
        if layer.dim == 0 {
            continue;
        }
        let parts = modrep::split_semisimple(fld, &layer, seed)?;
        for rows in &parts {
            let part = modrep::submodule(fld, &layer, rows)?;
            let k = set
                .simples
                .iter()
                .position(|d| modrep::hom_dim(fld, &part, d) > 0)
                .ok_or(DecompError::Unknown("layer summand matches no simple"))?;
            assert_eq!(part.dim, set.simples[k].dim);
            out[k] += 1;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Section coordinates (chosen once, integrally, shared by all spots)
// ---------------------------------------------------------------------------

/// A coordinate chart for one section of the ideal chain that specializes
/// coherently: the ideal basis is a unit echelon, the lower ideal is written
/// in those coordinates and unit-echelonized again, and the section lives on
/// the complementary (free) coordinates.
pub struct SectionCoords {
    pub j_rows: ZMat,
    pub j_piv: Vec<usize>,
    pub s_rows: ZMat,
    pub s_piv: Vec<usize>,
    pub free: Vec<usize>,
}

fn integral_coords(rows: &ZMat, piv: &[usize], v: &[crate::laurent::IntLaurent]) -> Option<Vec<crate::laurent::IntLaurent>> {
    let mut rem = v.to_vec();
    let mut coords = Vec::with_capacity(rows.len());
    for (i, &c) in piv.iter().enumerate() {
        let f = rem[c].clone();
        if !f.is_zero() {
            for (j, x) in rem.iter_mut().enumerate() {
                *x = x.sub(&f.mul(&rows[i][j]));
            }
        }
        coords.push(f);
    }
    if rem.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

pub fn section_coords(upper: &ZMat, lower: &ZMat) -> Result<SectionCoords, DecompError> {
    let ZOutcome::Done((j_rows, j_piv)) = zlinalg::unit_echelon_pivots(upper) else {
        return Err(DecompError::Unknown("ideal basis refused a unit echelon"));
    };
    let mut sub_in: ZMat = vec![];
    for v in lower {
        sub_in.push(
            integral_coords(&j_rows, &j_piv, v)
                .ok_or(DecompError::Unknown("ideal chain is not nested integrally"))?,
        );
    }
    let ZOutcome::Done((s_rows, s_piv)) = zlinalg::unit_echelon_pivots(&sub_in) else {
        return Err(DecompError::Unknown("lower ideal refused a unit echelon"));
    };
    let free: Vec<usize> = (0..j_rows.len()).filter(|c| !s_piv.contains(c)).collect();
    Ok(SectionCoords {
        j_rows,
        j_piv,
        s_rows,
        s_piv,
        free,
    })
}

/// Reduces `v` by pivot rows over the field, returning the coefficients used;
/// `v` becomes the remainder.
fn field_reduce(fld: &ResidueField, rows: &Mat, piv: &[usize], v: &mut Vec<K>) -> Vec<K> {
    let mut coords = Vec::with_capacity(rows.len());
    for (i, &c) in piv.iter().enumerate() {
        let f = v[c].clone();
        if !fld.is_zero(&f) {
            for (j, x) in v.iter_mut().enumerate() {
                let s = fld.mul(&f, &rows[i][j]);
                *x = fld.sub(x, &s);
            }
        }
        coords.push(f);
    }
    coords
}

/// The left module `J_j / J_{j-1}` over a specialized endomorphism algebra,
/// on the fixed free coordinates of the chart.
pub fn section_module_at(
    fld: &ResidueField,
    alg: &FieldAlgebra,
    sc: &SectionCoords,
) -> Result<AlgMod, DecompError> {
    let jm: Mat = schur::specialize_span(fld, &sc.j_rows);
    let sm: Mat = schur::specialize_span(fld, &sc.s_rows);
    let d = sc.free.len();
    let mut action = Vec::with_capacity(alg.dim);
    for b in 0..alg.dim {
        let bm = alg.left_regular(fld, &alg.basis_vec(fld, b));
        let mut m = linalg::zeros(fld, d, d);
        for (col, &fidx) in sc.free.iter().enumerate() {
            let mut img = linalg::mat_vec(fld, &bm, &jm[fidx]);
            let kc = field_reduce(fld, &jm, &sc.j_piv, &mut img);
            if img.iter().any(|x| !fld.is_zero(x)) {
                return Err(DecompError::Unknown("product left the ideal"));
            }
            let mut rem = kc;
            field_reduce(fld, &sm, &sc.s_piv, &mut rem);
            for (row, &fr) in sc.free.iter().enumerate() {
                m[row][col] = rem[fr].clone();
            }
        }
        action.push(m);
    }
    Ok(AlgMod { dim: d, action })
}

// ---------------------------------------------------------------------------
// Standard objects
// ---------------------------------------------------------------------------

pub struct StandardLabel {
    /// 1-based position in the ideal chain.
    pub level: usize,
    /// Shifted height of the stratum this section belongs to.
    pub height: usize,
    /// The two-sided cell at that height, when unique.
    pub cell: Option<usize>,
    /// Number of copies of the generic standard module inside the section.
    pub mult: usize,
    pub dim_generic: usize,
    /// Idempotent endomorphism of the section at the generic spot whose image
    /// is one copy of the standard module; entries are rational functions and
    /// specialize to any spot where their denominators survive.
    pub f: Mat,
}

pub struct StandardObjects {
    pub nlevels: usize,
    pub sections: Vec<SectionCoords>,
    pub labels: Vec<StandardLabel>,
}

/// Embeds an endomorphism of the invariant subspace spanned by `rows` back
/// into the ambient space, using the projection `z` onto that subspace.
fn embed_endo(fld: &ResidueField, rows: &Mat, f_iso: &Mat, z: &Mat, dim: usize) -> Mat {
    let k = rows.len();
    // C: coords of z * e_j in the row basis
    let mut cmat = linalg::zeros(fld, k, dim);
    for j in 0..dim {
        let col: Vec<K> = (0..dim).map(|i| z[i][j].clone()).collect();
        let c = modrep::coords_in_rows(fld, rows, &col).expect("image of the projection");
        for (i, x) in c.into_iter().enumerate() {
            cmat[i][j] = x;
        }
    }
    // inclusion: dim x k, columns are the basis rows
    let mut inc = linalg::zeros(fld, dim, k);
    for (i, v) in rows.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            inc[r][i] = x.clone();
        }
    }
    linalg::mat_mul(fld, &inc, &linalg::mat_mul(fld, f_iso, &cmat))
}

fn isqrt(n: usize) -> usize {
    let mut r = 0;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Builds one standard object per block of each ideal-chain section at the
/// generic spot: the image of a primitive idempotent endomorphism below the
/// central projection onto the block's isotypic part.
pub fn build_standard_objects(
    endo: &IntegralEndo,
    chain: &[ZMat],
    cells: &CellDecomposition,
) -> Result<StandardObjects, DecompError> {
    let gen = ResidueField::new(PrimeSpot::Generic).expect("generic spot");
    let b = endo.specialize(&gen);
    let nlevels = chain.len() - 1;
    let (heights, nh) =
        schur::shifted_heights(cells).map_err(|_| DecompError::Unknown("height function"))?;
    assert_eq!(nh, nlevels, "chain length matches the height range");
    let zs = central_primitive_idempotents(&gen, &b)?;
    let mut sections = vec![];
    let mut labels = vec![];
    for j in 1..=nlevels {
        let sc = section_coords(&chain[j], &chain[j - 1])?;
        let sec = section_module_at(&gen, &b, &sc)?;
        let height = nlevels - j + 1;
        let at_height: Vec<usize> = (0..cells.two_sided_cells.len())
            .filter(|&c| heights[c] == height)
            .collect();
        let cell = if at_height.len() == 1 {
            Some(at_height[0])
        } else {
            None
        };
        for z in &zs {
            let zm = sec.act_matrix(&gen, z);
            let rows = image_rows(&gen, &zm);
            if rows.is_empty() {
                continue;
            }
            let iso = modrep::submodule(&gen, &sec, &rows)?;
            let ends = commutant_space(&gen, &iso.action);
            let n = isqrt(ends.len());
            if n * n != ends.len() {
                return Err(DecompError::SectionNotSplit(
                    "block endomorphism ring is not a full matrix ring",
                ));
            }
            let f_iso = primitive_below(&gen, &ends, linalg::identity(&gen, iso.dim))?;
            let d = image_rows(&gen, &f_iso).len();
            if d * n != iso.dim {
                return Err(DecompError::SectionNotSplit(
                    "primitive idempotent rank does not divide the block",
                ));
            }
            let f = embed_endo(&gen, &rows, &f_iso, &zm, sec.dim);
            assert_eq!(
                linalg::mat_mul(&gen, &f, &f),
                f,
                "embedded idempotent stays idempotent"
            );
            labels.push(StandardLabel {
                level: j,
                height,
                cell,
                mult: n,
                dim_generic: d,
                f,
            });
        }
        sections.push(sc);
    }
    Ok(StandardObjects {
        nlevels,
        sections,
        labels,
    })
}

/// Specializes a generic scalar (rational function of t) at a spot; fails
/// exactly when the denominator vanishes there.
pub fn generic_value_at(fld: &ResidueField, v: &K) -> Result<K, DecompError> {
    let K::QRat(num, den) = v else {
        panic!("generic scalar expected");
    };
    let mut l = BigInt::one();
    for c in num.iter().chain(den.iter()) {
        l = l.lcm(c.denom());
    }
    let to_laurent = |f: &[BigRational]| -> crate::laurent::IntLaurent {
        let ints: Vec<BigInt> = f
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        crate::laurent::IntLaurent::from_dense(&ints, 0)
    };
    let nv = fld.from_laurent(&to_laurent(num));
    let dv = fld.from_laurent(&to_laurent(den));
    fld.div(&nv, &dv).map_err(|_| {
        DecompError::SectionNotSplit("idempotent denominator vanishes at the spot")
    })
}

/// The standard module of one label at a spot: the image of the specialized
/// idempotent inside the specialized section.
pub fn standard_module_at(
    fld: &ResidueField,
    endo: &IntegralEndo,
    objs: &StandardObjects,
    idx: usize,
) -> Result<AlgMod, DecompError> {
    let b = endo.specialize(fld);
    let lab = &objs.labels[idx];
    let sc = &objs.sections[lab.level - 1];
    let sec = section_module_at(fld, &b, sc)?;
    let mut fbar = linalg::zeros(fld, sec.dim, sec.dim);
    for r in 0..sec.dim {
        for c in 0..sec.dim {
            fbar[r][c] = generic_value_at(fld, &lab.f[r][c])?;
        }
    }
    if linalg::mat_mul(fld, &fbar, &fbar) != fbar {
        return Err(DecompError::SectionNotSplit(
            "specialized idempotent is not idempotent",
        ));
    }
    for a in &sec.action {
        if linalg::mat_mul(fld, &fbar, a) != linalg::mat_mul(fld, a, &fbar) {
            return Err(DecompError::SectionNotSplit(
                "specialized idempotent is not an endomorphism",
            ));
        }
    }
    let rows = image_rows(fld, &fbar);
    if rows.len() != lab.dim_generic {
        return Err(DecompError::SectionNotSplit(
            "standard module rank dropped at the spot",
        ));
    }
    Ok(modrep::submodule(fld, &sec, &rows)?)
}

// ---------------------------------------------------------------------------
// Decomposition matrix and triangularity
// ---------------------------------------------------------------------------

pub struct DecompositionMatrix {
    /// Rows indexed by labels, columns by simples.
    pub entries: Vec<Vec<usize>>,
    pub heights: Vec<usize>,
    pub cells: Vec<Option<usize>>,
    pub standard_dims: Vec<usize>,
    pub simple_dims: Vec<usize>,
    /// Whether the spot lies on the excluded locus (t^2 + 1 = 0).
    pub bad_locus: bool,
}

/// Whether `t^2 + 1` vanishes at the spot.
pub fn spot_on_bad_locus(fld: &ResidueField) -> bool {
    let v = fld.add(&fld.t_power(2), &fld.one());
    fld.is_zero(&v)
}

pub fn decomposition_matrix(
    fld: &ResidueField,
    endo: &IntegralEndo,
    objs: &StandardObjects,
    set: &SimpleSet,
    allow_bad_locus: bool,
) -> Result<(DecompositionMatrix, Vec<AlgMod>), DecompError> {
    if !matches!(fld.spot, PrimeSpot::Maximal(_, _)) {
        return Err(DecompError::FiniteFieldRequired);
    }
    let bad = spot_on_bad_locus(fld);
    if bad && !allow_bad_locus {
        return Err(DecompError::BadLocus);
    }
    let mut entries = vec![];
    let mut standard_dims = vec![];
    let mut standards = vec![];
    for idx in 0..objs.labels.len() {
        let e = standard_module_at(fld, endo, objs, idx)?;
        assert_eq!(e.dim, objs.labels[idx].dim_generic);
        let v = composition_vector(fld, set, &e);
        let weighted: usize = v
            .iter()
            .zip(&set.simples)
            .map(|(m, d)| m * d.dim)
            .sum();
        assert_eq!(weighted, e.dim, "composition factors exhaust the module");
        entries.push(v);
        standard_dims.push(e.dim);
        standards.push(e);
    }
    let dm = DecompositionMatrix {
        entries,
        heights: objs.labels.iter().map(|l| l.height).collect(),
        cells: objs.labels.iter().map(|l| l.cell).collect(),
        standard_dims,
        simple_dims: set.simples.iter().map(|d| d.dim).collect(),
        bad_locus: bad,
    };
    Ok((dm, standards))
}

pub struct TriangularityReport {
    pub pass: bool,
    /// Per simple: the assigned row (label index), when one exists.
    pub assignments: Vec<Option<usize>>,
    pub witnesses: Vec<String>,
}

/// Matrix-level part of the triangularity check: per simple, scanning rows in
/// increasing height (row order breaking ties), there is a unique nonzero row
/// at the minimal height, with entry exactly one.
pub fn triangularity_scan(dm: &DecompositionMatrix) -> TriangularityReport {
    let nrows = dm.entries.len();
    let ncols = dm.simple_dims.len();
    let mut order: Vec<usize> = (0..nrows).collect();
    order.sort_by_key(|&r| (dm.heights[r], r));
    let mut pass = true;
    let mut assignments = vec![];
    let mut witnesses = vec![];
    for d in 0..ncols {
        let Some(&lam) = order.iter().find(|&&r| dm.entries[r][d] != 0) else {
            pass = false;
            witnesses.push(format!("simple #{d} appears in no standard module"));
            assignments.push(None);
            continue;
        };
        let hmin = dm.heights[lam];
        for &r in &order {
            if r != lam && dm.heights[r] <= hmin && dm.entries[r][d] != 0 {
                pass = false;
                witnesses.push(format!(
                    "simple #{d}: rows {lam} and {r} both nonzero at height <= {hmin}"
                ));
            }
        }
        if dm.entries[lam][d] != 1 {
            pass = false;
            witnesses.push(format!(
                "simple #{d}: multiplicity {} in its assigned row {lam}",
                dm.entries[lam][d]
            ));
        }
        assignments.push(Some(lam));
    }
    TriangularityReport {
        pass,
        assignments,
        witnesses,
    }
}

/// Full triangularity report: the matrix scan plus head membership of each
/// simple in its assigned standard module (Hom over the field).
pub fn verify_triangularity(
    fld: &ResidueField,
    dm: &DecompositionMatrix,
    set: &SimpleSet,
    standards: &[AlgMod],
) -> TriangularityReport {
    let mut rep = triangularity_scan(dm);
    for (d, a) in rep.assignments.clone().iter().enumerate() {
        let Some(lam) = a else { continue };
        if modrep::hom_dim(fld, &standards[*lam], &set.simples[d]) == 0 {
            rep.pass = false;
            rep.witnesses.push(format!(
                "simple #{d} is not in the head of its assigned standard module (row {lam})"
            ));
        }
    }
    rep
}

// ---------------------------------------------------------------------------
// Block triangularity on the Hecke-algebra side
// ---------------------------------------------------------------------------

/// The Hecke algebra at a spot as a structure-constant algebra on the
/// standard basis.
pub fn hecke_field_algebra(h: &Hecke, fld: &ResidueField) -> FieldAlgebra {
    let n = h.order();
    let table: Vec<Vec<Vec<K>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let prod = h.mult(&h.t_basis(i), &h.t_basis(j));
                    (0..n).map(|w| fld.from_laurent(&prod.coeff(w))).collect()
                })
                .collect()
        })
        .collect();
    let mut unit = vec![fld.zero(); n];
    unit[h.identity_idx()] = fld.one();
    algebra::from_dense_mult(fld, table, unit)
}

/// Converts a left module given by generator matrices into a module over the
/// full standard basis, multiplying out reduced words.
pub fn left_module_as_algmod(
    h: &Hecke,
    fld: &ResidueField,
    m: &hmodules::FieldModule,
) -> AlgMod {
    assert_eq!(m.side, Side::Left, "left module expected");
    let action: Vec<Mat> = (0..h.order())
        .map(|w| {
            let mut acc = linalg::identity(fld, m.rank);
            for &s in h.elements[w].word() {
                acc = linalg::mat_mul(fld, &acc, &m.action[usize::from(s)]);
            }
            acc
        })
        .collect();
    AlgMod {
        dim: m.rank,
        action,
    }
}

pub struct BlockReport {
    pub pass: bool,
    /// Per simple of the Hecke algebra at the spot: assigned two-sided cell.
    pub assignments: Vec<Option<usize>>,
    /// Composition vector of each two-sided-cell module (rows: cells).
    pub cell_mults: Vec<Vec<usize>>,
    pub simple_dims: Vec<usize>,
    pub cell_heights: Vec<usize>,
    pub witnesses: Vec<String>,
}

/// Block-level triangularity: each simple of the Hecke algebra at a finite
/// spot is assigned the unique minimal-height two-sided cell whose cell
/// module contains it, with head membership; the generic dimension count
/// (cell module ranks summing to |W|) is checked as well.
pub fn verify_block_triangularity(
    h: &Hecke,
    kl: &KLData,
    cells: &CellDecomposition,
    fld: &ResidueField,
    seed: u64,
) -> Result<BlockReport, DecompError> {
    if !matches!(fld.spot, PrimeSpot::Maximal(_, _)) {
        return Err(DecompError::FiniteFieldRequired);
    }
    let ha = hecke_field_algebra(h, fld);
    let set = simples_finite_field(fld, &ha, seed)?;
    let (heights, _) =
        schur::shifted_heights(cells).map_err(|_| DecompError::Unknown("height function"))?;
    let ncells = cells.two_sided_cells.len();
    let mut pass = true;
    let mut witnesses = vec![];
    let mut cellmods = vec![];
    let mut total_rank = 0usize;
    for w in 0..ncells {
        let lm = hmodules::two_sided_cell_module(h, kl, cells, w);
        total_rank += lm.rank;
        let fm = hmodules::specialize_module(&lm, &h.sys, fld)
            .map_err(|_| DecompError::Unknown("cell module specialization"))?;
        cellmods.push(left_module_as_algmod(h, fld, &fm));
    }
    if total_rank != h.order() {
        pass = false;
        witnesses.push(format!(
            "cell module ranks sum to {total_rank}, group order is {}",
            h.order()
        ));
    }
    let cell_mults: Vec<Vec<usize>> = cellmods
        .iter()
        .map(|m| composition_vector(fld, &set, m))
        .collect();
    let mut order: Vec<usize> = (0..ncells).collect();
    order.sort_by_key(|&c| (heights[c], c));
    let mut assignments = vec![];
    for d in 0..set.simples.len() {
        let Some(&omega) = order.iter().find(|&&c| cell_mults[c][d] != 0) else {
            pass = false;
            witnesses.push(format!("simple #{d} appears in no cell module"));
            assignments.push(None);
            continue;
        };
        let hmin = heights[omega];
        for &c in &order {
            if c != omega && heights[c] <= hmin && cell_mults[c][d] != 0 {
                pass = false;
                witnesses.push(format!(
                    "simple #{d}: cells {omega} and {c} both nonzero at height <= {hmin}"
                ));
            }
        }
        if modrep::hom_dim(fld, &cellmods[omega], &set.simples[d]) == 0 {
            pass = false;
            witnesses.push(format!(
                "simple #{d} is not in the head of its assigned cell module {omega}"
            ));
        }
        assignments.push(Some(omega));
    }
    Ok(BlockReport {
        pass,
        assignments,
        cell_mults,
        simple_dims: set.simples.iter().map(|d| d.dim).collect(),
        cell_heights: heights,
        witnesses,
    })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::compute_cells;
    use crate::coxeter::CoxeterSystem;
    use crate::hecke::Hecke;
    use crate::schur::{
        build_endo_integral, dual_standard_basis, height_filtration, ideal_chain_integral,
        qschur_collection, shifted_heights, Filtration,
    };
    use crate::spots::parse_spot;

    fn setup(label: &str) -> (Hecke, KLData, CellDecomposition) {
        let h = Hecke::new(CoxeterSystem::from_type(label).unwrap()).unwrap();
        let kl = h.kl_basis();
        let cells = compute_cells(&h, &kl);
        (h, kl, cells)
    }

    fn qschur_pipeline(label: &str) -> (Hecke, IntegralEndo, Vec<ZMat>, CellDecomposition) {
        let (h, kl, cells) = setup(label);
        let dual = dual_standard_basis(&h, &kl);
        let (_, n) = shifted_heights(&cells).unwrap();
        let coll = qschur_collection(&h, &cells).unwrap();
        let endo = build_endo_integral(&h, &coll).unwrap();
        let filts: Vec<Filtration> = coll
            .summands
            .iter()
            .map(|s| height_filtration(&h, &cells, &dual, s.lam.as_ref().unwrap(), n).unwrap())
            .collect();
        let chain = ideal_chain_integral(&h, &endo, &coll, &filts, n).unwrap();
        (h, endo, chain, cells)
    }

    fn matrix_algebra(fld: &ResidueField, k: usize) -> FieldAlgebra {
        let dim = k * k;
        let mut table = vec![vec![vec![fld.zero(); dim]; dim]; dim];
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for d in 0..k {
                        if b == c {
                            table[a * k + b][c * k + d][a * k + d] = fld.one();
                        }
                    }
                }
            }
        }
        let mut unit = vec![fld.zero(); dim];
        for a in 0..k {
            unit[a * k + a] = fld.one();
        }
        algebra::from_dense_mult(fld, table, unit)
    }

    #[test]
    fn simples_of_matrix_and_group_algebras() {
        // M_2(F_2): one simple of dim 2, projective cover = column module
        let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
        let alg = matrix_algebra(&fld, 2);
        let set = simples_finite_field(&fld, &alg, 7).unwrap();
        assert_eq!(set.simples.len(), 1);
        assert_eq!(set.simples[0].dim, 2);
        assert_eq!(set.covers[0].dim, 2);
        assert_eq!(set.cover_mults[0], 2);
        // Hecke algebra of the symmetric group S_3 at t = 1 over F_2
        let (h, _, _) = setup("A2");
        let ha = hecke_field_algebra(&h, &fld);
        ha.verify(&fld).unwrap();
        let set = simples_finite_field(&fld, &ha, 7).unwrap();
        let mut dims: Vec<usize> = set.simples.iter().map(|d| d.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
    }

    #[test]
    fn composition_multiplicities_match_radical_series() {
        let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
        let (h, _, _) = setup("A2");
        let ha = hecke_field_algebra(&h, &fld);
        let set = simples_finite_field(&fld, &ha, 7).unwrap();
        let rad = radical::radical(&fld, &ha);
        // the regular module, weighted by principal-cover multiplicities
        let reg = AlgMod::regular(&fld, &ha);
        let fast = composition_vector(&fld, &set, &reg);
        let slow = series_multiplicities(&fld, &set, &reg, &rad, 11).unwrap();
        assert_eq!(fast, slow);
        let total: usize = fast
            .iter()
            .zip(&set.simples)
            .map(|(m, d)| m * d.dim)
            .sum();
        assert_eq!(total, ha.dim);
        // a simple is its own unique composition factor
        for (i, d) in set.simples.iter().enumerate() {
            let v = composition_vector(&fld, &set, d);
            for (j, &m) in v.iter().enumerate() {
                assert_eq!(m, usize::from(i == j));
            }
        }
    }

    #[test]
    fn rank_one_standard_objects() {
        let (_, endo, chain, cells) = qschur_pipeline("A1");
        let objs = build_standard_objects(&endo, &chain, &cells).unwrap();
        assert_eq!(objs.nlevels, 2);
        assert_eq!(objs.labels.len(), 2);
        // one label per level; dims and multiplicities from the Wedderburn
        // blocks of the rank-5 generic algebra (M_2 + M_1)
        let mut seen: Vec<(usize, usize, usize, usize)> = objs
            .labels
            .iter()
            .map(|l| (l.level, l.height, l.mult, l.dim_generic))
            .collect();
        seen.sort();
        assert_eq!(seen, vec![(1, 2, 2, 2), (2, 1, 1, 1)]);
        // every label names a unique two-sided cell
        assert!(objs.labels.iter().all(|l| l.cell.is_some()));
        // sum of squares of generic dims = dim of the split semisimple algebra
        let sq: usize = objs.labels.iter().map(|l| l.dim_generic * l.dim_generic).sum();
        assert_eq!(sq, endo.rank());
        // the generic standard modules are irreducible: their endomorphism
        // rings are one-dimensional
        let gen = ResidueField::new(PrimeSpot::Generic).unwrap();
        for idx in 0..objs.labels.len() {
            let e = standard_module_at(&gen, &endo, &objs, idx).unwrap();
            assert_eq!(e.dim, objs.labels[idx].dim_generic);
            assert_eq!(commutant_space(&gen, &e.action).len(), 1);
        }
    }

    #[test]
    fn rank_one_decomposition_matrix_is_triangular() {
        let (_, endo, chain, cells) = qschur_pipeline("A1");
        let objs = build_standard_objects(&endo, &chain, &cells).unwrap();
        let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
        let b = endo.specialize(&fld);
        let set = simples_finite_field(&fld, &b, 7).unwrap();
        // (2, t+1) contains t^2 + 1 = (t+1)^2 - 2t, so this spot needs the
        // opt-in flag and the run is labeled accordingly
        assert!(matches!(
            decomposition_matrix(&fld, &endo, &objs, &set, false),
            Err(DecompError::BadLocus)
        ));
        let (dm, standards) = decomposition_matrix(&fld, &endo, &objs, &set, true).unwrap();
        assert!(dm.bad_locus);
        // oracle: brute-force radical series of each standard module
        let rad = radical::radical(&fld, &b);
        for (row, e) in dm.entries.iter().zip(&standards) {
            let slow = series_multiplicities(&fld, &set, e, &rad, 13).unwrap();
            assert_eq!(row, &slow);
        }
        let rep = verify_triangularity(&fld, &dm, &set, &standards);
        assert!(rep.pass, "witnesses: {:?}", rep.witnesses);
        // every simple is assigned the minimal-height row among those hitting it
        for a in &rep.assignments {
            assert!(a.is_some());
        }
    }

    #[test]
    fn adversarial_matrix_fails_the_scan() {
        // two rows at the same minimal height both hitting the simple
        let dm = DecompositionMatrix {
            entries: vec![vec![1], vec![1], vec![0]],
            heights: vec![1, 1, 2],
            cells: vec![None, None, None],
            standard_dims: vec![1, 1, 1],
            simple_dims: vec![1],
            bad_locus: false,
        };
        let rep = triangularity_scan(&dm);
        assert!(!rep.pass);
        assert!(rep.witnesses.iter().any(|w| w.contains("both nonzero")));
        // multiplicity > 1 in the assigned row also fails
        let dm2 = DecompositionMatrix {
            entries: vec![vec![2], vec![1]],
            heights: vec![1, 2],
            cells: vec![None, None],
            standard_dims: vec![2, 1],
            simple_dims: vec![1],
            bad_locus: false,
        };
        let rep2 = triangularity_scan(&dm2);
        assert!(!rep2.pass);
        assert!(rep2.witnesses.iter().any(|w| w.contains("multiplicity 2")));
    }

    #[test]
    fn rank_one_block_triangularity() {
        let (h, kl, cells) = setup("A1");
        let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
        let rep = verify_block_triangularity(&h, &kl, &cells, &fld, 7).unwrap();
        assert!(rep.pass, "witnesses: {:?}", rep.witnesses);
        // F_2[S_2] is local: exactly one simple, of dim 1
        assert_eq!(rep.simple_dims, vec![1]);
        assert_eq!(rep.assignments.len(), 1);
        let omega = rep.assignments[0].unwrap();
        // the assigned cell is the unique one of minimal height among those
        // whose module contains the simple
        assert!(rep.cell_mults[omega][0] > 0);
        for (c, row) in rep.cell_mults.iter().enumerate() {
            if row[0] > 0 && c != omega {
                assert!(rep.cell_heights[c] > rep.cell_heights[omega]);
            }
        }
    }

    #[test]
    fn block_triangularity_for_the_symmetric_group_on_three_letters() {
        let (h, kl, cells) = setup("A2");
        let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
        let rep = verify_block_triangularity(&h, &kl, &cells, &fld, 7).unwrap();
        assert!(rep.pass, "witnesses: {:?}", rep.witnesses);
        let mut dims = rep.simple_dims.clone();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
        // the 2-dim simple has a unique cell assignment
        let two = rep.simple_dims.iter().position(|&d| d == 2).unwrap();
        assert!(rep.assignments[two].is_some());
    }
}
