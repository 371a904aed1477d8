//! H-modules as free Z[t, t^-1]-lattices with exact generator action
//! matrices: left cell modules, their duals, two-sided cell modules,
//! q-permutation modules, specialization to residue fields, and Hom-space
//! computation over a field.
//!
//! Matrix convention: coordinates are column vectors; the stored matrix
//! `A_s` sends the coordinate vector of `m` to that of `T_s . m` (left
//! modules) or `m . T_s` (right modules). Under this convention the braid
//! and quadratic relation checks are literally identical on both sides
//! (braid words are palindromic patterns), and a full `T_w` action is the
//! product of the `A_s` over a reduced word: left modules compose left to
//! right, right modules right to left.

use crate::cells::CellDecomposition;
use crate::coxeter::Gen;
use crate::hecke::{Hecke, HeckeElt, KLData};
use crate::laurent::{parse_laurent, IntLaurent};
use crate::linalg::{self, Mat};
use crate::spots::{PrimeSpot, ResidueField};
use crate::zlinalg::ZMat;

#[derive(Debug, thiserror::Error)]
pub enum ModuleError {
    #[error("modules live on different sides")]
    SideMismatch,
    #[error("relation verification failed: {0}")]
    RelationFailure(String),
    #[error("cannot parse module file: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// Left cell module on the given left-cell index.
    Cell(usize),
    /// Dual of a left cell module (a right module).
    DualCell(usize),
    /// Two-sided cell module on the given two-sided-cell index.
    TwoSidedCell(usize),
    /// q-permutation module for a parabolic subset.
    QPerm(Vec<Gen>),
    /// Supplied from a module file.
    User(String),
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Cell(w) => write!(f, "cell:{w}"),
            Provenance::DualCell(w) => write!(f, "dual-cell:{w}"),
            Provenance::TwoSidedCell(w) => write!(f, "two-sided-cell:{w}"),
            Provenance::QPerm(l) => write!(
                f,
                "q-perm:{}",
                l.iter().map(|s| (s + 1).to_string()).collect::<Vec<_>>().join(".")
            ),
            Provenance::User(s) => write!(f, "user:{s}"),
        }
    }
}

/// A free lattice with one exact action matrix per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeModule {
    pub side: Side,
    pub rank: usize,
    pub basis_names: Vec<String>,
    /// One `rank x rank` matrix per generator, column convention.
    pub action: Vec<ZMat>,
    pub provenance: Provenance,
}

/// A lattice module specialized at a spot.
#[derive(Debug, Clone)]
pub struct FieldModule {
    pub side: Side,
    pub rank: usize,
    pub action: Vec<Mat>,
    pub spot: PrimeSpot,
    pub provenance: Provenance,
}

// ---------------------------------------------------------------------------
// Relation verification
// ---------------------------------------------------------------------------

fn zmat_mul(a: &ZMat, b: &ZMat) -> ZMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![IntLaurent::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = out[i][j].add(&a[i][l].mul(&b[l][j]));
            }
        }
    }
    out
}

fn zmat_identity(n: usize) -> ZMat {
    let mut m = vec![vec![IntLaurent::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = IntLaurent::one();
    }
    m
}

fn zmat_is_zero(a: &ZMat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

fn zmat_sub(a: &ZMat, b: &ZMat) -> ZMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.sub(y)).collect())
        .collect()
}

fn zmat_scale(a: &ZMat, c: &IntLaurent) -> ZMat {
    a.iter()
        .map(|r| r.iter().map(|x| x.mul(c)).collect())
        .collect()
}

/// Checks the quadratic relation `(A_s - t^{2c_s})(A_s + 1) = 0` and all
/// braid relations exactly over the Laurent ring.
pub fn verify_relations(
    m: &LatticeModule,
    sys: &crate::coxeter::CoxeterSystem,
) -> Result<(), ModuleError> {
    let n = m.rank;
    let id = zmat_identity(n);
    for s in sys.gens() {
        let a = &m.action[s as usize];
        let q = IntLaurent::t_pow(2 * sys.weight(s) as i64);
        let lhs = zmat_mul(&zmat_sub(a, &zmat_scale(&id, &q)), &zmat_sub(a, &zmat_scale(&id, &IntLaurent::int(-1))));
        if !zmat_is_zero(&lhs) {
            return Err(ModuleError::RelationFailure(format!(
                "quadratic relation fails for generator {} on {}",
                s + 1,
                m.provenance
            )));
        }
    }
    for s in sys.gens() {
        for r in sys.gens() {
            if r <= s {
                continue;
            }
            let mm = sys.coxeter_m(s, r);
            let mut p1 = zmat_identity(n);
            let mut p2 = zmat_identity(n);
            for i in 0..mm {
                let (x, y) = if i % 2 == 0 { (s, r) } else { (r, s) };
                p1 = zmat_mul(&p1, &m.action[x as usize]);
                p2 = zmat_mul(&p2, &m.action[y as usize]);
            }
            if p1 != p2 {
                return Err(ModuleError::RelationFailure(format!(
                    "braid relation fails for generators {},{} on {}",
                    s + 1,
                    r + 1,
                    m.provenance
                )));
            }
        }
    }
    Ok(())
}

/// Field version of the relation check.
pub fn verify_relations_field(
    m: &FieldModule,
    sys: &crate::coxeter::CoxeterSystem,
    fld: &ResidueField,
) -> Result<(), ModuleError> {
    let n = m.rank;
    let id = linalg::identity(fld, n);
    let sub = |a: &Mat, b: &Mat| -> Mat {
        a.iter()
            .zip(b)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| fld.sub(x, y)).collect())
            .collect()
    };
    for s in sys.gens() {
        let a = &m.action[s as usize];
        let q = fld.t_power(2 * sys.weight(s) as i64);
        let qid: Mat = id
            .iter()
            .map(|r| r.iter().map(|x| fld.mul(x, &q)).collect())
            .collect();
        let neg_id: Mat = id
            .iter()
            .map(|r| r.iter().map(|x| fld.neg(x)).collect())
            .collect();
        let lhs = linalg::mat_mul(fld, &sub(a, &qid), &sub(a, &neg_id));
        if lhs.iter().any(|r| r.iter().any(|x| !fld.is_zero(x))) {
            return Err(ModuleError::RelationFailure(format!(
                "quadratic relation fails at {} for generator {}",
                m.spot,
                s + 1
            )));
        }
    }
    for s in sys.gens() {
        for r in sys.gens() {
            if r <= s {
                continue;
            }
            let mm = sys.coxeter_m(s, r);
            let mut p1 = linalg::identity(fld, n);
            let mut p2 = linalg::identity(fld, n);
            for i in 0..mm {
                let (x, y) = if i % 2 == 0 { (s, r) } else { (r, s) };
                p1 = linalg::mat_mul(fld, &p1, &m.action[x as usize]);
                p2 = linalg::mat_mul(fld, &p2, &m.action[y as usize]);
            }
            if p1 != p2 {
                return Err(ModuleError::RelationFailure(format!(
                    "braid relation fails at {} for generators {},{}",
                    m.spot,
                    s + 1,
                    r + 1
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// Left cell module: basis `{C_x : x in the left cell}`, generator action
/// computed in H and truncated modulo strictly lower cells (toward the
/// longest element, per the crate's fixed orientation). Panics if a product
/// ever leaks upward, which would falsify the preorder computation.
pub fn cell_module(
    h: &Hecke,
    kl: &KLData,
    cells: &CellDecomposition,
    cell_idx: usize,
) -> LatticeModule {
    let members = &cells.left_cells[cell_idx];
    let pos: std::collections::BTreeMap<usize, usize> = members
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i))
        .collect();
    let rank = members.len();
    let mut action = vec![];
    for s in h.sys.gens() {
        let cs = kl.c_basis(h, h.idx(&h.sys.gen_elt(s)));
        let mut mat = vec![vec![IntLaurent::zero(); rank]; rank];
        for (j, &x) in members.iter().enumerate() {
            let prod = h.mult(&cs, &kl.c_basis(h, x));
            // T_s = t^{c_s} C_s - C_e, so the T_s action is recovered from
            // the C_s action; doing it directly keeps everything integral.
            let tprod = prod
                .scale(&IntLaurent::t_pow(h.sys.weight(s) as i64))
                .sub(&kl.c_basis(h, x));
            for (y, coef) in kl.express_in_c(h, &tprod) {
                if let Some(&i) = pos.get(&y) {
                    mat[i][j] = coef;
                } else {
                    // must be strictly lower in <=_L
                    assert!(
                        cells.leq_l[y][x] && !cells.leq_l[x][y],
                        "cell module leak: {} outside and not lower than {}",
                        h.elements[y],
                        h.elements[x]
                    );
                }
            }
        }
        action.push(mat);
    }
    LatticeModule {
        side: Side::Left,
        rank,
        basis_names: members.iter().map(|&x| format!("C[{}]", h.elements[x])).collect(),
        action,
        provenance: Provenance::Cell(cell_idx),
    }
}

/// Dual of a left cell module: a right module on the dual basis; the action
/// matrices are the transposes.
pub fn dual_cell_module(m: &LatticeModule) -> LatticeModule {
    assert_eq!(m.side, Side::Left);
    let Provenance::Cell(idx) = m.provenance else {
        panic!("dual_cell_module expects a cell module")
    };
    let action = m
        .action
        .iter()
        .map(|a| {
            let mut t = vec![vec![IntLaurent::zero(); m.rank]; m.rank];
            for i in 0..m.rank {
                for j in 0..m.rank {
                    t[j][i] = a[i][j].clone();
                }
            }
            t
        })
        .collect();
    LatticeModule {
        side: Side::Right,
        rank: m.rank,
        basis_names: m.basis_names.iter().map(|n| format!("{n}*")).collect(),
        action,
        provenance: Provenance::DualCell(idx),
    }
}

/// Two-sided cell module: basis `{C_x : x in the two-sided cell}`, left
/// action modulo strictly lower two-sided cells.
pub fn two_sided_cell_module(
    h: &Hecke,
    kl: &KLData,
    cells: &CellDecomposition,
    two_idx: usize,
) -> LatticeModule {
    let members = &cells.two_sided_cells[two_idx];
    let pos: std::collections::BTreeMap<usize, usize> = members
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i))
        .collect();
    let rank = members.len();
    let mut action = vec![];
    for s in h.sys.gens() {
        let cs = kl.c_basis(h, h.idx(&h.sys.gen_elt(s)));
        let mut mat = vec![vec![IntLaurent::zero(); rank]; rank];
        for (j, &x) in members.iter().enumerate() {
            let prod = h.mult(&cs, &kl.c_basis(h, x));
            let tprod = prod
                .scale(&IntLaurent::t_pow(h.sys.weight(s) as i64))
                .sub(&kl.c_basis(h, x));
            for (y, coef) in kl.express_in_c(h, &tprod) {
                if let Some(&i) = pos.get(&y) {
                    mat[i][j] = coef;
                } else {
                    let (cy, cx) = (cells.two_of[y], cells.two_of[x]);
                    assert!(
                        cells.leq_lr_two[cy][cx] && !cells.leq_lr_two[cx][cy],
                        "two-sided cell module leak at {}",
                        h.elements[y]
                    );
                }
            }
        }
        action.push(mat);
    }
    LatticeModule {
        side: Side::Left,
        rank,
        basis_names: members.iter().map(|&x| format!("C[{}]", h.elements[x])).collect(),
        action,
        provenance: Provenance::TwoSidedCell(two_idx),
    }
}

/// The element `x_lam = sum_{w in W_lam} T_w`.
pub fn x_lambda(h: &Hecke, lam: &[Gen]) -> HeckeElt {
    let mut e = HeckeElt::zero();
    for w in h.sys.parabolic_elements(lam).expect("finite parabolic") {
        e.add_term(h.idx(&w), &IntLaurent::one());
    }
    e
}

/// q-permutation right module on the basis `{x_lam T_d}` over the minimal
/// coset representatives `d` of `W_lam \ W`.
pub fn q_permutation(h: &Hecke, lam: &[Gen]) -> LatticeModule {
    let reps = h.sys.min_coset_reps(lam).expect("finite group");
    let rep_pos: std::collections::BTreeMap<usize, usize> = reps
        .iter()
        .enumerate()
        .map(|(i, d)| (h.idx(d), i))
        .collect();
    let rank = reps.len();
    let xl = x_lambda(h, lam);
    // basis elements as explicit Hecke elements (coefficient of each minimal
    // representative in x_lam T_d is exactly 1, and distinct d give disjoint
    // coset supports, so coordinates are read off at the representatives)
    let basis_elts: Vec<HeckeElt> = reps
        .iter()
        .map(|d| {
            let mut acc = xl.clone();
            for &s in d.word() {
                acc = h.right_mul_gen(&acc, s);
            }
            acc
        })
        .collect();
    let mut action = vec![];
    for s in h.sys.gens() {
        let mut mat = vec![vec![IntLaurent::zero(); rank]; rank];
        for (j, be) in basis_elts.iter().enumerate() {
            let prod = h.right_mul_gen(be, s);
            // coordinates = coefficients at the minimal representatives
            let mut rec = HeckeElt::zero();
            for (&widx, &i) in &rep_pos {
                let c = prod.coeff(widx);
                if !c.is_zero() {
                    mat[i][j] = c.clone();
                    rec = rec.add(&basis_elts[i].scale(&c));
                }
            }
            assert_eq!(rec, prod, "q-permutation product leaves the lattice");
        }
        action.push(mat);
    }
    LatticeModule {
        side: Side::Right,
        rank,
        basis_names: reps.iter().map(|d| format!("x.T[{d}]")).collect(),
        action,
        provenance: Provenance::QPerm(lam.to_vec()),
    }
}

/// Entrywise specialization at a spot, with the relations re-verified.
pub fn specialize_module(
    m: &LatticeModule,
    sys: &crate::coxeter::CoxeterSystem,
    fld: &ResidueField,
) -> Result<FieldModule, ModuleError> {
    let action: Vec<Mat> = m
        .action
        .iter()
        .map(|a| {
            a.iter()
                .map(|row| row.iter().map(|x| fld.from_laurent(x)).collect())
                .collect()
        })
        .collect();
    let out = FieldModule {
        side: m.side,
        rank: m.rank,
        action,
        spot: fld.spot.clone(),
        provenance: m.provenance.clone(),
    };
    verify_relations_field(&out, sys, fld)?;
    Ok(out)
}

/// Basis of `Hom_{H(spot)}(M, N)`: matrices F with `F A^M_s = A^N_s F` for
/// every generator.
pub fn hom_space(
    fld: &ResidueField,
    m: &FieldModule,
    n: &FieldModule,
) -> Result<Vec<Mat>, ModuleError> {
    if m.side != n.side {
        return Err(ModuleError::SideMismatch);
    }
    let (dm, dn) = (m.rank, n.rank);
    // Unknowns F[i][j], i < dn, j < dm, flattened as i * dm + j.
    let unknowns = dm * dn;
    let mut system: Mat = vec![];
    for s in 0..m.action.len() {
        let am = &m.action[s];
        let an = &n.action[s];
        // (F am - an F)[i][j] = sum_k F[i][k] am[k][j] - sum_k an[i][k] F[k][j]
        for i in 0..dn {
            for j in 0..dm {
                let mut row = vec![fld.zero(); unknowns];
                for k in 0..dm {
                    row[i * dm + k] = fld.add(&row[i * dm + k], &am[k][j]);
                }
                for k in 0..dn {
                    let v = fld.neg(&an[i][k]);
                    row[k * dm + j] = fld.add(&row[k * dm + j], &v);
                }
                system.push(row);
            }
        }
    }
    let ker = linalg::kernel(fld, &system);
    Ok(ker
        .into_iter()
        .map(|flat| {
            (0..dn)
                .map(|i| flat[i * dm..(i + 1) * dm].to_vec())
                .collect()
        })
        .collect())
}

pub fn hom_dim(fld: &ResidueField, m: &FieldModule, n: &FieldModule) -> Result<usize, ModuleError> {
    Ok(hom_space(fld, m, n)?.len())
}

// ---------------------------------------------------------------------------
// Module file format
// ---------------------------------------------------------------------------

/// Serializes a lattice module to the textual interchange format:
/// header, basis names, then one matrix block per generator with one
/// semicolon-separated row per line.
pub fn module_to_string(m: &LatticeModule) -> String {
    let mut out = String::new();
    out.push_str("module v1\n");
    out.push_str(&format!(
        "side {}\n",
        if m.side == Side::Left { "left" } else { "right" }
    ));
    out.push_str(&format!("rank {}\n", m.rank));
    out.push_str(&format!("basis {}\n", m.basis_names.join(" ; ")));
    for (s, a) in m.action.iter().enumerate() {
        out.push_str(&format!("gen {}\n", s + 1));
        for row in a {
            let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
            out.push_str(&format!("{}\n", cells.join(" ; ")));
        }
    }
    out
}

pub fn module_from_string(s: &str, name: &str) -> Result<LatticeModule, ModuleError> {
    let mut lines = s.lines().peekable();
    let head = lines.next().ok_or_else(|| ModuleError::Parse("empty".into()))?;
    if head.trim() != "module v1" {
        return Err(ModuleError::Parse(format!("bad header `{head}`")));
    }
    let side_line = lines.next().ok_or_else(|| ModuleError::Parse("missing side".into()))?;
    let side = match side_line.trim() {
        "side left" => Side::Left,
        "side right" => Side::Right,
        other => return Err(ModuleError::Parse(format!("bad side `{other}`"))),
    };
    let rank_line = lines.next().ok_or_else(|| ModuleError::Parse("missing rank".into()))?;
    let rank: usize = rank_line
        .strip_prefix("rank ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| ModuleError::Parse(format!("bad rank `{rank_line}`")))?;
    let basis_line = lines.next().ok_or_else(|| ModuleError::Parse("missing basis".into()))?;
    let basis_names: Vec<String> = basis_line
        .strip_prefix("basis ")
        .ok_or_else(|| ModuleError::Parse("bad basis line".into()))?
        .split(" ; ")
        .map(|x| x.trim().to_string())
        .collect();
    if basis_names.len() != rank {
        return Err(ModuleError::Parse("basis size != rank".into()));
    }
    let mut action = vec![];
    while let Some(line) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        let expect = format!("gen {}", action.len() + 1);
        if line.trim() != expect {
            return Err(ModuleError::Parse(format!(
                "expected `{expect}`, found `{line}`"
            )));
        }
        let mut mat = vec![];
        for _ in 0..rank {
            let row_line = lines
                .next()
                .ok_or_else(|| ModuleError::Parse("truncated matrix".into()))?;
            let row: Result<Vec<IntLaurent>, _> = row_line
                .split(" ; ")
                .map(|cell| {
                    parse_laurent(cell.trim())
                        .map_err(|e| ModuleError::Parse(format!("bad entry `{cell}`: {e}")))
                })
                .collect();
            let row = row?;
            if row.len() != rank {
                return Err(ModuleError::Parse("row length != rank".into()));
            }
            mat.push(row);
        }
        action.push(mat);
    }
    Ok(LatticeModule {
        side,
        rank,
        basis_names,
        action,
        provenance: Provenance::User(name.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::compute_cells;
    use crate::coxeter::CoxeterSystem;
    use crate::spots::{parse_spot, K};

    fn setup(label: &str) -> (Hecke, KLData, CellDecomposition) {
        let h = Hecke::new(CoxeterSystem::from_type(label).unwrap()).unwrap();
        let kl = h.kl_basis();
        let cells = compute_cells(&h, &kl);
        (h, kl, cells)
    }

    fn l(s: &str) -> IntLaurent {
        parse_laurent(s).unwrap()
    }

    #[test]
    fn a1_cell_modules() {
        let (h, kl, cells) = setup("A1");
        // {e}-cell: T_s acts by -1; {s}-cell: T_s acts by t^2.
        let se = cell_module(&h, &kl, &cells, cells.left_of[0]);
        assert_eq!(se.rank, 1);
        assert_eq!(se.action[0][0][0], l("-1"));
        let ss = cell_module(&h, &kl, &cells, cells.left_of[1]);
        assert_eq!(ss.rank, 1);
        assert_eq!(ss.action[0][0][0], l("t^2"));
        verify_relations(&se, &h.sys).unwrap();
        verify_relations(&ss, &h.sys).unwrap();
        // dual of the {s}-cell module: still t^2 on a rank-1 lattice
        let d = dual_cell_module(&ss);
        assert_eq!(d.side, Side::Right);
        assert_eq!(d.action[0][0][0], l("t^2"));
    }

    #[test]
    fn cell_module_ranks_partition_the_group() {
        for label in ["A2", "B2", "G2", "A3"] {
            let (h, kl, cells) = setup(label);
            let total: usize = (0..cells.left_cells.len())
                .map(|i| cell_module(&h, &kl, &cells, i).rank)
                .sum();
            assert_eq!(total, h.order(), "{label}");
            let total2: usize = (0..cells.two_sided_cells.len())
                .map(|i| two_sided_cell_module(&h, &kl, &cells, i).rank)
                .sum();
            assert_eq!(total2, h.order(), "{label}");
        }
    }

    #[test]
    fn all_constructed_modules_satisfy_relations() {
        for label in ["A2", "B2"] {
            let (h, kl, cells) = setup(label);
            for i in 0..cells.left_cells.len() {
                let m = cell_module(&h, &kl, &cells, i);
                verify_relations(&m, &h.sys).unwrap();
                verify_relations(&dual_cell_module(&m), &h.sys).unwrap();
            }
            for i in 0..cells.two_sided_cells.len() {
                verify_relations(&two_sided_cell_module(&h, &kl, &cells, i), &h.sys).unwrap();
            }
            let subsets: Vec<Vec<Gen>> = vec![vec![], vec![0], vec![1], vec![0, 1]];
            for lam in subsets {
                verify_relations(&q_permutation(&h, &lam), &h.sys).unwrap();
            }
        }
    }

    #[test]
    fn q_permutation_shapes() {
        let (h, _, _) = setup("A2");
        assert_eq!(q_permutation(&h, &[]).rank, 6); // right regular module
        assert_eq!(q_permutation(&h, &[0]).rank, 3);
        assert_eq!(q_permutation(&h, &[0, 1]).rank, 1);
        // For s in lam, x_lam T_s = t^{2 c_s} x_lam.
        let m = q_permutation(&h, &[0]);
        assert_eq!(m.action[0][0][0], l("t^2"));
    }

    #[test]
    fn two_sided_module_is_block_sum_of_its_left_cell_modules() {
        for label in ["A2", "B2"] {
            let (h, kl, cells) = setup(label);
            for ti in 0..cells.two_sided_cells.len() {
                let big = two_sided_cell_module(&h, &kl, &cells, ti);
                let members = &cells.two_sided_cells[ti];
                // the action must never mix distinct left cells
                for a in &big.action {
                    for (i, &x) in members.iter().enumerate() {
                        for (j, &y) in members.iter().enumerate() {
                            if cells.left_of[x] != cells.left_of[y] {
                                assert!(
                                    a[i][j].is_zero(),
                                    "{label}: left cells mix inside a two-sided module"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn specialization_and_relation_recheck() {
        let (h, _, _) = setup("A1");
        let reg = q_permutation(&h, &[]);
        let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
        let fm = specialize_module(&reg, &h.sys, &fld).unwrap();
        // (T_s + 1)^2 = 0 at t^2 = 1 in characteristic 2.
        let a = &fm.action[0];
        let id = linalg::identity(&fld, 2);
        let ap1: Mat = a
            .iter()
            .zip(&id)
            .map(|(r, ri)| r.iter().zip(ri).map(|(x, y)| fld.add(x, y)).collect())
            .collect();
        let sq = linalg::mat_mul(&fld, &ap1, &ap1);
        assert!(sq.iter().all(|r| r.iter().all(|x| fld.is_zero(x))));
        // Cell module at the phi_4 spot: t^2 = -1.
        let kl = h.kl_basis();
        let cells = compute_cells(&h, &kl);
        let ss = cell_module(&h, &kl, &cells, cells.left_of[1]);
        let fld4 = ResidueField::new(parse_spot("phi=4").unwrap()).unwrap();
        let f4 = specialize_module(&ss, &h.sys, &fld4).unwrap();
        assert_eq!(f4.action[0][0][0], fld4.from_int(-1));
    }

    #[test]
    fn hom_dimensions_match_double_coset_counts() {
        let fld = ResidueField::new(PrimeSpot::Generic).unwrap();
        for label in ["A1", "A2", "B2"] {
            let (h, _, _) = setup(label);
            let mut subsets: Vec<Vec<Gen>> = vec![vec![]];
            for s in h.sys.gens() {
                subsets.push(vec![s]);
            }
            subsets.push(h.sys.gens().collect());
            for lam in &subsets {
                for mu in &subsets {
                    let ml = specialize_module(&q_permutation(&h, lam), &h.sys, &fld).unwrap();
                    let mr = specialize_module(&q_permutation(&h, mu), &h.sys, &fld).unwrap();
                    let d = hom_dim(&fld, &ml, &mr).unwrap();
                    let dc = h.sys.min_double_coset_reps(lam, mu).unwrap().len();
                    assert_eq!(d, dc, "{label} lam={lam:?} mu={mu:?}");
                }
            }
        }
    }

    #[test]
    fn dual_cell_hom_into_regular_recovers_cell_rank() {
        // dim Hom(S_w(spot), H(spot)) = rank S(w) at every tested spot.
        for spot in ["generic", "p=3", "phi=4", "max=2,t+1", "max=3,t^2+1"] {
            let fld = ResidueField::new(parse_spot(spot).unwrap()).unwrap();
            let (h, kl, cells) = setup("A2");
            let reg = q_permutation(&h, &[]);
            let regf = specialize_module(&reg, &h.sys, &fld).unwrap();
            for i in 0..cells.left_cells.len() {
                let cm = cell_module(&h, &kl, &cells, i);
                let dual = dual_cell_module(&cm);
                let dualf = specialize_module(&dual, &h.sys, &fld).unwrap();
                let d = hom_dim(&fld, &dualf, &regf).unwrap();
                assert_eq!(d, cm.rank, "spot {spot}, cell {i}");
            }
        }
    }

    #[test]
    fn module_file_round_trip() {
        let (h, kl, cells) = setup("B2");
        let m = cell_module(&h, &kl, &cells, 1);
        let s = module_to_string(&m);
        let back = module_from_string(&s, "roundtrip").unwrap();
        assert_eq!(back.side, m.side);
        assert_eq!(back.rank, m.rank);
        assert_eq!(back.action, m.action);
        assert_eq!(back.basis_names, m.basis_names);
        verify_relations(&back, &h.sys).unwrap();
        assert!(module_from_string("garbage", "x").is_err());
    }

    #[test]
    fn identity_always_in_end_space() {
        let fld = ResidueField::new(PrimeSpot::Generic).unwrap();
        let (h, _, _) = setup("A1");
        let reg = specialize_module(&q_permutation(&h, &[]), &h.sys, &fld).unwrap();
        let end = hom_space(&fld, &reg, &reg).unwrap();
        // H_K of A1 is commutative of dimension 2: End contains the identity
        // and has dimension 2.
        assert_eq!(end.len(), 2);
        let id = linalg::identity(&fld, 2);
        // identity lies in the span
        let flat: Vec<Vec<K>> = end
            .iter()
            .map(|m| m.iter().flatten().cloned().collect())
            .collect();
        let idf: Vec<K> = id.iter().flatten().cloned().collect();
        assert!(linalg::in_row_space(&fld, &flat, &idf));
    }
}
