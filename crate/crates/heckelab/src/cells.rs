//! Cells of the canonical basis: the left and two-sided preorders, their
//! equivalence classes, the opposite preorder, height functions, and the
//! refined preorder on left cells.
//!
//! Orientation convention (recorded in every report): `x <=_L y` holds when
//! `C_x` appears in some product `C_s * C_y`, transitively closed. Under this
//! convention the cell of the longest element is MINIMAL and the cell of the
//! identity is MAXIMAL for `<=_LR`. Heights are computed on the opposite
//! preorder `<=_LR^op`, so the identity cell has height 0 and the longest
//! element's cell has the maximal height.

use crate::hecke::{Hecke, KLData};
use std::collections::BTreeSet;

pub const ORIENTATION_NOTE: &str =
    "<=_LR oriented with the longest-element cell minimal; heights taken on <=_LR^op (identity cell at height 0)";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CellError {
    #[error("strict part of the preorder has a cycle outside equivalence classes")]
    CycleBeyondEquivalence,
    #[error("supplied height function is incompatible with the preorder")]
    IncompatibleHeight,
}

/// The full cell decomposition of a finite Coxeter group, over one KL table.
#[derive(Debug, Clone)]
pub struct CellDecomposition {
    /// Left cells, each a sorted list of element indices; cells sorted by
    /// their minimal element index.
    pub left_cells: Vec<Vec<usize>>,
    /// Two-sided cells, same conventions.
    pub two_sided_cells: Vec<Vec<usize>>,
    /// Element index -> left cell index.
    pub left_of: Vec<usize>,
    /// Element index -> two-sided cell index.
    pub two_of: Vec<usize>,
    /// `leq_l[x][y]` = (x <=_L y) on elements.
    pub leq_l: Vec<Vec<bool>>,
    /// `leq_lr_two[a][b]` = (cell a <=_LR cell b) on two-sided cells.
    pub leq_lr_two: Vec<Vec<bool>>,
}

impl CellDecomposition {
    /// Left cell index of every element of a two-sided cell must map into it.
    pub fn left_cell_two_sided(&self, left: usize) -> usize {
        self.two_of[self.left_cells[left][0]]
    }
}

/// Edges `y -> x` meaning `x` appears in `C_s * C_y` (left moves) or
/// `C_y * C_s` (right moves) for some generator `s`.
fn cell_edges(h: &Hecke, kl: &KLData, right: bool) -> Vec<BTreeSet<usize>> {
    let n = h.order();
    let mut edges: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for y in 0..n {
        let cy = kl.c_basis(h, y);
        for s in h.sys.gens() {
            let prod = if right {
                let cs = kl.c_basis(h, h.idx(&h.sys.gen_elt(s)));
                h.mult(&cy, &cs)
            } else {
                let cs = kl.c_basis(h, h.idx(&h.sys.gen_elt(s)));
                h.mult(&cs, &cy)
            };
            for (&x, _) in &kl.express_in_c(h, &prod) {
                if x != y {
                    edges[y].insert(x);
                }
            }
        }
    }
    edges
}

/// Reachability closure of a digraph given by adjacency sets, with loops.
fn reachability(edges: &[BTreeSet<usize>]) -> Vec<Vec<bool>> {
    let n = edges.len();
    let mut reach = vec![vec![false; n]; n];
    for start in 0..n {
        let mut stack = vec![start];
        reach[start][start] = true;
        while let Some(v) = stack.pop() {
            for &w in &edges[v] {
                if !reach[start][w] {
                    reach[start][w] = true;
                    stack.push(w);
                }
            }
        }
    }
    reach
}

/// Partitions {0..n} into equivalence classes of mutual reachability, sorted
/// by minimal member; returns (classes, member -> class index).
fn classes_from_reach(reach: &[Vec<bool>]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let n = reach.len();
    let mut assigned = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = vec![];
    for v in 0..n {
        if assigned[v] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (v..n)
            .filter(|&w| reach[v][w] && reach[w][v])
            .collect();
        let ci = classes.len();
        for &m in &members {
            assigned[m] = ci;
        }
        classes.push(members);
    }
    (classes, assigned)
}

/// Computes the full cell decomposition from a KL table.
pub fn compute_cells(h: &Hecke, kl: &KLData) -> CellDecomposition {
    let left_edges = cell_edges(h, kl, false);
    let right_edges = cell_edges(h, kl, true);
    let n = h.order();

    // x <=_L y iff y reaches x through left edges.
    let left_reach = reachability(&left_edges);
    let mut leq_l = vec![vec![false; n]; n];
    for y in 0..n {
        for x in 0..n {
            leq_l[x][y] = left_reach[y][x];
        }
    }
    let (left_cells, left_of) = classes_from_reach(&left_reach);

    let mut both: Vec<BTreeSet<usize>> = left_edges;
    for (y, es) in right_edges.into_iter().enumerate() {
        both[y].extend(es);
    }
    let two_reach = reachability(&both);
    let (two_sided_cells, two_of) = classes_from_reach(&two_reach);

    // Induced preorder on two-sided cells: a <=_LR b iff some (equivalently
    // every) member of b reaches some member of a.
    let k = two_sided_cells.len();
    let mut leq_lr_two = vec![vec![false; k]; k];
    for (a, ca) in two_sided_cells.iter().enumerate() {
        for (b, cb) in two_sided_cells.iter().enumerate() {
            leq_lr_two[a][b] = two_reach[cb[0]][ca[0]];
        }
    }
    // sanity: each left cell sits inside one two-sided cell
    for lc in &left_cells {
        debug_assert!(lc.iter().all(|&x| two_of[x] == two_of[lc[0]]));
    }
    CellDecomposition {
        left_cells,
        two_sided_cells,
        left_of,
        two_of,
        leq_l,
        leq_lr_two,
    }
}

/// The opposite preorder: `op[a][b] = leq[b][a]`.
pub fn op_preorder(leq: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = leq.len();
    (0..n).map(|a| (0..n).map(|b| leq[b][a]).collect()).collect()
}

/// The standard height on a finite quasi-poset given by a preorder matrix:
/// the maximal length of a strictly descending chain starting at each class.
/// Minimal classes get height 0; `a < b` (strictly) forces `ht(a) < ht(b)`.
pub fn standard_height(leq: &[Vec<bool>]) -> Result<Vec<usize>, CellError> {
    let n = leq.len();
    let strictly_below =
        |a: usize, b: usize| leq[a][b] && !leq[b][a]; // a < b
    // Longest-path DP over the strict relation; cycle-check via visit states.
    let mut ht = vec![None::<usize>; n];
    fn dfs(
        v: usize,
        n: usize,
        strictly_below: &dyn Fn(usize, usize) -> bool,
        ht: &mut Vec<Option<usize>>,
        active: &mut Vec<bool>,
    ) -> Result<usize, CellError> {
        if let Some(x) = ht[v] {
            return Ok(x);
        }
        if active[v] {
            return Err(CellError::CycleBeyondEquivalence);
        }
        active[v] = true;
        let mut best = 0usize;
        for u in 0..n {
            if strictly_below(u, v) {
                best = best.max(1 + dfs(u, n, strictly_below, ht, active)?);
            }
        }
        active[v] = false;
        ht[v] = Some(best);
        Ok(best)
    }
    let mut active = vec![false; n];
    for v in 0..n {
        dfs(v, n, &strictly_below, &mut ht, &mut active)?;
    }
    Ok(ht.into_iter().map(|x| x.unwrap()).collect())
}

/// Validates that a (possibly user-supplied) height is compatible with a
/// preorder: strict relation implies strict height, equivalence implies
/// equal height.
pub fn validate_height(leq: &[Vec<bool>], ht: &[usize]) -> Result<(), CellError> {
    let n = leq.len();
    for a in 0..n {
        for b in 0..n {
            if leq[a][b] && leq[b][a] && ht[a] != ht[b] {
                return Err(CellError::IncompatibleHeight);
            }
            if leq[a][b] && !leq[b][a] && ht[a] >= ht[b] {
                return Err(CellError::IncompatibleHeight);
            }
        }
    }
    Ok(())
}

/// The refined preorder on left cells: `w <= w'` iff `ht(w) < ht(w')`, or
/// the heights agree and the cells lie in the same two-sided cell. Heights
/// are heights of the ambient two-sided cells (on whichever orientation the
/// caller fixed); compatibility is validated first.
pub fn refined_preorder(
    cells: &CellDecomposition,
    two_cell_ht: &[usize],
    op_leq_lr_two: &[Vec<bool>],
) -> Result<Vec<Vec<bool>>, CellError> {
    validate_height(op_leq_lr_two, two_cell_ht)?;
    let m = cells.left_cells.len();
    let mut out = vec![vec![false; m]; m];
    for a in 0..m {
        for b in 0..m {
            let (ta, tb) = (
                cells.left_cell_two_sided(a),
                cells.left_cell_two_sided(b),
            );
            out[a][b] =
                two_cell_ht[ta] < two_cell_ht[tb] || (two_cell_ht[ta] == two_cell_ht[tb] && ta == tb);
        }
    }
    Ok(out)
}
