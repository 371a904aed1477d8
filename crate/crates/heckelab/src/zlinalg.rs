//! Linear algebra over the Laurent ring Z[t, t^-1].
//!
//! The ring is not a field, so a full echelon theory is unavailable; what the
//! rest of the crate needs is much weaker: echelonization when unit pivots
//! happen to exist (which they do for all the lattices arising here, whose
//! transition matrices are unitriangular up to monomial scaling), exact
//! membership tests against such bases, and fraction-free determinants.

use crate::laurent::IntLaurent;

pub type ZMat = Vec<Vec<IntLaurent>>;

/// Outcome of a computation that can be refused rather than answered wrongly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZOutcome<T> {
    Done(T),
    /// No unit pivot was available; the basis is not echelonizable by this
    /// method and the caller must fall back to a field computation.
    Unknown,
}

/// Echelonizes the rows over Z[t, t^-1] using only unit pivots
/// (monomials `± t^k`). Rows are reduced fully above and below each pivot,
/// so the result is a canonical lattice basis whenever it succeeds.
/// Zero rows are dropped. Returns `Unknown` if at some stage no remaining
/// row has a unit coefficient in any unused column.
pub fn unit_echelon(rows: &ZMat) -> ZOutcome<ZMat> {
    match unit_echelon_pivots(rows) {
        ZOutcome::Done((work, _)) => {
            // Sort rows by leading column for determinism (legacy order).
            let cols = work.first().map_or(0, |r| r.len());
            let mut keyed: Vec<(usize, Vec<IntLaurent>)> = work
                .into_iter()
                .map(|r| {
                    let pc = (0..cols)
                        .find(|&c| !r[c].is_zero())
                        .expect("nonzero row");
                    (pc, r)
                })
                .collect();
            keyed.sort_by_key(|(pc, _)| *pc);
            ZOutcome::Done(keyed.into_iter().map(|(_, r)| r).collect())
        }
        ZOutcome::Unknown => ZOutcome::Unknown,
    }
}

/// Like `unit_echelon`, but also returns the pivot column of each row: the
/// column where that row has exactly 1 and every other row has 0. Rows are
/// sorted by pivot column.
pub fn unit_echelon_pivots(rows: &ZMat) -> ZOutcome<(ZMat, Vec<usize>)> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut work: ZMat = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut used_cols: Vec<usize> = vec![];
    let mut done_rows = 0usize;
    while done_rows < work.len() {
        // Find a unit pivot among unprocessed rows and unused columns.
        let mut found = None;
        'search: for i in done_rows..work.len() {
            for c in 0..cols {
                if used_cols.contains(&c) {
                    continue;
                }
                if work[i][c].is_unit() {
                    found = Some((i, c));
                    break 'search;
                }
            }
        }
        let Some((i, c)) = found else {
            return ZOutcome::Unknown;
        };
        work.swap(done_rows, i);
        // Normalize the pivot to exactly 1.
        let pivot = work[done_rows][c].clone();
        let inv = unit_inverse(&pivot);
        for x in work[done_rows].iter_mut() {
            *x = x.mul(&inv);
        }
        // Eliminate the column from every other row.
        for r in 0..work.len() {
            if r == done_rows || work[r][c].is_zero() {
                continue;
            }
            let f = work[r][c].clone();
            for j in 0..cols {
                let sub = f.mul(&work[done_rows][j]);
                work[r][j] = work[r][j].sub(&sub);
            }
        }
        used_cols.push(c);
        done_rows += 1;
        // Drop unprocessed rows that became zero (pivot rows never do).
        let mut i = done_rows;
        while i < work.len() {
            if work[i].iter().all(|x| x.is_zero()) {
                work.remove(i);
            } else {
                i += 1;
            }
        }
    }
    // Sort rows jointly by pivot column for determinism.
    let mut keyed: Vec<(usize, Vec<IntLaurent>)> =
        used_cols.into_iter().zip(work).collect();
    keyed.sort_by_key(|(pc, _)| *pc);
    let pivots: Vec<usize> = keyed.iter().map(|(pc, _)| *pc).collect();
    ZOutcome::Done((keyed.into_iter().map(|(_, r)| r).collect(), pivots))
}

fn unit_inverse(u: &IntLaurent) -> IntLaurent {
    // units are c * t^k with c = ±1
    let terms: Vec<_> = u.terms().collect();
    assert_eq!(terms.len(), 1, "not a unit");
    let (e, c) = terms[0];
    let mut inv = IntLaurent::t_pow(-e);
    if c.sign() == num_bigint::Sign::Minus {
        inv = inv.neg();
    }
    inv
}

/// Expresses `v` in terms of a unit-echelon basis; returns coefficients, or
/// `None` if `v` is not in the Z[t, t^-1]-span.
pub fn coords_in_echelon(basis: &ZMat, v: &[IntLaurent]) -> Option<Vec<IntLaurent>> {
    let cols = v.len();
    let mut rem: Vec<IntLaurent> = v.to_vec();
    let mut coords = vec![IntLaurent::zero(); basis.len()];
    for (bi, row) in basis.iter().enumerate() {
        let pc = (0..cols).find(|&c| !row[c].is_zero())?;
        if rem[pc].is_zero() {
            continue;
        }
        // pivot is exactly 1 after unit_echelon
        let f = rem[pc].clone();
        for j in 0..cols {
            let sub = f.mul(&row[j]);
            rem[j] = rem[j].sub(&sub);
        }
        coords[bi] = f;
    }
    if rem.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

/// Eliminates with unit pivots restricted to the first `left` columns; row
/// operations act over the full width. Processed rows are moved to the front
/// and normalized (pivot exactly 1, pivot column cleared everywhere else).
/// Returns the pivot columns, one per processed row, in processing order.
fn left_pivot_eliminate(block: &mut ZMat, left: usize) -> Vec<usize> {
    let width = block.first().map_or(0, |r| r.len());
    let mut used_cols: Vec<usize> = vec![];
    loop {
        let done = used_cols.len();
        let mut found = None;
        'search: for i in done..block.len() {
            for c in 0..left {
                if used_cols.contains(&c) {
                    continue;
                }
                if block[i][c].is_unit() {
                    found = Some((i, c));
                    break 'search;
                }
            }
        }
        let Some((i, c)) = found else { break };
        block.swap(done, i);
        let inv = unit_inverse(&block[done][c].clone());
        for x in block[done].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..block.len() {
            if r == done || block[r][c].is_zero() {
                continue;
            }
            let f = block[r][c].clone();
            for j in 0..width {
                let sub = f.mul(&block[done][j]);
                block[r][j] = block[r][j].sub(&sub);
            }
        }
        used_cols.push(c);
    }
    used_cols
}

/// Intersection of two lattices given by spanning rows, via unit echelon on
/// the stacked block matrix [a a; b 0] (Zassenhaus trick). Valid over the
/// ring only when unit pivots suffice at every stage; otherwise `Unknown`.
pub fn intersect_lattices(a: &ZMat, b: &ZMat) -> ZOutcome<ZMat> {
    let cols = a.first().or_else(|| b.first()).map_or(0, |r| r.len());
    if a.is_empty() || b.is_empty() {
        return ZOutcome::Done(vec![]);
    }
    let mut block: ZMat = vec![];
    for row in a {
        let mut r = row.clone();
        r.extend(row.iter().cloned());
        block.push(r);
    }
    for row in b {
        let mut r = row.clone();
        r.extend(std::iter::repeat(IntLaurent::zero()).take(cols));
        block.push(r);
    }
    // Rows whose left half survives nonzero but without a unit pivot cannot
    // be certified.
    let done_rows = left_pivot_eliminate(&mut block, cols).len();
    let mut out = vec![];
    for row in &block[done_rows..] {
        if row[..cols].iter().any(|x| !x.is_zero()) {
            return ZOutcome::Unknown;
        }
        if row[cols..].iter().any(|x| !x.is_zero()) {
            out.push(row[cols..].to_vec());
        }
    }
    unit_echelon(&out)
}

/// Expresses each row of `targets` as an integral combination of the rows of
/// `basis`, by unit-echelonizing `basis` with a tracked transform. Returns
/// one coefficient row per target, `Done(None)` when some target is outside
/// the span, and `Unknown` when unit pivots do not suffice to reduce `basis`.
pub fn lattice_coords(basis: &ZMat, targets: &ZMat) -> ZOutcome<Option<ZMat>> {
    let cols = basis.first().map_or(0, |r| r.len());
    let n = basis.len();
    if n == 0 {
        let all_zero = targets.iter().all(|t| t.iter().all(|x| x.is_zero()));
        return ZOutcome::Done(all_zero.then(|| vec![vec![]; targets.len()]));
    }
    let mut block: ZMat = basis
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| {
                if i == j {
                    IntLaurent::one()
                } else {
                    IntLaurent::zero()
                }
            }));
            row
        })
        .collect();
    let pivots = left_pivot_eliminate(&mut block, cols);
    // Leftover rows with a zero left half are relations among the basis rows
    // and change nothing; a nonzero left half means the span is uncertified.
    for row in &block[pivots.len()..] {
        if row[..cols].iter().any(|x| !x.is_zero()) {
            return ZOutcome::Unknown;
        }
    }
    let mut out = vec![];
    for t in targets {
        let mut rem = t.clone();
        let mut combo = vec![IntLaurent::zero(); n];
        for (r, &c) in pivots.iter().enumerate() {
            if rem[c].is_zero() {
                continue;
            }
            let f = rem[c].clone();
            for j in 0..cols {
                let sub = f.mul(&block[r][j]);
                rem[j] = rem[j].sub(&sub);
            }
            for j in 0..n {
                let add = f.mul(&block[r][cols + j]);
                combo[j] = combo[j].add(&add);
            }
        }
        if rem.iter().any(|x| !x.is_zero()) {
            return ZOutcome::Done(None);
        }
        out.push(combo);
    }
    ZOutcome::Done(Some(out))
}

/// Divides each constraint row by the gcd of its entries (including the
/// integer content and the common power of t) and drops zero rows. Scaling a
/// constraint by a nonzero ring element does not change its kernel over an
/// integral domain, and removing the content exposes unit pivots.
fn normalize_constraints(rows: &ZMat) -> ZMat {
    let mut out = vec![];
    for row in rows {
        if row.iter().all(|x| x.is_zero()) {
            continue;
        }
        let shift = row.iter().filter_map(|x| x.min_exp()).min().unwrap();
        let mut g = IntLaurent::zero();
        for x in row {
            g = g.gcd(x);
        }
        out.push(
            row.iter()
                .map(|x| {
                    x.shift(-shift)
                        .div_exact(&g)
                        .expect("row gcd divides every entry")
                })
                .collect(),
        );
    }
    out
}

/// Rank of the constraint matrix after evaluating at the integer `t = x`,
/// computed exactly over the rationals. Evaluation can only drop rank, so a
/// full-column-rank result certifies that the integral kernel is zero.
fn eval_rank(rows: &ZMat, x: i64) -> usize {
    use num_rational::BigRational;
    use num_traits::Zero;
    let mut work: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| {
                    let (num, den) = e.eval_int(x);
                    BigRational::new(num, den)
                })
                .collect()
        })
        .collect();
    let cols = work.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..work.len()).find(|&i| !work[i][c].is_zero()) else {
            continue;
        };
        work.swap(rank, p);
        let inv = work[rank][c].recip();
        for e in work[rank].iter_mut() {
            *e *= &inv;
        }
        for i in 0..work.len() {
            if i == rank || work[i][c].is_zero() {
                continue;
            }
            let f = work[i][c].clone();
            for j in 0..cols {
                let sub = &f * &work[rank][j];
                work[i][j] -= sub;
            }
        }
        rank += 1;
    }
    rank
}

/// Basis of the integral kernel `{x : M x = 0}` over Z[t, t^-1]. The kernel
/// is peeled off constraint by constraint: unit pivots give invertible row
/// operations, so each round's free-column construction parametrizes the
/// exact integral solutions of the processed constraints; the remaining
/// constraints are rewritten in the new parameters and the round repeats.
/// Constraint rows are first divided by their scalar content (which cannot
/// change the kernel) to expose more unit pivots. If no unit pivot is left,
/// a full-column-rank certificate at an integer point proves the residual
/// kernel is zero; otherwise the outcome is `Unknown`.
pub fn z_kernel(m: &ZMat) -> ZOutcome<ZMat> {
    let cols = m.first().map_or(0, |r| r.len());
    // current parametrization: candidate kernel = row span of `basis`
    let mut basis: ZMat = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|k| {
                    if i == k {
                        IntLaurent::one()
                    } else {
                        IntLaurent::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut cons = normalize_constraints(m);
    loop {
        if basis.is_empty() {
            return ZOutcome::Done(vec![]);
        }
        if cons.is_empty() {
            return unit_echelon(&basis);
        }
        let nvars = basis.len();
        let pivots = left_pivot_eliminate(&mut cons, nvars);
        if pivots.is_empty() {
            // no unit pivot anywhere: the only case still decidable is a
            // provably zero residual kernel
            if [2i64, 3, 5, 7, 11]
                .iter()
                .any(|&x| eval_rank(&cons, x) == nvars)
            {
                return ZOutcome::Done(vec![]);
            }
            return ZOutcome::Unknown;
        }
        // free-column parametrization of the processed constraints (pivot
        // entries are exactly 1 with their columns fully cleared)
        let mut param: ZMat = vec![];
        for free in 0..nvars {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![IntLaurent::zero(); nvars];
            v[free] = IntLaurent::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = cons[r][free].neg();
            }
            param.push(v);
        }
        // rewrite the unprocessed constraints in the new parameters
        let leftover: ZMat = cons[pivots.len()..]
            .iter()
            .map(|row| {
                param
                    .iter()
                    .map(|p| {
                        let mut acc = IntLaurent::zero();
                        for (a, b) in row.iter().zip(p) {
                            acc = acc.add(&a.mul(b));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        // compose the parametrization with the current basis
        basis = param
            .iter()
            .map(|p| {
                let mut v = vec![IntLaurent::zero(); cols];
                for (f, brow) in p.iter().zip(&basis) {
                    if f.is_zero() {
                        continue;
                    }
                    for (acc, b) in v.iter_mut().zip(brow) {
                        *acc = acc.add(&f.mul(b));
                    }
                }
                v
            })
            .collect();
        cons = normalize_constraints(&leftover);
    }
}

/// Determinant over Z[t, t^-1] by fraction-free (Bareiss) elimination on the
/// polynomial part, reassembling the monomial prefactor at the end.
pub fn determinant(m: &ZMat) -> IntLaurent {
    let n = m.len();
    if n == 0 {
        return IntLaurent::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "square matrix required");
    let mut a: ZMat = m.to_vec();
    let mut sign = 1i64;
    let mut prev = IntLaurent::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(sw) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return IntLaurent::zero();
            };
            a.swap(k, sw);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
        }
        prev = a[k][k].clone();
        for j in 0..=k {
            a[k + 1][j] = IntLaurent::zero();
        }
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        det.neg()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_laurent;

    fn l(s: &str) -> IntLaurent {
        parse_laurent(s).unwrap()
    }

    #[test]
    fn kernel_vectors_annihilate() {
        // Constraints: x1 + t*x2 = 0, x3 arbitrary -> kernel rank 2.
        let m = vec![
            vec![l("1"), l("t"), l("0")],
            vec![l("t"), l("t^2"), l("0")],
        ];
        let ZOutcome::Done(ker) = z_kernel(&m) else {
            panic!("expected success")
        };
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for row in &m {
                let mut s = IntLaurent::zero();
                for (a, b) in row.iter().zip(v) {
                    s = s.add(&a.mul(b));
                }
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn echelon_with_monomial_pivots() {
        let rows = vec![
            vec![l("t^-1"), l("t"), l("0")],
            vec![l("1"), l("t^2"), l("t")],
            vec![l("0"), l("0"), l("-t^3")],
        ];
        let ZOutcome::Done(e) = unit_echelon(&rows) else {
            panic!("expected success")
        };
        // Row 3 = t^2 * (row 2 - t * row 1), so the lattice has rank 2:
        // basis {(1, t^2, 0), (0, 0, 1)} after normalization.
        assert_eq!(e.len(), 2);
        assert_eq!(e[0], vec![l("1"), l("t^2"), l("0")]);
        assert_eq!(e[1], vec![l("0"), l("0"), l("1")]);
        // Membership and coordinates.
        let v = vec![l("t"), l("t^3"), l("t^2")];
        let coords = coords_in_echelon(&e, &v).unwrap();
        assert_eq!(coords, vec![l("t"), l("t^2")]);
        // Membership refusal: (t^2+1, ...) outside a sub-lattice.
        let sub = vec![e[0].clone()];
        assert!(coords_in_echelon(&sub, &vec![l("0"), l("1"), l("0")]).is_none());
        // A non-unit-pivot lattice makes echelon refuse rather than guess.
        let small = vec![vec![l("2"), l("0")]];
        assert_eq!(unit_echelon(&small), ZOutcome::Unknown);
    }

    #[test]
    fn refusal_when_no_unit_pivot() {
        let rows = vec![vec![l("1"), l("t")], vec![l("0"), l("t^2+1")]];
        // Row 1 has a unit pivot, but after using it row 2 = (0, t^2+1)
        // has none.
        assert_eq!(unit_echelon(&rows), ZOutcome::Unknown);
    }

    #[test]
    fn lattice_intersection() {
        // L1 = span{(1,0),(0,t)}; L2 = span{(0,1)}. Intersection = span{(0,t)}.
        let a = vec![vec![l("1"), l("0")], vec![l("0"), l("t")]];
        let b = vec![vec![l("0"), l("1")]];
        match intersect_lattices(&a, &b) {
            ZOutcome::Done(i) => {
                assert_eq!(i.len(), 1);
                assert!(i[0][0].is_zero());
                // generator is a unit multiple of t
                assert_eq!(i[0][1].terms().count(), 1);
            }
            ZOutcome::Unknown => panic!("expected an answer"),
        }
    }

    #[test]
    fn bareiss_determinant() {
        let m = vec![
            vec![l("t"), l("1"), l("0")],
            vec![l("1"), l("t^-1"), l("1")],
            vec![l("0"), l("1"), l("t-1")],
        ];
        // det = t*(t^-1*(t-1) - 1) - 1*(t-1) = (t-1) - t - (t-1) = -t
        assert_eq!(determinant(&m), l("-t"));
        let singular = vec![vec![l("t"), l("t^2")], vec![l("1"), l("t")]];
        assert_eq!(determinant(&singular), l("0"));
    }
}
