//! Dense univariate polynomials with coefficients in a residue field,
//! characteristic and minimal polynomials of exact matrices, and certified
//! root finding inside each of the four residue-field types. Root listings
//! are complete when returned; `None` means the search could not certify
//! completeness.

use crate::fppoly::{self, FpPoly};
use crate::intfactor;
use crate::laurent::IntLaurent;
use crate::linalg::Mat;
use crate::qpoly::{self, QPoly};
use crate::spots::{K, PrimeSpot, ResidueField};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending degree; no trailing zeros.
pub type KPoly = Vec<K>;

pub fn knormalize(fld: &ResidueField, mut f: KPoly) -> KPoly {
    while f.last().map(|c| fld.is_zero(c)).unwrap_or(false) {
        f.pop();
    }
    f
}

pub fn kdeg(f: &KPoly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn kadd(fld: &ResidueField, f: &KPoly, g: &KPoly) -> KPoly {
    let n = f.len().max(g.len());
    let z = fld.zero();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(fld.add(f.get(i).unwrap_or(&z), g.get(i).unwrap_or(&z)));
    }
    knormalize(fld, out)
}

pub fn ksub(fld: &ResidueField, f: &KPoly, g: &KPoly) -> KPoly {
    let n = f.len().max(g.len());
    let z = fld.zero();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(fld.sub(f.get(i).unwrap_or(&z), g.get(i).unwrap_or(&z)));
    }
    knormalize(fld, out)
}

pub fn kmul(fld: &ResidueField, f: &KPoly, g: &KPoly) -> KPoly {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![fld.zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if fld.is_zero(a) {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            let p = fld.mul(a, b);
            out[i + j] = fld.add(&out[i + j], &p);
        }
    }
    knormalize(fld, out)
}

pub fn kscale(fld: &ResidueField, f: &KPoly, c: &K) -> KPoly {
    knormalize(fld, f.iter().map(|a| fld.mul(a, c)).collect())
}

pub fn kdivrem(fld: &ResidueField, f: &KPoly, g: &KPoly) -> (KPoly, KPoly) {
    assert!(!g.is_empty(), "division by zero polynomial");
    let mut r = f.clone();
    let dg = g.len() - 1;
    if f.len() < g.len() {
        return (vec![], r);
    }
    let lead_inv = fld.inv(g.last().unwrap()).expect("leading coefficient");
    let mut q = vec![fld.zero(); f.len() - g.len() + 1];
    while r.len() >= g.len() {
        let dr = r.len() - 1;
        let c = fld.mul(r.last().unwrap(), &lead_inv);
        q[dr - dg] = c.clone();
        for (i, b) in g.iter().enumerate() {
            let s = fld.mul(&c, b);
            r[dr - dg + i] = fld.sub(&r[dr - dg + i], &s);
        }
        r = knormalize(fld, r);
        if r.is_empty() {
            break;
        }
    }
    (knormalize(fld, q), r)
}

pub fn kmonic(fld: &ResidueField, f: &KPoly) -> KPoly {
    if f.is_empty() {
        return vec![];
    }
    let inv = fld.inv(f.last().unwrap()).expect("leading coefficient");
    kscale(fld, f, &inv)
}

pub fn kgcd(fld: &ResidueField, f: &KPoly, g: &KPoly) -> KPoly {
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_empty() {
        let (_, r) = kdivrem(fld, &a, &b);
        a = b;
        b = r;
    }
    kmonic(fld, &a)
}

/// Extended gcd: returns (g, s, t) with s·a + t·b = g and g monic.
pub fn kxgcd(fld: &ResidueField, a: &KPoly, b: &KPoly) -> (KPoly, KPoly, KPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (KPoly, KPoly) = (vec![fld.one()], vec![]);
    let (mut t0, mut t1): (KPoly, KPoly) = (vec![], vec![fld.one()]);
    while !r1.is_empty() {
        let (q, r) = kdivrem(fld, &r0, &r1);
        let s = ksub(fld, &s0, &kmul(fld, &q, &s1));
        let t = ksub(fld, &t0, &kmul(fld, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let inv = fld.inv(r0.last().unwrap()).expect("leading coefficient");
    (
        kscale(fld, &r0, &inv),
        kscale(fld, &s0, &inv),
        kscale(fld, &t0, &inv),
    )
}

pub fn kderivative(fld: &ResidueField, f: &KPoly) -> KPoly {
    let mut out = vec![];
    for (i, c) in f.iter().enumerate().skip(1) {
        out.push(fld.mul(c, &fld.from_int(i as i64)));
    }
    knormalize(fld, out)
}

pub fn keval(fld: &ResidueField, f: &KPoly, x: &K) -> K {
    let mut acc = fld.zero();
    for c in f.iter().rev() {
        acc = fld.add(&fld.mul(&acc, x), c);
    }
    acc
}

/// A monic divisor of `f` with the same root set, squarefree whenever the
/// derivative is nonzero. In characteristic p a polynomial in x^p with
/// coefficients that are all p-th powers is reduced one Frobenius level;
/// otherwise `f` is returned unchanged (the root set is still correct, and
/// the downstream root searches verify every candidate by evaluation).
pub fn squarefree_part(fld: &ResidueField, f: &KPoly) -> KPoly {
    let d = kderivative(fld, f);
    if d.is_empty() {
        let p = fld.characteristic() as usize;
        assert!(p > 0, "zero derivative in characteristic zero");
        let mut g: KPoly = vec![];
        for (i, c) in f.iter().enumerate() {
            if i % p == 0 {
                match fld.pth_root(c) {
                    Some(r) => g.push(r),
                    None => return kmonic(fld, f),
                }
            } else if !fld.is_zero(c) {
                return kmonic(fld, f);
            }
        }
        return squarefree_part(fld, &knormalize(fld, g));
    }
    let g = kgcd(fld, f, &d);
    let (q, r) = kdivrem(fld, f, &g);
    assert!(r.is_empty());
    kmonic(fld, &q)
}

/// `base^e mod m`, by repeated squaring.
pub fn kpowmod(fld: &ResidueField, base: &KPoly, e: &num_bigint::BigUint, m: &KPoly) -> KPoly {
    let mut result: KPoly = vec![fld.one()];
    let (_, mut b) = kdivrem(fld, base, m);
    for i in 0..e.bits() {
        if e.bit(i) {
            result = kdivrem(fld, &kmul(fld, &result, &b), m).1;
        }
        if i + 1 < e.bits() {
            b = kdivrem(fld, &kmul(fld, &b, &b), m).1;
        }
    }
    result
}

/// A monic nontrivial factor of `f` over a finite field, or `None` when `f`
/// is irreducible (or constant). The equal-degree stage is randomized but
/// deterministic for a fixed seed; it returns `Err(())` in the vanishingly
/// unlikely event that the bounded number of attempts is exhausted.
pub fn nontrivial_factor_fin(
    fld: &ResidueField,
    f: &KPoly,
    seed: &mut u64,
) -> Result<Option<KPoly>, ()> {
    use num_bigint::BigUint;
    let f = kmonic(fld, f);
    let deg = match kdeg(&f) {
        Some(d) if d >= 2 => d,
        _ => return Ok(None),
    };
    let p = fld.characteristic();
    let e = fld.finite_degree().expect("finite field") as u32;
    let q = BigUint::from(p).pow(e);
    // squarefree stage
    let d1 = kderivative(fld, &f);
    if d1.is_empty() {
        // f = g(x^p) = h(x)^p over a perfect field
        let mut h: KPoly = vec![];
        for (i, c) in f.iter().enumerate() {
            if i % p as usize == 0 {
                h.push(fld.pth_root(c).expect("perfect field"));
            }
        }
        return Ok(Some(knormalize(fld, h)));
    }
    let g = kgcd(fld, &f, &d1);
    if let Some(dg) = kdeg(&g) {
        if dg >= 1 {
            return Ok(Some(g));
        }
    }
    // distinct-degree stage: x^{q^k} - x against f
    let x: KPoly = vec![fld.zero(), fld.one()];
    let mut xq = x.clone();
    for k in 1..=deg {
        xq = kpowmod(fld, &xq, &q, &f);
        let diff = ksub(fld, &xq, &x);
        let g = kgcd(fld, &f, &diff);
        let dg = kdeg(&g).unwrap_or(0);
        if dg >= 1 && dg < deg {
            return Ok(Some(g));
        }
        if dg == deg {
            if k == deg {
                return Ok(None); // irreducible
            }
            // product of distinct irreducibles, all of degree k
            return equal_degree_split(fld, &f, k, &q, seed).map(Some);
        }
    }
    Ok(None)
}

/// Cantor-Zassenhaus equal-degree splitting of a squarefree product of
/// irreducibles of the given degree.
fn equal_degree_split(
    fld: &ResidueField,
    f: &KPoly,
    k: usize,
    q: &num_bigint::BigUint,
    seed: &mut u64,
) -> Result<KPoly, ()> {
    use num_bigint::BigUint;
    let deg = kdeg(f).unwrap();
    let p = fld.characteristic();
    let ext = fld.finite_degree().unwrap();
    let mut next = || {
        // xorshift64*, deterministic in the seed
        let mut x = *seed;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        *seed = x;
        x
    };
    for _ in 0..64 {
        // random polynomial of degree < deg over F_q
        let mut u: KPoly = vec![];
        for _ in 0..deg {
            // random field element as a random residue polynomial
            let mut elt = fld.zero();
            for i in 0..ext {
                let c = (next() % p) as i64;
                let term = fld.mul(&fld.from_int(c), &fld.t_power(i as i64));
                elt = fld.add(&elt, &term);
            }
            u.push(elt);
        }
        let u = knormalize(fld, u);
        if kdeg(&u).unwrap_or(0) < 1 {
            continue;
        }
        let g0 = kgcd(fld, f, &u);
        let d0 = kdeg(&g0).unwrap_or(0);
        if d0 >= 1 && d0 < deg {
            return Ok(g0);
        }
        let candidate = if p == 2 {
            // trace map sum u^{2^i}, i < k * ext
            let mut tr = u.clone();
            let mut pw = u.clone();
            for _ in 1..k * ext {
                pw = kdivrem(fld, &kmul(fld, &pw, &pw), f).1;
                tr = kadd(fld, &tr, &pw);
            }
            tr
        } else {
            let e = (q.pow(k as u32) - BigUint::from(1u32)) / BigUint::from(2u32);
            let pw = kpowmod(fld, &u, &e, f);
            ksub(fld, &pw, &vec![fld.one()])
        };
        if candidate.is_empty() {
            continue;
        }
        let g = kgcd(fld, f, &candidate);
        let dg = kdeg(&g).unwrap_or(0);
        if dg >= 1 && dg < deg {
            return Ok(g);
        }
    }
    Err(())
}

// ---------------------------------------------------------------------------
// Characteristic and minimal polynomials
// ---------------------------------------------------------------------------

/// Characteristic polynomial of a square matrix, monic of degree n, via
/// reduction to Hessenberg form (valid over any field).
pub fn char_poly(fld: &ResidueField, m: &Mat) -> KPoly {
    let n = m.len();
    if n == 0 {
        return vec![fld.one()];
    }
    let mut h: Mat = m.to_vec();
    // similarity reduction to upper Hessenberg
    for c in 0..n.saturating_sub(2) {
        // find pivot in column c below row c+1
        let piv = (c + 1..n).find(|&r| !fld.is_zero(&h[r][c]));
        let Some(piv) = piv else { continue };
        if piv != c + 1 {
            h.swap(piv, c + 1);
            for r in 0..n {
                let tmp = h[r][piv].clone();
                h[r][piv] = h[r][c + 1].clone();
                h[r][c + 1] = tmp;
            }
        }
        let inv = fld.inv(&h[c + 1][c]).unwrap();
        for r in c + 2..n {
            if fld.is_zero(&h[r][c]) {
                continue;
            }
            let factor = fld.mul(&h[r][c], &inv);
            for j in 0..n {
                let s = fld.mul(&factor, &h[c + 1][j]);
                h[r][j] = fld.sub(&h[r][j], &s);
            }
            // column operation to keep similarity: col_{c+1} += factor * col_r
            for i in 0..n {
                let s = fld.mul(&factor, &h[i][r]);
                h[i][c + 1] = fld.add(&h[i][c + 1], &s);
            }
        }
    }
    // recurrence on leading principal characteristic polynomials
    let mut ps: Vec<KPoly> = vec![vec![fld.one()]];
    for k in 1..=n {
        // p_k = (x - h[k-1][k-1]) p_{k-1}
        //       - sum_{i=1}^{k-1} h[i-1][k-1] (prod_{j=i}^{k-2} h[j+1][j]) p_{i-1}
        let xm = vec![fld.neg(&h[k - 1][k - 1]), fld.one()];
        let mut pk = kmul(fld, &xm, &ps[k - 1]);
        let mut prod = fld.one();
        for i in (1..k).rev() {
            prod = fld.mul(&prod, &h[i][i - 1]);
            let coeff = fld.mul(&h[i - 1][k - 1], &prod);
            let term = kscale(fld, &ps[i - 1], &coeff);
            pk = ksub(fld, &pk, &term);
        }
        ps.push(pk);
    }
    ps.pop().unwrap()
}

/// Minimal polynomial of a square matrix: least monic combination among the
/// powers I, M, M^2, ...
pub fn min_poly(fld: &ResidueField, m: &Mat) -> KPoly {
    let n = m.len();
    if n == 0 {
        return vec![fld.one()];
    }
    let flatten = |a: &Mat| -> Vec<K> { a.iter().flatten().cloned().collect() };
    let mut powers: Vec<Vec<K>> = vec![flatten(&crate::linalg::identity(fld, n))];
    let mut cur = m.to_vec();
    loop {
        let d = powers.len();
        // try to express the next power in the previous ones
        let target = flatten(&cur);
        let rows = target.len();
        let system: Mat = (0..rows)
            .map(|r| powers.iter().map(|p| p[r].clone()).collect())
            .collect();
        if let Some(sol) = crate::linalg::solve(fld, &system, &target) {
            // M^d = sum sol_i M^i  =>  min poly = x^d - sum sol_i x^i
            let mut f = vec![fld.zero(); d + 1];
            for (i, c) in sol.into_iter().enumerate() {
                f[i] = fld.neg(&c);
            }
            f[d] = fld.one();
            return f;
        }
        powers.push(target);
        cur = crate::linalg::mat_mul(fld, &cur, m);
    }
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// All roots of `f` inside the residue field, with multiplicities. `None`
/// means completeness could not be certified (never returned for finite
/// fields or for the generic field). An empty list means "certified: no
/// roots".
pub fn linear_roots(fld: &ResidueField, f: &KPoly) -> Option<Vec<(K, usize)>> {
    assert!(!f.is_empty(), "root finding on the zero polynomial");
    if f.len() == 1 {
        return Some(vec![]);
    }
    let sf = squarefree_part(fld, f);
    let roots: Vec<K> = match &fld.spot {
        PrimeSpot::Generic => qrat_roots(fld, &sf)?,
        PrimeSpot::IntPrime(_) => fprat_roots(fld, &sf)?,
        PrimeSpot::IrrPoly(_) => numf_roots(fld, &sf)?,
        PrimeSpot::Maximal(_, _) => finite_roots(fld, &sf)?,
    };
    let mut out = vec![];
    for r in roots {
        // multiplicity in the original f by repeated division
        let lin = vec![fld.neg(&r), fld.one()];
        let mut g = f.clone();
        let mut m = 0usize;
        loop {
            let (q, rem) = kdivrem(fld, &g, &lin);
            if !rem.is_empty() {
                break;
            }
            m += 1;
            g = q;
        }
        assert!(m >= 1);
        out.push((r, m));
    }
    Some(out)
}

/// Whether `f` splits into linear factors over the field (counted with
/// multiplicity); `None` when root finding is inconclusive.
pub fn splits_into_linears(fld: &ResidueField, f: &KPoly) -> Option<bool> {
    let roots = linear_roots(fld, f)?;
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    Some(total == f.len() - 1)
}

// --- generic field Q(t): rational-function root theorem ---

fn laurent_from_qpoly(f: &QPoly) -> IntLaurent {
    let ints = qpoly::primitive_integer(f);
    IntLaurent::from_dense(&ints, 0)
}

fn qpoly_from_laurent(f: &IntLaurent) -> QPoly {
    let (sign, shift, dense) = f.to_poly_parts();
    assert!(shift >= 0, "polynomial expected");
    let mut out = vec![BigRational::zero(); shift as usize];
    for c in dense {
        out.push(BigRational::from_integer(c));
    }
    let mut q = qpoly::normalize(out);
    if sign < 0 {
        q = qpoly::neg(&q);
    }
    q
}

/// Monic divisors of a polynomial over Q[t], built from its irreducible
/// factors (t-power included, content dropped).
fn monic_divisors_qt(f: &QPoly) -> Option<Vec<QPoly>> {
    let fact = intfactor::factor_in_zt(&laurent_from_qpoly(f));
    let mut prime_powers: Vec<(QPoly, usize)> = vec![];
    if fact.t_power > 0 {
        prime_powers.push((vec![BigRational::zero(), BigRational::one()], fact.t_power as usize));
    }
    for (p, m) in &fact.poly_factors {
        prime_powers.push((qpoly::monic(&qpoly_from_laurent(p)), *m));
    }
    let mut divisors: Vec<QPoly> = vec![vec![BigRational::one()]];
    for (p, m) in prime_powers {
        let mut next = vec![];
        for d in &divisors {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..m {
                cur = qpoly::mul(&cur, &p);
                next.push(cur.clone());
            }
        }
        divisors = next;
        if divisors.len() > 4096 {
            return None;
        }
    }
    Some(divisors)
}

/// Rational roots of a polynomial over Q, via the rational root theorem with
/// exact integer factorization.
fn rational_roots_q(f: &QPoly) -> Vec<BigRational> {
    let f = qpoly::normalize(f.clone());
    if f.len() <= 1 {
        return vec![];
    }
    // strip x-power
    let mut lo = 0usize;
    while f[lo].is_zero() {
        lo += 1;
    }
    let mut out = vec![];
    if lo > 0 {
        out.push(BigRational::zero());
    }
    let g: QPoly = f[lo..].to_vec();
    if g.len() <= 1 {
        return out;
    }
    let ints = qpoly::primitive_integer(&g);
    let a0 = ints[0].clone();
    let ad = ints.last().unwrap().clone();
    let divs = |n: &BigInt| -> Vec<BigInt> {
        let fac = intfactor::factor_integer(&n.abs());
        let mut ds = vec![BigInt::one()];
        for (p, m) in fac {
            let mut next = vec![];
            for d in &ds {
                let mut cur = d.clone();
                next.push(cur.clone());
                for _ in 0..m {
                    cur = &cur * &p;
                    next.push(cur.clone());
                }
            }
            ds = next;
        }
        ds
    };
    for num in divs(&a0) {
        for den in divs(&ad) {
            for sign in [1i64, -1] {
                let cand = BigRational::new(&num * BigInt::from(sign), den.clone());
                if qpoly::eval(&g, &cand).is_zero() && !out.contains(&cand) {
                    out.push(cand.clone());
                }
            }
        }
    }
    out
}

fn qrat_roots(fld: &ResidueField, sf: &KPoly) -> Option<Vec<K>> {
    // clear denominators: coefficients a_i in Q[t]
    let mut coeffs: Vec<QPoly> = vec![];
    let mut den_lcm: QPoly = vec![BigRational::one()];
    for c in sf {
        let K::QRat(_, d) = c else { unreachable!() };
        let g = qpoly::gcd(&den_lcm, d);
        let (q, r) = qpoly::divrem(d, &g);
        assert!(r.is_empty());
        den_lcm = qpoly::mul(&den_lcm, &q);
    }
    for c in sf {
        let K::QRat(n, d) = c else { unreachable!() };
        let (q, r) = qpoly::divrem(&den_lcm, d);
        assert!(r.is_empty());
        coeffs.push(qpoly::mul(n, &q));
    }
    let deg = coeffs.len() - 1;
    let a0 = coeffs[0].clone();
    let ad = coeffs[deg].clone();
    let mut roots = vec![];
    if a0.is_empty() {
        roots.push(fld.zero());
        // divide out x once at the K level and recurse on the rest
        let mut rest: KPoly = sf[1..].to_vec();
        rest = knormalize(fld, rest);
        let sub = qrat_roots(fld, &rest)?;
        for r in sub {
            if !roots.iter().any(|x| fld.eq(x, &r)) {
                roots.push(r);
            }
        }
        return Some(roots);
    }
    let nums = monic_divisors_qt(&a0)?;
    let dens = monic_divisors_qt(&ad)?;
    for nh in &nums {
        for dh in &dens {
            if qpoly::gcd(nh, dh).len() > 1 {
                continue;
            }
            // candidate root c * nh/dh: expand sum_i a_i nh^i dh^{deg-i} c^i
            // and require the whole t-polynomial to vanish; the scalar c then
            // satisfies the gcd of the per-t-degree polynomials in c.
            let mut terms: Vec<QPoly> = vec![];
            for (i, a) in coeffs.iter().enumerate() {
                let mut term = a.clone();
                for _ in 0..i {
                    term = qpoly::mul(&term, nh);
                }
                for _ in i..deg {
                    term = qpoly::mul(&term, dh);
                }
                terms.push(term);
            }
            let tmax = terms.iter().map(|f| f.len()).max().unwrap_or(0);
            let mut cpoly_gcd: QPoly = vec![];
            for td in 0..tmax {
                let row: QPoly = qpoly::normalize(
                    terms
                        .iter()
                        .map(|f| f.get(td).cloned().unwrap_or_else(BigRational::zero))
                        .collect(),
                );
                if row.is_empty() {
                    continue;
                }
                cpoly_gcd = if cpoly_gcd.is_empty() {
                    row
                } else {
                    qpoly::gcd(&cpoly_gcd, &row)
                };
                if cpoly_gcd.len() == 1 {
                    break;
                }
            }
            if cpoly_gcd.len() <= 1 {
                continue;
            }
            for c in rational_roots_q(&cpoly_gcd) {
                if c.is_zero() {
                    continue;
                }
                let num_k = lift_qpoly(fld, &qpoly::scale(nh, &c));
                let den_k = lift_qpoly(fld, dh);
                let Ok(cand) = fld.div(&num_k, &den_k) else {
                    continue;
                };
                if fld.is_zero(&keval(fld, sf, &cand)) && !roots.iter().any(|x| fld.eq(x, &cand))
                {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

/// Embeds a Q-polynomial in t into the field by evaluating at the generator.
fn lift_qpoly(fld: &ResidueField, f: &QPoly) -> K {
    let mut acc = fld.zero();
    for (i, c) in f.iter().enumerate() {
        let term = fld.mul(&fld.from_rational(c), &fld.t_power(i as i64));
        acc = fld.add(&acc, &term);
    }
    acc
}

// --- F_p(t): same root theorem, with the finite unit group enumerated ---

fn fprat_roots(fld: &ResidueField, sf: &KPoly) -> Option<Vec<K>> {
    let p = fld.characteristic();
    // clear denominators to coefficients in F_p[t]
    let mut den_lcm: FpPoly = vec![1];
    for c in sf {
        let K::FpRat(_, d) = c else { unreachable!() };
        let g = fppoly::gcd(&den_lcm, d, p);
        let (q, r) = fppoly::divrem(d, &g, p);
        assert!(r.is_empty());
        den_lcm = fppoly::mul(&den_lcm, &q, p);
    }
    let mut coeffs: Vec<FpPoly> = vec![];
    for c in sf {
        let K::FpRat(n, d) = c else { unreachable!() };
        let (q, r) = fppoly::divrem(&den_lcm, d, p);
        assert!(r.is_empty());
        coeffs.push(fppoly::mul(n, &q, p));
    }
    let mut roots = vec![];
    if coeffs[0].is_empty() {
        roots.push(fld.zero());
    }
    let divisors = |f: &FpPoly| -> Option<Vec<FpPoly>> {
        if f.is_empty() {
            return Some(vec![vec![1]]);
        }
        let fact = fppoly::factor(f, p);
        let mut ds: Vec<FpPoly> = vec![vec![1]];
        for (q, m) in fact {
            if fppoly::deg(&q) == Some(0) {
                continue;
            }
            let mut next = vec![];
            for d in &ds {
                let mut cur = d.clone();
                next.push(cur.clone());
                for _ in 0..m {
                    cur = fppoly::mul(&cur, &q, p);
                    next.push(cur.clone());
                }
            }
            ds = next;
            if ds.len() > 4096 {
                return None;
            }
        }
        Some(ds)
    };
    let a0 = if coeffs[0].is_empty() {
        // strip the known zero root for divisor purposes
        coeffs
            .iter()
            .find(|c| !c.is_empty())
            .cloned()
            .unwrap_or_default()
    } else {
        coeffs[0].clone()
    };
    let nums = divisors(&a0)?;
    let dens = divisors(coeffs.last().unwrap())?;
    for nh in &nums {
        for dh in &dens {
            for u in 1..p {
                let num = fppoly::scale(nh, u, p);
                let Some(cand) = fprat_make(fld, &num, dh) else {
                    continue;
                };
                if fld.is_zero(&keval(fld, sf, &cand))
                    && !roots.iter().any(|x| fld.eq(x, &cand))
                {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

/// Builds a reduced F_p(t) element from a numerator/denominator pair using
/// only public field operations.
fn fprat_make(fld: &ResidueField, num: &FpPoly, den: &FpPoly) -> Option<K> {
    fld.div(&fprat_elt(fld, num), &fprat_elt(fld, den)).ok()
}

// --- finite fields: exhaustive evaluation (fields here are tiny) ---

fn finite_roots(fld: &ResidueField, sf: &KPoly) -> Option<Vec<K>> {
    let p = fld.characteristic();
    let d = fld.finite_degree().unwrap();
    let q = (p as u128).checked_pow(d as u32)?;
    if q > 1 << 16 {
        return None;
    }
    let mut roots = vec![];
    // elements = residues of all polynomials of degree < d
    let mut rep = vec![0u64; d];
    loop {
        let elt = {
            let f: FpPoly = fppoly::normalize(rep.clone());
            fprat_elt(fld, &f)
        };
        if fld.is_zero(&keval(fld, sf, &elt)) {
            roots.push(elt);
        }
        // increment base-p counter
        let mut i = 0;
        loop {
            if i == d {
                return Some(roots);
            }
            rep[i] += 1;
            if rep[i] < p {
                break;
            }
            rep[i] = 0;
            i += 1;
        }
    }
}

/// Builds a finite-field element from its polynomial representative.
fn fprat_elt(fld: &ResidueField, f: &FpPoly) -> K {
    let mut acc = fld.zero();
    for (i, &c) in f.iter().enumerate() {
        let term = fld.mul(&fld.from_int(c as i64), &fld.t_power(i as i64));
        acc = fld.add(&acc, &term);
    }
    acc
}

// --- number fields Q[t]/(g): Trager norm descent ---

/// Resultant with respect to y of two polynomials in Q[x][y], via the
/// Sylvester determinant with fraction-free elimination over Q[x].
fn resultant_y(a: &[QPoly], b: &[QPoly]) -> QPoly {
    // a, b: coefficients in Q[x], ascending in y
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 {
        // res(const, b) = a^deg(b)... handled by caller shapes
        let mut out: QPoly = vec![BigRational::one()];
        for _ in 0..n {
            out = qpoly::mul(&out, &a[0]);
        }
        return out;
    }
    let size = m + n;
    let zero: QPoly = vec![];
    let mut s: Vec<Vec<QPoly>> = vec![vec![zero.clone(); size]; size];
    for r in 0..n {
        for (j, c) in a.iter().enumerate() {
            s[r][r + (m - j)] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in b.iter().enumerate() {
            s[n + r][r + (n - j)] = c.clone();
        }
    }
    // Bareiss fraction-free determinant over Q[x]
    let mut prev: QPoly = vec![BigRational::one()];
    let mut sign = 1i64;
    let mut mtx = s;
    for k in 0..size {
        if mtx[k][k].is_empty() {
            let swap = (k + 1..size).find(|&r| !mtx[r][k].is_empty());
            let Some(swap) = swap else { return vec![] };
            mtx.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t1 = qpoly::mul(&mtx[k][k], &mtx[i][j]);
                let t2 = qpoly::mul(&mtx[i][k], &mtx[k][j]);
                let num = qpoly::sub(&t1, &t2);
                let (q, r) = if prev.len() == 1 && prev[0].is_one() {
                    (num, vec![])
                } else {
                    qpoly::divrem(&num, &prev)
                };
                assert!(r.is_empty(), "Bareiss division must be exact");
                mtx[i][j] = q;
            }
        }
        prev = mtx[k][k].clone();
        for i in k + 1..size {
            mtx[i][k] = vec![];
        }
    }
    let mut det = mtx[size - 1][size - 1].clone();
    if sign < 0 {
        det = qpoly::neg(&det);
    }
    det
}

fn numf_roots(fld: &ResidueField, sf: &KPoly) -> Option<Vec<K>> {
    let g = fld.defining_polynomial().expect("number-field modulus").clone();
    let sfm = kmonic(fld, sf);
    // coefficients as Q-polynomials in the generator y
    let coeff_poly = |c: &K| -> QPoly {
        let K::NumF(q) = c else { unreachable!() };
        q.clone()
    };
    // shift search: norm of h(x - s*y) squarefree
    for s in 0..25i64 {
        let sq = BigRational::from_integer(BigInt::from(s));
        // H(x, y) = sfm(x - s y): build coefficients in Q[x][y]
        // substitute: powers of (x - s y) expanded as bivariate
        let degx = sfm.len() - 1;
        let mut acc: Vec<Vec<QPoly>> = vec![]; // acc[i] = (x - s y)^i as [y-deg][x-poly]
        acc.push(vec![vec![BigRational::one()]]);
        for i in 1..=degx {
            // multiply previous by (x - s y)
            let prev = &acc[i - 1];
            let mut cur: Vec<QPoly> = vec![vec![]; prev.len() + 1];
            for (yd, xc) in prev.iter().enumerate() {
                // * x
                cur[yd] = qpoly::add(&cur[yd], &qpoly::mul(xc, &vec![BigRational::zero(), BigRational::one()]));
                // * (-s y)
                let t = qpoly::scale(xc, &-sq.clone());
                cur[yd + 1] = qpoly::add(&cur[yd + 1], &t);
            }
            acc.push(cur);
        }
        // assemble H: sum_i c_i(y) * (x - s y)^i, as [y-deg][x-poly]
        let mut hxy: Vec<QPoly> = vec![];
        for (i, c) in sfm.iter().enumerate() {
            let cy = coeff_poly(c);
            for (yd_c, cc) in cy.iter().enumerate() {
                for (yd_p, xc) in acc[i].iter().enumerate() {
                    let yd = yd_c + yd_p;
                    if hxy.len() <= yd {
                        hxy.resize(yd + 1, vec![]);
                    }
                    let term = qpoly::scale(xc, cc);
                    hxy[yd] = qpoly::add(&hxy[yd], &term);
                }
            }
        }
        while hxy.last().map(|c| c.is_empty()).unwrap_or(false) {
            hxy.pop();
        }
        // reduce y-degree mod g where needed: resultant handles full degree,
        // but keep the Sylvester small by reducing is unnecessary; proceed.
        let gq: Vec<QPoly> = g.iter().map(|c| vec![c.clone()]).collect();
        let norm = resultant_y(&hxy, &gq);
        if norm.is_empty() {
            continue;
        }
        let norm_sf = qpoly::gcd(&norm, &qpoly::derivative(&norm));
        if norm_sf.len() > 1 {
            continue; // not squarefree, try next shift
        }
        // factor the norm over Q and keep the K-roots from linear gcds
        let fact = intfactor::factor_in_zt(&laurent_from_qpoly(&norm));
        let mut factors: Vec<QPoly> = fact
            .poly_factors
            .iter()
            .map(|(pf, _)| qpoly_from_laurent(pf))
            .collect();
        if fact.t_power > 0 {
            factors.push(vec![BigRational::zero(), BigRational::one()]);
        }
        let mut roots = vec![];
        let y_elt = fld.t_power(1); // the class of t = generator of the field
        for pq in &factors {
            // roots of sf lying in this factor come from gcd(sf, N_i(x + s y))
            let xplus: KPoly = vec![fld.mul(&fld.from_int(s), &y_elt), fld.one()];
            let mut shifted: KPoly = vec![];
            for c in pq.iter().rev() {
                shifted = kmul(fld, &shifted, &xplus);
                let ck = fld.from_rational(c);
                shifted = kadd(fld, &shifted, &vec![ck]);
            }
            let d = kgcd(fld, &sfm, &shifted);
            if d.len() == 2 {
                let root = fld.neg(&fld.div(&d[0], &d[1]).ok()?);
                roots.push(root);
            }
            // a gcd of degree >= 2 is an irreducible factor of sf over the
            // field of degree > 1, so it contributes no roots
        }
        return Some(roots);
    }
    None
}
