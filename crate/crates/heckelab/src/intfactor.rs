//! Exact factorization in Z[t, t^-1].
//!
//! The driver peels off the unit `±t^k`, the integer content, a squarefree
//! decomposition over Q, and all cyclotomic factors (which dominate the
//! discriminants arising in this crate), and only then falls back to
//! Zassenhaus lifting (factor mod p, Hensel lift, subset recombination) for
//! whatever survives. Irreducibility of every emitted factor is certified by
//! the same machinery.

use crate::fppoly::{self, FpPoly};
use crate::laurent::IntLaurent;
use crate::qpoly::{self, QPoly};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complete factorization of a nonzero Laurent polynomial:
/// `f = sign * t^t_power * prod(p_i^a_i) * prod(g_j(t)^b_j)`
/// with the `p_i` prime and the `g_j` primitive irreducible in Z[t] with
/// positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factored {
    pub sign: i8,
    pub t_power: i64,
    pub int_factors: Vec<(BigInt, usize)>,
    pub poly_factors: Vec<(IntLaurent, usize)>,
}

impl Factored {
    /// Multiplies the factorization back out (used by tests and validators).
    pub fn expand(&self) -> IntLaurent {
        let mut out = IntLaurent::int(self.sign as i64).shift(self.t_power);
        for (p, m) in &self.int_factors {
            for _ in 0..*m {
                out = out.scale(p);
            }
        }
        for (g, m) in &self.poly_factors {
            for _ in 0..*m {
                out = out.mul(g);
            }
        }
        out
    }
}

type ZPoly = Vec<BigInt>;

fn znormalize(mut f: ZPoly) -> ZPoly {
    while f.last().map(|c| c.is_zero()).unwrap_or(false) {
        f.pop();
    }
    f
}

fn zmul(f: &ZPoly, g: &ZPoly) -> ZPoly {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    znormalize(out)
}

/// Exact division in Z[t]; `None` if not exact.
fn zdiv_exact(f: &ZPoly, g: &ZPoly) -> Option<ZPoly> {
    if g.is_empty() {
        return None;
    }
    if f.is_empty() {
        return Some(vec![]);
    }
    if f.len() < g.len() {
        return None;
    }
    let mut rem = f.clone();
    let mut quo = vec![BigInt::zero(); f.len() - g.len() + 1];
    let lead = g.last().unwrap();
    for i in (0..quo.len()).rev() {
        let top = rem[i + g.len() - 1].clone();
        if top.is_zero() {
            continue;
        }
        if !(&top % lead).is_zero() {
            return None;
        }
        let q = &top / lead;
        for (j, b) in g.iter().enumerate() {
            rem[i + j] -= &q * b;
        }
        quo[i] = q;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(znormalize(quo))
    } else {
        None
    }
}

fn zcontent(f: &ZPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in f {
        g = g.gcd(c);
    }
    g
}

fn zprimitive(f: &ZPoly) -> ZPoly {
    let c = zcontent(f);
    if c.is_zero() || c.is_one() {
        return f.clone();
    }
    f.iter().map(|x| x / &c).collect()
}

fn to_q(f: &ZPoly) -> QPoly {
    f.iter().cloned().map(BigRational::from).collect()
}

fn laurent_from_z(f: &ZPoly) -> IntLaurent {
    IntLaurent::from_dense(f, 0)
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials
// ---------------------------------------------------------------------------

/// The n-th cyclotomic polynomial, exactly, by dividing `t^n - 1` by the
/// cyclotomics of the proper divisors of n.
pub fn cyclotomic(n: u64) -> IntLaurent {
    assert!(n >= 1);
    let mut num: ZPoly = vec![BigInt::from(-1)];
    num.extend(std::iter::repeat(BigInt::zero()).take(n as usize - 1));
    num.push(BigInt::one());
    let mut acc = num;
    for d in 1..n {
        if n % d == 0 {
            let (_, _, phi_d) = cyclotomic(d).to_poly_parts();
            acc = zdiv_exact(&acc, &phi_d).expect("cyclotomic division is exact");
        }
    }
    laurent_from_z(&acc)
}

/// Substitutes `t -> t^2` in a Laurent polynomial.
pub fn substitute_t_squared(f: &IntLaurent) -> IntLaurent {
    let mut out = IntLaurent::zero();
    for (e, c) in f.terms() {
        out.add_term(2 * e, c);
    }
    out
}

/// Substitutes `t -> -t`.
pub fn substitute_neg_t(f: &IntLaurent) -> IntLaurent {
    let mut out = IntLaurent::zero();
    for (e, c) in f.terms() {
        let c = if e.rem_euclid(2) == 1 { -c } else { c.clone() };
        out.add_term(e, &c);
    }
    out
}

/// The exact factorization of `Phi_e(t^2)` into cyclotomics in `t`:
/// for even `e` it equals `Phi_2e(t)`; for odd `e` it equals
/// `± Phi_2e(t) * Phi_2e(-t)`. Returns `(lhs, rhs, sign)` with
/// `lhs = sign * rhs` verified exactly; panics only on internal error.
pub fn cyclotomic_square_identity(e: u64) -> (IntLaurent, IntLaurent, i8) {
    let lhs = substitute_t_squared(&cyclotomic(e));
    let phi2e = cyclotomic(2 * e);
    let (rhs, sign) = if e % 2 == 0 {
        (phi2e, 1i8)
    } else {
        let prod = phi2e.mul(&substitute_neg_t(&cyclotomic(2 * e)));
        let sign = if prod == lhs { 1 } else { -1 };
        (prod, sign)
    };
    assert_eq!(
        lhs,
        if sign == 1 { rhs.clone() } else { rhs.neg() },
        "cyclotomic square identity failed at e = {e}"
    );
    (lhs, rhs, sign)
}

// ---------------------------------------------------------------------------
// Integer factorization (trial division + Miller-Rabin + Pollard rho)
// ---------------------------------------------------------------------------

pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, usize)> {
    let mut n = n.abs();
    assert!(!n.is_zero(), "cannot factor zero");
    let mut out: Vec<(BigInt, usize)> = vec![];
    let push = |p: BigInt, out: &mut Vec<(BigInt, usize)>| {
        if let Some(slot) = out.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for small in 2u64..10_000 {
        let p = BigInt::from(small);
        if &p * &p > n {
            break;
        }
        while (&n % &p).is_zero() {
            n /= &p;
            push(p.clone(), &mut out);
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m.to_biguint().unwrap()) {
            push(m, &mut out);
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    out
}

fn is_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigUint::from(p);
        if *n == bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    // Deterministic Miller-Rabin for 64-bit+, probabilistic beyond; the
    // standard witness set below is exact for n < 3.3 * 10^24.
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap();
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    let nn = n.to_biguint().unwrap();
    let mut c = BigUint::one();
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = BigUint::one();
        let f = |v: &BigUint| (v * v + &c) % &nn;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(&nn);
        }
        if !d.is_one() && d != nn {
            return BigInt::from(d);
        }
        c += BigUint::one();
    }
}

// ---------------------------------------------------------------------------
// Zassenhaus factorization of primitive squarefree integer polynomials
// ---------------------------------------------------------------------------

fn zpoly_to_fp(f: &ZPoly, p: u64) -> FpPoly {
    fppoly::normalize(
        f.iter()
            .map(|c| (c.mod_floor(&BigInt::from(p))).to_u64().unwrap())
            .collect(),
    )
}

/// Balanced representative of `c` mod `m`, in `(-m/2, m/2]`.
fn balanced(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Factors a primitive squarefree polynomial of degree >= 1 into irreducibles.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n == 1 {
        return vec![f.clone()];
    }
    let lc = f.last().unwrap().clone();
    // Choose a prime keeping f squarefree with invertible leading coefficient.
    let mut p = 3u64;
    let fp = loop {
        p = next_prime(p);
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = zpoly_to_fp(f, p);
        if fppoly::deg(&fp) != Some(n) {
            continue;
        }
        let d = fppoly::derivative(&fp, p);
        if d.is_empty() {
            continue;
        }
        if fppoly::deg(&fppoly::gcd(&fp, &d, p)) == Some(0) {
            break fp;
        }
    };
    let modular: Vec<FpPoly> = fppoly::factor(&fp, p).into_iter().map(|(g, _)| g).collect();
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Coefficient bound (Mignotte-style, deliberately generous).
    let height = f.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = (height * &lc * BigInt::from(n as u64 + 1)) << (n + 1);
    let mut pk = BigInt::from(p);
    let mut k = 1usize;
    while pk <= &bound * 2 {
        pk *= BigInt::from(p);
        k += 1;
    }
    let lifted = hensel_lift_all(f, &modular, p, k);
    let modulus = pk;

    // Subset recombination.
    let mut remaining: Vec<ZPoly> = lifted;
    let mut current = f.clone();
    let mut out: Vec<ZPoly> = vec![];
    let mut size = 1usize;
    while 2 * size <= remaining.len() {
        let mut found = None;
        let indices: Vec<usize> = (0..remaining.len()).collect();
        let mut combo = vec![];
        if pick_combination(&indices, size, 0, &mut combo, &mut |subset| {
            // candidate = primitive part of balanced(lc * prod subset)
            let mut prod: ZPoly = vec![current.last().unwrap().clone()];
            for &i in subset {
                prod = zmul(&prod, &remaining[i]);
                for c in prod.iter_mut() {
                    *c = balanced(c, &modulus);
                }
            }
            let cand = zprimitive(&znormalize(prod));
            if cand.len() > 1 {
                if let Some(quo) = zdiv_exact(&current, &cand) {
                    found = Some((subset.to_vec(), cand, zprimitive(&quo)));
                    return true;
                }
            }
            false
        }) {
            let (subset, cand, quo) = found.unwrap();
            out.push(cand);
            current = quo;
            for &i in subset.iter().rev() {
                remaining.remove(i);
            }
            // Try the same size again with the reduced factor set.
        } else {
            size += 1;
        }
    }
    if current.len() > 1 {
        out.push(current);
    }
    out.sort();
    out
}

/// Iterates over size-`size` combinations, aborting early when the callback
/// returns true. Returns whether the callback accepted a combination.
fn pick_combination(
    indices: &[usize],
    size: usize,
    start: usize,
    combo: &mut Vec<usize>,
    accept: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if combo.len() == size {
        return accept(combo);
    }
    for i in start..indices.len() {
        combo.push(indices[i]);
        if pick_combination(indices, size, i + 1, combo, accept) {
            combo.pop();
            return true;
        }
        combo.pop();
    }
    false
}

/// Linear multi-factor Hensel lift: from `f ≡ lc * prod(g_i) (mod p)` with the
/// `g_i` monic and pairwise coprime mod p, to the same congruence mod `p^k`.
fn hensel_lift_all(f: &ZPoly, modular: &[FpPoly], p: u64, k: usize) -> Vec<ZPoly> {
    let r = modular.len();
    let big_p = BigInt::from(p);
    // Bezout data mod p: b_i = (prod_{j != i} g_j)^{-1} mod (g_i, p).
    let mut bezout: Vec<FpPoly> = vec![];
    for i in 0..r {
        let mut big = vec![1u64];
        for (j, g) in modular.iter().enumerate() {
            if j != i {
                big = fppoly::mul(&big, g, p);
            }
        }
        let bi = fppoly::inverse_mod(&fppoly::rem(&big, &modular[i], p), &modular[i], p);
        bezout.push(bi);
    }
    let mut lifted: Vec<ZPoly> = modular
        .iter()
        .map(|g| g.iter().map(|&c| BigInt::from(c)).collect::<ZPoly>())
        .collect();
    let lc = f.last().unwrap().clone();
    let mut pk = big_p.clone();
    for _ in 1..k {
        // error e = (f - lc * prod lifted) / p^m
        let mut prod: ZPoly = vec![lc.clone()];
        for g in &lifted {
            prod = zmul(&prod, g);
        }
        let diff = znormalize(
            (0..f.len().max(prod.len()))
                .map(|i| {
                    let a = f.get(i).cloned().unwrap_or_else(BigInt::zero);
                    let b = prod.get(i).cloned().unwrap_or_else(BigInt::zero);
                    a - b
                })
                .collect(),
        );
        let e_over: ZPoly = diff.iter().map(|c| c / &pk).collect();
        let e_fp = zpoly_to_fp(&znormalize(e_over), p);
        let lc_inv = fppoly::inv_mod_p((lc.mod_floor(&big_p)).to_u64().unwrap(), p);
        let c_fp = fppoly::scale(&e_fp, lc_inv, p);
        for i in 0..r {
            let gi_fp = zpoly_to_fp(&lifted[i], p);
            let delta = fppoly::rem(&fppoly::mul(&c_fp, &bezout[i], p), &gi_fp, p);
            for (d_idx, &dc) in delta.iter().enumerate() {
                if dc != 0 {
                    if lifted[i].len() <= d_idx {
                        lifted[i].resize(d_idx + 1, BigInt::zero());
                    }
                    lifted[i][d_idx] += &pk * BigInt::from(dc);
                }
            }
        }
        pk *= &big_p;
        // Keep coefficients reduced mod p^(m+1).
        for g in lifted.iter_mut() {
            for c in g.iter_mut() {
                *c = c.mod_floor(&pk);
            }
        }
    }
    lifted
}

fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    loop {
        if c >= 2 && (2..).take_while(|d| d * d <= c).all(|d| c % d != 0) {
            return c;
        }
        c += 1;
    }
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

/// Complete factorization of a nonzero Laurent polynomial over Z[t, t^-1].
pub fn factor_in_zt(f: &IntLaurent) -> Factored {
    assert!(!f.is_zero(), "cannot factor zero");
    let (sign, t_power, dense) = f.to_poly_parts();
    let content = zcontent(&dense);
    let int_factors = if content.is_one() {
        vec![]
    } else {
        factor_integer(&content)
    };
    let prim = zprimitive(&dense);
    let mut poly_factors: Vec<(IntLaurent, usize)> = vec![];
    // Squarefree decomposition over Q (Yun), then per-part factorization.
    let q = to_q(&prim);
    for (part, mult) in yun_squarefree(&q) {
        let mut zpart = qpoly::primitive_integer(&part);
        // Strip any power of t (possible when the input had mixed support).
        let mut tshift = 0usize;
        while zpart.first().map(|c| c.is_zero()).unwrap_or(false) {
            zpart.remove(0);
            tshift += 1;
        }
        if tshift > 0 {
            // account into the unit part: t^(mult * tshift)
            poly_factors.push((IntLaurent::t_pow(1), mult * tshift));
        }
        if zpart.len() <= 1 {
            continue;
        }
        // Cyclotomic stripping.
        let mut current = zpart;
        let degree = current.len() - 1;
        let mut n = 1u64;
        while current.len() > 1 && (n as usize) <= 2 * degree * degree + 6 {
            let phi = cyclotomic(n);
            let (_, _, phi_dense) = phi.to_poly_parts();
            if phi_dense.len() - 1 <= current.len() - 1 {
                if let Some(quo) = zdiv_exact(&current, &phi_dense) {
                    poly_factors.push((phi, mult));
                    current = quo;
                    continue; // same n again (cannot recur in squarefree part, but harmless)
                }
            }
            n += 1;
        }
        if current.len() > 1 {
            for irr in zassenhaus(&current) {
                poly_factors.push((laurent_from_z(&irr), mult));
            }
        }
    }
    // Merge duplicate factors (e.g. t powers) and normalize ordering.
    let mut merged: Vec<(IntLaurent, usize)> = vec![];
    let mut t_extra = 0i64;
    for (g, m) in poly_factors {
        if g == IntLaurent::t_pow(1) {
            t_extra += m as i64;
            continue;
        }
        debug_assert!(!g.is_unit());
        if let Some(slot) = merged.iter_mut().find(|(h, _)| *h == g) {
            slot.1 += m;
        } else {
            merged.push((g, m));
        }
    }
    merged.sort_by(|a, b| {
        a.0.max_exp()
            .cmp(&b.0.max_exp())
            .then_with(|| format!("{}", a.0).cmp(&format!("{}", b.0)))
    });
    let out = Factored {
        sign,
        t_power: t_power + t_extra,
        int_factors,
        poly_factors: merged,
    };
    debug_assert_eq!(out.expand(), *f, "factorization must multiply back");
    out
}

/// Certifies irreducibility of a primitive non-unit polynomial in Z[t].
pub fn is_irreducible_in_zt(f: &IntLaurent) -> bool {
    let fac = factor_in_zt(f);
    fac.int_factors.is_empty()
        && fac.t_power == 0
        && fac.poly_factors.len() == 1
        && fac.poly_factors[0].1 == 1
}

/// Yun's squarefree decomposition over Q: returns `(g_i, i)` with
/// `f = prod g_i^i` up to a constant, each `g_i` squarefree.
fn yun_squarefree(f: &QPoly) -> Vec<(QPoly, usize)> {
    let f = qpoly::monic(f);
    if qpoly::deg(&f).unwrap_or(0) == 0 {
        return vec![];
    }
    let df = qpoly::derivative(&f);
    let a = qpoly::gcd(&f, &df);
    let mut b = qpoly::divrem(&f, &a).0;
    let mut c = qpoly::divrem(&df, &a).0;
    let mut d = qpoly::sub(&c, &qpoly::derivative(&b));
    let mut out = vec![];
    let mut i = 1usize;
    while qpoly::deg(&b) != Some(0) {
        let g = qpoly::gcd(&b, &d);
        if qpoly::deg(&g) != Some(0) {
            out.push((g.clone(), i));
        }
        b = qpoly::divrem(&b, &g).0;
        c = qpoly::divrem(&d, &g).0;
        d = qpoly::sub(&c, &qpoly::derivative(&b));
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_laurent;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), parse_laurent("t-1").unwrap());
        assert_eq!(cyclotomic(2), parse_laurent("t+1").unwrap());
        assert_eq!(cyclotomic(4), parse_laurent("t^2+1").unwrap());
        assert_eq!(cyclotomic(6), parse_laurent("t^2-t+1").unwrap());
        assert_eq!(cyclotomic(12), parse_laurent("t^4-t^2+1").unwrap());
    }

    #[test]
    fn square_identity_both_parities() {
        for e in 1..=12 {
            let (lhs, _, _) = cyclotomic_square_identity(e);
            assert_eq!(lhs, substitute_t_squared(&cyclotomic(e)));
        }
    }

    #[test]
    fn integer_factoring() {
        let n = BigInt::from(2u64.pow(5)) * BigInt::from(3u64.pow(2)) * BigInt::from(1000003u64);
        let f = factor_integer(&n);
        assert_eq!(
            f,
            vec![
                (BigInt::from(2), 5),
                (BigInt::from(3), 2),
                (BigInt::from(1000003), 1)
            ]
        );
    }

    #[test]
    fn factor_products_of_cyclotomics_and_content() {
        // 12 * t^-3 * Phi_4^2 * Phi_6
        let f = IntLaurent::int(12)
            .shift(-3)
            .mul(&cyclotomic(4))
            .mul(&cyclotomic(4))
            .mul(&cyclotomic(6));
        let fac = factor_in_zt(&f);
        assert_eq!(fac.expand(), f);
        assert_eq!(fac.t_power, -3);
        assert_eq!(fac.int_factors, vec![(BigInt::from(2), 2), (BigInt::from(3), 1)]);
        assert_eq!(
            fac.poly_factors,
            vec![(cyclotomic(4), 2), (cyclotomic(6), 1)]
        );
    }

    #[test]
    fn zassenhaus_splits_non_cyclotomic_parts() {
        // (t^2 - t - 1)(t^3 + 2t + 2) -- both irreducible, non-cyclotomic.
        let a = parse_laurent("t^2-t-1").unwrap();
        let b = parse_laurent("t^3+2*t+2").unwrap();
        let fac = factor_in_zt(&a.mul(&b));
        assert_eq!(fac.poly_factors.len(), 2);
        assert!(fac.poly_factors.iter().any(|(g, _)| *g == a));
        assert!(fac.poly_factors.iter().any(|(g, _)| *g == b));
        assert!(is_irreducible_in_zt(&a));
        assert!(!is_irreducible_in_zt(&a.mul(&b)));
    }

    #[test]
    fn zassenhaus_needs_recombination() {
        // t^4 + 1 = Phi_8 is irreducible over Z but splits mod every prime,
        // so the subset recombination path is forced if stripping is skipped.
        let (_, _, dense) = cyclotomic(8).to_poly_parts();
        let out = super::zassenhaus(&dense);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0], dense);
        // And a reducible case whose modular factors must recombine in pairs:
        // (t^2+3)(t^2+7) mod small primes often splits into four linears.
        let f = parse_laurent("t^2+3").unwrap().mul(&parse_laurent("t^2+7").unwrap());
        let fac = factor_in_zt(&f);
        assert_eq!(fac.poly_factors.len(), 2);
        assert_eq!(fac.expand(), f);
    }

    #[test]
    fn repeated_factors_via_squarefree_decomposition() {
        let a = parse_laurent("t^2-t-1").unwrap();
        let f = a.mul(&a).mul(&a).mul(&cyclotomic(1));
        let fac = factor_in_zt(&f);
        assert_eq!(fac.expand(), f);
        assert!(fac.poly_factors.contains(&(a, 3)));
        assert!(fac.poly_factors.contains(&(cyclotomic(1), 1)));
    }
}
